//! Brute-force verification of every closed form by sphere quadrature,
//! finite differences and sparse-operator cross-checks.
//!
//! The oracle never reuses the closed-form matrix elements it is checking:
//! momentum acts as pointwise multiplication, the angular momentum and
//! centre-of-mass operators act through their edth expressions evaluated
//! pointwise (derivatives taken analytically via the exact ladder
//! coefficients, except for one dedicated finite-difference check), and
//! everything is integrated with Gauss quadrature that is exact for the
//! band-limited integrands involved.

use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;

use crate::empirical::{self, E3Placement, PlacedState};
use crate::geom::{epsilon, Vec3};
use crate::half::{steps_by_half, steps_by_one, HalfInt};
use crate::operators::{self, Axis, ElementaryParams, Letter, StateVector};
use crate::swsh::{
    build_quadrature, edth_ladder, eval_harmonic, eval_harmonic_stereo, laplacian_eigenvalue,
    momentum_direction, null_tangent, product_expand_y1, QNum, SpherePoint, SphereQuadrature,
};
use crate::{Error, Result};

/// Operators the quadrature oracle can evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Momentum(Axis),
    AngularMomentum(Axis),
    CentreOfMass(Axis),
}

const MAX_ORACLE_DJ: i64 = 24; // j <= 12
const MAX_ORACLE_DS: i64 = 8; // |s| <= 4

/// Harmonic values tabulated on a fixed quadrature grid.
struct GridCache {
    quad: SphereQuadrature,
    unit_p: Vec<Vec3>,
    tangent: Vec<[Complex64; 3]>,
    values: HashMap<QNum, Vec<Complex64>>,
}

impl GridCache {
    fn new(order: usize) -> Self {
        let quad = build_quadrature(order);
        let unit_p = quad
            .nodes()
            .iter()
            .map(|pt| momentum_direction(pt, 1.0))
            .collect();
        let tangent = quad.nodes().iter().map(null_tangent).collect();
        GridCache {
            quad,
            unit_p,
            tangent,
            values: HashMap::new(),
        }
    }

    fn values(&mut self, q: QNum) -> &[Complex64] {
        if !self.values.contains_key(&q) {
            let vals: Vec<Complex64> = self
                .quad
                .nodes()
                .iter()
                .map(|pt| eval_harmonic(q, pt))
                .collect();
            self.values.insert(q, vals);
        }
        self.values.get(&q).unwrap()
    }

    /// `(O ket)` evaluated on every grid node.
    fn apply_pointwise(
        &mut self,
        kind: OperatorKind,
        ket: QNum,
        params: &ElementaryParams,
    ) -> Vec<Complex64> {
        let n = self.quad.len();
        let p = params.p_radius;
        let hbar = params.hbar;
        match kind {
            OperatorKind::Momentum(axis) => {
                let a = axis.index();
                let vals = self.values(ket).to_vec();
                (0..n).map(|i| vals[i] * (self.unit_p[i][a] * p)).collect()
            }
            OperatorKind::AngularMomentum(axis) => {
                let a = axis.index();
                let (c_dn, t_dn) = edth_ladder(ket, true, p);
                let (c_up, t_up) = edth_ladder(ket, false, p);
                let dn = t_dn.map(|t| self.values(t).to_vec());
                let up = t_up.map(|t| self.values(t).to_vec());
                let base = self.values(ket).to_vec();
                let s_h = ket.s.as_f64() * hbar;
                (0..n)
                    .map(|i| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        if let Some(dn) = &dn {
                            acc += self.tangent[i][a] * (p * hbar * c_dn) * dn[i];
                        }
                        if let Some(up) = &up {
                            acc -= self.tangent[i][a].conj() * (p * hbar * c_up) * up[i];
                        }
                        acc + base[i] * (s_h * self.unit_p[i][a])
                    })
                    .collect()
            }
            OperatorKind::CentreOfMass(axis) => {
                let a = axis.index();
                let (c_dn, t_dn) = edth_ladder(ket, true, p);
                let (c_up, t_up) = edth_ladder(ket, false, p);
                let dn = t_dn.map(|t| self.values(t).to_vec());
                let up = t_up.map(|t| self.values(t).to_vec());
                let base = self.values(ket).to_vec();
                let i_h = Complex64::new(0.0, hbar);
                let p2 = p * p;
                (0..n)
                    .map(|i| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        if let Some(dn) = &dn {
                            acc += self.tangent[i][a] * (p2 * c_dn) * dn[i];
                        }
                        if let Some(up) = &up {
                            acc += self.tangent[i][a].conj() * (p2 * c_up) * up[i];
                        }
                        acc -= base[i] * (self.unit_p[i][a] * p);
                        i_h * acc
                    })
                    .collect()
            }
        }
    }

    /// S_P inner product `<bra | image>` (the `P^2` measure factor included).
    fn element(&mut self, bra: QNum, image: &[Complex64], p_radius: f64) -> Complex64 {
        let bra_vals = self.values(bra).to_vec();
        let mut acc = Complex64::new(0.0, 0.0);
        for ((b, v), w) in bra_vals.iter().zip(image).zip(self.quad.weights()) {
            acc += b.conj() * v * *w;
        }
        acc * (p_radius * p_radius)
    }
}

/// `<sY_bra | O | sY_ket>` over S_P, computed entirely by pointwise action
/// and quadrature of the stated order `2 (j_bra + j_ket + 2)`.
pub fn quadrature_matrix_element(
    kind: OperatorKind,
    bra: QNum,
    ket: QNum,
    params: &ElementaryParams,
) -> Result<Complex64> {
    bra.validate()?;
    ket.validate()?;
    if bra.s != ket.s {
        return Err(Error::SpinWeightMismatch {
            state: bra.s.to_string(),
            operand: ket.s.to_string(),
        });
    }
    for q in [bra, ket] {
        if q.j.doubled() > MAX_ORACLE_DJ || q.s.abs().doubled() > MAX_ORACLE_DS {
            return Err(Error::OutOfRange(format!(
                "quadrature oracle regime is j <= {}, |s| <= {}; got {q}",
                MAX_ORACLE_DJ / 2,
                MAX_ORACLE_DS / 2
            )));
        }
    }
    let order = (bra.j.doubled() + ket.j.doubled() + 4) as usize;
    let mut grid = GridCache::new(order);
    let image = grid.apply_pointwise(kind, ket, params);
    Ok(grid.element(bra, &image, params.p_radius))
}

/// One verified property with its observed worst-case errors.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub name: String,
    pub range: String,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Ordered collection of check results.
#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, range: String, max_abs: f64, max_rel: f64, tol: f64) {
        self.checks.push(CheckRecord {
            name: name.to_string(),
            range,
            max_abs_err: max_abs,
            max_rel_err: max_rel,
            tol,
            pass: max_abs <= tol,
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<32} [{}] max_abs={:.3e} max_rel={:.3e} tol={:.1e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.range,
                c.max_abs_err,
                c.max_rel_err,
                c.tol,
            )?;
        }
        Ok(())
    }
}

/// Index ranges the suite sweeps.
#[derive(Clone, Copy, Debug)]
pub struct SuiteLimits {
    pub s_max: HalfInt,
    pub j_max: HalfInt,
}

impl Default for SuiteLimits {
    fn default() -> Self {
        SuiteLimits {
            s_max: HalfInt::from_int(2),
            j_max: HalfInt::from_int(6),
        }
    }
}

struct ErrTracker {
    max_abs: f64,
    max_rel: f64,
}

impl ErrTracker {
    fn new() -> Self {
        ErrTracker {
            max_abs: 0.0,
            max_rel: 0.0,
        }
    }

    fn record(&mut self, got: Complex64, want: Complex64) {
        let abs = (got - want).norm();
        self.max_abs = self.max_abs.max(abs);
        if want.norm() > 1e-9 {
            self.max_rel = self.max_rel.max(abs / want.norm());
        }
    }

    fn record_f(&mut self, got: f64, want: f64) {
        self.record(Complex64::new(got, 0.0), Complex64::new(want, 0.0));
    }
}

fn spins_up_to(s_max: HalfInt) -> Vec<HalfInt> {
    steps_by_half(-s_max, s_max).collect()
}

fn states_for(s: HalfInt, j_max: HalfInt) -> Vec<QNum> {
    let mut out = Vec::new();
    for j in steps_by_one(s.abs(), j_max) {
        for dm in (-j.doubled()..=j.doubled()).step_by(2) {
            out.push(QNum {
                s,
                j,
                m: HalfInt::from_doubled(dm),
            });
        }
    }
    out
}

/// Run every cross-check at the given limits. Failures are reported, not
/// thrown; `tol` applies to the quadrature/algebra checks while the single
/// finite-difference check uses `max(tol, 1e-6)` to respect its own
/// discretization floor.
pub fn run_suite(limits: SuiteLimits, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::default();
    let params = ElementaryParams::new(1.0, HalfInt::ZERO).expect("unit params");
    let p_radius = params.p_radius;

    let spins = spins_up_to(limits.s_max);
    let range_label = format!("|s|<={}, j<={}", limits.s_max, limits.j_max);

    // One shared grid covering the worst integrand degree in the sweep:
    // bra up to j_max + 1, ket up to j_max, one momentum factor. This is
    // the per-element order 2 (j_bra + j_ket + 2) at the top of the range.
    let order = (2 * limits.j_max.doubled() + 6) as usize;
    let mut grid = GridCache::new(order.max(4));

    // 1. Orthonormality by quadrature.
    {
        let mut err = ErrTracker::new();
        for &s in &spins {
            let states = states_for(s, limits.j_max);
            let vals: Vec<Vec<Complex64>> =
                states.iter().map(|q| grid.values(*q).to_vec()).collect();
            for i in 0..states.len() {
                for k in 0..states.len() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for ((x, y), w) in vals[i].iter().zip(&vals[k]).zip(grid.quad.weights()) {
                        acc += x.conj() * y * *w;
                    }
                    let want = if i == k { 1.0 } else { 0.0 };
                    err.record(acc, Complex64::new(want, 0.0));
                }
            }
        }
        report.push(
            "orthonormality",
            range_label.clone(),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 2. Edth ladder against central finite differences in the chart.
    {
        let fd_tol = tol.max(1e-6);
        let mut err = ErrTracker::new();
        let s_cap = HalfInt::from_doubled(limits.s_max.doubled().min(4));
        let j_cap = HalfInt::from_doubled(limits.j_max.doubled().min(8));
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut rand01 = move || {
            rng_state = rng_state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((rng_state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        let points: Vec<SpherePoint> = (0..20)
            .map(|_| {
                let theta = 0.3 + 2.5 * rand01();
                let phi = 2.0 * std::f64::consts::PI * rand01();
                SpherePoint::new(theta, phi).expect("interior")
            })
            .collect();
        for &s in &spins_up_to(s_cap) {
            for q in states_for(s, j_cap) {
                for prime in [false, true] {
                    let (coeff, target) = edth_ladder(q, prime, p_radius);
                    for pt in &points {
                        let want = match target {
                            Some(t) => eval_harmonic(t, pt) * coeff,
                            None => Complex64::new(0.0, 0.0),
                        };
                        let got = edth_finite_difference(q, pt, prime, p_radius);
                        err.record(got, want);
                    }
                }
            }
        }
        report.push(
            "edth-ladder-finite-difference",
            format!("|s|<={}, j<={}, 20 points", s_cap, j_cap),
            err.max_abs,
            err.max_rel,
            fd_tol,
        );
    }

    // 3. Ladder composition: Laplacian eigenvalue and spin commutator.
    {
        let mut err = ErrTracker::new();
        for &s in &spins {
            for q in states_for(s, limits.j_max) {
                let compose = |first_prime: bool| -> f64 {
                    let (c1, t) = edth_ladder(q, first_prime, p_radius);
                    t.map_or(0.0, |t| {
                        let (c2, _) = edth_ladder(t, !first_prime, p_radius);
                        c1 * c2
                    })
                };
                err.record_f(
                    compose(true) + compose(false),
                    laplacian_eigenvalue(q, p_radius),
                );
                let want = -q.s.as_f64() / (p_radius * p_radius);
                err.record_f(compose(true) - compose(false), want);
            }
        }
        report.push(
            "ladder-composition",
            range_label.clone(),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 4. Y1 product expansion against quadrature projections.
    {
        let mut err = ErrTracker::new();
        for &s in &spins {
            for q in states_for(s, limits.j_max) {
                for mu in [-1i64, 0, 1] {
                    let y1 = QNum::from_doubled(0, 2, 2 * mu).expect("valid");
                    let y1_vals = grid.values(y1).to_vec();
                    let q_vals = grid.values(q).to_vec();
                    for (target, coeff) in product_expand_y1(mu, q) {
                        let t_vals = grid.values(target).to_vec();
                        let mut acc = Complex64::new(0.0, 0.0);
                        for i in 0..grid.quad.len() {
                            acc +=
                                t_vals[i].conj() * y1_vals[i] * q_vals[i] * grid.quad.weights()[i];
                        }
                        err.record(acc, Complex64::new(coeff, 0.0));
                    }
                }
            }
        }
        report.push(
            "product-expansion",
            range_label.clone(),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 5 & 6. Closed-form momentum and angular momentum matrix elements.
    {
        let mut err_p = ErrTracker::new();
        let mut err_j = ErrTracker::new();
        for &s in &spins {
            let kets = states_for(s, limits.j_max);
            let bras = states_for(s, limits.j_max + 1);
            for ket in &kets {
                let images: Vec<Vec<Complex64>> = Axis::ALL
                    .iter()
                    .map(|a| grid.apply_pointwise(OperatorKind::Momentum(*a), *ket, &params))
                    .collect();
                let j_images: Vec<Vec<Complex64>> = Axis::ALL
                    .iter()
                    .map(|a| grid.apply_pointwise(OperatorKind::AngularMomentum(*a), *ket, &params))
                    .collect();
                for bra in &bras {
                    if (bra.j.doubled() - ket.j.doubled()).abs() > 2
                        || (bra.m.doubled() - ket.m.doubled()).abs() > 2
                    {
                        continue;
                    }
                    for (ai, axis) in Axis::ALL.iter().enumerate() {
                        let got = grid.element(*bra, &images[ai], p_radius);
                        let want = operators::p_element(*axis, *bra, *ket, &params).unwrap();
                        err_p.record(got, want);
                        if bra.j == ket.j {
                            let got = grid.element(*bra, &j_images[ai], p_radius);
                            let want = operators::j_element(*axis, *bra, *ket, &params).unwrap();
                            err_j.record(got, want);
                        }
                    }
                }
            }
        }
        report.push(
            "momentum-elements",
            range_label.clone(),
            err_p.max_abs,
            err_p.max_rel,
            tol,
        );
        report.push(
            "angular-momentum-elements",
            range_label.clone(),
            err_j.max_abs,
            err_j.max_rel,
            tol,
        );
    }

    // 7. J elements reduce to p elements at shifted spin weights.
    {
        let mut err = ErrTracker::new();
        for &s in &spins {
            for ket in states_for(s, limits.j_max) {
                for bra in states_for(s, limits.j_max) {
                    if bra.j != ket.j || (bra.m.doubled() - ket.m.doubled()).abs() > 2 {
                        continue;
                    }
                    for axis in Axis::ALL {
                        let want = operators::j_element(axis, bra, ket, &params).unwrap();
                        let got = j_from_shifted_p(axis, bra, ket, &params);
                        err.record(got, want);
                    }
                }
            }
        }
        report.push(
            "j-from-shifted-p",
            range_label.clone(),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 8. Centre-of-mass operator: pointwise edth form vs composition.
    {
        let mut err = ErrTracker::new();
        let j_cap = HalfInt::from_doubled(limits.j_max.doubled().min(8));
        for &s in &spins {
            for ket in states_for(s, j_cap) {
                let state = StateVector::basis(params_for(s), ket).expect("basis");
                for axis in Axis::ALL.iter() {
                    let image =
                        grid.apply_pointwise(OperatorKind::CentreOfMass(*axis), ket, &params);
                    let composed = operators::apply(&[Letter::C(*axis)], &state);
                    for bra in states_for(s, j_cap + 1) {
                        if (bra.j.doubled() - ket.j.doubled()).abs() > 2
                            || (bra.m.doubled() - ket.m.doubled()).abs() > 2
                        {
                            continue;
                        }
                        let got = grid.element(bra, &image, p_radius);
                        // Composition works on normalized states; scale back.
                        let want = composed.coeff(&bra) * (p_radius * p_radius);
                        err.record(got, want);
                    }
                }
            }
        }
        report.push(
            "com-construction",
            format!("|s|<={}, j<={}", limits.s_max, j_cap),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 9. W acts as the Casimir hbar P s, via quadrature-composed elements.
    {
        let mut err = ErrTracker::new();
        let mut j_image_cache: HashMap<(usize, QNum), Vec<Complex64>> = HashMap::new();
        for &s in &spins {
            for ket in states_for(s, limits.j_max) {
                let mut acc = Complex64::new(0.0, 0.0);
                for axis in Axis::ALL {
                    // W = sum_a J_a p_a; insert the resolution of identity
                    // between quadrature-built element matrices.
                    let p_image = grid.apply_pointwise(OperatorKind::Momentum(axis), ket, &params);
                    for mid in states_for(s, limits.j_max + 1) {
                        if (mid.j.doubled() - ket.j.doubled()).abs() > 2
                            || (mid.m.doubled() - ket.m.doubled()).abs() > 2
                        {
                            continue;
                        }
                        let p_el = grid.element(mid, &p_image, p_radius);
                        if p_el.norm() < 1e-14 {
                            continue;
                        }
                        let j_image = j_image_cache
                            .entry((axis.index(), mid))
                            .or_insert_with(|| {
                                grid.apply_pointwise(
                                    OperatorKind::AngularMomentum(axis),
                                    mid,
                                    &params,
                                )
                            })
                            .clone();
                        let j_el = grid.element(ket, &j_image, p_radius);
                        acc += j_el * p_el / (p_radius * p_radius);
                    }
                }
                let want = params.hbar * p_radius * s.as_f64() * (p_radius * p_radius);
                err.record(acc, Complex64::new(want, 0.0));
            }
        }
        report.push(
            "w-eigenvalue",
            range_label.clone(),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 10. Commutators of the sparse operators on basis states.
    {
        let mut err = ErrTracker::new();
        let s_cap = HalfInt::from_doubled(limits.s_max.doubled().min(4));
        let j_cap = HalfInt::from_doubled(limits.j_max.doubled().min(8));
        for &s in &spins_up_to(s_cap) {
            let pr = params_for(s);
            for q in states_for(s, j_cap) {
                let state = StateVector::basis(pr, q).expect("basis");
                err.record_f(commutator_errors(&pr, &state), 0.0);
            }
        }
        report.push(
            "commutators",
            format!("|s|<={}, j<={}", s_cap, j_cap),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 11. Operator identity P^2 J_ab = C_a p_b - C_b p_a + eps_abc p^c W.
    {
        let mut err = ErrTracker::new();
        let s_cap = HalfInt::from_doubled(limits.s_max.doubled().min(4));
        let j_cap = HalfInt::from_doubled(limits.j_max.doubled().min(8));
        for &s in &spins_up_to(s_cap) {
            let pr = params_for(s);
            for q in states_for(s, j_cap) {
                let state = StateVector::basis(pr, q).expect("basis");
                err.record_f(identity_residual(&pr, &state), 0.0);
            }
        }
        report.push(
            "angular-momentum-identity",
            format!("|s|<={}, j<={}", s_cap, j_cap),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 12. Vanishing centre-of-mass expectation on basis states.
    {
        let mut err = ErrTracker::new();
        for &s in &spins {
            let pr = params_for(s);
            for q in states_for(s, limits.j_max) {
                let v = operators::com_expectation(q, &pr).expect("com expectation");
                err.record_f(v.norm(), 0.0);
            }
        }
        report.push(
            "com-expectation",
            range_label.clone(),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    // 13. Closed-form D^2 against the exact fourth-moment route.
    {
        let mut err = ErrTracker::new();
        let j_cap = HalfInt::from_doubled(limits.j_max.doubled().min(12));
        for &s in &spins {
            if s.doubled() < 0 {
                continue;
            }
            for q1 in states_for(s, j_cap) {
                if q1.j.doubled() < 2 {
                    continue;
                }
                for beta in [0.0, 0.9, 2.2] {
                    let pr = params_for(s);
                    let a = PlacedState::new(pr, q1, E3Placement::identity()).expect("placed");
                    let b = PlacedState::new(
                        pr,
                        q1,
                        E3Placement {
                            euler: [0.0, beta, 0.0],
                            xi: Vec3::ZERO,
                        },
                    )
                    .expect("placed");
                    let g = empirical::empirical_distance(&a, &b).expect("distance");
                    err.record_f(g.dsq, empirical::pair_dsq_general(q1, q1, beta));
                }
            }
        }
        report.push(
            "dsq-closed-vs-moments",
            format!("|s|<={}, j<={}", limits.s_max, j_cap),
            err.max_abs,
            err.max_rel,
            tol,
        );
    }

    report
}

fn params_for(s: HalfInt) -> ElementaryParams {
    ElementaryParams::new(1.0, s).expect("unit params")
}

/// Central finite differences of the chart form of edth on a harmonic.
fn edth_finite_difference(q: QNum, pt: &SpherePoint, prime: bool, p_radius: f64) -> Complex64 {
    let z = pt.zeta();
    let h = 1e-5;
    let f = |zeta: Complex64| eval_harmonic_stereo(q, zeta);
    let dx = (f(z + Complex64::new(h, 0.0)) - f(z - Complex64::new(h, 0.0))) / (2.0 * h);
    let dy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
    let i = Complex64::new(0.0, 1.0);
    let d_zeta = 0.5 * (dx - i * dy);
    let d_zbar = 0.5 * (dx + i * dy);
    let scale = (1.0 + z.norm_sqr()) / (std::f64::consts::SQRT_2 * p_radius);
    let s = q.s.as_f64();
    if prime {
        d_zeta * scale - z.conj() * (s / (std::f64::consts::SQRT_2 * p_radius)) * f(z)
    } else {
        d_zbar * scale + z * (s / (std::f64::consts::SQRT_2 * p_radius)) * f(z)
    }
}

/// J matrix element assembled from p elements at shifted spin weights.
fn j_from_shifted_p(axis: Axis, bra: QNum, ket: QNum, params: &ElementaryParams) -> Complex64 {
    let p = params.p_radius;
    let mut acc = Complex64::new(0.0, 0.0);
    // Raised-spin term.
    let (c_up_ket, t_up_ket) = edth_ladder(ket, false, 1.0);
    let (c_up_bra, t_up_bra) = edth_ladder(bra, false, 1.0);
    if let (Some(tk), Some(tb)) = (t_up_ket, t_up_bra) {
        let el = operators::p_element(axis, tb, tk, params).unwrap();
        // The ladder at P=1 carries 1/sqrt2; two of them give the printed
        // sqrt((k+s+1)(k-s)) sqrt((j+s+1)(j-s)) over 2.
        acc += el * (2.0 * c_up_bra * c_up_ket);
    }
    let (c_dn_ket, t_dn_ket) = edth_ladder(ket, true, 1.0);
    let (c_dn_bra, t_dn_bra) = edth_ladder(bra, true, 1.0);
    if let (Some(tk), Some(tb)) = (t_dn_ket, t_dn_bra) {
        let el = operators::p_element(axis, tb, tk, params).unwrap();
        acc -= el * (2.0 * c_dn_bra * c_dn_ket);
    }
    let el = operators::p_element(axis, bra, ket, params).unwrap();
    acc += el * (4.0 * ket.s.as_f64());
    acc * (params.hbar / (2.0 * p))
}

/// Worst commutator residual of the p/J/C family on one basis state,
/// normalized by the natural scale of each relation.
fn commutator_errors(params: &ElementaryParams, state: &StateVector) -> f64 {
    let hbar = params.hbar;
    let p2 = params.p_radius * params.p_radius;
    let mut worst = 0.0f64;
    let commutator = |x: Letter, y: Letter| -> StateVector {
        let mut xy = operators::apply(&[x, y], state);
        let yx = operators::apply(&[y, x], state);
        xy.axpy(Complex64::new(-1.0, 0.0), &yx);
        xy
    };
    let diff_norm = |mut got: StateVector, want: &StateVector| -> f64 {
        got.axpy(Complex64::new(-1.0, 0.0), want);
        got.norm_sqr().sqrt()
    };

    for (a, ax) in Axis::ALL.iter().enumerate() {
        for (b, bx) in Axis::ALL.iter().enumerate() {
            // [p_a, p_b] = 0.
            let got = commutator(Letter::P(*ax), Letter::P(*bx));
            worst = worst.max(got.norm_sqr().sqrt() / p2);

            // [p_a, J_b] = i hbar eps_abc p_c.
            let got = commutator(Letter::P(*ax), Letter::J(*bx));
            let mut want = StateVector::zero(*params);
            for (c, cx) in Axis::ALL.iter().enumerate() {
                let e = epsilon(a, b, c);
                if e != 0.0 {
                    let pc = operators::apply(&[Letter::P(*cx)], state);
                    want.axpy(Complex64::new(0.0, e * hbar), &pc);
                }
            }
            worst = worst.max(diff_norm(got, &want) / (hbar * params.p_radius));

            // [J_a, J_b] = i hbar eps_abc J_c.
            let got = commutator(Letter::J(*ax), Letter::J(*bx));
            let mut want = StateVector::zero(*params);
            for (c, cx) in Axis::ALL.iter().enumerate() {
                let e = epsilon(a, b, c);
                if e != 0.0 {
                    let jc = operators::apply(&[Letter::J(*cx)], state);
                    want.axpy(Complex64::new(0.0, e * hbar), &jc);
                }
            }
            worst = worst.max(diff_norm(got, &want) / (hbar * hbar));

            // [p_a, C_b] = -i hbar (delta_ab P^2 - p_a p_b).
            let got = commutator(Letter::P(*ax), Letter::C(*bx));
            let mut want = StateVector::zero(*params);
            if a == b {
                want.axpy(Complex64::new(0.0, -hbar * p2), state);
            }
            let papb = operators::apply(&[Letter::P(*ax), Letter::P(*bx)], state);
            want.axpy(Complex64::new(0.0, hbar), &papb);
            worst = worst.max(diff_norm(got, &want) / (hbar * p2));

            // [C_a, C_b] = -i hbar P^2 J_ab = -i hbar P^2 eps_abc J_c.
            let got = commutator(Letter::C(*ax), Letter::C(*bx));
            let mut want = StateVector::zero(*params);
            for (c, cx) in Axis::ALL.iter().enumerate() {
                let e = epsilon(a, b, c);
                if e != 0.0 {
                    let jc = operators::apply(&[Letter::J(*cx)], state);
                    want.axpy(Complex64::new(0.0, -e * hbar * p2), &jc);
                }
            }
            worst = worst.max(diff_norm(got, &want) / (hbar * hbar * p2));
        }
    }
    worst
}

/// Residual of `P^2 J_ab - C_a p_b + C_b p_a - eps_abc p^c W` on a state,
/// normalized by `P^3 hbar`.
fn identity_residual(params: &ElementaryParams, state: &StateVector) -> f64 {
    let p2 = params.p_radius * params.p_radius;
    let scale = params.p_radius * p2 * params.hbar;
    let mut worst = 0.0f64;
    for (a, ax) in Axis::ALL.iter().enumerate() {
        for (b, bx) in Axis::ALL.iter().enumerate() {
            if a == b {
                continue;
            }
            // P^2 J_ab with J_ab = eps_abc J_c.
            let mut total = StateVector::zero(*params);
            for (c, cx) in Axis::ALL.iter().enumerate() {
                let e = epsilon(a, b, c);
                if e != 0.0 {
                    let jc = operators::apply(&[Letter::J(*cx)], state);
                    total.axpy(Complex64::new(e * p2, 0.0), &jc);
                }
            }
            let capb = operators::apply(&[Letter::C(*ax), Letter::P(*bx)], state);
            total.axpy(Complex64::new(-1.0, 0.0), &capb);
            let cbpa = operators::apply(&[Letter::C(*bx), Letter::P(*ax)], state);
            total.axpy(Complex64::new(1.0, 0.0), &cbpa);
            for (c, cx) in Axis::ALL.iter().enumerate() {
                let e = epsilon(a, b, c);
                if e != 0.0 {
                    let pw = operators::apply(&[Letter::P(*cx), Letter::W], state);
                    total.axpy(Complex64::new(-e, 0.0), &pw);
                }
            }
            worst = worst.max(total.norm_sqr().sqrt() / scale);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_element_examples() {
        let params = ElementaryParams::new(1.0, HalfInt::ZERO).unwrap();
        // <0Y10| p_z |0Y00> = P^3/sqrt(3).
        let got = quadrature_matrix_element(
            OperatorKind::Momentum(Axis::Z),
            QNum::from_doubled(0, 2, 0).unwrap(),
            QNum::from_doubled(0, 0, 0).unwrap(),
            &params,
        )
        .unwrap();
        assert!((got - Complex64::new(1.0 / 3.0f64.sqrt(), 0.0)).norm() < 1e-11);

        // J_z diagonal on (1/2, 1/2, 1/2): hbar P^2 / 2.
        let params_h = ElementaryParams::new(1.0, HalfInt::HALF).unwrap();
        let q = QNum::from_doubled(1, 1, 1).unwrap();
        let got =
            quadrature_matrix_element(OperatorKind::AngularMomentum(Axis::Z), q, q, &params_h)
                .unwrap();
        assert!((got - Complex64::new(0.5, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn com_two_routes_agree() {
        // C_a via the pointwise edth form equals the J p composition.
        let s = HalfInt::ONE;
        let params = ElementaryParams::new(1.0, s).unwrap();
        let ket = QNum::from_doubled(2, 4, 2).unwrap();
        let state = StateVector::basis(params, ket).unwrap();
        for axis in Axis::ALL {
            let composed = operators::apply(&[Letter::C(axis)], &state);
            for bra in states_for(s, HalfInt::from_int(3)) {
                let via_edth =
                    quadrature_matrix_element(OperatorKind::CentreOfMass(axis), bra, ket, &params)
                        .unwrap();
                let want = composed.coeff(&bra);
                assert!(
                    (via_edth - want).norm() < 1e-10,
                    "axis {axis:?} bra {bra}: {via_edth} vs {want}"
                );
            }
        }
    }

    #[test]
    fn out_of_regime_rejected() {
        let params = ElementaryParams::new(1.0, HalfInt::ZERO).unwrap();
        let big = QNum::from_doubled(0, 40, 0).unwrap();
        assert!(matches!(
            quadrature_matrix_element(OperatorKind::Momentum(Axis::Z), big, big, &params),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn small_suite_passes() {
        let limits = SuiteLimits {
            s_max: HalfInt::ONE,
            j_max: HalfInt::from_int(3),
        };
        let report = run_suite(limits, 1e-9);
        assert!(report.all_pass(), "\n{report}");
        // Check names are stable and ordered.
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names[0], "orthonormality");
        assert!(names.contains(&"dsq-closed-vs-moments"));
    }

    #[test]
    fn impossible_tolerance_reported_not_thrown() {
        let limits = SuiteLimits {
            s_max: HalfInt::HALF,
            j_max: HalfInt::ONE,
        };
        let report = run_suite(limits, 1e-300);
        assert!(!report.all_pass());
        assert!(report.checks.iter().all(|c| c.max_abs_err.is_finite()));
    }

    #[test]
    fn empty_range_well_formed() {
        let limits = SuiteLimits {
            s_max: HalfInt::ZERO,
            j_max: HalfInt::ZERO,
        };
        let report = run_suite(limits, 1e-9);
        assert!(!report.checks.is_empty());
        assert!(report.all_pass(), "\n{report}");
    }
}
