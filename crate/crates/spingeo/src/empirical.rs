//! Empirical distance, angle, 3-volume and uncertainty for placed
//! elementary quantum systems.
//!
//! A placed state is a single harmonic basis state moved by an E(3)
//! element: a rotation given by Euler angles plus a translation entering
//! as the phase `exp(-i p.xi / hbar)`. All pair observables reduce to
//! single-system moments of words in {p, J} transformed by the placement,
//! so no rotated state vector is ever expanded explicitly.
//!
//! The distance denominator is computed from exact sparse fourth moments;
//! the closed forms for D^2 (the general expression, and its reduction on
//! centre-of-mass states) are provided separately and serve as
//! cross-checks and as the fast path for limit studies.

use num_complex::Complex64;

use crate::classical::{euclidean_line_distance, Line3};
use crate::geom::{det3, epsilon, Mat3, Vec3};
use crate::half::HalfInt;
use crate::operators::{moment, Axis, ElementaryParams, Letter, StateVector};
use crate::swsh::QNum;
use crate::{clamped_acos, Error, Result};

/// Euler angles plus a translation; the quantum analog of "where the
/// particle is".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct E3Placement {
    pub euler: [f64; 3],
    pub xi: Vec3,
}

impl E3Placement {
    pub fn identity() -> Self {
        E3Placement {
            euler: [0.0; 3],
            xi: Vec3::ZERO,
        }
    }

    pub fn rotation(&self) -> Mat3 {
        euler_to_rotation(&self.euler)
    }

    /// Unit vector the placement sends the z-axis to; the line direction.
    pub fn axis(&self) -> Vec3 {
        let [_, beta, gamma] = self.euler;
        Vec3::new(
            beta.sin() * gamma.sin(),
            -beta.sin() * gamma.cos(),
            beta.cos(),
        )
    }
}

/// A harmonic basis state together with its E(3) placement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlacedState {
    pub params: ElementaryParams,
    pub q: QNum,
    pub placement: E3Placement,
}

impl PlacedState {
    pub fn new(params: ElementaryParams, q: QNum, placement: E3Placement) -> Result<Self> {
        q.validate()?;
        if q.s != params.s {
            return Err(Error::SpinWeightMismatch {
                state: params.s.to_string(),
                operand: q.s.to_string(),
            });
        }
        Ok(PlacedState {
            params,
            q,
            placement,
        })
    }

    /// The straight line this placement realizes: through `xi` along the
    /// rotated z-axis.
    pub fn line(&self) -> Result<Line3> {
        Line3::new(self.placement.xi, self.placement.axis())
    }
}

/// Everything the empirical distance of a pair produces.
#[derive(Clone, Copy, Debug)]
pub struct PairGeometry {
    /// Signed empirical distance (length).
    pub d12: f64,
    /// Numerator expectation value (momentum times angular momentum).
    pub numerator: f64,
    /// Translation-dependent part of the numerator; vanishes for common
    /// placements.
    pub numerator_translational: f64,
    /// The remainder, proportional to hbar: the genuine quantum correction.
    pub numerator_quantum: f64,
    /// Dimensionless denominator squared, from exact fourth moments.
    pub dsq: f64,
    /// Relative orientation angle of the two placements.
    pub beta12: f64,
    /// Uncertainty of d12, when the relative uncertainty is defined.
    pub uncertainty: Option<f64>,
    /// Euclidean distance between the two placement lines.
    pub classical_ref: f64,
}

/// Rotation matrix of the Euler angles (alpha, beta, gamma).
pub fn euler_to_rotation(euler: &[f64; 3]) -> Mat3 {
    let (sa, ca) = euler[0].sin_cos();
    let (sb, cb) = euler[1].sin_cos();
    let (sg, cg) = euler[2].sin_cos();
    Mat3([
        [ca * cg - sa * cb * sg, -sa * cg - ca * cb * sg, sb * sg],
        [ca * sg + sa * cb * cg, -sa * sg + ca * cb * cg, -sb * cg],
        [sa * sb, ca * sb, cb],
    ])
}

/// Euler angles of a rotation matrix in the same convention;
/// `euler_to_rotation(euler_from_rotation(r)) == r`.
pub fn euler_from_rotation(r: &Mat3) -> Result<[f64; 3]> {
    let m = r.0;
    let beta = clamped_acos(m[2][2])?;
    if beta.sin().abs() > 1e-9 {
        let alpha = f64::atan2(m[2][0], m[2][1]);
        let gamma = f64::atan2(m[0][2], -m[1][2]);
        Ok([alpha, beta, gamma])
    } else if m[2][2] > 0.0 {
        // Pure rotation about z: alpha + gamma is fixed, split as (alpha, 0).
        Ok([f64::atan2(m[1][0], m[0][0]), 0.0, 0.0])
    } else {
        Ok([f64::atan2(-m[1][0], m[0][0]), std::f64::consts::PI, 0.0])
    }
}

/// Cosine of the relative orientation angle: the dot product of the two
/// rotated z-axes, equivalently `(R1^-1 R2)_33`.
pub fn cos_beta12(e1: &E3Placement, e2: &E3Placement) -> f64 {
    e1.axis().dot(e2.axis())
}

/// The same angle from the closed Euler-angle expression; agrees with
/// `cos_beta12` and is independent of both alpha angles.
pub fn cos_beta12_formula(e1: &E3Placement, e2: &E3Placement) -> f64 {
    let [_, b1, g1] = e1.euler;
    let [_, b2, g2] = e2.euler;
    b1.cos() * b2.cos() + (g1 - g2).cos() * b1.sin() * b2.sin()
}

/// First moments of a placed basis state in the global frame:
/// `(<p>, <J>)` with the translation contributing `xi x <p>` to `<J>`.
pub fn first_moments(state: &PlacedState) -> (Vec3, Vec3) {
    let r = state.placement.rotation();
    let f = momentum_fraction(state.q);
    let p_base = Vec3::EZ * (state.params.p_radius * f);
    let j_base = Vec3::EZ * (state.params.hbar * state.q.m.as_f64());
    let p = r.mul_vec(p_base);
    let j = r.mul_vec(j_base) + state.placement.xi.cross(p);
    (p, j)
}

/// `s m / (j (j + 1))`, the fraction of `P` the momentum expectation
/// retains; zero for the constant mode.
fn momentum_fraction(q: QNum) -> f64 {
    if q.j.is_zero() {
        0.0
    } else {
        q.s.as_f64() * q.m.as_f64() / q.jjp1()
    }
}

fn check_pair(s1: &PlacedState, s2: &PlacedState) -> Result<f64> {
    if (s1.params.hbar - s2.params.hbar).abs() > 0.0 {
        return Err(Error::InvalidParameter(
            "placed systems must share the same hbar".into(),
        ));
    }
    Ok(s1.params.hbar)
}

/// Numerator of the empirical distance,
/// `<W_12 - hbar (s1/P1 + s2/P2) P^2_12>`, assembled from first moments.
/// This general route covers the `s = 0` states where the closed form's
/// division by the spin is unavailable.
pub fn pair_numerator(s1: &PlacedState, s2: &PlacedState) -> Result<f64> {
    let hbar = check_pair(s1, s2)?;
    let (p1, j1) = first_moments(s1);
    let (p2, j2) = first_moments(s2);
    let w12 = p1.dot(j2) + j1.dot(p2);
    let p12 = p1.dot(p2);
    let kappa = hbar
        * (s1.params.s.as_f64() / s1.params.p_radius + s2.params.s.as_f64() / s2.params.p_radius);
    Ok(w12 - kappa * p12)
}

/// The closed form of the numerator; defined only when both spins and
/// both j's are nonzero.
pub fn pair_numerator_closed(s1: &PlacedState, s2: &PlacedState) -> Result<f64> {
    let hbar = check_pair(s1, s2)?;
    if s1.params.s.is_zero() || s2.params.s.is_zero() {
        return Err(Error::DegenerateSystem(
            "closed numerator divides by the spin weight".into(),
        ));
    }
    let (p1, p2) = (s1.params.p_radius, s2.params.p_radius);
    let (q1, q2) = (s1.q, s2.q);
    let axis1 = s1.placement.axis();
    let axis2 = s2.placement.axis();
    let dxi = s1.placement.xi - s2.placement.xi;
    let cosb = cos_beta12(&s1.placement, &s2.placement);
    let spin_term = |q: QNum, p: f64| (q.jjp1() - q.s.as_f64().powi(2)) / (q.s.as_f64() * p);
    let bracket =
        dxi.dot(axis1.cross(axis2)) + cosb * hbar * (spin_term(q2, p2) + spin_term(q1, p1));
    let pref =
        q1.s.as_f64() * q1.m.as_f64() * q2.s.as_f64() * q2.m.as_f64() / (q1.jjp1() * q2.jjp1());
    Ok(p1 * p2 * bracket * pref)
}

/// Normalized diagonal second moments `(<p1 p1>, <p3 p3>) / P^2` of a
/// basis state; the j = 0 and j = 1/2 states are isotropic with value 1/3.
fn second_moments_unit(q: QNum) -> (f64, f64) {
    let params = ElementaryParams::new(1.0, q.s).expect("unit params");
    let m = crate::operators::second_moments_closed(q, &params);
    (m[0][0], m[2][2])
}

/// Denominator squared `D^2` of the empirical distance from the closed
/// second moments. Valid for every admissible `(j, m)` pair, including the
/// `j = 0, 1/2` states where it reduces to the constant 2/3.
pub fn pair_dsq(q1: QNum, q2: QNum, beta12: f64) -> f64 {
    let (x1, z1) = second_moments_unit(q1);
    let (x2, z2) = second_moments_unit(q2);
    let c2 = beta12.cos().powi(2);
    1.0 - ((1.0 + c2) * x1 * x2 + (1.0 - c2) * (x1 * z2 + z1 * x2) + c2 * z1 * z2)
}

/// Literal transcription of the general closed form of `D^2`; requires
/// both `j >= 1`.
pub fn pair_dsq_general(q1: QNum, q2: QNum, beta12: f64) -> f64 {
    assert!(
        q1.j.doubled() >= 2 && q2.j.doubled() >= 2,
        "general closed form needs j >= 1; use pair_dsq"
    );
    let jj1 = q1.jjp1();
    let jj2 = q2.jjp1();
    let s1sq = q1.s.as_f64().powi(2);
    let s2sq = q2.s.as_f64().powi(2);
    let m1sq = q1.m.as_f64().powi(2);
    let m2sq = q2.m.as_f64().powi(2);
    let g1 = ((q1.j.doubled() - 1) * (q1.j.doubled() + 3)) as f64; // (2j-1)(2j+3)
    let g2 = ((q2.j.doubled() - 1) * (q2.j.doubled() + 3)) as f64;
    let c2 = beta12.cos().powi(2);

    let term1 = (5.0 * jj1 * jj2 + (s1sq - 4.0) * jj2 + (s2sq - 4.0) * jj1 - 3.0 * s1sq * s2sq
        + 3.0)
        / (g1 * g2);
    let term2 = (jj1 - 3.0 * s1sq) * (jj2 - 3.0 * s2sq) / (g1 * g2)
        * (m1sq / jj1 + m2sq / jj2 - 3.0 * m1sq * m2sq / (jj1 * jj2));
    let term3 = (jj1 - 3.0 * s1sq) * (jj1 - 3.0 * m1sq) * (jj2 - 3.0 * s2sq) * (jj2 - 3.0 * m2sq)
        / (jj1 * g1 * jj2 * g2)
        * c2;
    1.0 - term1 - term2 - term3
}

/// `D^2` on centre-of-mass states (`j = |s|`); exactly 2/3 whenever either
/// j is 0 or 1/2, and strictly positive everywhere.
pub fn pair_dsq_com(q1: QNum, q2: QNum, beta12: f64) -> f64 {
    let jj1 = q1.jjp1();
    let jj2 = q2.jjp1();
    let m1sq = q1.m.as_f64().powi(2);
    let m2sq = q2.m.as_f64().powi(2);
    let j1 = q1.j.as_f64();
    let j2 = q2.j.as_f64();
    let num = (3.0 * m1sq - jj1) * (3.0 * m2sq - jj2);
    2.0 / 3.0
        + num * (1.0 - 3.0 * beta12.cos().powi(2))
            / (3.0 * (j1 + 1.0) * (2.0 * j1 + 3.0) * (j2 + 1.0) * (2.0 * j2 + 3.0))
}

type CMat = [[Complex64; 3]; 3];
type CTen4 = [[[[Complex64; 3]; 3]; 3]; 3];

/// Moments of one unplaced basis state, then their placement transforms.
struct SystemMoments {
    vp: Vec3,
    vj: Vec3,
    mpp: CMat,
    mpj: CMat,
    mjp: CMat,
    mjj: CMat,
    t4: Box<CTen4>,
}

fn zero_mat() -> CMat {
    [[Complex64::new(0.0, 0.0); 3]; 3]
}

#[allow(clippy::needless_range_loop)]
fn rotate_mat(r: &Mat3, m: &CMat) -> CMat {
    // R M R^T on a complex matrix.
    let mut out = zero_mat();
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..3 {
                for d in 0..3 {
                    acc += m[c][d] * (r.0[a][c] * r.0[b][d]);
                }
            }
            out[a][b] = acc;
        }
    }
    out
}

/// `out[a][b] = eps_{b e f} xi_e M[a][f]`: the translation correction on a
/// right-slot angular momentum.
#[allow(clippy::needless_range_loop)]
fn col_cross(xi: Vec3, m: &CMat) -> CMat {
    let x = xi.as_array();
    let mut out = zero_mat();
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..3 {
                for f in 0..3 {
                    let eps = epsilon(b, e, f);
                    if eps != 0.0 {
                        acc += m[a][f] * (eps * x[e]);
                    }
                }
            }
            out[a][b] = acc;
        }
    }
    out
}

/// `out[a][b] = eps_{a e f} xi_e M[f][b]`: same correction on a left slot.
#[allow(clippy::needless_range_loop)]
fn row_cross(xi: Vec3, m: &CMat) -> CMat {
    let x = xi.as_array();
    let mut out = zero_mat();
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..3 {
                for f in 0..3 {
                    let eps = epsilon(a, e, f);
                    if eps != 0.0 {
                        acc += m[f][b] * (eps * x[e]);
                    }
                }
            }
            out[a][b] = acc;
        }
    }
    out
}

fn mat_add(a: &CMat, b: &CMat) -> CMat {
    let mut out = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][j] + b[i][j];
        }
    }
    out
}

#[allow(clippy::needless_range_loop)]
fn rotate_t4(r: &Mat3, t: &CTen4) -> Box<CTen4> {
    // Contract one index at a time to keep this O(3^5).
    let mut tmp = *t;
    for slot in 0..4 {
        let mut next: CTen4 = [[[[Complex64::new(0.0, 0.0); 3]; 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let idx = [a, b, c, d];
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..3 {
                            let mut src = idx;
                            src[slot] = k;
                            acc += tmp[src[0]][src[1]][src[2]][src[3]] * r.0[idx[slot]][k];
                        }
                        next[a][b][c][d] = acc;
                    }
                }
            }
        }
        tmp = next;
    }
    Box::new(tmp)
}

fn contract2(a: &CMat, b: &CMat) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            acc += a[i][j] * b[i][j];
        }
    }
    acc
}

fn contract4(a: &CTen4, b: &CTen4) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    acc += a[i][j][k][l] * b[i][j][k][l];
                }
            }
        }
    }
    acc
}

/// Exact single-system moments of words in {p, J} up to length four,
/// transformed by the placement.
fn system_moments(state: &PlacedState) -> Result<SystemMoments> {
    let basis = StateVector::basis(state.params, state.q)?;
    let word = |letters: &[Letter]| -> Result<Complex64> { moment(&basis, letters) };

    let mut vp = [0.0; 3];
    let mut vj = [0.0; 3];
    let mut mpp = zero_mat();
    let mut mpj = zero_mat();
    let mut mjp = zero_mat();
    let mut mjj = zero_mat();
    for (a, ax) in Axis::ALL.iter().enumerate() {
        vp[a] = word(&[Letter::P(*ax)])?.re;
        vj[a] = word(&[Letter::J(*ax)])?.re;
        for (b, bx) in Axis::ALL.iter().enumerate() {
            mpp[a][b] = word(&[Letter::P(*ax), Letter::P(*bx)])?;
            mpj[a][b] = word(&[Letter::P(*ax), Letter::J(*bx)])?;
            mjp[a][b] = word(&[Letter::J(*ax), Letter::P(*bx)])?;
            mjj[a][b] = word(&[Letter::J(*ax), Letter::J(*bx)])?;
        }
    }
    let mut t4: Box<CTen4> = Box::new([[[[Complex64::new(0.0, 0.0); 3]; 3]; 3]; 3]);
    for (a, ax) in Axis::ALL.iter().enumerate() {
        for (b, bx) in Axis::ALL.iter().enumerate() {
            for (c, cx) in Axis::ALL.iter().enumerate() {
                for (d, dx) in Axis::ALL.iter().enumerate() {
                    t4[a][b][c][d] = word(&[
                        Letter::P(*ax),
                        Letter::P(*bx),
                        Letter::P(*cx),
                        Letter::P(*dx),
                    ])?;
                }
            }
        }
    }

    // Transform to the global frame: rotation by R, then the translation
    // corrections coming from J -> J + xi x p.
    let r = state.placement.rotation();
    let xi = state.placement.xi;
    let vp_g = r.mul_vec(Vec3::new(vp[0], vp[1], vp[2]));
    let vj_g = r.mul_vec(Vec3::new(vj[0], vj[1], vj[2])) + xi.cross(vp_g);
    let mpp_g = rotate_mat(&r, &mpp);
    let mpj_rot = rotate_mat(&r, &mpj);
    let mjp_rot = rotate_mat(&r, &mjp);
    let mjj_rot = rotate_mat(&r, &mjj);
    let mpj_g = mat_add(&mpj_rot, &col_cross(xi, &mpp_g));
    let mjp_g = mat_add(&mjp_rot, &row_cross(xi, &mpp_g));
    let mjj_g = mat_add(
        &mat_add(&mjj_rot, &col_cross(xi, &mjp_rot)),
        &mat_add(
            &row_cross(xi, &mpj_rot),
            &row_cross(xi, &col_cross(xi, &mpp_g)),
        ),
    );
    let t4_g = rotate_t4(&r, &t4);

    Ok(SystemMoments {
        vp: vp_g,
        vj: vj_g,
        mpp: mpp_g,
        mpj: mpj_g,
        mjp: mjp_g,
        mjj: mjj_g,
        t4: t4_g,
    })
}

/// Pair expectation values entering the distance and its uncertainty.
struct PairMoments {
    w12: f64,
    p12: f64,
    w12_sq: f64,
    p12_w12: f64,
    p4: f64,
    p8: f64,
}

fn assert_real(v: Complex64, scale: f64, what: &str) -> Result<f64> {
    if v.im.abs() > 1e-9 * scale.max(1e-300) {
        return Err(Error::InternalConsistency(format!(
            "{what} has imaginary part {} (scale {scale})",
            v.im
        )));
    }
    Ok(v.re)
}

fn pair_moments(s1: &PlacedState, s2: &PlacedState) -> Result<PairMoments> {
    check_pair(s1, s2)?;
    let m1 = system_moments(s1)?;
    let m2 = system_moments(s2)?;

    let w12 = m1.vp.dot(m2.vj) + m1.vj.dot(m2.vp);
    let p12 = m1.vp.dot(m2.vp);

    let scale = (s1.params.p_radius * s2.params.p_radius).powi(2)
        * (1.0 + s1.params.hbar)
        * (1.0 + s1.placement.xi.norm() + s2.placement.xi.norm()).powi(2);
    let w12_sq = assert_real(
        contract2(&m1.mpp, &m2.mjj)
            + contract2(&m1.mpj, &m2.mjp)
            + contract2(&m1.mjp, &m2.mpj)
            + contract2(&m1.mjj, &m2.mpp),
        scale,
        "<W12^2>",
    )?;
    let p12_w12 = assert_real(
        contract2(&m1.mpp, &m2.mpj) + contract2(&m1.mpj, &m2.mpp),
        scale,
        "<P12^2 W12>",
    )?;
    let p4 = assert_real(contract2(&m1.mpp, &m2.mpp), scale, "<P12^4>")?;
    let p8 = assert_real(contract4(&m1.t4, &m2.t4), scale * scale, "<P12^8>")?;

    Ok(PairMoments {
        w12,
        p12,
        w12_sq,
        p12_w12,
        p4,
        p8,
    })
}

/// The two relative error terms the uncertainty is built from.
#[derive(Clone, Copy, Debug)]
pub struct UncertaintyBudget {
    /// `Delta A / |<A>|` for the numerator observable.
    pub relative_a: f64,
    /// `Delta B / (2 <B>)` for the denominator observable.
    pub relative_b: f64,
    /// `(relative_a + relative_b) |d12|`.
    pub total: f64,
}

struct DistanceParts {
    numerator: f64,
    dsq: f64,
    d12: f64,
    uncertainty: Option<UncertaintyBudget>,
}

fn distance_from_moments(
    s1: &PlacedState,
    s2: &PlacedState,
    pm: &PairMoments,
) -> Result<DistanceParts> {
    let hbar = s1.params.hbar;
    let p1 = s1.params.p_radius;
    let p2 = s2.params.p_radius;
    let kappa = hbar * (s1.params.s.as_f64() / p1 + s2.params.s.as_f64() / p2);

    let a_exp = pm.w12 - kappa * pm.p12;
    let b_exp = (p1 * p2).powi(2) - pm.p4;
    let dsq = b_exp / (p1 * p2).powi(2);
    if dsq <= 0.0 {
        return Err(Error::InternalConsistency(format!(
            "denominator D^2 = {dsq} must be strictly positive"
        )));
    }
    let d12 = a_exp / b_exp.sqrt();

    let a_sq = pm.w12_sq - 2.0 * kappa * pm.p12_w12 + kappa * kappa * pm.p4;
    let b_sq = (p1 * p2).powi(4) - 2.0 * (p1 * p2).powi(2) * pm.p4 + pm.p8;
    let var_a = (a_sq - a_exp * a_exp).max(0.0);
    let var_b = (b_sq - b_exp * b_exp).max(0.0);

    let dxi = s1.placement.xi - s2.placement.xi;
    let a_scale = hbar * (p1 + p2) + dxi.norm() * p1 * p2;
    let uncertainty = if a_exp.abs() <= 1e-12 * a_scale {
        None
    } else {
        let relative_a = var_a.sqrt() / a_exp.abs();
        let relative_b = 0.5 * var_b.sqrt() / b_exp;
        Some(UncertaintyBudget {
            relative_a,
            relative_b,
            total: (relative_a + relative_b) * d12.abs(),
        })
    };

    Ok(DistanceParts {
        numerator: a_exp,
        dsq,
        d12,
        uncertainty,
    })
}

/// Empirical distance of two placed basis states, with the denominator
/// from the exact fourth-moment route, the uncertainty when defined, and
/// the Euclidean distance of the placement lines for reference.
pub fn empirical_distance(s1: &PlacedState, s2: &PlacedState) -> Result<PairGeometry> {
    let pm = pair_moments(s1, s2)?;
    let parts = distance_from_moments(s1, s2, &pm)?;

    let (v1, _) = first_moments(s1);
    let (v2, _) = first_moments(s2);
    let dxi = s1.placement.xi - s2.placement.xi;
    let translational = dxi.dot(v1.cross(v2));

    let beta12 = clamped_acos(cos_beta12(&s1.placement, &s2.placement))?;
    let classical_ref = euclidean_line_distance(&s1.line()?, &s2.line()?);

    Ok(PairGeometry {
        d12: parts.d12,
        numerator: parts.numerator,
        numerator_translational: translational,
        numerator_quantum: parts.numerator - translational,
        dsq: parts.dsq,
        beta12,
        uncertainty: parts.uncertainty.map(|u| u.total),
        classical_ref,
    })
}

/// Uncertainty of the empirical distance via exact tensor-product moments.
/// Errors when the numerator expectation vanishes (the degenerate
/// `s1 s2 m1 m2 = 0` family).
pub fn uncertainty(s1: &PlacedState, s2: &PlacedState) -> Result<f64> {
    Ok(uncertainty_budget(s1, s2)?.total)
}

/// The uncertainty split into its numerator and denominator error terms.
pub fn uncertainty_budget(s1: &PlacedState, s2: &PlacedState) -> Result<UncertaintyBudget> {
    let pm = pair_moments(s1, s2)?;
    let parts = distance_from_moments(s1, s2, &pm)?;
    parts.uncertainty.ok_or(Error::UndefinedUncertainty)
}

/// Empirical angle between the momenta of two placed basis states.
pub fn empirical_angle(s1: &PlacedState, s2: &PlacedState) -> Result<f64> {
    check_pair(s1, s2)?;
    let cosb = cos_beta12(&s1.placement, &s2.placement);
    let arg = momentum_fraction(s1.q) * momentum_fraction(s2.q) * cosb;
    clamped_acos(arg)
}

/// Empirical 3-volume element of three placed basis states.
pub fn empirical_volume(s1: &PlacedState, s2: &PlacedState, s3: &PlacedState) -> Result<f64> {
    check_pair(s1, s2)?;
    check_pair(s2, s3)?;
    let f = momentum_fraction(s1.q) * momentum_fraction(s2.q) * momentum_fraction(s3.q);
    let det = det3(
        s1.placement.axis(),
        s2.placement.axis(),
        s3.placement.axis(),
    );
    Ok(det / 6.0 * f)
}

/// Placement realizing a line: `R z = dir`, translation at the foot point.
/// Only beta and gamma matter for the axis, so alpha is fixed to zero.
pub fn placement_for_line(line: &Line3) -> E3Placement {
    let d = line.dir();
    let beta = d.z.clamp(-1.0, 1.0).acos();
    let gamma = if beta.sin().abs() < 1e-15 {
        0.0
    } else {
        f64::atan2(d.x, -d.y)
    };
    E3Placement {
        euler: [0.0, beta, gamma],
        xi: line.foot(),
    }
}

/// Place two centre-of-mass states (`s = m = j`, `P = p_scale * j`) on the
/// given lines and return their pair geometry; the classical reference is
/// the Euclidean line distance. This realizes one step of the classical
/// limit `j -> infinity`.
pub fn classical_limit_distance(
    line1: &Line3,
    line2: &Line3,
    j: HalfInt,
    p_scale: f64,
    hbar: f64,
) -> Result<PairGeometry> {
    if line1.dir().cross(line2.dir()).norm() < crate::classical::PARALLEL_TOL {
        return Err(Error::ParallelMomenta);
    }
    if j.doubled() <= 0 {
        return Err(Error::InvalidParameter(
            "classical limit needs j > 0".into(),
        ));
    }
    let params = ElementaryParams::with_hbar(p_scale * j.as_f64(), j, hbar)?;
    let q = QNum::new(j, j, j)?;
    let s1 = PlacedState::new(params, q, placement_for_line(line1))?;
    let s2 = PlacedState::new(params, q, placement_for_line(line2))?;
    empirical_distance(&s1, &s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(p: f64, ds: i64) -> ElementaryParams {
        ElementaryParams::new(p, HalfInt::from_doubled(ds)).unwrap()
    }

    fn q(ds: i64, dj: i64, dm: i64) -> QNum {
        QNum::from_doubled(ds, dj, dm).unwrap()
    }

    fn placed(p: f64, ds: i64, dj: i64, dm: i64, euler: [f64; 3], xi: Vec3) -> PlacedState {
        PlacedState::new(params(p, ds), q(ds, dj, dm), E3Placement { euler, xi }).unwrap()
    }

    #[test]
    fn rotation_matrix_examples() {
        let r = euler_to_rotation(&[0.0, 0.0, 0.0]);
        assert!(r.max_abs_diff(Mat3::IDENTITY) < 1e-15);

        let beta = 0.7;
        let r = euler_to_rotation(&[0.0, beta, 0.0]);
        let col = r.column(2);
        assert!((col - Vec3::new(0.0, -beta.sin(), beta.cos())).norm() < 1e-15);

        for k in 0..50 {
            let e = [0.1 + k as f64, 0.37 * k as f64, -0.73 * k as f64];
            let r = euler_to_rotation(&e);
            assert!(r.mul_mat(r.transpose()).max_abs_diff(Mat3::IDENTITY) < 1e-14);
            assert!((r.det() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rotation_euler_roundtrip() {
        for e in [
            [0.3, 1.2, -0.4],
            [0.0, 0.0, 0.0],
            [1.0, PI - 1e-12, 0.0],
            [-2.0, 0.5, 3.0],
        ] {
            let r = euler_to_rotation(&e);
            let back = euler_from_rotation(&r).unwrap();
            let r2 = euler_to_rotation(&back);
            assert!(r.max_abs_diff(r2) < 1e-9, "roundtrip failed for {e:?}");
        }
    }

    #[test]
    fn beta12_two_routes_agree() {
        let a = E3Placement {
            euler: [0.4, 1.1, -0.6],
            xi: Vec3::ZERO,
        };
        let b = E3Placement {
            euler: [-1.3, 0.8, 2.2],
            xi: Vec3::ZERO,
        };
        assert!((cos_beta12(&a, &b) - cos_beta12_formula(&a, &b)).abs() < 1e-14);
        assert!((cos_beta12(&a, &a) - 1.0).abs() < 1e-14);

        // beta1 = beta2 = pi/2, gamma1 - gamma2 = pi/2 gives zero.
        let a = E3Placement {
            euler: [0.9, FRAC_PI_2, FRAC_PI_2],
            xi: Vec3::ZERO,
        };
        let b = E3Placement {
            euler: [-0.2, FRAC_PI_2, 0.0],
            xi: Vec3::ZERO,
        };
        assert!(cos_beta12(&a, &b).abs() < 1e-14);

        // The matrix route (R1^-1 R2)_33 matches as well.
        let r1 = euler_to_rotation(&a.euler);
        let r2 = euler_to_rotation(&b.euler);
        let k = r1.transpose().mul_mat(r2);
        assert!((k.0[2][2] - cos_beta12(&a, &b)).abs() < 1e-14);
    }

    #[test]
    fn numerator_vanishes_for_m_zero() {
        let s1 = placed(1.0, 2, 4, 0, [0.1, 0.8, 0.3], Vec3::new(1.0, 0.0, 0.0));
        let s2 = placed(1.0, 2, 2, 2, [0.0, 0.2, 0.0], Vec3::ZERO);
        assert!(pair_numerator(&s1, &s2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn numerator_closed_matches_general() {
        let cases = [
            placed(1.0, 1, 1, 1, [0.3, 1.0, -0.2], Vec3::new(0.5, -0.2, 0.1)),
            placed(2.0, 2, 4, -2, [0.0, 0.4, 1.1], Vec3::new(-1.0, 0.3, 0.8)),
            placed(0.7, -3, 5, 3, [1.2, 2.0, 0.5], Vec3::new(0.0, 1.5, -0.7)),
        ];
        for a in &cases {
            for b in &cases {
                let general = pair_numerator(a, b).unwrap();
                let closed = pair_numerator_closed(a, b).unwrap();
                assert!(
                    (general - closed).abs() < 1e-12 * (1.0 + general.abs()),
                    "{general} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn numerator_closed_rejects_spin_zero() {
        let a = placed(1.0, 0, 2, 2, [0.0; 3], Vec3::ZERO);
        let b = placed(1.0, 1, 1, 1, [0.0; 3], Vec3::ZERO);
        assert!(pair_numerator_closed(&a, &b).is_err());
        assert!(pair_numerator(&a, &b).is_ok());
    }

    #[test]
    fn numerator_hand_computed_configuration() {
        // j1 = s1 = j2 = s2 = 1, m = 1 both, xi1 - xi2 = (1,0,0),
        // axis1 = y, axis2 = z, P = hbar = 1. The bracket is
        // (1,0,0).(y x z) + 0 = 1 and the prefactor 1/(2*2), so the
        // numerator is exactly 1/4.
        let s1 = placed(1.0, 2, 2, 2, [0.0, FRAC_PI_2, PI], Vec3::EX);
        let s2 = placed(1.0, 2, 2, 2, [0.0, 0.0, 0.0], Vec3::ZERO);
        assert!((s1.placement.axis() - Vec3::EY).norm() < 1e-15);
        let num = pair_numerator(&s1, &s2).unwrap();
        assert!((num - 0.25).abs() < 1e-14, "numerator = {num}");
        let closed = pair_numerator_closed(&s1, &s2).unwrap();
        assert!((closed - 0.25).abs() < 1e-14);
    }

    #[test]
    fn dsq_com_values() {
        // j = 1/2 pairs are constant 2/3 regardless of beta.
        let qh = q(1, 1, 1);
        for beta in [0.0, 0.7, FRAC_PI_2, 2.9] {
            assert_eq!(pair_dsq_com(qh, qh, beta), 2.0 / 3.0);
        }
        // Mixed: one j=1/2 still pins 2/3.
        let q2 = q(4, 4, 2);
        for beta in [0.0, 1.0] {
            assert_eq!(pair_dsq_com(qh, q2, beta), 2.0 / 3.0);
        }
    }

    #[test]
    fn dsq_routes_agree() {
        // Closed D^2 equals the literal general form for j >= 1, and the
        // centre-of-mass reduction at j = |s|.
        for (ds1, dj1, dm1) in [(2i64, 2i64, 2i64), (4, 4, 0), (2, 6, 4), (-6, 6, -2)] {
            for (ds2, dj2, dm2) in [(2i64, 2i64, -2i64), (6, 6, 6), (0, 4, 2)] {
                let q1 = q(ds1, dj1, dm1);
                let q2 = q(ds2, dj2, dm2);
                for beta in [0.0, 0.4, 1.3, 2.8] {
                    let a = pair_dsq(q1, q2, beta);
                    let b = pair_dsq_general(q1, q2, beta);
                    assert!((a - b).abs() < 1e-13, "{q1} {q2} beta={beta}: {a} vs {b}");
                    if dj1 == ds1.abs() && dj2 == ds2.abs() {
                        let c = pair_dsq_com(q1, q2, beta);
                        assert!((a - c).abs() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn distance_spin_half_closed_form() {
        // d12 = +-(1/(3 sqrt 6)) [dxi.(axis1 x axis2) + hbar (P1+P2)/(P1 P2) cos beta].
        let p1 = 1.3;
        let p2 = 0.8;
        let s1 = placed(p1, 1, 1, 1, [0.2, 0.9, -0.5], Vec3::new(0.4, -1.0, 0.6));
        let s2 = placed(p2, 1, 1, 1, [1.0, 2.1, 0.3], Vec3::new(-0.2, 0.5, 0.0));
        let g = empirical_distance(&s1, &s2).unwrap();
        let dxi = s1.placement.xi - s2.placement.xi;
        let cosb = cos_beta12(&s1.placement, &s2.placement);
        let expect = (dxi.dot(s1.placement.axis().cross(s2.placement.axis()))
            + (p1 + p2) / (p1 * p2) * cosb)
            / (3.0 * 6.0f64.sqrt());
        assert!(
            (g.d12 - expect).abs() < 1e-12 * expect.abs().max(1.0),
            "{} vs {expect}",
            g.d12
        );
        assert!((g.dsq - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn distance_orthogonal_axes_same_position() {
        let s1 = placed(1.0, 1, 1, 1, [0.0, FRAC_PI_2, 0.0], Vec3::ZERO);
        let s2 = placed(1.0, 1, 1, 1, [0.0, 0.0, 0.0], Vec3::ZERO);
        let g = empirical_distance(&s1, &s2).unwrap();
        assert!((g.beta12 - FRAC_PI_2).abs() < 1e-12);
        assert!(g.d12.abs() < 1e-14);
    }

    #[test]
    fn distance_universal_when_axes_parallel() {
        // beta = 0: the translational part drops out and the distance is a
        // pure quantum term, independent of xi.
        let mk = |xi: Vec3| placed(2.0, 2, 2, 2, [0.3, 0.0, 0.0], xi);
        let base = empirical_distance(&mk(Vec3::ZERO), &mk(Vec3::new(5.0, -2.0, 1.0))).unwrap();
        let moved =
            empirical_distance(&mk(Vec3::new(9.0, 9.0, 9.0)), &mk(Vec3::new(0.0, 1.0, 2.0)))
                .unwrap();
        assert!((base.d12 - moved.d12).abs() < 1e-12);
        assert!(base.numerator_translational.abs() < 1e-13);
        assert!(base.d12.abs() > 0.0);
    }

    #[test]
    fn distance_depends_on_relative_data_only() {
        let s1 = placed(1.1, 2, 2, 2, [0.5, 0.8, -0.1], Vec3::new(0.2, 0.7, -0.4));
        let s2 = placed(0.9, 1, 1, -1, [-0.3, 1.4, 0.9], Vec3::new(-0.6, 0.1, 0.5));
        let base = empirical_distance(&s1, &s2).unwrap();

        // Common translation.
        let shift = Vec3::new(3.0, -1.0, 2.0);
        let t1 = PlacedState {
            placement: E3Placement {
                euler: s1.placement.euler,
                xi: s1.placement.xi + shift,
            },
            ..s1
        };
        let t2 = PlacedState {
            placement: E3Placement {
                euler: s2.placement.euler,
                xi: s2.placement.xi + shift,
            },
            ..s2
        };
        let shifted = empirical_distance(&t1, &t2).unwrap();
        assert!((base.d12 - shifted.d12).abs() < 1e-12);

        // Common rotation.
        let r0 = euler_to_rotation(&[0.7, 0.3, -1.2]);
        let rot = |s: &PlacedState| {
            let r = r0.mul_mat(euler_to_rotation(&s.placement.euler));
            PlacedState {
                placement: E3Placement {
                    euler: euler_from_rotation(&r).unwrap(),
                    xi: r0.mul_vec(s.placement.xi),
                },
                ..*s
            }
        };
        let rotated = empirical_distance(&rot(&s1), &rot(&s2)).unwrap();
        assert!(
            (base.d12 - rotated.d12).abs() < 1e-11,
            "{} vs {}",
            base.d12,
            rotated.d12
        );
        assert!((base.dsq - rotated.dsq).abs() < 1e-12);
    }

    #[test]
    fn angle_examples() {
        let s1 = placed(1.0, 1, 1, 1, [0.0; 3], Vec3::ZERO);
        let s2 = placed(1.0, 1, 1, 1, [0.0; 3], Vec3::ZERO);
        let omega = empirical_angle(&s1, &s2).unwrap();
        assert!((omega.to_degrees() - 83.62).abs() < 0.01);

        let t1 = placed(1.0, 2, 2, 2, [0.0; 3], Vec3::ZERO);
        let t2 = placed(1.0, 2, 2, 2, [0.0; 3], Vec3::ZERO);
        let omega = empirical_angle(&t1, &t2).unwrap();
        assert!((omega.to_degrees() - 75.52).abs() < 0.01);

        // m = 0 gives a right angle.
        let z = placed(1.0, 2, 4, 0, [0.0; 3], Vec3::ZERO);
        assert!((empirical_angle(&z, &t2).unwrap() - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn angle_matches_first_moment_route() {
        let s1 = placed(1.4, 2, 4, 2, [0.2, 0.9, 1.7], Vec3::new(1.0, 2.0, 3.0));
        let s2 = placed(0.6, -1, 3, -3, [2.7, 0.4, -0.8], Vec3::ZERO);
        let (v1, _) = first_moments(&s1);
        let (v2, _) = first_moments(&s2);
        let direct = clamped_acos(v1.dot(v2) / (s1.params.p_radius * s2.params.p_radius)).unwrap();
        let closed = empirical_angle(&s1, &s2).unwrap();
        assert!((direct - closed).abs() < 1e-13);
    }

    #[test]
    fn volume_examples() {
        let mk = |euler: [f64; 3]| placed(1.0, 2, 2, 2, euler, Vec3::ZERO);
        // Orthonormal triad of axes: R z = x, y, z respectively.
        let sx = mk([0.0, FRAC_PI_2, FRAC_PI_2]);
        let sy = mk([0.0, FRAC_PI_2, PI]);
        let sz = mk([0.0, 0.0, 0.0]);
        assert!((sx.placement.axis() - Vec3::EX).norm() < 1e-14);
        assert!((sy.placement.axis() - Vec3::EY).norm() < 1e-14);
        let v = empirical_volume(&sx, &sy, &sz).unwrap();
        assert!((v - 0.125 / 6.0).abs() < 1e-14, "got {v}");

        // Repeated axis degenerates.
        let v = empirical_volume(&sx, &sx, &sz).unwrap();
        assert!(v.abs() < 1e-15);

        // Always below the Euclidean volume element.
        let det = det3(
            sx.placement.axis(),
            sy.placement.axis(),
            sz.placement.axis(),
        );
        assert!(v.abs() <= (det / 6.0).abs() + 1e-15);
    }

    #[test]
    fn uncertainty_requires_nonzero_numerator() {
        let a = placed(1.0, 0, 0, 0, [0.0; 3], Vec3::ZERO);
        let b = placed(1.0, 0, 0, 0, [0.0; 3], Vec3::EX);
        assert!(matches!(
            uncertainty(&a, &b),
            Err(Error::UndefinedUncertainty)
        ));
    }

    #[test]
    fn uncertainty_positive_and_decaying() {
        let mk = |dj: i64| {
            let jf = dj as f64 / 2.0;
            let a = PlacedState::new(
                params(jf, dj),
                q(dj, dj, dj),
                E3Placement {
                    euler: [0.0; 3],
                    xi: Vec3::ZERO,
                },
            )
            .unwrap();
            let b = PlacedState::new(
                params(jf, dj),
                q(dj, dj, dj),
                E3Placement {
                    euler: [0.0, PI / 3.0, 0.0],
                    xi: Vec3::EX,
                },
            )
            .unwrap();
            uncertainty(&a, &b).unwrap()
        };
        let u8 = mk(16);
        let u16 = mk(32);
        assert!(u8 > 0.0 && u16 > 0.0);
        assert!(u16 < u8, "uncertainty should decay with j: {u16} vs {u8}");
    }

    #[test]
    fn placement_for_line_roundtrip() {
        for dir in [
            Vec3::new(1.0, 2.0, -0.5),
            Vec3::EZ,
            -Vec3::EZ,
            Vec3::new(-0.3, 0.1, 0.9),
        ] {
            let line = Line3::new(Vec3::new(0.5, -1.0, 2.0), dir).unwrap();
            let placement = placement_for_line(&line);
            assert!(
                (placement.axis() - line.dir()).norm() < 1e-12,
                "axis mismatch for {dir:?}"
            );
            assert!((placement.xi - line.foot()).norm() < 1e-12);
        }
    }

    #[test]
    fn classical_limit_converges() {
        let l1 = Line3::new(Vec3::ZERO, Vec3::EX).unwrap();
        let l2 = Line3::new(Vec3::new(0.0, 0.0, 1.0), Vec3::EY).unwrap();
        let truth = euclidean_line_distance(&l1, &l2);
        let coarse = classical_limit_distance(&l1, &l2, HalfInt::HALF, 1.0, 1.0).unwrap();
        let fine = classical_limit_distance(&l1, &l2, HalfInt::from_int(64), 1.0, 1.0).unwrap();
        let err_coarse = (coarse.d12.abs() - truth).abs() / truth;
        let err_fine = (fine.d12.abs() - truth).abs() / truth;
        assert!(err_fine < err_coarse);
        assert!(err_fine < 0.05, "err at j=64: {err_fine}");
        assert!((fine.classical_ref - truth).abs() < 1e-12);

        let parallel = Line3::new(Vec3::EX, Vec3::EZ).unwrap();
        let same_dir = Line3::new(Vec3::ZERO, Vec3::EZ).unwrap();
        assert!(matches!(
            classical_limit_distance(&parallel, &same_dir, HalfInt::ONE, 1.0, 1.0),
            Err(Error::ParallelMomenta)
        ));
    }
}
