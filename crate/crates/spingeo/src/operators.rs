//! Exact matrix elements and sparse application of the basic observables.
//!
//! Two conventions coexist and both are exposed:
//!
//! * `p_element` / `j_element` / `second_moments_closed` return integrals
//!   over S_P of *unit-sphere-normalized* harmonics, carrying the `P^3`
//!   (momentum) and `hbar P^2` (angular momentum) factors exactly as they
//!   appear in the closed forms.
//! * `apply` / `moment` act on states expanded over the *normalized* basis
//!   `sY_jm / P` on S_P, i.e. every element above divided by `P^2`.
//!
//! The bridge between the two is a single division by `P^2` and is covered
//! by tests.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::geom::Vec3;
use crate::half::HalfInt;
use crate::swsh::QNum;
use crate::{Error, Result};

/// Casimir data of one elementary system: sphere radius `P`, spin weight
/// `s` (so `W = hbar P s`), and `hbar`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementaryParams {
    pub p_radius: f64,
    pub s: HalfInt,
    pub hbar: f64,
}

impl ElementaryParams {
    pub fn new(p_radius: f64, s: HalfInt) -> Result<Self> {
        Self::with_hbar(p_radius, s, 1.0)
    }

    pub fn with_hbar(p_radius: f64, s: HalfInt, hbar: f64) -> Result<Self> {
        if !p_radius.is_finite() || p_radius <= 0.0 {
            return Err(Error::DegenerateSystem(format!(
                "momentum sphere radius P = {p_radius} must be positive"
            )));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "hbar = {hbar} must be positive"
            )));
        }
        Ok(ElementaryParams { p_radius, s, hbar })
    }

    /// Value of the Casimir W in this representation.
    pub fn casimir_w(&self) -> f64 {
        self.hbar * self.p_radius * self.s.as_f64()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// One letter of an operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    P(Axis),
    J(Axis),
    C(Axis),
    W,
}

/// Finite expansion over normalized basis states `sY_jm / P` at fixed spin
/// weight.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    params: ElementaryParams,
    coeffs: BTreeMap<QNum, Complex64>,
}

impl StateVector {
    /// The zero vector.
    pub fn zero(params: ElementaryParams) -> Self {
        StateVector {
            params,
            coeffs: BTreeMap::new(),
        }
    }

    /// A single normalized basis state.
    pub fn basis(params: ElementaryParams, q: QNum) -> Result<Self> {
        q.validate()?;
        if q.s != params.s {
            return Err(Error::SpinWeightMismatch {
                state: params.s.to_string(),
                operand: q.s.to_string(),
            });
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(q, Complex64::new(1.0, 0.0));
        Ok(StateVector { params, coeffs })
    }

    pub fn params(&self) -> &ElementaryParams {
        &self.params
    }

    pub fn coeff(&self, q: &QNum) -> Complex64 {
        self.coeffs.get(q).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QNum, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// `<self | other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        if self.len() <= other.len() {
            for (q, ca) in self.iter() {
                acc += ca.conj() * other.coeff(q);
            }
        } else {
            for (q, cb) in other.iter() {
                acc += self.coeff(q).conj() * *cb;
            }
        }
        acc
    }

    pub fn add_scaled(&mut self, q: QNum, c: Complex64) {
        let entry = self
            .coeffs
            .entry(q)
            .or_insert_with(|| Complex64::new(0.0, 0.0));
        *entry += c;
    }

    pub fn axpy(&mut self, scale: Complex64, other: &StateVector) {
        for (q, c) in other.iter() {
            self.add_scaled(*q, scale * *c);
        }
    }

    /// Drop coefficients below `1e-15 * norm`; exact selection rules only
    /// ever create true zeros, the threshold guards float dust.
    pub fn prune(&mut self) {
        let norm = self.norm_sqr().sqrt();
        let cut = 1e-15 * norm.max(f64::MIN_POSITIVE);
        self.coeffs.retain(|_, c| c.norm() > cut);
    }
}

fn ratio_sqrt(num: i128, den: i128) -> f64 {
    debug_assert!(num >= 0 && den > 0, "negative radicand {num}/{den}");
    (num as f64 / den as f64).sqrt()
}

/// Integer `j + x` style factors from doubled representations.
fn half_sum(a: HalfInt, b: HalfInt, shift: i64) -> i128 {
    let d = a.doubled() + b.doubled() + 2 * shift;
    debug_assert!(d % 2 == 0);
    (d / 2) as i128
}

fn half_diff(a: HalfInt, b: HalfInt, shift: i64) -> i128 {
    let d = a.doubled() - b.doubled() + 2 * shift;
    debug_assert!(d % 2 == 0);
    (d / 2) as i128
}

/// `<sY_{bra}| p_axis |sY_{ket}>` over S_P for unit-sphere-normalized
/// harmonics. Zero unless `|j_bra - j_ket| <= 1` and the m-selection rules
/// hold.
pub fn p_element(axis: Axis, bra: QNum, ket: QNum, params: &ElementaryParams) -> Result<Complex64> {
    if bra.s != ket.s {
        return Err(Error::SpinWeightMismatch {
            state: bra.s.to_string(),
            operand: ket.s.to_string(),
        });
    }
    bra.validate()?;
    ket.validate()?;
    let p3 = params.p_radius.powi(3);
    let (j, m, s) = (ket.j, ket.m, ket.s);
    let (dj, dm) = (j.doubled(), m.doubled());
    let n = bra.m;
    let dn = n.doubled();
    let jf = j.as_f64();

    let zero = Complex64::new(0.0, 0.0);
    let djb = bra.j.doubled();

    // (2j+1)(2j+3) and (2j-1)(2j+1) as exact integers.
    let den_up = ((dj + 1) * (dj + 3)) as i128;
    let den_dn = ((dj - 1) * (dj + 1)) as i128;

    let val = if djb == dj + 2 {
        // j+1 row.
        let spin = ratio_sqrt(half_sum(j, s, 1) * half_diff(j, s, 1), den_up);
        match axis {
            Axis::X => {
                let f = p3 / (2.0 * (jf + 1.0)) * spin;
                if dn == dm - 2 {
                    Complex64::new(
                        f * ratio_sqrt(half_diff(j, m, 1) * half_diff(j, m, 2), 1),
                        0.0,
                    )
                } else if dn == dm + 2 {
                    Complex64::new(
                        -f * ratio_sqrt(half_sum(j, m, 1) * half_sum(j, m, 2), 1),
                        0.0,
                    )
                } else {
                    zero
                }
            }
            Axis::Y => {
                let f = p3 / (2.0 * (jf + 1.0)) * spin;
                if dn == dm + 2 {
                    Complex64::new(
                        0.0,
                        f * ratio_sqrt(half_sum(j, m, 1) * half_sum(j, m, 2), 1),
                    )
                } else if dn == dm - 2 {
                    Complex64::new(
                        0.0,
                        f * ratio_sqrt(half_diff(j, m, 1) * half_diff(j, m, 2), 1),
                    )
                } else {
                    zero
                }
            }
            Axis::Z => {
                if dn == dm {
                    let f = p3 / (jf + 1.0) * spin;
                    Complex64::new(
                        f * ratio_sqrt(half_sum(j, m, 1) * half_diff(j, m, 1), 1),
                        0.0,
                    )
                } else {
                    zero
                }
            }
        }
    } else if djb == dj {
        // Diagonal-in-j row; vanishes identically for j = 0.
        if dj == 0 {
            return Ok(zero);
        }
        let sf = s.as_f64();
        let f = p3 * sf / (2.0 * j.x_xp1());
        match axis {
            Axis::X => {
                if dn == dm - 2 {
                    Complex64::new(
                        f * ratio_sqrt(half_sum(j, m, 0) * half_diff(j, m, 1), 1),
                        0.0,
                    )
                } else if dn == dm + 2 {
                    Complex64::new(
                        f * ratio_sqrt(half_diff(j, m, 0) * half_sum(j, m, 1), 1),
                        0.0,
                    )
                } else {
                    zero
                }
            }
            Axis::Y => {
                if dn == dm - 2 {
                    Complex64::new(
                        0.0,
                        f * ratio_sqrt(half_sum(j, m, 0) * half_diff(j, m, 1), 1),
                    )
                } else if dn == dm + 2 {
                    Complex64::new(
                        0.0,
                        -f * ratio_sqrt(half_diff(j, m, 0) * half_sum(j, m, 1), 1),
                    )
                } else {
                    zero
                }
            }
            Axis::Z => {
                if dn == dm {
                    Complex64::new(2.0 * f * m.as_f64(), 0.0)
                } else {
                    zero
                }
            }
        }
    } else if djb == dj - 2 {
        // j-1 row.
        let spin = ratio_sqrt(half_sum(j, s, 0) * half_diff(j, s, 0), den_dn);
        match axis {
            Axis::X => {
                let f = p3 / (2.0 * jf) * spin;
                if dn == dm + 2 {
                    Complex64::new(
                        f * ratio_sqrt(half_diff(j, m, 0) * half_diff(j, m, -1), 1),
                        0.0,
                    )
                } else if dn == dm - 2 {
                    Complex64::new(
                        -f * ratio_sqrt(half_sum(j, m, 0) * half_sum(j, m, -1), 1),
                        0.0,
                    )
                } else {
                    zero
                }
            }
            Axis::Y => {
                let f = p3 / (2.0 * jf) * spin;
                if dn == dm - 2 {
                    Complex64::new(
                        0.0,
                        -f * ratio_sqrt(half_sum(j, m, 0) * half_sum(j, m, -1), 1),
                    )
                } else if dn == dm + 2 {
                    Complex64::new(
                        0.0,
                        -f * ratio_sqrt(half_diff(j, m, 0) * half_diff(j, m, -1), 1),
                    )
                } else {
                    zero
                }
            }
            Axis::Z => {
                if dn == dm {
                    let f = p3 / jf * spin;
                    Complex64::new(
                        f * ratio_sqrt(half_sum(j, m, 0) * half_diff(j, m, 0), 1),
                        0.0,
                    )
                } else {
                    zero
                }
            }
        }
    } else {
        zero
    };
    Ok(val)
}

/// `<sY_{bra}| J_axis |sY_{ket}>` over S_P; diagonal in j and independent
/// of the spin weight.
pub fn j_element(axis: Axis, bra: QNum, ket: QNum, params: &ElementaryParams) -> Result<Complex64> {
    if bra.s != ket.s {
        return Err(Error::SpinWeightMismatch {
            state: bra.s.to_string(),
            operand: ket.s.to_string(),
        });
    }
    bra.validate()?;
    ket.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    if bra.j != ket.j {
        return Ok(zero);
    }
    let hp2 = params.hbar * params.p_radius * params.p_radius;
    let (j, m) = (ket.j, ket.m);
    let (dm, dn) = (m.doubled(), bra.m.doubled());
    let val = match axis {
        Axis::X => {
            if dn == dm - 2 {
                Complex64::new(
                    0.5 * hp2 * ratio_sqrt(half_sum(j, m, 0) * half_diff(j, m, 1), 1),
                    0.0,
                )
            } else if dn == dm + 2 {
                Complex64::new(
                    0.5 * hp2 * ratio_sqrt(half_diff(j, m, 0) * half_sum(j, m, 1), 1),
                    0.0,
                )
            } else {
                zero
            }
        }
        Axis::Y => {
            if dn == dm - 2 {
                Complex64::new(
                    0.0,
                    0.5 * hp2 * ratio_sqrt(half_sum(j, m, 0) * half_diff(j, m, 1), 1),
                )
            } else if dn == dm + 2 {
                Complex64::new(
                    0.0,
                    -0.5 * hp2 * ratio_sqrt(half_diff(j, m, 0) * half_sum(j, m, 1), 1),
                )
            } else {
                zero
            }
        }
        Axis::Z => {
            if dn == dm {
                Complex64::new(hp2 * m.as_f64(), 0.0)
            } else {
                zero
            }
        }
    };
    Ok(val)
}

fn apply_p(axis: Axis, state: &StateVector) -> StateVector {
    let params = state.params;
    let inv_p2 = 1.0 / (params.p_radius * params.p_radius);
    let mut out = StateVector::zero(params);
    for (q, c) in state.iter() {
        for djb in [q.j.doubled() - 2, q.j.doubled(), q.j.doubled() + 2] {
            for dnb in [q.m.doubled() - 2, q.m.doubled(), q.m.doubled() + 2] {
                let Ok(bra) = QNum::from_doubled(q.s.doubled(), djb, dnb) else {
                    continue;
                };
                let el = p_element(axis, bra, *q, &params).expect("same spin weight");
                if el.norm_sqr() > 0.0 {
                    out.add_scaled(bra, el * inv_p2 * *c);
                }
            }
        }
    }
    out.prune();
    out
}

fn apply_j(axis: Axis, state: &StateVector) -> StateVector {
    let params = state.params;
    let inv_p2 = 1.0 / (params.p_radius * params.p_radius);
    let mut out = StateVector::zero(params);
    for (q, c) in state.iter() {
        for dnb in [q.m.doubled() - 2, q.m.doubled(), q.m.doubled() + 2] {
            let Ok(bra) = QNum::from_doubled(q.s.doubled(), q.j.doubled(), dnb) else {
                continue;
            };
            let el = j_element(axis, bra, *q, &params).expect("same spin weight");
            if el.norm_sqr() > 0.0 {
                out.add_scaled(bra, el * inv_p2 * *c);
            }
        }
    }
    out.prune();
    out
}

/// `M_a = J_{ab} p^b`: apply p first, then J, contracted with the
/// alternating symbol. Not self-adjoint on its own.
fn apply_m(axis: Axis, state: &StateVector) -> StateVector {
    let a = axis.index();
    let mut out = StateVector::zero(state.params);
    for b in 0..3 {
        for c in 0..3 {
            let eps = crate::geom::epsilon(a, b, c);
            if eps == 0.0 {
                continue;
            }
            let pb = apply_p(Axis::ALL[b], state);
            let jc = apply_j(Axis::ALL[c], &pb);
            out.axpy(Complex64::new(eps, 0.0), &jc);
        }
    }
    out.prune();
    out
}

fn apply_c(axis: Axis, state: &StateVector) -> StateVector {
    let mut out = apply_m(axis, state);
    let p = apply_p(axis, state);
    out.axpy(Complex64::new(0.0, state.params.hbar), &p);
    out.prune();
    out
}

fn apply_w(state: &StateVector) -> StateVector {
    // W = J_c p^c; ordering is immaterial because the contraction of the
    // commutator vanishes.
    let mut out = StateVector::zero(state.params);
    for axis in Axis::ALL {
        let pc = apply_p(axis, state);
        let jc = apply_j(axis, &pc);
        out.axpy(Complex64::new(1.0, 0.0), &jc);
    }
    out.prune();
    out
}

/// Apply a single letter in the normalized-basis convention.
pub fn apply_letter(letter: Letter, state: &StateVector) -> StateVector {
    match letter {
        Letter::P(a) => apply_p(a, state),
        Letter::J(a) => apply_j(a, state),
        Letter::C(a) => apply_c(a, state),
        Letter::W => apply_w(state),
    }
}

/// Apply an operator word; the rightmost letter acts first, matching the
/// usual operator-product notation.
pub fn apply(word: &[Letter], state: &StateVector) -> StateVector {
    let mut current = state.clone();
    for letter in word.iter().rev() {
        current = apply_letter(*letter, &current);
    }
    current
}

/// `<state| word |state>` for a normalized state and a non-empty word.
pub fn moment(state: &StateVector, word: &[Letter]) -> Result<Complex64> {
    if word.is_empty() {
        return Err(Error::InvalidParameter(
            "operator word must be non-empty".into(),
        ));
    }
    let n2 = state.norm_sqr();
    if (n2 - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(n2));
    }
    let image = apply(word, state);
    Ok(state.inner(&image))
}

/// Closed-form second moments `<sY_jm| p^a p^b |sY_jm>` over S_P
/// (unit-sphere-normalized harmonics, so the trace is `P^4`). The matrix is
/// diagonal with the xx and yy entries equal; at j = 0 or 1/2 all three
/// diagonal entries reduce to `P^4/3`.
pub fn second_moments_closed(q: QNum, params: &ElementaryParams) -> [[f64; 3]; 3] {
    let p4 = params.p_radius.powi(4);
    let dj = q.j.doubled();
    let (xx, zz) = if dj <= 1 {
        (p4 / 3.0, p4 / 3.0)
    } else {
        let jj = q.j.x_xp1();
        let s2 = q.s.as_f64() * q.s.as_f64();
        let m2 = q.m.as_f64() * q.m.as_f64();
        let den = jj * ((dj - 1) * (dj + 3)) as f64; // j(j+1)(2j-1)(2j+3)
        let xx = p4 * (-3.0 * s2 * m2 + jj * (s2 + m2) + jj * (jj - 1.0)) / den;
        let zz = p4 * (6.0 * s2 * m2 - 2.0 * jj * (s2 + m2) + jj * (2.0 * jj - 1.0)) / den;
        (xx, zz)
    };
    [[xx, 0.0, 0.0], [0.0, xx, 0.0], [0.0, 0.0, zz]]
}

/// Closed-form `<p^a J^b>` and `<J^a J^b>` in the normalized state
/// `{sign*j}Y_{jj} / P`.
pub fn pj_jj_moments_closed(
    j: HalfInt,
    sign: i64,
    params: &ElementaryParams,
) -> ([[Complex64; 3]; 3], [[Complex64; 3]; 3]) {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    let jf = j.as_f64();
    let hbar = params.hbar;
    let base = |scale: f64| -> [[Complex64; 3]; 3] {
        let c = Complex64::new(scale, 0.0);
        let ic = Complex64::new(0.0, scale);
        [
            [c, ic, Complex64::default()],
            [-ic, c, Complex64::default()],
            [
                Complex64::default(),
                Complex64::default(),
                Complex64::new(2.0 * jf * scale, 0.0),
            ],
        ]
    };
    let pj = base(sign as f64 * hbar * params.p_radius * jf / (2.0 * (jf + 1.0)));
    let jj = base(hbar * hbar * jf / 2.0);
    (pj, jj)
}

/// Eigenvalues of C_a C^a, J_a J^a and L_a L^a on the j-eigenspace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectra {
    pub c2: f64,
    pub j2: f64,
    pub l2: f64,
}

pub fn spectra(params: &ElementaryParams, j: HalfInt) -> Result<Spectra> {
    if j < params.s.abs() {
        return Err(Error::InvalidQuantumNumbers(format!(
            "j = {j} below |s| = {}",
            params.s.abs()
        )));
    }
    if !(j - params.s).is_integer() {
        return Err(Error::InvalidQuantumNumbers(format!(
            "j = {j} incompatible with s = {}",
            params.s
        )));
    }
    let h2 = params.hbar * params.hbar;
    let p2 = params.p_radius * params.p_radius;
    let jj = j.x_xp1();
    let s2 = params.s.as_f64() * params.s.as_f64();
    Ok(Spectra {
        c2: h2 * p2 * (1.0 + jj - s2),
        j2: h2 * jj,
        l2: h2 * (jj - s2),
    })
}

/// Expectation value of the centre-of-mass vector in a basis state; always
/// the zero vector.
pub fn com_expectation(q: QNum, params: &ElementaryParams) -> Result<Vec3> {
    let state = StateVector::basis(*params, q)?;
    let mut out = [0.0; 3];
    for (i, axis) in Axis::ALL.iter().enumerate() {
        let v = moment(&state, &[Letter::C(*axis)])?;
        out[i] = v.re;
        if v.im.abs() > 1e-10 * params.hbar * params.p_radius {
            return Err(Error::InternalConsistency(format!(
                "<C_{i}> has imaginary part {}",
                v.im
            )));
        }
    }
    Ok(Vec3::new(out[0], out[1], out[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, ds: i64) -> ElementaryParams {
        ElementaryParams::new(p, HalfInt::from_doubled(ds)).unwrap()
    }

    fn q(ds: i64, dj: i64, dm: i64) -> QNum {
        QNum::from_doubled(ds, dj, dm).unwrap()
    }

    #[test]
    fn p_element_examples() {
        // Diagonal z-element at (s=1, j=1, m=1): P^3/2.
        let pr = params(1.0, 2);
        let v = p_element(Axis::Z, q(2, 2, 2), q(2, 2, 2), &pr).unwrap();
        assert!((v.re - 0.5).abs() < 1e-15 && v.im == 0.0);

        // s = 0 kills the diagonal term.
        let pr0 = params(1.0, 0);
        let v = p_element(Axis::Z, q(0, 2, 2), q(0, 2, 2), &pr0).unwrap();
        assert_eq!(v, Complex64::default());

        // <0Y10|p_z|0Y00> = P^3/sqrt(3).
        let v = p_element(Axis::Z, q(0, 2, 0), q(0, 0, 0), &pr0).unwrap();
        assert!((v.re - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn p_element_hermitian() {
        let pr = params(1.4, 1);
        let kets = [q(1, 1, 1), q(1, 1, -1), q(1, 3, 1), q(1, 3, 3), q(1, 5, -3)];
        for axis in Axis::ALL {
            for &a in &kets {
                for &b in &kets {
                    let ab = p_element(axis, a, b, &pr).unwrap();
                    let ba = p_element(axis, b, a, &pr).unwrap();
                    assert!(
                        (ab - ba.conj()).norm() < 1e-13,
                        "{axis:?} {a} {b}: {ab} vs conj {ba}"
                    );
                }
            }
        }
    }

    #[test]
    fn j_element_examples() {
        let pr = params(1.0, 1);
        let v = j_element(Axis::Z, q(1, 1, 1), q(1, 1, 1), &pr).unwrap();
        assert!((v.re - 0.5).abs() < 1e-15);

        let pr0 = params(1.0, 0);
        let v = j_element(Axis::X, q(0, 2, 2), q(0, 2, 0), &pr0).unwrap();
        assert!((v.re - 0.5 * 2.0f64.sqrt()).abs() < 1e-15);
        let v = j_element(Axis::Y, q(0, 2, 2), q(0, 2, 0), &pr0).unwrap();
        assert!((v + Complex64::new(0.0, 0.5 * 2.0f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn spin_weight_mismatch_rejected() {
        let pr = params(1.0, 0);
        assert!(p_element(Axis::Z, q(2, 2, 0), q(0, 2, 0), &pr).is_err());
    }

    #[test]
    fn apply_examples() {
        // W is the Casimir hbar P s on every basis state.
        let pr = params(2.0, 3);
        let st = StateVector::basis(pr, q(3, 5, 1)).unwrap();
        let image = apply(&[Letter::W], &st);
        let expect = pr.casimir_w();
        assert_eq!(image.len(), 1);
        assert!((image.coeff(&q(3, 5, 1)) - Complex64::new(expect, 0.0)).norm() < 1e-12);

        // P_z on the constant mode: (P/sqrt 3) |0,1,0>.
        let pr0 = params(2.0, 0);
        let st = StateVector::basis(pr0, q(0, 0, 0)).unwrap();
        let image = apply(&[Letter::P(Axis::Z)], &st);
        assert_eq!(image.len(), 1);
        assert!(
            (image.coeff(&q(0, 2, 0)) - Complex64::new(2.0 / 3.0f64.sqrt(), 0.0)).norm() < 1e-14
        );

        // J_z twice on a spin-1/2 state is diagonal with 1/4.
        let prh = params(1.0, 1);
        let st = StateVector::basis(prh, q(1, 1, 1)).unwrap();
        let image = apply(&[Letter::J(Axis::Z), Letter::J(Axis::Z)], &st);
        assert!((image.coeff(&q(1, 1, 1)) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn moment_examples() {
        // <p_z> = P/3 on the spin-1/2 centre-of-mass state.
        let pr = params(1.0, 1);
        let st = StateVector::basis(pr, q(1, 1, 1)).unwrap();
        let v = moment(&st, &[Letter::P(Axis::Z)]).unwrap();
        assert!((v.re - 1.0 / 3.0).abs() < 1e-15 && v.im.abs() < 1e-16);
        let v = moment(&st, &[Letter::P(Axis::X)]).unwrap();
        assert!(v.norm() < 1e-16);

        // <p_x p_x> = P^4/3 on the constant mode (normalized: P^2/3).
        let pr0 = params(1.5, 0);
        let st = StateVector::basis(pr0, q(0, 0, 0)).unwrap();
        let v = moment(&st, &[Letter::P(Axis::X), Letter::P(Axis::X)]).unwrap();
        assert!((v.re - 1.5 * 1.5 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn moment_requires_normalized() {
        let pr = params(1.0, 0);
        let mut st = StateVector::basis(pr, q(0, 0, 0)).unwrap();
        st.add_scaled(q(0, 2, 0), Complex64::new(1.0, 0.0));
        assert!(matches!(
            moment(&st, &[Letter::W]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn second_moments_match_sparse_apply() {
        for (p, ds, dj, dm) in [
            (1.0, 0, 0, 0),
            (2.0, 1, 1, 1),
            (1.3, 2, 2, 2),
            (1.0, 2, 6, 2),
            (0.7, -3, 5, -1),
        ] {
            let pr = params(p, ds);
            let qn = q(ds, dj, dm);
            let closed = second_moments_closed(qn, &pr);
            let st = StateVector::basis(pr, qn).unwrap();
            let p2 = p * p;
            let mut trace = 0.0;
            for (a, axis_a) in Axis::ALL.iter().enumerate() {
                for (b, axis_b) in Axis::ALL.iter().enumerate() {
                    let v = moment(&st, &[Letter::P(*axis_a), Letter::P(*axis_b)]).unwrap();
                    assert!(
                        (v.re * p2 - closed[a][b]).abs() < 1e-12 * p.powi(4),
                        "({a},{b}): sparse {} vs closed {}",
                        v.re * p2,
                        closed[a][b]
                    );
                    assert!(v.im.abs() < 1e-14 * p2);
                    if a == b {
                        trace += closed[a][b];
                    }
                }
            }
            assert!((trace - p.powi(4)).abs() < 1e-12 * p.powi(4), "trace = P^4");
        }
    }

    #[test]
    fn pj_jj_closed_match_sparse() {
        let j = HalfInt::from_doubled(3); // j = 3/2
        for sign in [1i64, -1] {
            let pr = params(1.9, sign * 3);
            let (pj, jj) = pj_jj_moments_closed(j, sign, &pr);
            let st = StateVector::basis(pr, q(sign * 3, 3, 3)).unwrap();
            for (a, axis_a) in Axis::ALL.iter().enumerate() {
                for (b, axis_b) in Axis::ALL.iter().enumerate() {
                    let vp = moment(&st, &[Letter::P(*axis_a), Letter::J(*axis_b)]).unwrap();
                    let vj = moment(&st, &[Letter::J(*axis_a), Letter::J(*axis_b)]).unwrap();
                    assert!((vp - pj[a][b]).norm() < 1e-13, "pJ ({a},{b}) sign {sign}");
                    assert!((vj - jj[a][b]).norm() < 1e-13, "JJ ({a},{b}) sign {sign}");
                }
            }
            // Spot values: <p_z J_z> = sign * hbar P j^2/(j+1); <J_z J_z> = hbar^2 j^2.
            let jf = 1.5;
            assert!(
                (pj[2][2].re - sign as f64 * pr.hbar * pr.p_radius * jf * jf / (jf + 1.0)).abs()
                    < 1e-13
            );
            assert!((jj[2][2].re - jf * jf).abs() < 1e-13);
        }
    }

    #[test]
    fn spectra_examples() {
        let pr = params(1.0, 1);
        let sp = spectra(&pr, HalfInt::HALF).unwrap();
        assert!((sp.c2 - 1.5).abs() < 1e-15);
        assert!((sp.j2 - 0.75).abs() < 1e-15);
        assert!((sp.l2 - 0.5).abs() < 1e-15);

        let pr0 = params(2.0, 0);
        let sp = spectra(&pr0, HalfInt::ZERO).unwrap();
        assert!((sp.c2 - 4.0).abs() < 1e-15);
        assert_eq!(sp.l2, 0.0);

        // c2 - l2 P^2 = hbar^2 P^2 and j2 - l2 = hbar^2 s^2 for any (s, j).
        for (p, ds, dj) in [(1.0, 1, 5), (2.0, -4, 8), (0.5, 3, 3)] {
            let pr = params(p, ds);
            let sp = spectra(&pr, HalfInt::from_doubled(dj)).unwrap();
            assert!((sp.c2 - sp.l2 * p * p - p * p).abs() < 1e-12);
            let s2 = (ds as f64 / 2.0).powi(2);
            assert!((sp.j2 - sp.l2 - s2).abs() < 1e-12);
        }

        assert!(spectra(&params(1.0, 4), HalfInt::HALF).is_err());
    }

    #[test]
    fn com_expectation_vanishes() {
        for (ds, dj, dm) in [(1, 1, 1), (2, 6, 4), (0, 4, -2), (-3, 3, 3)] {
            let pr = params(1.2, ds);
            let v = com_expectation(q(ds, dj, dm), &pr).unwrap();
            assert!(v.norm() < 1e-12, "<C> = {v:?} at ({ds},{dj},{dm})");
        }
    }

    #[test]
    fn com_squared_matches_spectra() {
        let pr = params(1.3, 2);
        let qn = q(2, 4, 2);
        let st = StateVector::basis(pr, qn).unwrap();
        let mut total = 0.0;
        for axis in Axis::ALL {
            let v = moment(&st, &[Letter::C(axis), Letter::C(axis)]).unwrap();
            total += v.re;
        }
        let sp = spectra(&pr, qn.j).unwrap();
        assert!((total - sp.c2).abs() < 1e-12 * sp.c2);
    }

    #[test]
    fn p_squared_sums_to_casimir() {
        let pr = params(1.7, 1);
        let st = StateVector::basis(pr, q(1, 3, -1)).unwrap();
        let mut total = 0.0;
        for axis in Axis::ALL {
            total += moment(&st, &[Letter::P(axis), Letter::P(axis)]).unwrap().re;
        }
        assert!((total - pr.p_radius * pr.p_radius).abs() < 1e-13);
    }
}
