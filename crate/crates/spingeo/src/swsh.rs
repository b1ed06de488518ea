//! Spin-weighted spherical harmonics on the momentum sphere.
//!
//! Everything here lives on the sphere S_P of radius `P` in momentum space,
//! charted by the complex stereographic coordinate `zeta = exp(i*phi) *
//! cot(theta/2)`. Harmonics are normalized to unit L2 norm on the *unit*
//! sphere; integrals over S_P carry an extra factor `P^2` which callers
//! apply. For `s = 0` the values coincide with the standard spherical
//! harmonics in the Condon–Shortley convention; that agreement, the ladder
//! signs of the edth operators and orthonormality pin the phase convention
//! for every other spin weight.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use crate::half::HalfInt;
use crate::{Error, Result};

/// Quantum numbers (s, j, m) of a spin-weighted harmonic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QNum {
    pub s: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
}

impl QNum {
    pub fn new(s: HalfInt, j: HalfInt, m: HalfInt) -> Result<Self> {
        let q = QNum { s, j, m };
        q.validate()?;
        Ok(q)
    }

    /// Shorthand taking doubled values, mostly for tests.
    pub fn from_doubled(ds: i64, dj: i64, dm: i64) -> Result<Self> {
        QNum::new(
            HalfInt::from_doubled(ds),
            HalfInt::from_doubled(dj),
            HalfInt::from_doubled(dm),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let QNum { s, j, m } = *self;
        if j < s.abs() {
            return Err(Error::InvalidQuantumNumbers(format!(
                "j = {j} < |s| = {}",
                s.abs()
            )));
        }
        if m.abs() > j {
            return Err(Error::InvalidQuantumNumbers(format!(
                "|m| = {} > j = {j}",
                m.abs()
            )));
        }
        if !(j - s).is_integer() {
            return Err(Error::InvalidQuantumNumbers(format!(
                "j - s = {} not an integer",
                j - s
            )));
        }
        if !(j - m).is_integer() {
            return Err(Error::InvalidQuantumNumbers(format!(
                "j - m = {} not an integer",
                j - m
            )));
        }
        Ok(())
    }

    /// j(j+1) as an exact float.
    pub fn jjp1(&self) -> f64 {
        self.j.x_xp1()
    }
}

impl fmt::Display for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, j={}, m={})", self.s, self.j, self.m)
    }
}

impl fmt::Debug for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Interior point of the sphere chart; the poles are excluded so that the
/// stereographic coordinate and the null tangents stay defined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    theta: f64,
    phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter(
                "non-finite sphere coordinates".into(),
            ));
        }
        if theta <= 0.0 || theta >= PI {
            return Err(Error::PoleExcluded(theta));
        }
        let phi = phi.rem_euclid(2.0 * PI);
        Ok(SpherePoint { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Stereographic coordinate `exp(i*phi) * cot(theta/2)`.
    pub fn zeta(&self) -> Complex64 {
        let half = 0.5 * self.theta;
        Complex64::from_polar(half.cos() / half.sin(), self.phi)
    }
}

const FOUR_PI: f64 = 4.0 * PI;

fn ln_factorials() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(400);
        t.push(0.0);
        let mut acc = 0.0f64;
        for n in 1..400usize {
            acc += (n as f64).ln();
            t.push(acc);
        }
        t
    })
}

fn ln_fact(n: i64) -> f64 {
    let table = ln_factorials();
    debug_assert!(n >= 0 && (n as usize) < table.len());
    table[n as usize]
}

/// Evaluate a harmonic in half-angle variables. `phase` is `exp(i*phi)`.
///
/// The expansion comes from contracting the symmetrized spinor product that
/// defines the harmonic with the stereographic dyad components; each term is
/// `cos^a(theta/2) sin^b(theta/2)` with non-negative exponents, so the sum
/// is stable over the whole open chart.
fn eval_half_angle(q: QNum, cos_half: f64, sin_half: f64, phase: Complex64) -> Complex64 {
    let dj = q.j.doubled();
    let jps = (dj + q.s.doubled()) / 2; // j + s
    let jms = (dj - q.s.doubled()) / 2; // j - s
    let jpm = (dj + q.m.doubled()) / 2; // j + m
    let jmm = (dj - q.m.doubled()) / 2; // j - m

    let k_lo = 0.max(-(q.m.doubled() - q.s.doubled()) / 2); // k >= s - m
    let k_hi = jps.min(jmm);

    let ln_norm = 0.5
        * (ln_fact(jmm)
            + ln_fact(jpm)
            + ln_fact(jps)
            + ln_fact(jms)
            + ((dj + 1) as f64 / FOUR_PI).ln());

    // sum_k (-1)^(j+m+k) F_k cos^(e1+e2)(theta/2) sin^(2j-e1-e2)(theta/2).
    let mut acc = 0.0f64;
    for k in k_lo..=k_hi {
        let e1 = jps - k;
        let e2 = jmm - k;
        let msk = (q.m.doubled() - q.s.doubled()) / 2 + k; // m - s + k
        debug_assert!(msk >= 0);
        let ln_f = ln_norm - ln_fact(k) - ln_fact(e1) - ln_fact(e2) - ln_fact(msk);
        let sign = if (jpm + k) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign
            * ln_f.exp()
            * cos_half.powi((e1 + e2) as i32)
            * sin_half.powi((dj - e1 - e2) as i32);
    }

    // Global phase i^(2j); constant in s at fixed j, so it never affects the
    // ladder relations or any spin-weight-zero integrand.
    let i_pow = match dj.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };

    // phi-dependence exp(i (m+s) phi) in this trivialization.
    let mps = (q.m.doubled() + q.s.doubled()) / 2;
    i_pow * phase.powi(mps as i32) * acc
}

/// Value of the spin-weighted harmonic at an interior point of the sphere.
pub fn eval_harmonic(q: QNum, pt: &SpherePoint) -> Complex64 {
    let half = 0.5 * pt.theta();
    eval_half_angle(
        q,
        half.cos(),
        half.sin(),
        Complex64::from_polar(1.0, pt.phi()),
    )
}

/// Same harmonic evaluated as a function of the stereographic coordinate.
pub fn eval_harmonic_stereo(q: QNum, zeta: Complex64) -> Complex64 {
    let r = zeta.norm();
    let scale = (1.0 + r * r).sqrt();
    let cos_half = r / scale;
    let sin_half = 1.0 / scale;
    let phase = if r > 0.0 {
        zeta / r
    } else {
        Complex64::new(1.0, 0.0)
    };
    eval_half_angle(q, cos_half, sin_half, phase)
}

/// Ladder action of the edth operators on a harmonic.
///
/// Returns `(c, target)` with `edth {s}Y{jm} = c * {s+1}Y{jm}` for
/// `prime = false`, and `edth' {s}Y{jm} = c * {s-1}Y{jm}` for
/// `prime = true`. When the ladder annihilates, the coefficient is zero and
/// the target absent.
pub fn edth_ladder(q: QNum, prime: bool, p_radius: f64) -> (f64, Option<QNum>) {
    let dj = q.j.doubled();
    let ds = q.s.doubled();
    let (radicand, sign, ds_out) = if prime {
        // (j - s + 1)(j + s)
        (((dj - ds + 2) * (dj + ds)) / 4, 1.0, ds - 2)
    } else {
        // (j + s + 1)(j - s)
        (((dj + ds + 2) * (dj - ds)) / 4, -1.0, ds + 2)
    };
    if radicand == 0 {
        return (0.0, None);
    }
    let coeff = sign * (radicand as f64).sqrt() / (std::f64::consts::SQRT_2 * p_radius);
    let target = QNum {
        s: HalfInt::from_doubled(ds_out),
        j: q.j,
        m: q.m,
    };
    (coeff, Some(target))
}

/// Eigenvalue of the sphere Laplacian (edth edth' + edth' edth) on
/// spin-weight-s harmonics: `-(j^2 + j - s^2) / P^2`.
pub fn laplacian_eigenvalue(q: QNum, p_radius: f64) -> f64 {
    let dj = q.j.doubled();
    let ds = q.s.doubled();
    -((dj * (dj + 2) - ds * ds) as f64 / 4.0) / (p_radius * p_radius)
}

/// Cartesian components of the momentum vector at a chart point; `|p| = P`.
pub fn momentum_direction(pt: &SpherePoint, p_radius: f64) -> crate::geom::Vec3 {
    let (st, ct) = pt.theta().sin_cos();
    let (sp, cp) = pt.phi().sin_cos();
    crate::geom::Vec3::new(p_radius * st * cp, p_radius * st * sp, p_radius * ct)
}

/// Complex null tangent `m^a` of the sphere, normalized by `m_a mbar^a = 1`.
pub fn null_tangent(pt: &SpherePoint) -> [Complex64; 3] {
    let zeta = pt.zeta();
    let denom = 1.0 + zeta.norm_sqr();
    let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        inv_sqrt2 * (one - zeta * zeta) / denom,
        inv_sqrt2 * i * (one + zeta * zeta) / denom,
        inv_sqrt2 * 2.0 * zeta / denom,
    ]
}

fn sqrt_ratio(num: i128, den: i128) -> f64 {
    debug_assert!(num >= 0 && den > 0);
    (num as f64 / den as f64).sqrt()
}

/// Terms of the product `0Y{1,mu} * sY{jm} = sum c * sY{j', m+mu}` with
/// `j'` in `{j-1, j, j+1}`; targets below `|s|` or `|m+mu|` drop out.
pub fn product_expand_y1(mu: i64, q: QNum) -> Vec<(QNum, f64)> {
    assert!((-1..=1).contains(&mu), "mu must be -1, 0 or +1");
    let dj = q.j.doubled();
    let ds = q.s.doubled();
    let dm = q.m.doubled();
    let j = q.j.as_f64();

    // Integer factors; names follow the j +/- s +/- m pattern.
    let f = |d: i64| -> i128 {
        debug_assert!(d % 2 == 0);
        (d / 2) as i128
    };
    let sqrt_3_4pi = (3.0 / FOUR_PI).sqrt();
    let sqrt_3_8pi = (3.0 / (2.0 * FOUR_PI)).sqrt();

    let den_up = ((dj + 1) * (dj + 3)) as i128; // (2j+1)(2j+3)
    let den_dn = ((dj - 1) * (dj + 1)) as i128; // (2j-1)(2j+1)

    let (c_up, c_mid, c_dn) = match mu {
        1 => {
            let up = sqrt_3_8pi / (j + 1.0)
                * sqrt_ratio(
                    f(dj - ds + 2) * f(dj + ds + 2) * f(dj + dm + 2) * f(dj + dm + 4),
                    den_up,
                );
            let mid = if dj == 0 {
                0.0
            } else {
                -sqrt_3_8pi * q.s.as_f64() / q.j.x_xp1()
                    * sqrt_ratio(f(dj + dm + 2) * f(dj - dm), 1)
            };
            let dn = if dj < 2 {
                0.0
            } else {
                -sqrt_3_8pi / j
                    * sqrt_ratio(
                        f(dj - ds) * f(dj + ds) * f(dj - dm - 2) * f(dj - dm),
                        den_dn,
                    )
            };
            (up, mid, dn)
        }
        0 => {
            let up = sqrt_3_4pi / (j + 1.0)
                * sqrt_ratio(
                    f(dj + ds + 2) * f(dj - ds + 2) * f(dj + dm + 2) * f(dj - dm + 2),
                    den_up,
                );
            let mid = if dj == 0 {
                0.0
            } else {
                sqrt_3_4pi * q.s.as_f64() * q.m.as_f64() / q.j.x_xp1()
            };
            let dn = if dj < 2 {
                0.0
            } else {
                sqrt_3_4pi / j
                    * sqrt_ratio(f(dj - ds) * f(dj + ds) * f(dj + dm) * f(dj - dm), den_dn)
            };
            (up, mid, dn)
        }
        _ => {
            let up = sqrt_3_8pi / (j + 1.0)
                * sqrt_ratio(
                    f(dj + ds + 2) * f(dj - ds + 2) * f(dj - dm + 2) * f(dj - dm + 4),
                    den_up,
                );
            let mid = if dj == 0 {
                0.0
            } else {
                sqrt_3_8pi * q.s.as_f64() / q.j.x_xp1() * sqrt_ratio(f(dj + dm) * f(dj - dm + 2), 1)
            };
            let dn = if dj < 2 {
                0.0
            } else {
                -sqrt_3_8pi / j
                    * sqrt_ratio(
                        f(dj + ds) * f(dj - ds) * f(dj + dm) * f(dj + dm - 2),
                        den_dn,
                    )
            };
            (up, mid, dn)
        }
    };

    let mut out = Vec::with_capacity(3);
    let dm_out = dm + 2 * mu;
    for (dj_out, coeff) in [(dj + 2, c_up), (dj, c_mid), (dj - 2, c_dn)] {
        if coeff == 0.0 {
            continue;
        }
        if let Ok(target) = QNum::from_doubled(ds, dj_out, dm_out) {
            out.push((target, coeff));
        }
    }
    out
}

/// Quadrature over the unit sphere: Gauss–Legendre in cos(theta) crossed
/// with a uniform grid in phi. Exact for spherical polynomials (spans of
/// ordinary harmonics) of total degree up to `order`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
    order: usize,
}

impl SphereQuadrature {
    pub fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate a complex-valued function over the unit sphere.
    pub fn integrate<F: FnMut(&SpherePoint) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (pt, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(pt) * *w;
        }
        acc
    }
}

/// Gauss–Legendre nodes and weights on (-1, 1) by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dpn = 0.0;
        for _ in 0..100 {
            let (pn, dp) = legendre_with_deriv(n, x);
            dpn = dp;
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (pn2, dp2) = legendre_with_deriv(n, x);
                dpn = dp2;
                x -= pn2 / dp2;
                break;
            }
        }
        xs.push(x);
        ws.push(2.0 / ((1.0 - x * x) * dpn * dpn));
    }
    (xs, ws)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Build a quadrature exact through spherical-polynomial degree `order`.
pub fn build_quadrature(order: usize) -> SphereQuadrature {
    let n_theta = order / 2 + 1;
    let n_phi = order + 1;
    let (xs, gw) = gauss_legendre(n_theta);
    let w_phi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (x, w) in xs.iter().zip(&gw) {
        let theta = x.acos();
        for k in 0..n_phi {
            let phi = 2.0 * PI * k as f64 / n_phi as f64;
            // Gauss nodes are interior, so construction cannot hit a pole.
            nodes.push(SpherePoint::new(theta, phi).expect("interior node"));
            weights.push(w * w_phi);
        }
    }
    SphereQuadrature {
        nodes,
        weights,
        order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qnum_validation() {
        assert!(QNum::from_doubled(0, 0, 0).is_ok());
        assert!(QNum::from_doubled(2, 0, 0).is_err()); // j < |s|
        assert!(QNum::from_doubled(0, 2, 4).is_err()); // |m| > j
        assert!(QNum::from_doubled(1, 2, 2).is_err()); // j - s not integer
        assert!(QNum::from_doubled(1, 3, 2).is_err()); // j - m not integer
        assert!(QNum::from_doubled(1, 3, 3).is_ok());
    }

    #[test]
    fn poles_rejected() {
        assert!(SpherePoint::new(0.0, 0.0).is_err());
        assert!(SpherePoint::new(PI, 0.1).is_err());
        assert!(SpherePoint::new(PI / 2.0, 0.0).is_ok());
    }

    #[test]
    fn constant_mode() {
        let q = QNum::from_doubled(0, 0, 0).unwrap();
        for (theta, phi) in [(0.3, 0.0), (1.2, 2.2), (2.9, 4.0)] {
            let pt = SpherePoint::new(theta, phi).unwrap();
            let v = eval_harmonic(q, &pt);
            assert!((v - c(1.0 / FOUR_PI.sqrt(), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn standard_y10_value() {
        // (s=0, j=1, m=0) at theta = pi/3 equals sqrt(3/4pi) cos(pi/3).
        let q = QNum::from_doubled(0, 2, 0).unwrap();
        let pt = SpherePoint::new(PI / 3.0, 1.234).unwrap();
        let expect = (3.0 / FOUR_PI).sqrt() * (PI / 3.0).cos();
        assert!((eval_harmonic(q, &pt) - c(expect, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn standard_y11_condon_shortley() {
        let q = QNum::from_doubled(0, 2, 2).unwrap();
        let pt = SpherePoint::new(PI / 2.0, 0.0).unwrap();
        // Y11 = -sqrt(3/8pi) sin(theta) e^{i phi}
        let expect = -(3.0 / (2.0 * FOUR_PI)).sqrt();
        assert!((eval_harmonic(q, &pt) - c(expect, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn spin_one_value_from_spinor_product() {
        // (s=1, j=1, m=1) at theta=pi/2, phi=0: the direct symmetrized
        // spinor contraction gives -sqrt(3/4pi) zeta^2/(1+|zeta|^2), and
        // zeta = 1 there.
        let q = QNum::from_doubled(2, 2, 2).unwrap();
        let pt = SpherePoint::new(PI / 2.0, 0.0).unwrap();
        let expect = -0.5 * (3.0 / FOUR_PI).sqrt();
        assert!((eval_harmonic(q, &pt) - c(expect, 0.0)).norm() < 1e-14);
    }

    /// Brute-force oracle for the defining spinor contraction: enumerate
    /// every assignment of the Cartesian dyad factors to the contraction
    /// slots, with the stereographic dyad components written out directly.
    fn harmonic_by_slot_enumeration(q: QNum, zeta: Complex64) -> Complex64 {
        let two_j = q.j.doubled() as usize;
        let n_o_cart = ((q.j - q.m).doubled() / 2) as usize; // O_A factors
        let n_o_dyad = ((q.j + q.s).doubled() / 2) as usize; // o^A slots
        let scale = (1.0 + zeta.norm_sqr()).sqrt();
        let mi = c(0.0, -1.0);
        // o^A = -i (zeta, 1)/sqrt(1+|z|^2), iota^A = -i (1, -zbar)/..., and
        // index lowering by the antisymmetric metric gives O_A = (0, 1),
        // I_A = (-1, 0).
        let o_up = [mi * zeta / scale, mi / scale];
        let i_up = [mi / scale, -mi * zeta.conj() / scale];
        let upper = |k: usize| if k < n_o_dyad { o_up } else { i_up };
        let contract = |low_is_o: bool, up: [Complex64; 2]| {
            if low_is_o {
                up[1] // O_A v^A = v^1
            } else {
                -up[0] // I_A v^A = -v^0
            }
        };

        // sum over subsets S of slots receiving an O_A factor.
        let mut sum = c(0.0, 0.0);
        let mut n_terms = 0u64;
        for mask in 0..(1u32 << two_j) {
            if mask.count_ones() as usize != n_o_cart {
                continue;
            }
            n_terms += 1;
            let mut term = c(1.0, 0.0);
            for slot in 0..two_j {
                term *= contract(mask & (1 << slot) != 0, upper(slot));
            }
            sum += term;
        }
        // Multiplicity factor n_O! n_I! / (2j)! equals 1 / #subsets.
        let sym = sum / n_terms as f64;

        // Normalization (-1)^(j+m) sqrt((2j+1)/4pi) (2j)! / sqrt(...)
        let fact = |n: i64| -> f64 { (1..=n).map(|k| k as f64).product::<f64>().max(1.0) };
        let jm = (q.j - q.m).doubled() / 2;
        let jpm = (q.j + q.m).doubled() / 2;
        let js = (q.j - q.s).doubled() / 2;
        let jps = (q.j + q.s).doubled() / 2;
        let sign = if jpm % 2 == 0 { 1.0 } else { -1.0 };
        let norm = sign * ((two_j as f64 + 1.0) / FOUR_PI).sqrt() * fact(two_j as i64)
            / (fact(jm) * fact(jpm) * fact(js) * fact(jps)).sqrt();
        sym * norm
    }

    #[test]
    fn eval_matches_slot_enumeration_oracle() {
        for (ds, dj, dm) in [
            (0i64, 0i64, 0i64),
            (0, 2, 0),
            (0, 2, 2),
            (1, 1, 1),
            (-1, 1, 1),
            (1, 3, -1),
            (2, 2, 0),
            (-2, 4, 4),
            (0, 4, -2),
            (3, 3, 1),
        ] {
            let q = QNum::from_doubled(ds, dj, dm).unwrap();
            for (theta, phi) in [(0.7, 0.3), (1.9, 4.1), (2.6, 1.2)] {
                let pt = SpherePoint::new(theta, phi).unwrap();
                let direct = harmonic_by_slot_enumeration(q, pt.zeta());
                let fast = eval_harmonic(q, &pt);
                assert!(
                    (direct - fast).norm() < 1e-13,
                    "{q} at ({theta},{phi}): {direct} vs {fast}"
                );
            }
        }
    }

    #[test]
    fn stereo_matches_angles() {
        let q = QNum::from_doubled(1, 3, -1).unwrap();
        let pt = SpherePoint::new(1.1, 2.7).unwrap();
        let a = eval_harmonic(q, &pt);
        let b = eval_harmonic_stereo(q, pt.zeta());
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn ladder_examples() {
        // edth on (s=0, j=1, m=0): coefficient -1/P.
        let q = QNum::from_doubled(0, 2, 0).unwrap();
        let (coeff, target) = edth_ladder(q, false, 2.0);
        assert!((coeff - (-0.5)).abs() < 1e-15);
        assert_eq!(target.unwrap(), QNum::from_doubled(2, 2, 0).unwrap());

        // edth' annihilates the holomorphic kernel at s = -|s|, j = |s|.
        let q = QNum::from_doubled(-2, 2, 0).unwrap();
        let (coeff, target) = edth_ladder(q, true, 1.0);
        assert_eq!(coeff, 0.0);
        assert!(target.is_none());

        // edth' on (s=1, j=2, m=1): sqrt(3)/P.
        let q = QNum::from_doubled(2, 4, 2).unwrap();
        let (coeff, target) = edth_ladder(q, true, 1.0);
        assert!((coeff - 3.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(target.unwrap(), QNum::from_doubled(0, 4, 2).unwrap());
    }

    #[test]
    fn ladder_pointwise_consistency() {
        // edth' 0Y10 evaluated through the ladder equals the closed form
        // sqrt(2)/P * sqrt(3/4pi) * d/dzeta of the j=1 harmonic.
        let p_radius = 1.3;
        let q = QNum::from_doubled(0, 2, 0).unwrap();
        let pt = SpherePoint::new(0.9, 0.4).unwrap();
        let (coeff, target) = edth_ladder(q, false, p_radius);
        let lhs = coeff * eval_harmonic(target.unwrap(), &pt);
        // Direct derivative: edth 0Y10 = (1/(sqrt2 P)) (1+z zbar) d/dzbar [sqrt(3/4pi)(z zbar - 1)/(1+z zbar)]
        let z = pt.zeta();
        let expect = (3.0 / FOUR_PI).sqrt() * 2.0 / (std::f64::consts::SQRT_2 * p_radius) * z
            / (1.0 + z.norm_sqr());
        assert!((lhs - expect).norm() < 1e-13);
    }

    #[test]
    fn kernel_dimensions() {
        // The ladder annihilates exactly the 2|s|+1 states with j = |s|.
        for ds in [-4i64, -2, 0, 2, 4] {
            let s = HalfInt::from_doubled(ds);
            for dj in (ds.abs()..=ds.abs() + 6).step_by(2) {
                for dm in (-dj..=dj).step_by(2) {
                    let q = QNum::from_doubled(ds, dj, dm).unwrap();
                    let (c_up, _) = edth_ladder(q, false, 1.0);
                    let (c_dn, _) = edth_ladder(q, true, 1.0);
                    let anti_holo = c_up == 0.0;
                    let holo = c_dn == 0.0;
                    if dj == ds.abs() {
                        assert!(if s.doubled() >= 0 { anti_holo } else { holo });
                    } else {
                        assert!(!anti_holo && !holo);
                    }
                }
            }
        }
    }

    #[test]
    fn laplacian_matches_ladder_composition() {
        for (ds, dj) in [(0, 0), (1, 1), (0, 4), (2, 6), (-3, 5)] {
            let q = QNum::from_doubled(ds, dj, dj).unwrap();
            let p_radius = 1.7;
            let compose = |first_prime: bool| -> f64 {
                let (c1, t) = edth_ladder(q, first_prime, p_radius);
                match t {
                    None => 0.0,
                    Some(t) => {
                        let (c2, _) = edth_ladder(t, !first_prime, p_radius);
                        c1 * c2
                    }
                }
            };
            let total = compose(true) + compose(false);
            assert!((total - laplacian_eigenvalue(q, p_radius)).abs() < 1e-13);
            // Commutator: (edth edth' - edth' edth) = -s/P^2.
            let comm = compose(true) - compose(false);
            let expect = -(ds as f64 / 2.0) / (p_radius * p_radius);
            assert!((comm - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn momentum_direction_examples() {
        let eq = SpherePoint::new(PI / 2.0, 0.0).unwrap();
        let p = momentum_direction(&eq, 2.5);
        assert!((p - crate::geom::Vec3::new(2.5, 0.0, 0.0)).norm() < 1e-14);
        let near_south = SpherePoint::new(PI - 1e-9, 0.3).unwrap();
        let p = momentum_direction(&near_south, 1.0);
        assert!((p - crate::geom::Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-8);
    }

    #[test]
    fn null_tangent_at_equator() {
        // zeta = 1: m^a = (0, i, 1)/sqrt(2), m_a mbar^a = 1, p_a m^a = 0.
        let pt = SpherePoint::new(PI / 2.0, 0.0).unwrap();
        let m = null_tangent(&pt);
        let inv = 1.0 / std::f64::consts::SQRT_2;
        assert!((m[0] - c(0.0, 0.0)).norm() < 1e-14);
        assert!((m[1] - c(0.0, inv)).norm() < 1e-14);
        assert!((m[2] - c(inv, 0.0)).norm() < 1e-14);

        for (theta, phi) in [(0.4, 1.0), (2.0, 5.5)] {
            let pt = SpherePoint::new(theta, phi).unwrap();
            let m = null_tangent(&pt);
            let p = momentum_direction(&pt, 1.0);
            let m_dot_mbar: Complex64 = m.iter().map(|x| x * x.conj()).sum();
            assert!((m_dot_mbar - c(1.0, 0.0)).norm() < 1e-13);
            let p_dot_m = p.x * m[0] + p.y * m[1] + p.z * m[2];
            assert!(p_dot_m.norm() < 1e-13);
        }
    }

    #[test]
    fn quadrature_weight_sum_and_orthonormality() {
        let quad = build_quadrature(2);
        let total: f64 = quad.weights().iter().sum();
        assert!((total - FOUR_PI).abs() < 1e-12);

        let q = QNum::from_doubled(0, 2, 2).unwrap();
        let norm = quad.integrate(|pt| {
            let v = eval_harmonic(q, pt);
            v.conj() * v
        });
        assert!((norm.re - 1.0).abs() < 1e-13);
        assert!(norm.im.abs() < 1e-15);
    }

    #[test]
    fn quadrature_orthogonality_distinct_j() {
        let quad = build_quadrature(2 * (1 + 2));
        for (ds, dj1, dj2, dm) in [(0i64, 2i64, 4i64, 0i64), (2, 2, 4, 2), (1, 1, 3, 1)] {
            let a = QNum::from_doubled(ds, dj1, dm).unwrap();
            let b = QNum::from_doubled(ds, dj2, dm).unwrap();
            let ip = quad.integrate(|pt| eval_harmonic(a, pt).conj() * eval_harmonic(b, pt));
            assert!(ip.norm() < 1e-12, "not orthogonal: {a} vs {b}: {ip}");
        }
    }

    #[test]
    fn product_expansion_examples() {
        // mu=0 on (s=1, j=1, m=1): the j-term coefficient is sqrt(3/4pi)/2.
        let q = QNum::from_doubled(2, 2, 2).unwrap();
        let terms = product_expand_y1(0, q);
        let mid = terms
            .iter()
            .find(|(t, _)| *t == q)
            .expect("diagonal term present");
        assert!((mid.1 - 0.5 * (3.0 / FOUR_PI).sqrt()).abs() < 1e-15);

        // mu=0 on the constant mode: a single j+1 term, coefficient 1/sqrt(4pi).
        let q0 = QNum::from_doubled(0, 0, 0).unwrap();
        let terms = product_expand_y1(0, q0);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, QNum::from_doubled(0, 2, 0).unwrap());
        assert!((terms[0].1 - 1.0 / FOUR_PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn product_expansion_matches_quadrature() {
        // Coefficients of A.2.4a-c agree with quadrature projections.
        let y1 = |mu: i64| QNum::from_doubled(0, 2, 2 * mu).unwrap();
        let quad = build_quadrature(2 * (3 + 1 + 2));
        for (ds, dj, dm) in [(0i64, 2, 2), (2, 2, 2), (1, 3, -1), (-2, 4, 0), (0, 0, 0)] {
            let q = QNum::from_doubled(ds, dj, dm).unwrap();
            for mu in [-1i64, 0, 1] {
                let terms = product_expand_y1(mu, q);
                for (target, coeff) in &terms {
                    let proj = quad.integrate(|pt| {
                        eval_harmonic(*target, pt).conj()
                            * eval_harmonic(y1(mu), pt)
                            * eval_harmonic(q, pt)
                    });
                    assert!(
                        (proj - Complex64::new(*coeff, 0.0)).norm() < 1e-12,
                        "mu={mu} {q} -> {target}: {proj} vs {coeff}"
                    );
                }
            }
        }
    }

    #[test]
    fn laplacian_examples() {
        let q = QNum::from_doubled(0, 0, 0).unwrap();
        assert_eq!(laplacian_eigenvalue(q, 1.0), 0.0);
        let q = QNum::from_doubled(1, 1, 1).unwrap();
        assert!((laplacian_eigenvalue(q, 1.0) - (-0.5)).abs() < 1e-15);
    }
}
