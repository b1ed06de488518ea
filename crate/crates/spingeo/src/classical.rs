//! Classical E(3) elementary systems and their empirical geometry.
//!
//! A classical elementary system is a pair (linear momentum, angular
//! momentum). Its centre-of-mass line is `q(u) = M/P^2 + u p` with
//! `M = p x J`, and the signed empirical distance between two systems is an
//! E(3)-invariant combination of the pair Casimirs that reproduces the
//! Euclidean distance between the two centre-of-mass lines.
//!
//! Orientation conventions: the alternating symbol is right-handed
//! (`eps_123 = +1`) and lines are directed, so the sign of the distance
//! flips with orientation reversal; cross-module comparisons use `|d|`.

use crate::geom::{det3, epsilon, Mat3, Vec3};
use crate::{clamped_acos, Error, Result};

/// Relative transverse momentum below this threshold routes distance
/// computations to the parallel-limit branch.
pub const PARALLEL_TOL: f64 = 1e-9;

/// Classical elementary system: linear momentum and angular momentum
/// pseudo-vector `J^a = eps^{abc} J_{bc} / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalSystem {
    pub p: Vec3,
    pub j: Vec3,
}

impl ClassicalSystem {
    pub fn new(p: Vec3, j: Vec3) -> Self {
        ClassicalSystem { p, j }
    }

    /// Casimir invariants `(P^2, W)` of the Euclidean algebra.
    pub fn casimirs(&self) -> (f64, f64) {
        (self.p.dot(self.p), self.j.dot(self.p))
    }

    /// Mass moment `M^a = J^{ab} p_b = (p x J)^a`; `P^2` times the
    /// centre-of-mass vector.
    pub fn mass_moment(&self) -> Vec3 {
        self.p.cross(self.j)
    }

    /// Translate by `xi`: momenta fixed, `J -> J + xi x p`.
    pub fn translated(&self, xi: Vec3) -> Self {
        ClassicalSystem {
            p: self.p,
            j: self.j + xi.cross(self.p),
        }
    }

    pub fn rotated(&self, r: &Mat3) -> Self {
        ClassicalSystem {
            p: r.mul_vec(self.p),
            j: r.mul_vec(self.j),
        }
    }

    /// The centre-of-mass line `q(u) = M/P^2 + u p`.
    pub fn com_line(&self) -> Result<Line3> {
        let p2 = self.p.dot(self.p);
        if p2 <= 0.0 {
            return Err(Error::DegenerateSystem(
                "p = 0 has no centre-of-mass line".into(),
            ));
        }
        Line3::new(self.mass_moment() * (1.0 / p2), self.p)
    }
}

/// Directed straight line given by a point and a unit tangent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line3 {
    point: Vec3,
    dir: Vec3,
}

impl Line3 {
    pub fn new(point: Vec3, dir: Vec3) -> Result<Self> {
        let dir = dir
            .normalized()
            .ok_or_else(|| Error::InvalidParameter("line direction must be nonzero".into()))?;
        Ok(Line3 { point, dir })
    }

    pub fn point(&self) -> Vec3 {
        self.point
    }

    pub fn dir(&self) -> Vec3 {
        self.dir
    }

    /// Intersection with the plane through the origin orthogonal to the
    /// direction; the canonical representative point.
    pub fn foot(&self) -> Vec3 {
        self.point - self.dir * self.dir.dot(self.point)
    }

    /// Whether the two lines coincide as point sets (orientation ignored).
    pub fn same_set(&self, other: &Line3, tol: f64) -> bool {
        self.dir.cross(other.dir).norm() < tol && (self.foot() - other.foot()).norm() < tol
    }
}

/// Reconstruct a system with prescribed Casimirs whose centre-of-mass line
/// is the given one.
pub fn system_from_line(line: &Line3, p_radius: f64, w: f64) -> Result<ClassicalSystem> {
    if !p_radius.is_finite() || p_radius <= 0.0 {
        return Err(Error::DegenerateSystem("P must be positive".into()));
    }
    let dir = line.dir();
    let p = dir * p_radius;
    let foot = line.foot();
    // J = (W/P) dir + P (foot x dir) gives M/P^2 = foot and J.p = W.
    let j = dir * (w / p_radius) + foot.cross(dir) * p_radius;
    Ok(ClassicalSystem { p, j })
}

/// Euclidean distance between two straight lines: cross-product formula for
/// skew pairs, point-to-line projection for parallel ones.
pub fn euclidean_line_distance(l1: &Line3, l2: &Line3) -> f64 {
    let cross = l1.dir().cross(l2.dir());
    let offset = l1.point() - l2.point();
    let cn = cross.norm();
    if cn < PARALLEL_TOL {
        let along = l2.dir() * offset.dot(l2.dir());
        (offset - along).norm()
    } else {
        (offset.dot(cross) / cn).abs()
    }
}

/// Signed empirical distance between the centre-of-mass lines of two
/// systems, expressed through pair Casimirs. Parallel momenta take the
/// limit branch.
pub fn empirical_distance_classical(s1: &ClassicalSystem, s2: &ClassicalSystem) -> Result<f64> {
    let (p1sq, w1) = s1.casimirs();
    let (p2sq, w2) = s2.casimirs();
    if p1sq <= 0.0 || p2sq <= 0.0 {
        return Err(Error::DegenerateSystem(
            "both momenta must be nonzero".into(),
        ));
    }
    let cross = s1.p.cross(s2.p);
    if cross.norm() / (p1sq * p2sq).sqrt() < PARALLEL_TOL {
        // Parallel limit: the offset between the lines, measured along the
        // transverse unit vector of the limiting family.
        let dm = s1.mass_moment() * (1.0 / p1sq) - s2.mass_moment() * (1.0 / p2sq);
        if dm.norm() == 0.0 {
            return Ok(0.0);
        }
        let v = s1.p.normalized().expect("checked nonzero");
        let w = v
            .cross(dm)
            .normalized()
            .ok_or_else(|| Error::InternalConsistency("offset parallel to momentum".into()))?;
        return Ok(dm.dot(v.cross(w)));
    }
    let p12sq = s1.p.dot(s2.p);
    let w12 = s1.j.dot(s2.p) + s2.j.dot(s1.p);
    let denom_sq = p1sq * p2sq - p12sq * p12sq;
    Ok((w12 - w1 * p12sq / p1sq - w2 * p12sq / p2sq) / denom_sq.sqrt())
}

/// Relative position vector of the first system with respect to the
/// second: orthogonal to both momenta, with its transverse component equal
/// to the signed empirical distance.
pub fn relative_position(s1: &ClassicalSystem, s2: &ClassicalSystem) -> Result<Vec3> {
    let (p1sq, w1) = s1.casimirs();
    let (p2sq, w2) = s2.casimirs();
    if p1sq <= 0.0 || p2sq <= 0.0 {
        return Err(Error::DegenerateSystem(
            "both momenta must be nonzero".into(),
        ));
    }
    let cross = s1.p.cross(s2.p);
    if cross.norm() / (p1sq * p2sq).sqrt() < PARALLEL_TOL {
        return Err(Error::ParallelMomenta);
    }
    let p12sq = s1.p.dot(s2.p);
    let w12 = s1.j.dot(s2.p) + s2.j.dot(s1.p);
    let denom_sq = p1sq * p2sq - p12sq * p12sq;
    let num = w12 - w1 * p12sq / p1sq - w2 * p12sq / p2sq;
    Ok(cross * (num / denom_sq))
}

/// Angle between the two momenta.
pub fn empirical_angle_classical(s1: &ClassicalSystem, s2: &ClassicalSystem) -> Result<f64> {
    let (p1sq, _) = s1.casimirs();
    let (p2sq, _) = s2.casimirs();
    if p1sq <= 0.0 || p2sq <= 0.0 {
        return Err(Error::DegenerateSystem(
            "both momenta must be nonzero".into(),
        ));
    }
    clamped_acos(s1.p.dot(s2.p) / (p1sq * p2sq).sqrt())
}

/// 3-volume of the tetrahedron spanned by the three unit momenta.
pub fn empirical_volume_classical(
    s1: &ClassicalSystem,
    s2: &ClassicalSystem,
    s3: &ClassicalSystem,
) -> Result<f64> {
    let mut units = [Vec3::ZERO; 3];
    for (u, s) in units.iter_mut().zip([s1, s2, s3]) {
        *u =
            s.p.normalized()
                .ok_or_else(|| Error::DegenerateSystem("zero momentum in volume".into()))?;
    }
    Ok(det3(units[0], units[1], units[2]) / 6.0)
}

/// Angle between the relative position vectors `d_12` and `d_32` of a
/// three-particle configuration, in the `P^2`-invariant form.
pub fn varpi_angle(
    s1: &ClassicalSystem,
    s2: &ClassicalSystem,
    s3: &ClassicalSystem,
) -> Result<f64> {
    let (p1sq, _) = s1.casimirs();
    let (p2sq, _) = s2.casimirs();
    let (p3sq, _) = s3.casimirs();
    if p1sq <= 0.0 || p2sq <= 0.0 || p3sq <= 0.0 {
        return Err(Error::DegenerateSystem("zero momentum in varpi".into()));
    }
    let p12 = s1.p.dot(s2.p);
    let p23 = s2.p.dot(s3.p);
    let p13 = s1.p.dot(s3.p);
    let d1 = p1sq * p2sq - p12 * p12;
    let d2 = p2sq * p3sq - p23 * p23;
    if d1 / (p1sq * p2sq) < PARALLEL_TOL * PARALLEL_TOL
        || d2 / (p2sq * p3sq) < PARALLEL_TOL * PARALLEL_TOL
    {
        return Err(Error::UndefinedAngle(
            "varpi needs momenta pairwise non-parallel".into(),
        ));
    }
    clamped_acos((p2sq * p13 - p12 * p23) / (d1.sqrt() * d2.sqrt()))
}

/// Element of the Euclidean Lie algebra e(3) as a formal linear
/// combination of the translation basis `p_1..p_3` and the rotation basis
/// `J_1 = J^{23}, J_2 = J^{31}, J_3 = J^{12}`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct E3Element {
    pub trans: [f64; 3],
    pub rot: [f64; 3],
}

impl E3Element {
    pub fn translation(axis: usize) -> Self {
        let mut e = E3Element::default();
        e.trans[axis] = 1.0;
        e
    }

    pub fn rotation(axis: usize) -> Self {
        let mut e = E3Element::default();
        e.rot[axis] = 1.0;
        e
    }

    pub fn scaled(mut self, k: f64) -> Self {
        for v in self.trans.iter_mut().chain(self.rot.iter_mut()) {
            *v *= k;
        }
        self
    }

    pub fn plus(mut self, o: &E3Element) -> Self {
        for i in 0..3 {
            self.trans[i] += o.trans[i];
            self.rot[i] += o.rot[i];
        }
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.trans
            .iter()
            .chain(self.rot.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Lie bracket of e(3) with the structure constants
/// `{p_a, p_b} = 0`, `{p_a, J_d} = eps_{dab} p_b`,
/// `{J_a, J_b} = -eps_{abc} J_c`.
pub fn e3_bracket(x: &E3Element, y: &E3Element) -> E3Element {
    let mut out = E3Element::default();
    for a in 0..3 {
        for d in 0..3 {
            for b in 0..3 {
                let e = epsilon(d, a, b);
                if e != 0.0 {
                    // {p_a, J_d} and antisymmetric partner.
                    out.trans[b] += e * (x.trans[a] * y.rot[d] - y.trans[a] * x.rot[d]);
                }
                let e2 = epsilon(a, d, b);
                if e2 != 0.0 {
                    // {J_a, J_d} = -eps_{adb} J_b.
                    out.rot[b] -= e2 * x.rot[a] * y.rot[d];
                }
            }
        }
    }
    out
}
