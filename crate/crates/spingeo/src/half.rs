//! Exact half-integer arithmetic for quantum numbers.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::{Error, Result};

/// A half-integer stored as twice its value.
///
/// Quantum numbers s, j, m are half-integers; storing `2x` keeps all index
/// arithmetic and selection rules exact. `HalfInt` is `Copy`, totally
/// ordered and hashable, so it can serve directly as a basis-state key.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const HALF: HalfInt = HalfInt { doubled: 1 };
    pub const ONE: HalfInt = HalfInt { doubled: 2 };

    /// Build from twice the value.
    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { doubled: 2 * n }
    }

    pub const fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn as_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    pub const fn is_zero(self) -> bool {
        self.doubled == 0
    }

    pub const fn abs(self) -> Self {
        HalfInt {
            doubled: self.doubled.abs(),
        }
    }

    /// Sign as -1, 0 or +1.
    pub const fn signum(self) -> i64 {
        self.doubled.signum()
    }

    /// `x(x+1)`, exact in f64 for any quantum number this crate handles.
    pub fn x_xp1(self) -> f64 {
        (self.doubled * (self.doubled + 2)) as f64 / 4.0
    }

    /// Parse from a float; `2x` must be integral to within 1e-9.
    pub fn try_from_f64(x: f64) -> Result<Self> {
        let d = 2.0 * x;
        let r = d.round();
        if (d - r).abs() > 1e-9 || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{x} is not a half-integer"
            )));
        }
        Ok(HalfInt { doubled: r as i64 })
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            doubled: self.doubled + rhs.doubled,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            doubled: self.doubled - rhs.doubled,
        }
    }
}

impl Add<i64> for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: i64) -> HalfInt {
        HalfInt {
            doubled: self.doubled + 2 * rhs,
        }
    }
}

impl Sub<i64> for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: i64) -> HalfInt {
        HalfInt {
            doubled: self.doubled - 2 * rhs,
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt {
            doubled: -self.doubled,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Inclusive range of half-integers stepping by 1.
pub fn steps_by_one(lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
    let n = if hi.doubled() >= lo.doubled() {
        (hi.doubled() - lo.doubled()) / 2 + 1
    } else {
        0
    };
    (0..n).map(move |k| lo + k)
}

/// Inclusive range of half-integers stepping by 1/2.
pub fn steps_by_half(lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
    let n = if hi.doubled() >= lo.doubled() {
        hi.doubled() - lo.doubled() + 1
    } else {
        0
    };
    (0..n).map(move |k| HalfInt::from_doubled(lo.doubled() + k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = HalfInt::from_doubled(3); // 3/2
        let b = HalfInt::ONE;
        assert_eq!((a + b).doubled(), 5);
        assert_eq!((a - b).doubled(), 1);
        assert_eq!((-a).doubled(), -3);
        assert!(!a.is_integer());
        assert!(b.is_integer());
        assert_eq!(a.as_f64(), 1.5);
        assert_eq!(a.x_xp1(), 1.5 * 2.5);
    }

    #[test]
    fn parse_from_f64() {
        assert_eq!(HalfInt::try_from_f64(2.5).unwrap().doubled(), 5);
        assert_eq!(HalfInt::try_from_f64(-3.0).unwrap().doubled(), -6);
        assert!(HalfInt::try_from_f64(0.3).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(HalfInt::from_doubled(5).to_string(), "5/2");
        assert_eq!(HalfInt::from_int(-2).to_string(), "-2");
    }

    #[test]
    fn ranges() {
        let v: Vec<_> = steps_by_one(HalfInt::HALF, HalfInt::from_doubled(5)).collect();
        assert_eq!(v.len(), 3);
        assert_eq!(v[2].doubled(), 5);
        let w: Vec<_> = steps_by_half(HalfInt::ZERO, HalfInt::ONE).collect();
        assert_eq!(w.len(), 3);
    }
}
