//! Exact elements of Q/Z, used for root-of-unity values of characters.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// A class in Q/Z, stored as the representative in `[0, 1)`.
/// The root of unity it names is `exp(2 pi i * angle)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "(i64, i64)", try_from = "(i64, i64)")]
pub struct Angle(Rational64);

impl Angle {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "angle with zero denominator");
        Self::from_ratio(Rational64::new(num, den))
    }

    pub fn from_ratio(r: Rational64) -> Self {
        let fl = r.floor();
        Angle(r - fl)
    }

    pub fn zero() -> Self {
        Angle(Rational64::zero())
    }

    pub fn half() -> Self {
        Angle::new(1, 2)
    }

    pub fn ratio(&self) -> Rational64 {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Order of the root of unity.
    pub fn order(&self) -> i64 {
        self.denom()
    }

    /// The principal square root: halves the representative in `[0, 1)`.
    pub fn sqrt(&self) -> Self {
        Angle(self.0 / 2)
    }

    pub fn to_complex(&self) -> Complex64 {
        let t = std::f64::consts::TAU * (*self.0.numer() as f64) / (*self.0.denom() as f64);
        Complex64::new(t.cos(), t.sin())
    }

    /// Returns the angle `a` with `exp(2 pi i a) = z`, provided `z` is within
    /// `tol` of a root of unity of order dividing `max_order`.
    pub fn recognize(z: Complex64, max_order: i64, tol: f64) -> Option<Self> {
        if (z.norm() - 1.0).abs() > tol {
            return None;
        }
        let t = z.arg() / std::f64::consts::TAU;
        for n in 1..=max_order {
            let k = (t * n as f64).round() as i64;
            let a = Angle::new(k, n);
            if (a.to_complex() - z).norm() < tol {
                return Some(a);
            }
        }
        None
    }

    pub fn lcm_denom(angles: &[Angle]) -> i64 {
        angles.iter().fold(1i64, |acc, a| acc.lcm(&a.denom()))
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::zero()
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({}/{})", self.numer(), self.denom())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl From<Angle> for (i64, i64) {
    fn from(a: Angle) -> Self {
        (a.numer(), a.denom())
    }
}

impl TryFrom<(i64, i64)> for Angle {
    type Error = String;
    fn try_from((n, d): (i64, i64)) -> Result<Self, Self::Error> {
        if d == 0 {
            return Err("angle denominator must be nonzero".into());
        }
        Ok(Angle::new(n, d))
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::from_ratio(self.0 + rhs.0)
    }
}

impl AddAssign for Angle {
    fn add_assign(&mut self, rhs: Angle) {
        *self = *self + rhs;
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::from_ratio(-self.0)
    }
}

impl Mul<i64> for Angle {
    type Output = Angle;
    fn mul(self, k: i64) -> Angle {
        // reduce k modulo the denominator first to keep the numerator small
        let d = self.denom();
        let k = k.rem_euclid(d);
        Angle::from_ratio(Rational64::new((self.numer() * k) % d, d))
    }
}

impl std::iter::Sum for Angle {
    fn sum<I: Iterator<Item = Angle>>(iter: I) -> Angle {
        iter.fold(Angle::zero(), |a, b| a + b)
    }
}
