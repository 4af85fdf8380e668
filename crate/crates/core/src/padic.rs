//! Fixed-precision p-adic numbers: a valuation together with a unit known
//! modulo `p^N`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{AsaiError, Result};

/// The ground field `Q_p` at a fixed working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QpRepr", into = "QpRepr")]
pub struct Qp {
    p: u64,
    prec: u32,
    pn: u64,
}

/// Name used for the ground field in descriptors.
pub type PAdicGround = Qp;

#[derive(Serialize, Deserialize)]
struct QpRepr {
    p: u64,
    precision: u32,
}

impl TryFrom<QpRepr> for Qp {
    type Error = AsaiError;
    fn try_from(r: QpRepr) -> Result<Self> {
        Qp::new(r.p, r.precision)
    }
}

impl From<Qp> for QpRepr {
    fn from(q: Qp) -> Self {
        QpRepr { p: q.p, precision: q.prec }
    }
}

pub const MIN_PRECISION: u32 = 8;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

pub(crate) fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl Qp {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(AsaiError::Invalid(format!("p = {p} must be an odd prime")));
        }
        if prec < MIN_PRECISION {
            return Err(AsaiError::Invalid(format!(
                "precision {prec} below the minimum {MIN_PRECISION}"
            )));
        }
        let mut pn: u64 = 1;
        for _ in 0..prec {
            pn = pn
                .checked_mul(p)
                .filter(|v| *v < (1u64 << 62))
                .ok_or_else(|| AsaiError::Invalid(format!("p^{prec} does not fit in 62 bits")))?;
        }
        Ok(Qp { p, prec, pn })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue field cardinality.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.pn
    }

    /// `p^k` as an integer, `k <= precision`.
    pub fn p_pow(&self, k: u32) -> u64 {
        assert!(k <= self.prec, "p^{k} exceeds working modulus");
        self.p.pow(k)
    }

    pub fn zero(&self) -> PAdic {
        PAdic { ctx: *self, val: 0, unit: 0 }
    }

    pub fn one(&self) -> PAdic {
        PAdic { ctx: *self, val: 0, unit: 1 }
    }

    /// `p^k`.
    pub fn pi_pow(&self, k: i64) -> PAdic {
        PAdic { ctx: *self, val: k, unit: 1 }
    }

    pub fn from_i64(&self, n: i64) -> PAdic {
        if n == 0 {
            return self.zero();
        }
        let mut m = n.unsigned_abs();
        let mut v = 0i64;
        while m.is_multiple_of(self.p) {
            m /= self.p;
            v += 1;
        }
        let u = (m % self.pn) as u128;
        let unit = if n < 0 { (self.pn as u128 - u) % self.pn as u128 } else { u } as u64;
        PAdic { ctx: *self, val: v, unit }
    }

    pub fn from_rational(&self, num: i64, den: i64) -> Result<PAdic> {
        if den == 0 {
            return Err(AsaiError::Invalid("zero denominator".into()));
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n.checked_div(&d)
    }

    pub fn from_ratio(&self, r: Rational64) -> Result<PAdic> {
        self.from_rational(*r.numer(), *r.denom())
    }

    /// Build an element from a valuation and a unit residue.
    pub fn from_parts(&self, val: i64, unit: u64) -> PAdic {
        let u = unit % self.pn;
        if u == 0 {
            return self.zero();
        }
        assert!(!u.is_multiple_of(self.p), "from_parts: residue is not a unit");
        PAdic { ctx: *self, val, unit: u }
    }

    /// Reduce `val, s` to normal form, where `s` is a residue mod `p^N`.
    fn normalize(&self, val: i64, mut s: u64) -> PAdic {
        if s == 0 {
            return self.zero();
        }
        let mut v = val;
        while s.is_multiple_of(self.p) {
            s /= self.p;
            v += 1;
        }
        PAdic { ctx: *self, val: v, unit: s }
    }

    /// Smallest quadratic non-residue modulo p.
    pub fn smallest_nonresidue(&self) -> u64 {
        (2..self.p).find(|&u| legendre(u, self.p) == -1).expect("odd prime has a non-residue")
    }

    /// A generator of `(Z/p)^x`.
    pub fn primitive_root(&self) -> u64 {
        let n = self.p - 1;
        let factors = prime_factors(n);
        (2..self.p)
            .find(|&g| factors.iter().all(|&r| pow_mod(g, n / r, self.p) != 1))
            .unwrap_or(1)
    }
}

pub(crate) fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r: u128 = 1 % m as u128;
    let mut b = (b % m) as u128;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Legendre symbol `(a / p)` for an odd prime `p`.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A p-adic number `p^val * unit` with `unit` known modulo `p^N`.
/// The zero element has `unit == 0`.
#[derive(Clone, Copy)]
pub struct PAdic {
    ctx: Qp,
    val: i64,
    unit: u64,
}

impl PAdic {
    pub fn ctx(&self) -> Qp {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.unit == 0
    }

    pub fn val(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn ord(&self) -> Result<i64> {
        self.val().ok_or(AsaiError::ValuationOfZero)
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn unit_part(&self) -> PAdic {
        PAdic { ctx: self.ctx, val: 0, unit: self.unit }
    }

    /// `|x|_p^s` as a real number; zero maps to zero.
    pub fn abs(&self) -> f64 {
        match self.val() {
            None => 0.0,
            Some(v) => (self.ctx.p as f64).powi(-(v as i32)),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.val >= 0
    }

    pub fn checked_inv(&self) -> Result<PAdic> {
        if self.is_zero() {
            return Err(AsaiError::Invalid("inverse of zero".into()));
        }
        let u = mod_inv(self.unit, self.ctx.pn).expect("unit is invertible");
        Ok(PAdic { ctx: self.ctx, val: -self.val, unit: u })
    }

    pub fn inv(&self) -> PAdic {
        self.checked_inv().expect("inverse of zero p-adic number")
    }

    pub fn checked_div(&self, other: &PAdic) -> Result<PAdic> {
        Ok(*self * other.checked_inv()?)
    }

    pub fn pow(&self, k: i64) -> PAdic {
        if k < 0 {
            return self.inv().pow(-k);
        }
        if self.is_zero() {
            return if k == 0 { self.ctx.one() } else { *self };
        }
        let unit = pow_mod(self.unit, k as u64, self.ctx.pn);
        PAdic { ctx: self.ctx, val: self.val * k, unit }
    }

    /// The residue class of an integral element modulo `p^k`.
    pub fn residue(&self, k: u32) -> Result<u64> {
        if self.is_zero() {
            return Ok(0);
        }
        if self.val < 0 {
            return Err(AsaiError::Invalid("residue of a non-integral element".into()));
        }
        if self.val >= k as i64 {
            return Ok(0);
        }
        let needed = k as i64;
        if needed > self.val + self.ctx.prec as i64 {
            return Err(AsaiError::Precision { needed, available: self.ctx.prec });
        }
        let pk = self.ctx.p.pow(k) as u128;
        let shift = self.ctx.p.pow(self.val as u32) as u128;
        Ok(((self.unit as u128 % pk) * shift % pk) as u64)
    }

    /// The fractional part in `Z[1/p]/Z`, which defines the standard
    /// additive character `exp(2 pi i frac(x))`.
    pub fn frac(&self) -> Result<Angle> {
        if self.is_integral() {
            return Ok(Angle::zero());
        }
        let k = -self.val;
        if k > self.ctx.prec as i64 {
            return Err(AsaiError::Precision { needed: k, available: self.ctx.prec });
        }
        let pk = self.ctx.p.pow(k as u32);
        Ok(Angle::new((self.unit % pk) as i64, pk as i64))
    }

    /// Rational number congruent to `self` whose p-adic digits agree up to
    /// the working precision; exact for elements of `Z[1/p]`.
    pub fn approx_rational(&self) -> (i128, i64) {
        if self.is_zero() {
            return (0, 0);
        }
        let half = self.ctx.pn / 2;
        let u = if self.unit > half { self.unit as i128 - self.ctx.pn as i128 } else { self.unit as i128 };
        (u, self.val)
    }
}

impl PartialEq for PAdic {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.val == other.val && self.unit == other.unit
    }
}

impl Eq for PAdic {}

impl Hash for PAdic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        if self.is_zero() {
            0u64.hash(state);
        } else {
            self.val.hash(state);
            self.unit.hash(state);
        }
    }
}

impl fmt::Debug for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}^{}*{}", self.ctx.p, self.val, self.unit)
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for PAdic {
    type Output = PAdic;
    fn add(self, o: PAdic) -> PAdic {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let ctx = self.ctx;
        let (x, y) = if self.val <= o.val { (self, o) } else { (o, self) };
        let shift = y.val - x.val;
        if shift >= ctx.prec as i64 {
            return x;
        }
        let pn = ctx.pn as u128;
        let t = (y.unit as u128 * ctx.p.pow(shift as u32) as u128) % pn;
        let s = ((x.unit as u128 + t) % pn) as u64;
        ctx.normalize(x.val, s)
    }
}

impl Neg for PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        if self.is_zero() {
            return self;
        }
        PAdic { unit: self.ctx.pn - self.unit, ..self }
    }
}

impl Sub for PAdic {
    type Output = PAdic;
    fn sub(self, o: PAdic) -> PAdic {
        self + (-o)
    }
}

impl Mul for PAdic {
    type Output = PAdic;
    fn mul(self, o: PAdic) -> PAdic {
        if self.is_zero() || o.is_zero() {
            return self.ctx.zero();
        }
        let unit = ((self.unit as u128 * o.unit as u128) % self.ctx.pn as u128) as u64;
        PAdic { ctx: self.ctx, val: self.val + o.val, unit }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> Qp {
        Qp::new(3, 12).unwrap()
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(Qp::new(2, 12).is_err());
        assert!(Qp::new(9, 12).is_err());
        assert!(Qp::new(5, 4).is_err());
        assert!(Qp::new(7, 12).is_ok());
    }

    #[test]
    fn valuation_of_integers_and_fractions() {
        let k = q3();
        assert_eq!(k.from_i64(3).ord().unwrap(), 1);
        assert_eq!(k.from_i64(18).ord().unwrap(), 2);
        assert_eq!(k.from_rational(1, 9).unwrap().ord().unwrap(), -2);
        assert_eq!(k.zero().ord(), Err(AsaiError::ValuationOfZero));
    }

    #[test]
    fn ring_operations() {
        let k = q3();
        let a = k.from_rational(5, 7).unwrap();
        let b = k.from_rational(-2, 9).unwrap();
        assert_eq!(a + b, k.from_rational(5 * 9 - 14, 63).unwrap());
        assert_eq!(a * b, k.from_rational(-10, 63).unwrap());
        assert_eq!(a - a, k.zero());
        assert_eq!(a * a.inv(), k.one());
        assert_eq!(b.pow(3), k.from_rational(-8, 729).unwrap());
    }

    #[test]
    fn fractional_part_is_exact() {
        let k = q3();
        assert_eq!(k.from_rational(1, 3).unwrap().frac().unwrap(), Angle::new(1, 3));
        assert_eq!(k.from_rational(7, 9).unwrap().frac().unwrap(), Angle::new(7, 9));
        // 1/2 = (1 + 3 + 9 + ...) / ... is integral at 3
        assert!(k.from_rational(1, 2).unwrap().frac().unwrap().is_zero());
        // -1/3 has fractional part 2/3
        assert_eq!(k.from_rational(-1, 3).unwrap().frac().unwrap(), Angle::new(2, 3));
    }

    #[test]
    fn residues() {
        let k = q3();
        assert_eq!(k.from_i64(-1).residue(2).unwrap(), 8);
        assert_eq!(k.from_rational(1, 2).unwrap().residue(1).unwrap(), 2);
        assert_eq!(k.from_i64(6).residue(2).unwrap(), 6);
    }

    #[test]
    fn legendre_and_roots() {
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 5), 1);
        assert_eq!(Qp::new(5, 12).unwrap().smallest_nonresidue(), 2);
        assert_eq!(Qp::new(7, 12).unwrap().smallest_nonresidue(), 3);
        assert_eq!(Qp::new(7, 12).unwrap().primitive_root(), 3);
    }
}
