//! The ground field `Q_p` and its three quadratic extensions `Q_p(sqrt d)`,
//! with residue-ring enumeration for the finite-sum oracles.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{AsaiError, Result};
use crate::padic::{PAdic, Qp};

/// Ramification type of `E = Q_p(sqrt d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtKind {
    /// `d = u`, the smallest quadratic non-residue.
    Unramified,
    /// `d = p`.
    RamifiedP,
    /// `d = u p`.
    RamifiedUp,
}

impl ExtKind {
    pub const ALL: [ExtKind; 3] = [ExtKind::Unramified, ExtKind::RamifiedP, ExtKind::RamifiedUp];

    pub fn name(&self) -> &'static str {
        match self {
            ExtKind::Unramified => "unramified",
            ExtKind::RamifiedP => "ramified-p",
            ExtKind::RamifiedUp => "ramified-up",
        }
    }
}

impl std::str::FromStr for ExtKind {
    type Err = AsaiError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unramified" => Ok(ExtKind::Unramified),
            "ramified-p" => Ok(ExtKind::RamifiedP),
            "ramified-up" => Ok(ExtKind::RamifiedUp),
            _ => Err(AsaiError::Invalid(format!("unknown extension type '{s}'"))),
        }
    }
}

/// `a + b sqrt(d)`; elements of the ground field have `b = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct EElement {
    pub a: PAdic,
    pub b: PAdic,
}

impl EElement {
    pub fn new(a: PAdic, b: PAdic) -> Self {
        EElement { a, b }
    }

    pub fn from_base(a: PAdic) -> Self {
        EElement { a, b: a.ctx().zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn in_base(&self) -> bool {
        self.b.is_zero()
    }

    pub fn scale(&self, c: PAdic) -> Self {
        EElement { a: self.a * c, b: self.b * c }
    }
}

impl fmt::Debug for EElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{:?}", self.a)
        } else {
            write!(f, "({:?}) + ({:?})sqrt(d)", self.a, self.b)
        }
    }
}

impl Add for EElement {
    type Output = EElement;
    fn add(self, o: EElement) -> EElement {
        EElement { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for EElement {
    type Output = EElement;
    fn sub(self, o: EElement) -> EElement {
        EElement { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for EElement {
    type Output = EElement;
    fn neg(self) -> EElement {
        EElement { a: -self.a, b: -self.b }
    }
}

/// A quadratic extension `E = F(sqrt d)` of `F = Q_p` with the canonical
/// choice of `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtension {
    base: Qp,
    kind: ExtKind,
    d: PAdic,
    u: u64,
}

impl QuadExtension {
    pub fn new(base: Qp, kind: ExtKind) -> Self {
        let u = base.smallest_nonresidue();
        let d = match kind {
            ExtKind::Unramified => base.from_i64(u as i64),
            ExtKind::RamifiedP => base.from_i64(base.p() as i64),
            ExtKind::RamifiedUp => base.from_i64((u * base.p()) as i64),
        };
        QuadExtension { base, kind, d, u }
    }

    pub fn base(&self) -> Qp {
        self.base
    }

    pub fn kind(&self) -> ExtKind {
        self.kind
    }

    pub fn d(&self) -> PAdic {
        self.d
    }

    /// The smallest quadratic non-residue mod p.
    pub fn nonresidue(&self) -> u64 {
        self.u
    }

    pub fn e(&self) -> u32 {
        if self.kind == ExtKind::Unramified {
            1
        } else {
            2
        }
    }

    pub fn f(&self) -> u32 {
        3 - self.e()
    }

    pub fn is_ramified(&self) -> bool {
        self.e() == 2
    }

    pub fn sqrt_d(&self) -> EElement {
        EElement::new(self.base.zero(), self.base.one())
    }

    /// The canonical trace-zero element: `sqrt d` when unramified and
    /// `1/sqrt d` when ramified, so that `c(psi_xi) = 0` for the standard
    /// character.
    pub fn xi(&self) -> EElement {
        match self.kind {
            ExtKind::Unramified => self.sqrt_d(),
            _ => EElement::new(self.base.zero(), self.d.inv()),
        }
    }

    pub fn uniformizer(&self) -> EElement {
        match self.kind {
            ExtKind::Unramified => EElement::from_base(self.base.pi_pow(1)),
            _ => self.sqrt_d(),
        }
    }

    /// The unit `p / uniformizer^e`.
    pub fn unit_of_p(&self) -> EElement {
        match self.kind {
            ExtKind::Unramified | ExtKind::RamifiedP => EElement::from_base(self.base.one()),
            ExtKind::RamifiedUp => EElement::from_base(self.base.from_i64(self.u as i64).inv()),
        }
    }

    pub fn field(&self) -> LocalField {
        LocalField::Quad(*self)
    }
}

/// Either the ground field or a quadratic extension; elements of both are
/// represented as [`EElement`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalField {
    Ground(Qp),
    Quad(QuadExtension),
}

/// Which of `F` and `E` a character lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    F,
    E,
}

fn ceil_half(m: u32) -> u32 {
    m.div_ceil(2)
}

impl LocalField {
    pub fn base(&self) -> Qp {
        match self {
            LocalField::Ground(k) => *k,
            LocalField::Quad(e) => e.base,
        }
    }

    pub fn tag(&self) -> FieldTag {
        match self {
            LocalField::Ground(_) => FieldTag::F,
            LocalField::Quad(_) => FieldTag::E,
        }
    }

    pub fn quad(&self) -> Option<&QuadExtension> {
        match self {
            LocalField::Ground(_) => None,
            LocalField::Quad(e) => Some(e),
        }
    }

    pub fn p(&self) -> u64 {
        self.base().p()
    }

    pub fn e(&self) -> u32 {
        self.quad().map_or(1, |q| q.e())
    }

    pub fn f(&self) -> u32 {
        self.quad().map_or(1, |q| q.f())
    }

    /// Residue field cardinality.
    pub fn q(&self) -> u64 {
        self.p().pow(self.f())
    }

    pub fn precision(&self) -> u32 {
        self.base().precision()
    }

    /// Largest `m` for which residues modulo the `m`-th power of the maximal
    /// ideal are reliable.
    pub fn max_level(&self) -> u32 {
        self.precision() * self.e()
    }

    pub fn zero(&self) -> EElement {
        EElement::from_base(self.base().zero())
    }

    pub fn one(&self) -> EElement {
        EElement::from_base(self.base().one())
    }

    pub fn from_i64(&self, n: i64) -> EElement {
        EElement::from_base(self.base().from_i64(n))
    }

    pub fn from_rational(&self, n: i64, d: i64) -> Result<EElement> {
        Ok(EElement::from_base(self.base().from_rational(n, d)?))
    }

    pub fn embed(&self, a: PAdic) -> EElement {
        EElement::from_base(a)
    }

    pub fn mul(&self, x: &EElement, y: &EElement) -> EElement {
        match self {
            LocalField::Ground(_) => EElement::from_base(x.a * y.a),
            LocalField::Quad(e) => EElement {
                a: x.a * y.a + e.d * x.b * y.b,
                b: x.a * y.b + x.b * y.a,
            },
        }
    }

    pub fn checked_inv(&self, x: &EElement) -> Result<EElement> {
        match self {
            LocalField::Ground(_) => Ok(EElement::from_base(x.a.checked_inv()?)),
            LocalField::Quad(e) => {
                let n = x.a * x.a - e.d * x.b * x.b;
                let ni = n.checked_inv()?;
                Ok(EElement { a: x.a * ni, b: -(x.b * ni) })
            }
        }
    }

    pub fn inv(&self, x: &EElement) -> EElement {
        self.checked_inv(x).expect("inverse of zero")
    }

    pub fn div(&self, x: &EElement, y: &EElement) -> Result<EElement> {
        Ok(self.mul(x, &self.checked_inv(y)?))
    }

    pub fn pow(&self, x: &EElement, k: i64) -> EElement {
        if k < 0 {
            return self.pow(&self.inv(x), -k);
        }
        let mut result = self.one();
        let mut base = *x;
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// Normalized valuation, `ord(uniformizer) = 1`.
    pub fn ord(&self, x: &EElement) -> Result<i64> {
        if x.is_zero() {
            return Err(AsaiError::ValuationOfZero);
        }
        let oa = x.a.val();
        let ob = x.b.val();
        let v = match self {
            LocalField::Ground(_) => oa.expect("ground element has nonzero a"),
            LocalField::Quad(e) => match e.kind {
                ExtKind::Unramified => match (oa, ob) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => unreachable!(),
                },
                _ => match (oa, ob) {
                    (Some(a), Some(b)) => (2 * a).min(2 * b + 1),
                    (Some(a), None) => 2 * a,
                    (None, Some(b)) => 2 * b + 1,
                    (None, None) => unreachable!(),
                },
            },
        };
        Ok(v)
    }

    /// `|x|_K = q_K^{-ord x}`.
    pub fn abs(&self, x: &EElement) -> f64 {
        match self.ord(x) {
            Ok(v) => (self.q() as f64).powi(-(v as i32)),
            Err(_) => 0.0,
        }
    }

    pub fn uniformizer(&self) -> EElement {
        match self {
            LocalField::Ground(k) => EElement::from_base(k.pi_pow(1)),
            LocalField::Quad(e) => e.uniformizer(),
        }
    }

    /// `uniformizer^k` for any integer `k`.
    pub fn pi_pow(&self, k: i64) -> EElement {
        let base = self.base();
        match self {
            LocalField::Quad(e) if e.is_ramified() => {
                let j = k.div_euclid(2);
                let dj = e.d.pow(j);
                if k.rem_euclid(2) == 0 {
                    EElement::from_base(dj)
                } else {
                    EElement::new(base.zero(), dj)
                }
            }
            _ => EElement::from_base(base.pi_pow(k)),
        }
    }

    /// `x / uniformizer^{ord x}`.
    pub fn unit_part(&self, x: &EElement) -> Result<EElement> {
        let v = self.ord(x)?;
        Ok(self.mul(x, &self.pi_pow(-v)))
    }

    pub fn sigma(&self, x: &EElement) -> EElement {
        EElement { a: x.a, b: -x.b }
    }

    /// `tr_{K/Q_p}`.
    pub fn trace(&self, x: &EElement) -> PAdic {
        match self {
            LocalField::Ground(_) => x.a,
            LocalField::Quad(_) => x.a + x.a,
        }
    }

    /// `N_{K/Q_p}`.
    pub fn norm(&self, x: &EElement) -> PAdic {
        match self {
            LocalField::Ground(_) => x.a,
            LocalField::Quad(e) => x.a * x.a - e.d * x.b * x.b,
        }
    }

    /// Trace, norm and conjugate in one call.
    pub fn trace_norm_sigma(&self, x: &EElement) -> (PAdic, PAdic, EElement) {
        (self.trace(x), self.norm(x), self.sigma(x))
    }

    /// `Z_p`-basis of the ring of integers.
    pub fn integral_basis(&self) -> Vec<EElement> {
        match self {
            LocalField::Ground(_) => vec![self.one()],
            LocalField::Quad(e) => vec![self.one(), e.sqrt_d()],
        }
    }

    /// Lifts of an `F_p`-basis of the residue field.
    pub fn residue_basis(&self) -> Vec<EElement> {
        match self {
            LocalField::Quad(e) if !e.is_ramified() => vec![self.one(), e.sqrt_d()],
            _ => vec![self.one()],
        }
    }

    /// Coordinates of an integral element's residue class in the basis
    /// [`Self::residue_basis`].
    pub fn residue_coords(&self, x: &EElement) -> Result<Vec<u64>> {
        match self {
            LocalField::Quad(e) if !e.is_ramified() => Ok(vec![x.a.residue(1)?, x.b.residue(1)?]),
            _ => Ok(vec![x.a.residue(1)?]),
        }
    }

    /// How many `p`-adic digits of `(a, b)` determine a class modulo
    /// `uniformizer^m`.
    pub fn digit_split(&self, m: u32) -> (u32, u32) {
        match self {
            LocalField::Ground(_) => (m, 0),
            LocalField::Quad(e) if !e.is_ramified() => (m, m),
            LocalField::Quad(_) => (ceil_half(m), m / 2),
        }
    }

    /// Canonical residues `(a mod p^i, b mod p^j)` of an integral element
    /// modulo `uniformizer^m`.
    pub fn reduce(&self, x: &EElement, m: u32) -> Result<(u64, u64)> {
        let (i, j) = self.digit_split(m);
        Ok((x.a.residue(i)?, x.b.residue(j)?))
    }

    fn check_level(&self, m: u32) -> Result<()> {
        let (i, j) = self.digit_split(m);
        let needed = i.max(j);
        if needed > self.precision() {
            return Err(AsaiError::Precision { needed: needed as i64, available: self.precision() });
        }
        Ok(())
    }

    /// Representatives of the units modulo `uniformizer^m`, `m >= 1`.
    pub fn unit_representatives(&self, m: u32) -> Result<Vec<EElement>> {
        if m == 0 {
            return Ok(vec![self.one()]);
        }
        self.check_level(m)?;
        let base = self.base();
        let p = self.p();
        let (i, j) = self.digit_split(m);
        let (ni, nj) = (p.pow(i), p.pow(j));
        let unramified_quad = matches!(self, LocalField::Quad(e) if !e.is_ramified());
        let mut out = Vec::with_capacity(((self.q() - 1) * self.q().pow(m - 1)) as usize);
        for a in 0..ni {
            for b in 0..nj {
                let unit = if unramified_quad { a % p != 0 || b % p != 0 } else { a % p != 0 };
                if unit {
                    out.push(EElement::new(base.from_i64(a as i64), base.from_i64(b as i64)));
                }
            }
        }
        Ok(out)
    }

    /// Representatives of `{x : ord x = v}` modulo `uniformizer^{v+m}`.
    pub fn shell_representatives(&self, v: i64, m: u32) -> Result<Vec<EElement>> {
        if m > self.max_level() {
            return Err(AsaiError::Precision { needed: m as i64, available: self.precision() });
        }
        let pv = self.pi_pow(v);
        Ok(self.unit_representatives(m)?.iter().map(|u| self.mul(&pv, u)).collect())
    }

    /// Representatives of the ring of integers modulo `uniformizer^m`.
    pub fn integer_representatives(&self, m: u32) -> Result<Vec<EElement>> {
        self.check_level(m)?;
        let base = self.base();
        let p = self.p();
        let (i, j) = self.digit_split(m);
        let mut out = Vec::new();
        for a in 0..p.pow(i) {
            for b in 0..p.pow(j) {
                out.push(EElement::new(base.from_i64(a as i64), base.from_i64(b as i64)));
            }
        }
        Ok(out)
    }
}
