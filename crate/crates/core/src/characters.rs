//! Multiplicative and additive characters of `F^x`, `E^x`, `F` and `E`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{AsaiError, Result};
use crate::field::{EElement, FieldTag, LocalField, QuadExtension};
use crate::padic::legendre;
use crate::snf::solve_mod;
use crate::units::UnitGroup;

/// Value of a character on the chosen uniformizer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnifValue {
    /// A root of unity, kept exact.
    Exact(Angle),
    Complex(Complex64),
}

impl UnifValue {
    pub fn one() -> Self {
        UnifValue::Exact(Angle::zero())
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            UnifValue::Exact(a) => a.to_complex(),
            UnifValue::Complex(z) => *z,
        }
    }

    pub fn as_angle(&self) -> Option<Angle> {
        match self {
            UnifValue::Exact(a) => Some(*a),
            UnifValue::Complex(_) => None,
        }
    }

    pub fn mul(&self, o: &UnifValue) -> UnifValue {
        match (self, o) {
            (UnifValue::Exact(a), UnifValue::Exact(b)) => UnifValue::Exact(*a + *b),
            _ => UnifValue::Complex(self.to_complex() * o.to_complex()),
        }
    }

    pub fn mul_angle(&self, a: Angle) -> UnifValue {
        self.mul(&UnifValue::Exact(a))
    }

    pub fn pow(&self, k: i64) -> UnifValue {
        match self {
            UnifValue::Exact(a) => UnifValue::Exact(*a * k),
            UnifValue::Complex(z) => UnifValue::Complex(z.powi(k as i32)),
        }
    }

    pub fn inv(&self) -> UnifValue {
        self.pow(-1)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> UnifValue {
        match self {
            UnifValue::Exact(a) => UnifValue::Exact(a.sqrt()),
            UnifValue::Complex(z) => UnifValue::Complex(z.sqrt()),
        }
    }
}

/// A character of `K^x`: `x -> t^{ord x} * chi0(unit(x)) * |x|_K^lambda`, with
/// `chi0` given by exact angles on the generators of `(O_K/uniformizer^level)^x`.
#[derive(Clone, Debug)]
pub struct MultChar {
    field: LocalField,
    group: Arc<UnitGroup>,
    angles: Vec<Angle>,
    t: UnifValue,
    lambda: Complex64,
    conductor: u32,
}

fn conductor_from_angles(group: &UnitGroup, angles: &[Angle]) -> u32 {
    angles
        .iter()
        .zip(group.generator_levels())
        .filter(|(a, _)| !a.is_zero())
        .map(|(_, &k)| k + 1)
        .max()
        .unwrap_or(0)
}

impl MultChar {
    /// Builds a character from generator angles at `level`, checking the
    /// relations and recomputing the conductor.
    pub fn from_angles(field: &LocalField, level: u32, angles: Vec<Angle>, t: UnifValue, lambda: Complex64) -> Result<Self> {
        let group = UnitGroup::get(field, level)?;
        if !group.is_character(&angles) {
            return Err(AsaiError::Invalid(format!(
                "angles {angles:?} do not define a character of the unit group at level {level}"
            )));
        }
        let conductor = conductor_from_angles(&group, &angles);
        let mut chi = MultChar { field: *field, group, angles, t, lambda, conductor };
        let target = conductor.max(1);
        if target != chi.level() {
            chi = chi.at_level(target)?;
        }
        Ok(chi)
    }

    pub fn trivial(field: &LocalField) -> Self {
        Self::unramified(field, UnifValue::one(), Complex64::new(0.0, 0.0))
    }

    pub fn unramified(field: &LocalField, t: UnifValue, lambda: Complex64) -> Self {
        let group = UnitGroup::get(field, 1).expect("level-one unit group");
        let angles = vec![Angle::zero(); group.generators().len()];
        MultChar { field: *field, group, angles, t, lambda, conductor: 0 }
    }

    /// `|x|_K^lambda`.
    pub fn abs_power(field: &LocalField, lambda: Complex64) -> Self {
        Self::unramified(field, UnifValue::one(), lambda)
    }

    /// A uniformly random character of `(O_K/uniformizer^level)^x` with `t` a root of
    /// unity of order dividing 12.
    pub fn random<R: Rng + ?Sized>(field: &LocalField, level: u32, rng: &mut R) -> Result<Self> {
        let group = UnitGroup::get(field, level)?;
        let k: Vec<i128> = group.invariants().iter().map(|&d| rng.gen_range(0..d.max(1))).collect();
        let angles = group.character_angles(&k);
        let t = UnifValue::Exact(Angle::new(rng.gen_range(0..12), 12));
        Self::from_angles(field, level, angles, t, Complex64::new(0.0, 0.0))
    }

    /// A random character with exactly the given conductor.
    pub fn random_with_conductor<R: Rng + ?Sized>(field: &LocalField, conductor: u32, rng: &mut R) -> Result<Self> {
        for _ in 0..10_000 {
            let chi = Self::random(field, conductor.max(1), rng)?;
            if chi.conductor() == conductor {
                return Ok(chi);
            }
        }
        Err(AsaiError::Invalid(format!("no character of conductor {conductor} found")))
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn tag(&self) -> FieldTag {
        self.field.tag()
    }

    pub fn level(&self) -> u32 {
        self.group.level()
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn t(&self) -> UnifValue {
        self.t
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor == 0
    }

    /// Whether all values are roots of unity known exactly.
    pub fn is_exact(&self) -> bool {
        self.t.as_angle().is_some() && self.lambda.norm() == 0.0
    }

    /// The same character presented at another level (`>= conductor`).
    pub fn at_level(&self, level: u32) -> Result<Self> {
        let level = level.max(1);
        if level < self.conductor {
            return Err(AsaiError::Invalid(format!(
                "level {level} below conductor {}",
                self.conductor
            )));
        }
        let group = UnitGroup::get(&self.field, level)?;
        let n = group.generators().len();
        let mut angles = self.angles.clone();
        angles.resize(n, Angle::zero());
        Ok(MultChar { group, angles, ..self.clone() })
    }

    /// `chi0(u)` for a unit `u`.
    pub fn unit_angle(&self, u: &EElement) -> Result<Angle> {
        self.group.evaluate(&self.angles, u)
    }

    pub fn eval(&self, x: &EElement) -> Result<Complex64> {
        let v = self.field.ord(x)?;
        let u = self.field.unit_part(x)?;
        let a = self.unit_angle(&u)?;
        let q = self.field.q() as f64;
        let abs = (-(v as f64) * q.ln() * self.lambda).exp();
        Ok(self.t.pow(v).to_complex() * a.to_complex() * abs)
    }

    /// Exact value as a root of unity, if the character is exact.
    pub fn eval_exact(&self, x: &EElement) -> Result<Option<Angle>> {
        if !self.is_exact() {
            return Ok(None);
        }
        let v = self.field.ord(x)?;
        let u = self.field.unit_part(x)?;
        let a = self.unit_angle(&u)?;
        Ok(Some(self.t.as_angle().expect("exact") * v + a))
    }

    /// Value on the uniformizer including the `|.|^lambda` part.
    pub fn value_on_uniformizer(&self) -> Complex64 {
        let q = self.field.q() as f64;
        self.t.to_complex() * (-q.ln() * self.lambda).exp()
    }

    fn check_same_field(&self, o: &MultChar) -> Result<()> {
        if self.field != o.field {
            return Err(AsaiError::Invalid("characters live on different fields".into()));
        }
        Ok(())
    }

    pub fn mul(&self, o: &MultChar) -> Result<MultChar> {
        self.check_same_field(o)?;
        let level = self.level().max(o.level());
        let a = self.at_level(level)?;
        let b = o.at_level(level)?;
        let angles = a.angles.iter().zip(&b.angles).map(|(x, y)| *x + *y).collect();
        MultChar::from_angles(&self.field, level, angles, self.t.mul(&o.t), self.lambda + o.lambda)
    }

    pub fn inv(&self) -> MultChar {
        let angles = self.angles.iter().map(|a| -*a).collect();
        MultChar { angles, t: self.t.inv(), lambda: -self.lambda, ..self.clone() }
    }

    pub fn pow(&self, k: i64) -> MultChar {
        let angles: Vec<Angle> = self.angles.iter().map(|a| *a * k).collect();
        MultChar::from_angles(&self.field, self.level(), angles, self.t.pow(k), self.lambda * k as f64)
            .expect("powers of characters are characters")
    }

    /// Twist by `|.|^s`.
    pub fn shift(&self, s: Complex64) -> MultChar {
        MultChar { lambda: self.lambda + s, ..self.clone() }
    }

    /// Pointwise equality on generators, the uniformizer and the twist.
    pub fn approx_eq(&self, o: &MultChar, tol: f64) -> bool {
        if self.field != o.field || self.conductor != o.conductor {
            return false;
        }
        let level = self.level().max(o.level());
        let (Ok(a), Ok(b)) = (self.at_level(level), o.at_level(level)) else { return false };
        a.angles == b.angles
            && (self.t.to_complex() - o.t.to_complex()).norm() < tol
            && (self.lambda - o.lambda).norm() < tol
    }

    /// `chi|_{F^x}` for a character of `E^x`.
    pub fn restrict_to_f(&self) -> Result<MultChar> {
        let ext = *self
            .field
            .quad()
            .ok_or_else(|| AsaiError::Invalid("restriction needs a character of E^x".into()))?;
        let f = LocalField::Ground(ext.base());
        let level_f = self.level().div_ceil(ext.e()).max(1);
        let gf = UnitGroup::get(&f, level_f)?;
        let angles = gf
            .generators()
            .iter()
            .map(|g| self.unit_angle(g))
            .collect::<Result<Vec<_>>>()?;
        let t = self.t.pow(ext.e() as i64).mul_angle(self.unit_angle(&ext.unit_of_p())?);
        MultChar::from_angles(&f, level_f, angles, t, self.lambda * 2.0)
    }

    /// An extension of a character of `F^x` to `E^x`, found by solving the
    /// extension problem on `(O_E/uniformizer^modulus)^x`. The modulus defaults to
    /// `e * max(c(chi), 1)`.
    pub fn extend_from_f(&self, ext: &QuadExtension, modulus: Option<u32>) -> Result<MultChar> {
        if self.tag() != FieldTag::F || self.field.base() != ext.base() {
            return Err(AsaiError::Invalid("extension needs a character of the base field".into()));
        }
        let e = ext.e();
        let modulus = modulus.unwrap_or(e * self.conductor.max(1)).max(1);
        if modulus.div_ceil(e) < self.conductor {
            return Err(AsaiError::Precondition(format!(
                "modulus {modulus} too small for conductor {}",
                self.conductor
            )));
        }
        let ef = ext.field();
        let ge = UnitGroup::get(&ef, modulus)?;
        let level_f = modulus.div_ceil(e).max(1);
        let chi_f = self.at_level(level_f)?;
        let gf = chi_f.group.clone();
        let targets = chi_f.angles.clone();
        let l = targets.iter().fold(ge.exponent(), |acc, a| acc.lcm(&a.denom())) as i128;
        let n = ge.generators().len();
        let mut rows: Vec<Vec<i128>> = ge.relations().to_vec();
        let mut rhs: Vec<i128> = vec![0; rows.len()];
        for (g, a) in gf.generators().iter().zip(&targets) {
            rows.push(ge.dlog(g)?.iter().map(|&x| x as i128).collect());
            rhs.push((a.numer() as i128) * (l / a.denom() as i128));
        }
        let k = solve_mod(&rows, n, &rhs, l)
            .ok_or_else(|| AsaiError::Consistency("character extension system is inconsistent".into()))?;
        let angles: Vec<Angle> = k.iter().map(|&ki| Angle::new(ki as i64, l as i64)).collect();
        let provisional = MultChar::from_angles(&ef, modulus, angles.clone(), UnifValue::one(), Complex64::new(0.0, 0.0))?;
        let t = if ext.is_ramified() {
            let c = provisional.unit_angle(&ext.unit_of_p())?;
            self.t.mul_angle(-c).sqrt()
        } else {
            self.t
        };
        let out = MultChar::from_angles(&ef, modulus, angles, t, self.lambda / 2.0)?;
        let back = out.restrict_to_f()?;
        if !back.approx_eq(self, 1e-12) {
            return Err(AsaiError::Consistency("extension does not restrict to the input".into()));
        }
        Ok(out)
    }

    /// `chi^sigma(x) = chi(sigma x)`.
    pub fn sigma_conjugate(&self) -> Result<MultChar> {
        let ext = *self
            .field
            .quad()
            .ok_or_else(|| AsaiError::Invalid("conjugation needs a character of E^x".into()))?;
        let angles = self
            .group
            .generators()
            .iter()
            .map(|g| self.unit_angle(&self.field.sigma(g)))
            .collect::<Result<Vec<_>>>()?;
        let t = if ext.is_ramified() {
            self.t.mul_angle(self.unit_angle(&self.field.from_i64(-1))?)
        } else {
            self.t
        };
        MultChar::from_angles(&self.field, self.level(), angles, t, self.lambda)
    }

    /// `chi o N_{E/F}` for a character of `F^x`.
    pub fn compose_norm(&self, ext: &QuadExtension) -> Result<MultChar> {
        if self.tag() != FieldTag::F {
            return Err(AsaiError::Invalid("norm composition needs a character of F^x".into()));
        }
        let ef = ext.field();
        let level = (ext.e() * self.conductor).max(1);
        let ge = UnitGroup::get(&ef, level)?;
        let f = self.field;
        let angles = ge
            .generators()
            .iter()
            .map(|g| self.unit_angle(&f.embed(ef.norm(g))))
            .collect::<Result<Vec<_>>>()?;
        let n_pi = f.embed(ef.norm(&ext.uniformizer()));
        let v = f.ord(&n_pi)?;
        let t = self.t.pow(v).mul_angle(self.unit_angle(&f.unit_part(&n_pi)?)?);
        MultChar::from_angles(&ef, level, angles, t, self.lambda)
    }
}

/// The quadratic character of `F^x` attached to `E/F`.
pub fn omega_ef(ext: &QuadExtension) -> MultChar {
    let f = LocalField::Ground(ext.base());
    let p = ext.base().p();
    let sign = |s: i32| if s == 1 { Angle::zero() } else { Angle::half() };
    match ext.kind() {
        crate::field::ExtKind::Unramified => {
            MultChar::unramified(&f, UnifValue::Exact(Angle::half()), Complex64::new(0.0, 0.0))
        }
        kind => {
            let at_p = match kind {
                crate::field::ExtKind::RamifiedP => legendre(p - 1, p),
                _ => legendre(p - ext.nonresidue() % p, p),
            };
            MultChar::from_angles(&f, 1, vec![Angle::half()], UnifValue::Exact(sign(at_p)), Complex64::new(0.0, 0.0))
                .expect("Legendre character")
        }
    }
}

/// `psi(x) = psi0(tr_{K/Q_p}(eta x))` with `psi0(x) = exp(2 pi i frac(x))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AddChar {
    field: LocalField,
    eta: EElement,
    xi: Option<EElement>,
}

impl AddChar {
    /// The standard character of `K`: `psi0 o tr`.
    pub fn standard(field: &LocalField) -> Self {
        AddChar { field: *field, eta: field.one(), xi: None }
    }

    pub fn with_eta(field: &LocalField, eta: EElement) -> Result<Self> {
        if eta.is_zero() {
            return Err(AsaiError::Invalid("additive character with zero shift".into()));
        }
        Ok(AddChar { field: *field, eta, xi: None })
    }

    /// `psi^a(x) = psi(a x)`.
    pub fn shift(&self, a: &EElement) -> Result<Self> {
        let eta = self.field.mul(&self.eta, a);
        Ok(AddChar { eta, ..AddChar::with_eta(&self.field, eta)? })
    }

    /// `psi^-(x) = psi(-x)`.
    pub fn negate(&self) -> Self {
        AddChar { eta: -self.eta, ..*self }
    }

    /// `psi_xi(x) = psi(tr_{E/F}(xi x))` for `psi` on `F`.
    pub fn psi_xi(&self, ext: &QuadExtension, xi: &EElement) -> Result<Self> {
        if self.field.tag() != FieldTag::F {
            return Err(AsaiError::Invalid("psi_xi needs a character of F".into()));
        }
        let ef = ext.field();
        let eta = ef.mul(&ef.embed(self.eta.a), xi);
        Ok(AddChar { field: ef, eta, xi: Some(*xi) })
    }

    /// `psi o tr_{E/F}`.
    pub fn via_trace(&self, ext: &QuadExtension) -> Self {
        let ef = ext.field();
        AddChar { field: ef, eta: ef.embed(self.eta.a), xi: None }
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn eta(&self) -> EElement {
        self.eta
    }

    /// The element `xi` when this character was built as `psi_xi`.
    pub fn xi(&self) -> Option<EElement> {
        self.xi
    }

    pub fn angle(&self, x: &EElement) -> Result<Angle> {
        self.field.trace(&self.field.mul(&self.eta, x)).frac()
    }

    pub fn eval(&self, x: &EElement) -> Result<Complex64> {
        Ok(self.angle(x)?.to_complex())
    }

    fn trivial_on(&self, c: i64) -> Result<bool> {
        let pc = self.field.pi_pow(c);
        for b in self.field.integral_basis() {
            if !self.angle(&self.field.mul(&pc, &b))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest `c` with `psi` trivial on `uniformizer^c O_K`, found by evaluation.
    pub fn conductor(&self) -> Result<i64> {
        let guess = -self.field.ord(&self.eta)?;
        let window = 6;
        let mut c = guess - window;
        if self.trivial_on(c)? {
            return Err(AsaiError::Precision { needed: window, available: self.field.precision() });
        }
        while c <= guess + window {
            if self.trivial_on(c + 1)? {
                return Ok(c + 1);
            }
            c += 1;
        }
        Err(AsaiError::Precision { needed: window, available: self.field.precision() })
    }
}

/// `exp(2 pi i x)` for real `x`.
pub fn cis(x: f64) -> Complex64 {
    Complex64::new((TAU * x).cos(), (TAU * x).sin())
}

/// Convenience: an element `p^v * u` of `F` embedded in `K`.
pub fn pu(field: &LocalField, v: i64, u: i64) -> EElement {
    let b = field.base();
    field.embed(b.pi_pow(v) * b.from_i64(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExtKind;
    use crate::padic::Qp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ground(p: u64) -> LocalField {
        LocalField::Ground(Qp::new(p, 12).unwrap())
    }

    fn quad(p: u64, kind: ExtKind) -> QuadExtension {
        QuadExtension::new(Qp::new(p, 12).unwrap(), kind)
    }

    #[test]
    fn standard_additive_character() {
        let f = ground(3);
        let psi = AddChar::standard(&f);
        let z = psi.eval(&f.from_rational(1, 3).unwrap()).unwrap();
        assert!((z - cis(1.0 / 3.0)).norm() < 1e-14);
        assert!((psi.eval(&f.from_i64(7)).unwrap() - 1.0).norm() < 1e-14);
        assert_eq!(psi.conductor().unwrap(), 0);
        assert_eq!(psi.shift(&f.from_i64(3)).unwrap().conductor().unwrap(), -1);
    }

    #[test]
    fn psi_xi_conductor_is_zero_for_canonical_xi() {
        for p in [3, 5, 7] {
            for kind in ExtKind::ALL {
                let e = quad(p, kind);
                let psi = AddChar::standard(&LocalField::Ground(e.base()));
                assert_eq!(psi.psi_xi(&e, &e.xi()).unwrap().conductor().unwrap(), 0);
            }
        }
    }

    #[test]
    fn multiplicativity_of_random_characters() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in ExtKind::ALL {
            let e = quad(5, kind).field();
            let chi = MultChar::random(&e, 2, &mut rng).unwrap();
            for _ in 0..100 {
                let x = crate::field::EElement::new(
                    e.base().from_rational(rng.gen_range(1..50), 5).unwrap(),
                    e.base().from_i64(rng.gen_range(0..50)),
                );
                let y = crate::field::EElement::new(e.base().from_i64(rng.gen_range(1..50)), e.base().from_i64(1));
                let lhs = chi.eval(&e.mul(&x, &y)).unwrap();
                let rhs = chi.eval(&x).unwrap() * chi.eval(&y).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn omega_is_trivial_on_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [3, 5, 7] {
            for kind in ExtKind::ALL {
                let ext = quad(p, kind);
                let w = omega_ef(&ext);
                let ef = ext.field();
                let f = LocalField::Ground(ext.base());
                for _ in 0..20 {
                    let x = crate::field::EElement::new(
                        ext.base().from_i64(rng.gen_range(-40..40)),
                        ext.base().from_i64(rng.gen_range(1..40)),
                    );
                    let n = f.embed(ef.norm(&x));
                    assert!((w.eval(&n).unwrap() - 1.0).norm() < 1e-12, "p={p} {kind:?}");
                }
                assert!((w.pow(2).eval(&f.from_i64(p as i64 + 2)).unwrap() - 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn omega_at_minus_one() {
        let w = omega_ef(&quad(3, ExtKind::RamifiedP));
        let f = *w.field();
        assert!((w.eval(&f.from_i64(-1)).unwrap() + 1.0).norm() < 1e-12);
        let w = omega_ef(&quad(7, ExtKind::Unramified));
        let f7 = *w.field();
        assert!((w.eval(&f7.from_i64(7)).unwrap() + 1.0).norm() < 1e-12);
        assert!((w.eval(&f7.from_i64(3)).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn extension_restricts_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [3, 5] {
            for kind in ExtKind::ALL {
                let ext = quad(p, kind);
                let f = LocalField::Ground(ext.base());
                for c in 0..=2 {
                    let chi = MultChar::random_with_conductor(&f, c, &mut rng).unwrap();
                    let tilde = chi.extend_from_f(&ext, None).unwrap();
                    assert!(tilde.restrict_to_f().unwrap().approx_eq(&chi, 1e-12));
                    for _ in 0..10 {
                        let x = pu(&f, rng.gen_range(-3..3), rng.gen_range(1..200));
                        let lhs = tilde.eval(&ext.field().embed(x.a)).unwrap();
                        let rhs = chi.eval(&x).unwrap();
                        assert!((lhs - rhs).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_is_an_involution_preserving_conductor() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for kind in ExtKind::ALL {
            let e = quad(3, kind).field();
            let chi = MultChar::random(&e, 2, &mut rng).unwrap();
            let s = chi.sigma_conjugate().unwrap();
            assert_eq!(s.conductor(), chi.conductor());
            assert!(s.sigma_conjugate().unwrap().approx_eq(&chi, 1e-12));
            let x = crate::field::EElement::new(e.base().from_i64(2), e.base().from_i64(1));
            let lhs = s.eval(&x).unwrap();
            let rhs = chi.eval(&e.sigma(&x)).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
