//! JSON descriptors for fields, characters and Asai input bundles.
//!
//! Complex numbers are `[re, im]` pairs throughout; exact roots of unity are
//! `{"angle": [num, den]}` meaning `exp(2 pi i num/den)`.

use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::asai::{AsaiInput, Tau};
use crate::characters::{AddChar, MultChar, UnifValue};
use crate::config::{env_precision, DEFAULT_PRECISION};
use crate::error::{AsaiError, Result};
use crate::field::{EElement, ExtKind, FieldTag, LocalField, QuadExtension};
use crate::padic::Qp;

/// `{"p": 5, "ext": "ramified-p", "precision": 12}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDesc {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<ExtKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

impl FieldDesc {
    /// Explicit precision, else `ASAI_PRECISION`, else the default.
    pub fn effective_precision(&self) -> u32 {
        self.precision.or_else(env_precision).unwrap_or(DEFAULT_PRECISION)
    }

    pub fn ground(&self) -> Result<Qp> {
        Qp::new(self.p, self.effective_precision())
    }

    pub fn extension(&self) -> Result<QuadExtension> {
        let kind = self.ext.ok_or_else(|| AsaiError::Invalid("field.ext is required here".into()))?;
        Ok(QuadExtension::new(self.ground()?, kind))
    }

    pub fn resolve(&self, tag: FieldTag) -> Result<LocalField> {
        match tag {
            FieldTag::F => Ok(LocalField::Ground(self.ground()?)),
            FieldTag::E => Ok(self.extension()?.field()),
        }
    }

    pub fn of_extension(ext: &QuadExtension) -> Self {
        let base = ext.base();
        FieldDesc { p: base.p(), ext: Some(ext.kind()), precision: Some(base.precision()) }
    }
}

/// Value on the uniformizer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnifDesc {
    Exact { angle: Angle },
    Complex(Complex64),
}

impl Default for UnifDesc {
    fn default() -> Self {
        UnifDesc::Exact { angle: Angle::zero() }
    }
}

impl From<UnifDesc> for UnifValue {
    fn from(d: UnifDesc) -> Self {
        match d {
            UnifDesc::Exact { angle } => UnifValue::Exact(angle),
            UnifDesc::Complex(z) => UnifValue::Complex(z),
        }
    }
}

impl From<UnifValue> for UnifDesc {
    fn from(v: UnifValue) -> Self {
        match v {
            UnifValue::Exact(angle) => UnifDesc::Exact { angle },
            UnifValue::Complex(z) => UnifDesc::Complex(z),
        }
    }
}

/// `{"field": "E", "conductor": 1, "unit_part": [[1,4]], "t": {"angle": [1,3]}, "lambda": [0.2, 0]}`.
///
/// `unit_part` lists the angles on the generators of `(O_K / uniformizer^n)^x`
/// with `n = max(conductor, 1)`; it may be empty when `conductor = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharDesc {
    pub field: FieldTag,
    #[serde(default)]
    pub conductor: u32,
    #[serde(default)]
    pub unit_part: Vec<Angle>,
    #[serde(default)]
    pub t: UnifDesc,
    #[serde(default)]
    pub lambda: Complex64,
}

impl CharDesc {
    pub fn trivial(field: FieldTag) -> Self {
        CharDesc { field, conductor: 0, unit_part: vec![], t: UnifDesc::default(), lambda: Complex64::new(0.0, 0.0) }
    }

    pub fn build(&self, fd: &FieldDesc) -> Result<MultChar> {
        let field = self.field_of(fd)?;
        let t = UnifValue::from(self.t);
        if self.unit_part.is_empty() {
            if self.conductor > 0 {
                return Err(AsaiError::Invalid("unit_part is required when conductor > 0".into()));
            }
            return Ok(MultChar::unramified(&field, t, self.lambda));
        }
        let chi = MultChar::from_angles(&field, self.conductor.max(1), self.unit_part.clone(), t, self.lambda)?;
        if chi.conductor() != self.conductor {
            return Err(AsaiError::Invalid(format!(
                "unit_part has conductor {}, not the declared {}",
                chi.conductor(),
                self.conductor
            )));
        }
        Ok(chi)
    }

    fn field_of(&self, fd: &FieldDesc) -> Result<LocalField> {
        fd.resolve(self.field)
    }

    pub fn of_char(chi: &MultChar) -> Result<Self> {
        let n = chi.conductor();
        let unit_part = if n == 0 { vec![] } else { chi.at_level(n)?.angles().to_vec() };
        Ok(CharDesc { field: chi.tag(), conductor: n, unit_part, t: chi.t().into(), lambda: chi.lambda() })
    }
}

/// `{"mu2": ..., "nu2": ..., "v2": [re, im]}`, characters of `F^x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauDesc {
    pub mu2: CharDesc,
    pub nu2: CharDesc,
    #[serde(default)]
    pub v2: Complex64,
}

/// The representation `pi` of `GL_2(E)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RepDesc {
    PrincipalSeries { mu: CharDesc, nu: CharDesc },
    Supercuspidal {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        data: Option<serde_json::Value>,
    },
}

/// Everything `AsaiInput` needs. `psi_shift = a` means `psi = psi0^a`;
/// `xi_scale = c` means `xi = c * sqrt(d)`. Both are rationals such as `"3/5"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsaiBundle {
    pub field: FieldDesc,
    pub pi: RepDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_shift: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<CharDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<TauDesc>,
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    Rational64::from_str(s.trim()).map_err(|_| AsaiError::Invalid(format!("'{s}' is not a rational number")))
}

fn f_element(field: &LocalField, s: &str) -> Result<EElement> {
    let r = parse_rational(s)?;
    if r == Rational64::from_integer(0) {
        return Err(AsaiError::Invalid("scaling element must be nonzero".into()));
    }
    Ok(field.embed(field.base().from_ratio(r)?))
}

fn expect_tag(d: &CharDesc, tag: FieldTag, what: &str) -> Result<()> {
    if d.field != tag {
        return Err(AsaiError::Invalid(format!("{what} must be a character of {tag:?}^x")));
    }
    Ok(())
}

impl AsaiBundle {
    pub fn build(&self) -> Result<AsaiInput> {
        let ext = self.field.extension()?;
        let (mu, nu) = match &self.pi {
            RepDesc::PrincipalSeries { mu, nu } => (mu, nu),
            RepDesc::Supercuspidal { .. } => {
                return Err(AsaiError::Unsupported(
                    "supercuspidal pi: only principal series Ind(mu, nu) are implemented".into(),
                ))
            }
        };
        expect_tag(mu, FieldTag::E, "pi.mu")?;
        expect_tag(nu, FieldTag::E, "pi.nu")?;
        let f = LocalField::Ground(ext.base());
        let ef = ext.field();
        let mut psi = AddChar::standard(&f);
        if let Some(a) = &self.psi_shift {
            psi = psi.shift(&f_element(&f, a)?)?;
        }
        let mut xi = ext.xi();
        if let Some(c) = &self.xi_scale {
            xi = ef.mul(&xi, &ef.embed(f_element(&f, c)?.a));
        }
        let mut input = AsaiInput::new(ext, mu.build(&self.field)?, nu.build(&self.field)?, psi, xi)?;
        if let Some(t) = &self.twist {
            expect_tag(t, FieldTag::F, "twist")?;
            input = input.with_twist(t.build(&self.field)?)?;
        }
        if let Some(t) = &self.tau {
            expect_tag(&t.mu2, FieldTag::F, "tau.mu2")?;
            expect_tag(&t.nu2, FieldTag::F, "tau.nu2")?;
            let tau = Tau { mu2: t.mu2.build(&self.field)?, nu2: t.nu2.build(&self.field)?, v2: t.v2 };
            input = input.with_tau(tau)?;
        }
        Ok(input)
    }

    /// A bundle that rebuilds `input` when `psi` and `xi` are the standard ones.
    pub fn of_input(input: &AsaiInput) -> Result<Self> {
        let tau = match &input.tau {
            Some(t) => Some(TauDesc { mu2: CharDesc::of_char(&t.mu2)?, nu2: CharDesc::of_char(&t.nu2)?, v2: t.v2 }),
            None => None,
        };
        Ok(AsaiBundle {
            field: FieldDesc::of_extension(&input.ext),
            pi: RepDesc::PrincipalSeries { mu: CharDesc::of_char(&input.mu)?, nu: CharDesc::of_char(&input.nu)? },
            psi_shift: None,
            xi_scale: None,
            twist: input.twist.as_ref().map(CharDesc::of_char).transpose()?,
            tau,
        })
    }
}

/// A grid point: either a bare real number or `[re, im]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridPoint {
    Real(f64),
    Complex(Complex64),
}

impl From<GridPoint> for Complex64 {
    fn from(g: GridPoint) -> Self {
        match g {
            GridPoint::Real(x) => Complex64::new(x, 0.0),
            GridPoint::Complex(z) => z,
        }
    }
}

pub fn parse_grid(json: &str) -> Result<Vec<Complex64>> {
    let pts: Vec<GridPoint> =
        serde_json::from_str(json).map_err(|e| AsaiError::Invalid(format!("grid: {e}")))?;
    if pts.is_empty() {
        return Err(AsaiError::EmptyGrid);
    }
    Ok(pts.into_iter().map(Complex64::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asai::{gamma_rs, random_input};
    use crate::config::default_grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_descriptor_parses() {
        let fd: FieldDesc = serde_json::from_str(r#"{"p": 5, "ext": "ramified-up", "precision": 10}"#).unwrap();
        assert_eq!(fd.extension().unwrap().kind(), ExtKind::RamifiedUp);
        assert!(serde_json::from_str::<FieldDesc>(r#"{"p": 5, "extension": "x"}"#).is_err());
        let fd: FieldDesc = serde_json::from_str(r#"{"p": 5}"#).unwrap();
        assert!(fd.extension().is_err());
        assert!(fd.ground().is_ok());
    }

    #[test]
    fn character_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fd = FieldDesc { p: 3, ext: Some(ExtKind::RamifiedP), precision: Some(12) };
        let ef = fd.resolve(FieldTag::E).unwrap();
        for n in 0..=2 {
            let chi = MultChar::random_with_conductor(&ef, n, &mut rng).unwrap();
            let d = CharDesc::of_char(&chi).unwrap();
            let json = serde_json::to_string(&d).unwrap();
            let back: CharDesc = serde_json::from_str(&json).unwrap();
            assert_eq!(back, d);
            assert!(back.build(&fd).unwrap().approx_eq(&chi, 1e-12));
        }
    }

    #[test]
    fn unif_value_forms() {
        let d: CharDesc = serde_json::from_str(r#"{"field": "F", "t": {"angle": [1, 4]}}"#).unwrap();
        assert_eq!(d.t, UnifDesc::Exact { angle: Angle::new(1, 4) });
        let d: CharDesc = serde_json::from_str(r#"{"field": "F", "t": [0.5, 0.25], "lambda": [0.1, 0]}"#).unwrap();
        assert_eq!(d.t, UnifDesc::Complex(Complex64::new(0.5, 0.25)));
    }

    #[test]
    fn bundle_round_trip_reproduces_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fd = FieldDesc { p: 5, ext: Some(ExtKind::Unramified), precision: Some(12) };
        let input = random_input(&fd.extension().unwrap(), 2, &mut rng).unwrap();
        let bundle = AsaiBundle::of_input(&input).unwrap();
        let json = serde_json::to_string(&bundle).unwrap();
        let again: AsaiBundle = serde_json::from_str(&json).unwrap();
        let g1 = gamma_rs(&input).unwrap().factor;
        let g2 = gamma_rs(&again.build().unwrap()).unwrap().factor;
        for s in default_grid() {
            assert!((g1.eval(s).unwrap() - g2.eval(s).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn supercuspidal_is_rejected() {
        let json = r#"{"field": {"p": 3, "ext": "unramified"}, "pi": {"type": "supercuspidal"}}"#;
        let b: AsaiBundle = serde_json::from_str(json).unwrap();
        match b.build() {
            Err(AsaiError::Unsupported(m)) => assert!(m.contains("supercuspidal")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("[0.7, [2.1, 0.5]]").unwrap();
        assert_eq!(g, vec![Complex64::new(0.7, 0.0), Complex64::new(2.1, 0.5)]);
        assert!(parse_grid("[]").is_err());
    }
}
