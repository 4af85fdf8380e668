//! Brute-force Whittaker functions and Rankin-Selberg zeta integrals for
//! principal series of `GL_2(E)`.
//!
//! Whittaker values are exact: the defining integral over `E` is evaluated by
//! recursive subdivision into balls on which the integrand is provably
//! constant, so every value is a finite rational combination of roots of
//! unity.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::angle::Angle;
use crate::characters::{AddChar, MultChar};
use crate::cyclo::{rational_pow, Cyclo};
use crate::error::{AsaiError, Result};
use crate::field::{EElement, LocalField};
use crate::tate::TwistedBox;

/// A 2x2 matrix over `E`.
#[derive(Clone, Copy, Debug)]
pub struct Mat2 {
    pub a: EElement,
    pub b: EElement,
    pub c: EElement,
    pub d: EElement,
}

impl Mat2 {
    pub fn identity(f: &LocalField) -> Self {
        Mat2 { a: f.one(), b: f.zero(), c: f.zero(), d: f.one() }
    }

    /// `[[1, 0], [z, 1]]`.
    pub fn ubar(f: &LocalField, z: EElement) -> Self {
        Mat2 { c: z, ..Self::identity(f) }
    }

    /// `[[1, x], [0, 1]]`.
    pub fn u(f: &LocalField, x: EElement) -> Self {
        Mat2 { b: x, ..Self::identity(f) }
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn w(f: &LocalField) -> Self {
        Mat2 { a: f.zero(), b: -f.one(), c: f.one(), d: f.zero() }
    }

    pub fn diag(f: &LocalField, x: EElement, y: EElement) -> Self {
        Mat2 { a: x, b: f.zero(), c: f.zero(), d: y }
    }

    pub fn mul(&self, f: &LocalField, o: &Mat2) -> Mat2 {
        Mat2 {
            a: f.mul(&self.a, &o.a) + f.mul(&self.b, &o.c),
            b: f.mul(&self.a, &o.b) + f.mul(&self.b, &o.d),
            c: f.mul(&self.c, &o.a) + f.mul(&self.d, &o.c),
            d: f.mul(&self.c, &o.b) + f.mul(&self.d, &o.d),
        }
    }

    pub fn det(&self, f: &LocalField) -> EElement {
        f.mul(&self.a, &self.d) - f.mul(&self.b, &self.c)
    }
}

/// A vector of a principal series of `GL_2(E)`.
#[derive(Clone, Debug)]
pub enum Section {
    /// `f` in `B(mu, 1)` with `f(ubar(x)) = mu^{-1}(x) |x|_E^{-1} 1_{|x| >= 1}`.
    BigCell { mu: MultChar },
    /// The `GL_2(O_E)`-fixed vector of `B(mu, nu)`, `mu` and `nu` unramified.
    Spherical { mu: MultChar, nu: MultChar },
}

impl Section {
    fn field(&self) -> &LocalField {
        match self {
            Section::BigCell { mu } | Section::Spherical { mu, .. } => mu.field(),
        }
    }

    fn check(&self) -> Result<()> {
        let chars: Vec<&MultChar> = match self {
            Section::BigCell { mu } => vec![mu],
            Section::Spherical { mu, nu } => {
                if !mu.is_unramified() || !nu.is_unramified() {
                    return Err(AsaiError::Precondition("spherical section needs unramified characters".into()));
                }
                if mu.field() != nu.field() {
                    return Err(AsaiError::Invalid("characters on different fields".into()));
                }
                vec![mu, nu]
            }
        };
        for c in chars {
            if c.field().quad().is_none() {
                return Err(AsaiError::Invalid("sections live on GL_2(E)".into()));
            }
            if !c.is_exact() {
                return Err(AsaiError::Precondition("exact Whittaker values need root-of-unity characters".into()));
            }
        }
        Ok(())
    }

    /// `nu(a)` for the left `diag(1, a)` equivariance.
    fn nu_angle(&self, a: &EElement) -> Result<Angle> {
        match self {
            Section::BigCell { .. } => Ok(Angle::zero()),
            Section::Spherical { nu, .. } => Ok(nu.eval_exact(a)?.expect("exact character")),
        }
    }
}

/// What is known about `l(y) = l0 + (y - y0) s` on the ball `y0 + pi^L O`.
#[derive(Clone, Copy, Debug)]
enum OrdStatus {
    /// Constant valuation; the unit part is constant modulo `pi^margin`.
    Stable { ord: i64, margin: i64 },
    /// Valuation at least `min` somewhere; may vanish.
    Small { min: i64 },
}

fn status(f: &LocalField, l0: &EElement, slope_ord: Option<i64>, level: i64) -> Result<OrdStatus> {
    let t = slope_ord.map(|o| o + level).unwrap_or(i64::MAX);
    if !l0.is_zero() {
        let o = f.ord(l0)?;
        if o < t {
            return Ok(OrdStatus::Stable { ord: o, margin: t.saturating_sub(o) });
        }
    }
    Ok(OrdStatus::Small { min: t })
}

enum Leaf {
    Zero,
    /// `exp(2 pi i angle) * q_E^{exp}`.
    Value { angle: Angle, q_exp: i64 },
    Split,
}

/// Integrand `F(y) = f(w u(y) g)` for `det g = 1`, classified on a ball.
fn classify(sec: &Section, c0: &EElement, d0: &EElement, sc: OrdStatus, sd: OrdStatus) -> Result<Leaf> {
    let f = sec.field();
    match sec {
        Section::BigCell { mu } => {
            let need = mu.conductor().max(1) as i64;
            match (sc, sd) {
                (OrdStatus::Small { min: tc }, OrdStatus::Stable { ord: od, .. }) if od < tc => Ok(Leaf::Zero),
                (OrdStatus::Small { .. }, _) => Ok(Leaf::Split),
                (OrdStatus::Stable { ord: oc, margin }, sd) => {
                    let indicator = match sd {
                        OrdStatus::Stable { ord: od, .. } => Some(oc <= od),
                        OrdStatus::Small { min: td } if td >= oc => Some(true),
                        OrdStatus::Small { .. } => None,
                    };
                    match indicator {
                        Some(false) => Ok(Leaf::Zero),
                        Some(true) if margin >= need => {
                            let u = f.unit_part(c0)?;
                            let a = -(mu.t().as_angle().expect("exact") * oc) - mu.unit_angle(&u)?;
                            Ok(Leaf::Value { angle: a, q_exp: oc })
                        }
                        _ => Ok(Leaf::Split),
                    }
                }
            }
        }
        Section::Spherical { mu, nu } => {
            let k = match (sc, sd) {
                (OrdStatus::Stable { ord: oc, .. }, OrdStatus::Stable { ord: od, .. }) => Some(oc.min(od)),
                (OrdStatus::Stable { ord: oc, .. }, OrdStatus::Small { min: td }) if td >= oc => Some(oc),
                (OrdStatus::Small { min: tc }, OrdStatus::Stable { ord: od, .. }) if tc >= od => Some(od),
                _ => None,
            };
            let _ = d0;
            match k {
                None => Ok(Leaf::Split),
                Some(k) => {
                    let a = (nu.t().as_angle().expect("exact") - mu.t().as_angle().expect("exact")) * k;
                    Ok(Leaf::Value { angle: a, q_exp: k })
                }
            }
        }
    }
}

const MAX_DEPTH_MARGIN: i64 = 2;

/// `int_{pi_F^{-n} O_E} f(w u(y) g) psi'(y) dy` with `psi' = psi(-a .)`,
/// for the measure with `vol(O_E) = q_E^{c(psi)/2}`.
fn truncated_integral(sec: &Section, psi: &AddChar, a: &EElement, g: &Mat2, n: i64) -> Result<Cyclo> {
    let f = *sec.field();
    let e = f.e() as i64;
    let psi_a = psi.shift(&(-*a))?;
    let c_psi = psi.conductor()?;
    let c_prime = c_psi - f.ord(a)?;
    let q = f.q();
    let slope_c = if g.c.is_zero() { None } else { Some(f.ord(&g.c)?) };
    let slope_d = if g.d.is_zero() { None } else { Some(f.ord(&g.d)?) };
    let digits = f.integer_representatives(1)?;
    let max_level = f.max_level() as i64 - MAX_DEPTH_MARGIN;
    let vol_scale = rational_pow(q, 0) * half_power(q, c_psi)?;

    let mut out = Cyclo::zero();
    let mut stack: Vec<(EElement, i64)> = vec![(f.zero(), -n * e)];
    while let Some((y0, level)) = stack.pop() {
        let c0 = g.a + f.mul(&y0, &g.c);
        let d0 = g.b + f.mul(&y0, &g.d);
        let sc = status(&f, &c0, slope_c, level)?;
        let sd = status(&f, &d0, slope_d, level)?;
        match classify(sec, &c0, &d0, sc, sd)? {
            Leaf::Zero => {}
            Leaf::Value { angle, q_exp } => {
                if level >= c_prime {
                    let total = angle + psi_a.angle(&y0)?;
                    out.add_term(total, rational_pow(q, q_exp - level) * &vol_scale);
                }
            }
            Leaf::Split => {
                if level + 1 > max_level {
                    return Err(AsaiError::Precision { needed: level + 1 + MAX_DEPTH_MARGIN, available: f.precision() });
                }
                let step = f.pi_pow(level);
                for r in &digits {
                    stack.push((y0 + f.mul(&step, r), level + 1));
                }
            }
        }
    }
    Ok(out)
}

/// `q^{c/2}` as an exact rational; odd `c` is rejected.
fn half_power(q: u64, c: i64) -> Result<BigRational> {
    if c % 2 != 0 {
        return Err(AsaiError::Unsupported("self-dual volume with an odd conductor is irrational".into()));
    }
    Ok(rational_pow(q, c / 2))
}

/// An exact Whittaker value together with the truncation at which it stabilized.
#[derive(Clone, Debug)]
pub struct WhittakerValue {
    pub value: Cyclo,
    pub truncation: i64,
}

impl WhittakerValue {
    pub fn to_complex(&self) -> Complex64 {
        self.value.to_complex()
    }
}

/// `W_f(diag(a, 1) g)` for `a` in `F^x` (embedded in `E`) and `det g = 1`,
/// as the stable value of the truncated integrals over `pi_F^{-n} O_E`.
pub fn whittaker_from_section(sec: &Section, psi: &AddChar, a: &EElement, g: &Mat2) -> Result<WhittakerValue> {
    sec.check()?;
    let f = *sec.field();
    if psi.field() != &f {
        return Err(AsaiError::Invalid("additive character must live on E".into()));
    }
    if !a.in_base() || a.is_zero() {
        return Err(AsaiError::Invalid("a must be a nonzero element of F".into()));
    }
    let det = g.det(&f);
    if det != f.one() {
        return Err(AsaiError::Unsupported("Whittaker values are computed for det g = 1".into()));
    }
    let ord_a_f = f.ord(a)? / f.e() as i64;
    // |a|_F * nu(a)
    let prefactor_angle = sec.nu_angle(a)?;
    let prefactor = rational_pow(f.p(), -ord_a_f);
    let c_prime = psi.conductor()? - f.ord(a)?;
    let e = f.e() as i64;
    let mut n = ((4 - c_prime).max(1) + e - 1) / e;
    let limit = n + 6;
    let mut prev = truncated_integral(sec, psi, a, g, n)?;
    while n <= limit {
        let next = truncated_integral(sec, psi, a, g, n + 1)?;
        if next.exact_eq(&prev) {
            let value = prev.rotated(prefactor_angle).scaled(&prefactor);
            return Ok(WhittakerValue { value, truncation: n });
        }
        prev = next;
        n += 1;
    }
    Err(AsaiError::Consistency("truncated Whittaker integral did not stabilize".into()))
}

fn f_integers(f: &LocalField, k: u32) -> Vec<EElement> {
    let p = f.p() as i64;
    (0..p.pow(k)).map(|u| f.from_i64(u)).collect()
}

/// Data of the averaged sections of a ramified `mu` with `nu = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SectionCase {
    /// `c(mu)`.
    pub c_mu_e: u32,
    /// `c(mu|_F)`.
    pub c_mu: u32,
    /// `ceil(c(mu) / e)`.
    pub r: u32,
    /// Whether `mu|_F` is ramified.
    pub restriction_ramified: bool,
}

pub fn section_case(mu: &MultChar) -> Result<SectionCase> {
    let ext = mu.field().quad().ok_or_else(|| AsaiError::Invalid("mu must be a character of E^x".into()))?;
    if mu.is_unramified() {
        return Err(AsaiError::Precondition("averaged sections need a ramified mu".into()));
    }
    let c_mu = mu.restrict_to_f()?.conductor();
    Ok(SectionCase {
        c_mu_e: mu.conductor(),
        c_mu,
        r: mu.conductor().div_ceil(ext.e()),
        restriction_ramified: c_mu > 0,
    })
}

/// `W_g(diag(a, 1))` for the section `g = sum_{u mod p^{r - c_mu}} rho(ubar(p^{c_mu} u)) f`.
pub fn whittaker_case1(mu: &MultChar, psi: &AddChar, a: &EElement) -> Result<Cyclo> {
    let info = section_case(mu)?;
    if !info.restriction_ramified {
        return Err(AsaiError::Precondition("case 1 needs mu|_F ramified".into()));
    }
    let f = *mu.field();
    let sec = Section::BigCell { mu: mu.clone() };
    let shift = f.pi_pow(0);
    let p_c = f.embed(f.base().pi_pow(info.c_mu as i64));
    let mut total = Cyclo::zero();
    for u in f_integers(&f, info.r - info.c_mu) {
        let z = f.mul(&f.mul(&p_c, &u), &shift);
        total.add(&whittaker_from_section(&sec, psi, a, &Mat2::ubar(&f, z))?.value);
    }
    Ok(total)
}

/// `W_h(diag(a, 1))` for `h = sum_{u mod p^{r-1}} rho(ubar(p u)) f + sum_{u mod p^r} rho(w ubar(u)) f`.
pub fn whittaker_case2(mu: &MultChar, psi: &AddChar, a: &EElement) -> Result<Cyclo> {
    let info = section_case(mu)?;
    if info.restriction_ramified {
        return Err(AsaiError::Precondition("case 2 needs mu|_F unramified".into()));
    }
    let f = *mu.field();
    let sec = Section::BigCell { mu: mu.clone() };
    let p1 = f.embed(f.base().pi_pow(1));
    let mut total = Cyclo::zero();
    for u in f_integers(&f, info.r - 1) {
        let g = Mat2::ubar(&f, f.mul(&p1, &u));
        total.add(&whittaker_from_section(&sec, psi, a, &g)?.value);
    }
    let w = Mat2::w(&f);
    for u in f_integers(&f, info.r) {
        let g = w.mul(&f, &Mat2::ubar(&f, u));
        total.add(&whittaker_from_section(&sec, psi, a, &g)?.value);
    }
    Ok(total)
}

/// `|a|_F 1_{pi^{c_mu - r} O}(a)`.
pub fn expected_case1(mu: &MultChar, a: &EElement) -> Result<Cyclo> {
    let info = section_case(mu)?;
    let f = mu.field();
    let k = f.ord(a)? / f.e() as i64;
    if k >= info.c_mu as i64 - info.r as i64 {
        Ok(Cyclo::term(Angle::zero(), rational_pow(f.p(), -k)))
    } else {
        Ok(Cyclo::zero())
    }
}

/// `mu(a)|a| mu(p)^r 1_{p^{-r} O}(a) + |a| 1_{p^{1-r} O}(a)`.
pub fn expected_case2(mu: &MultChar, a: &EElement) -> Result<Cyclo> {
    let info = section_case(mu)?;
    let f = mu.field();
    let k = f.ord(a)? / f.e() as i64;
    let r = info.r as i64;
    let abs = rational_pow(f.p(), -k);
    let mut out = Cyclo::zero();
    if k >= -r {
        let p = f.embed(f.base().pi_pow(1));
        let ang = mu.eval_exact(a)?.expect("exact") + mu.eval_exact(&p)?.expect("exact") * r;
        out.add_term(ang, abs.clone());
    }
    if k >= 1 - r {
        out.add_term(Angle::zero(), abs);
    }
    Ok(out)
}

/// Comparison of brute-force and closed-form Whittaker values at one point.
#[derive(Clone, Debug, Serialize)]
pub struct WhittakerCheck {
    pub case: u8,
    pub ord_a: i64,
    pub computed: Complex64,
    pub expected: Complex64,
    pub exact_match: bool,
}

/// Checks the closed forms for `W(diag(a, 1))` of the averaged section of
/// `mu` at `a = p^k * unit` for the given `(k, unit)` pairs.
pub fn check_whittaker_closed_form(mu: &MultChar, psi: &AddChar, points: &[(i64, i64)]) -> Result<Vec<WhittakerCheck>> {
    let info = section_case(mu)?;
    let f = *mu.field();
    let mut out = Vec::new();
    for &(k, unit) in points {
        let a = f.embed(f.base().pi_pow(k) * f.base().from_i64(unit));
        let (case, computed, expected) = if info.restriction_ramified {
            (1, whittaker_case1(mu, psi, &a)?, expected_case1(mu, &a)?)
        } else {
            (2, whittaker_case2(mu, psi, &a)?, expected_case2(mu, &a)?)
        };
        out.push(WhittakerCheck {
            case,
            ord_a: k,
            computed: computed.to_complex(),
            expected: expected.to_complex(),
            exact_match: computed.exact_eq(&expected),
        });
    }
    Ok(out)
}

/// `sum_j c_j 1_{p^j O + p^j O}`, the `GL_2(O_F)`-invariant Schwartz functions on `F^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSum {
    pub terms: Vec<(i64, Complex64)>,
}

impl LatticeSum {
    pub fn unit() -> Self {
        LatticeSum { terms: vec![(0, Complex64::new(1.0, 0.0))] }
    }

    /// Fourier transform for `c(psi) = 0`.
    pub fn fourier(&self, p: u64) -> LatticeSum {
        LatticeSum { terms: self.terms.iter().map(|&(j, c)| (-j, c * (p as f64).powi(-2 * j as i32))).collect() }
    }
}

fn s_poly(alpha: Complex64, beta: Complex64, m: usize) -> Complex64 {
    (0..=m).map(|i| alpha.powi(i as i32) * beta.powi((m - i) as i32)).sum()
}

const EXPLICIT_TERMS: usize = 12;

/// `sum_k S_{ek}(alpha, beta) y^k` with explicit terms inside the disk of
/// convergence and the tail from the two-term recurrence of `S_{ek}`.
fn spherical_series(alpha: Complex64, beta: Complex64, e: usize, y: Complex64) -> Result<Complex64> {
    let t = |k: usize| s_poly(alpha, beta, e * k);
    let explicit = if y.norm() < 0.5 { EXPLICIT_TERMS } else { 0 };
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=explicit {
        sum += t(k) * y.powi(k as i32);
    }
    let s1 = alpha.powi(e as i32) + beta.powi(e as i32);
    let s2 = (alpha * beta).powi(e as i32);
    let den = 1.0 - s1 * y + s2 * y * y;
    if den.norm() < 1e-13 {
        return Err(AsaiError::Pole(format!("spherical series at y = {y}")));
    }
    let k1 = explicit + 1;
    let tail = y.powi(k1 as i32) * (t(k1) + (t(k1 + 1) - s1 * t(k1)) * y) / den;
    Ok(sum + tail)
}

fn lattice_factor(phi: &LatticeSum, x2: Complex64) -> Result<Complex64> {
    let d = 1.0 - x2;
    if d.norm() < 1e-13 {
        return Err(AsaiError::Pole("central geometric series".into()));
    }
    Ok(phi.terms.iter().map(|&(j, c)| c * x2.powi(j as i32)).sum::<Complex64>() / d)
}

fn spherical_data(mu: &MultChar, nu: &MultChar) -> Result<(Complex64, Complex64, Complex64, usize, u64)> {
    if !mu.is_unramified() || !nu.is_unramified() {
        return Err(AsaiError::Precondition("spherical zeta integral needs unramified characters".into()));
    }
    let f = mu.field();
    let ext = f.quad().ok_or_else(|| AsaiError::Invalid("characters of E^x expected".into()))?;
    let p_e = f.embed(f.base().pi_pow(1));
    let omega_p = mu.eval(&p_e)? * nu.eval(&p_e)?;
    Ok((mu.value_on_uniformizer(), nu.value_on_uniformizer(), omega_p, ext.e() as usize, f.p()))
}

/// `Z(s, W, Phi)` for the spherical Whittaker function normalized by `W(1) = 1`
/// and a lattice Schwartz function, with `c(psi) = c(psi_xi) = 0`.
pub fn zeta_rs_spherical(s: Complex64, mu: &MultChar, nu: &MultChar, phi: &LatticeSum) -> Result<Complex64> {
    let (alpha, beta, omega_p, e, p) = spherical_data(mu, nu)?;
    let x = (-s * (p as f64).ln()).exp();
    Ok(spherical_series(alpha, beta, e, x)? * lattice_factor(phi, omega_p * x * x)?)
}

/// `Z(1 - s, W (x) omega^{-1}, Phi^)` for the same data.
pub fn zeta_rs_spherical_dual(s: Complex64, mu: &MultChar, nu: &MultChar, phi: &LatticeSum) -> Result<Complex64> {
    let (alpha, beta, omega_p, e, p) = spherical_data(mu, nu)?;
    let x = (-(1.0 - s) * (p as f64).ln()).exp();
    let y = x / omega_p;
    Ok(spherical_series(alpha, beta, e, y)? * lattice_factor(&phi.fourier(p), x * x / omega_p)?)
}

/// The functional-equation ratio of the spherical zeta integrals.
pub fn gamma_spherical_oracle(s: Complex64, mu: &MultChar, nu: &MultChar, phi: &LatticeSum) -> Result<Complex64> {
    let z = zeta_rs_spherical(s, mu, nu, phi)?;
    if z.norm() < 1e-300 {
        return Err(AsaiError::Pole(format!("zeta integral vanishes at {s}")));
    }
    Ok(zeta_rs_spherical_dual(s, mu, nu, phi)? / z)
}

/// `coef * f(x) g(y)` with twisted boxes `f`, `g` on `F`.
#[derive(Clone, Copy, Debug)]
pub struct Box2 {
    pub coef: Complex64,
    pub x: TwistedBox,
    pub y: TwistedBox,
}

fn box_eval(b: &TwistedBox, f: &LocalField, psi: &AddChar, x: &EElement) -> Result<Complex64> {
    let d = *x - b.center;
    if d.is_zero() || f.ord(&d)? >= b.level {
        Ok(b.coef * psi.eval(&f.mul(&b.twist, x))?)
    } else {
        Ok(Complex64::new(0.0, 0.0))
    }
}

fn box_fourier(b: &TwistedBox, f: &LocalField, psi: &AddChar, c: i64) -> Result<TwistedBox> {
    let q = f.q() as f64;
    Ok(TwistedBox {
        coef: b.coef * q.powf(c as f64 / 2.0 - b.level as f64) * psi.eval(&f.mul(&b.center, &b.twist))?,
        center: -b.twist,
        twist: b.center,
        level: c - b.level,
    })
}

fn box_negate(b: &TwistedBox) -> TwistedBox {
    TwistedBox { coef: b.coef, center: -b.center, twist: -b.twist, level: b.level }
}

/// Schwartz functions on `F^2` built from products of twisted boxes.
#[derive(Clone, Debug)]
pub struct Schwartz2 {
    pub field: LocalField,
    pub terms: Vec<Box2>,
}

impl Schwartz2 {
    /// `1_{a + p^n O} x 1_{b + p^m O}`.
    pub fn product_box(field: &LocalField, a: EElement, n: i64, b: EElement, m: i64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let mk = |center, level| TwistedBox { coef: one, center, twist: field.zero(), level };
        Schwartz2 { field: *field, terms: vec![Box2 { coef: one, x: mk(a, n), y: mk(b, m) }] }
    }

    pub fn eval(&self, psi: &AddChar, x: &EElement, y: &EElement) -> Result<Complex64> {
        let f = &self.field;
        let mut total = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            total += t.coef * box_eval(&t.x, f, psi, x)? * box_eval(&t.y, f, psi, y)?;
        }
        Ok(total)
    }
}

/// `Phi^(x, y) = int Phi(u, v) psi(u y - v x) du dv` for the self-dual measure.
pub fn fourier_transform_simple(phi: &Schwartz2, psi: &AddChar) -> Result<Schwartz2> {
    let f = &phi.field;
    let c = psi.conductor()?;
    let terms = phi
        .terms
        .iter()
        .map(|t| {
            Ok(Box2 {
                coef: t.coef,
                x: box_negate(&box_fourier(&t.y, f, psi, c)?),
                y: box_fourier(&t.x, f, psi, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Schwartz2 { field: *f, terms })
}

/// Bit-for-bit consistency of the lattice transform with the box transform.
pub fn lattice_to_schwartz2(field: &LocalField, phi: &LatticeSum) -> Schwartz2 {
    let mut out = Schwartz2 { field: *field, terms: vec![] };
    for &(j, c) in &phi.terms {
        let mut b = Schwartz2::product_box(field, field.zero(), j, field.zero(), j);
        b.terms[0].coef = c;
        out.terms.extend(b.terms);
    }
    out
}

/// Numeric helper: `BigRational` to `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if r.is_zero() {
        0.0
    } else {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asai::{gamma_rs, AsaiInput};
    use crate::characters::UnifValue;
    use crate::config::default_grid;
    use crate::factor::rel_dev;
    use crate::field::{ExtKind, QuadExtension};
    use crate::padic::Qp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ext(p: u64, kind: ExtKind, prec: u32) -> QuadExtension {
        QuadExtension::new(Qp::new(p, prec).unwrap(), kind)
    }

    fn psi_xi(e: &QuadExtension) -> AddChar {
        AddChar::standard(&LocalField::Ground(e.base())).psi_xi(e, &e.xi()).unwrap()
    }

    #[test]
    fn spherical_support_and_shintani_values() {
        for kind in ExtKind::ALL {
            let e = ext(3, kind, 16);
            let ef = e.field();
            let mu = MultChar::unramified(&ef, UnifValue::Exact(Angle::new(1, 6)), Complex64::new(0.0, 0.0));
            let nu = MultChar::unramified(&ef, UnifValue::Exact(Angle::new(1, 4)), Complex64::new(0.0, 0.0));
            let sec = Section::Spherical { mu: mu.clone(), nu: nu.clone() };
            let psi = psi_xi(&e);
            let id = Mat2::identity(&ef);
            let w1 = whittaker_from_section(&sec, &psi, &ef.one(), &id).unwrap().to_complex();
            assert!(w1.norm() > 1e-6);
            let wneg = whittaker_from_section(&sec, &psi, &ef.embed(e.base().pi_pow(-1)), &id).unwrap();
            assert!(wneg.value.is_zero());
            let (alpha, beta) = (mu.value_on_uniformizer(), nu.value_on_uniformizer());
            for k in 0..=2i64 {
                let a = ef.embed(e.base().pi_pow(k) * e.base().from_i64(2));
                let wk = whittaker_from_section(&sec, &psi, &a, &id).unwrap().to_complex();
                let expect = w1 * 3f64.powi(-(k as i32)) * s_poly(alpha, beta, (e.e() as i64 * k) as usize);
                assert!((wk - expect).norm() < 1e-10, "{kind:?} k={k}: {wk} vs {expect}");
            }
        }
    }

    #[test]
    fn averaged_sections_match_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for kind in ExtKind::ALL {
            let e = ext(3, kind, 18);
            let ef = e.field();
            let psi = psi_xi(&e);
            for c in 1..=2 {
                let Ok(mu) = MultChar::random_with_conductor(&ef, c, &mut rng) else { continue };
                let info = section_case(&mu).unwrap();
                let r = info.r as i64;
                let pts: Vec<(i64, i64)> = (-r - 1..=1).map(|k| (k, rng.gen_range(1..3))).collect();
                for chk in check_whittaker_closed_form(&mu, &psi, &pts).unwrap() {
                    assert!(chk.exact_match, "{kind:?} c={c} {chk:?}");
                }
            }
        }
    }

    #[test]
    fn spherical_oracle_matches_multiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for kind in ExtKind::ALL {
            let e = ext(5, kind, 12);
            let ef = e.field();
            let f = LocalField::Ground(e.base());
            for _ in 0..3 {
                let t1 = UnifValue::Exact(Angle::new(rng.gen_range(0..12), 12));
                let t2 = UnifValue::Exact(Angle::new(rng.gen_range(0..12), 12));
                let mu = MultChar::unramified(&ef, t1, Complex64::new(0.0, 0.0));
                let nu = MultChar::unramified(&ef, t2, Complex64::new(0.0, 0.0));
                let input = AsaiInput::new(e, mu.clone(), nu.clone(), AddChar::standard(&f), e.xi()).unwrap();
                let g = gamma_rs(&input).unwrap().factor;
                for s in default_grid() {
                    let o1 = gamma_spherical_oracle(s, &mu, &nu, &LatticeSum::unit()).unwrap();
                    let perturbed = LatticeSum { terms: vec![(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(2.0, -1.0))] };
                    let o2 = gamma_spherical_oracle(s, &mu, &nu, &perturbed).unwrap();
                    assert!(rel_dev(o1, g.eval(s).unwrap()) < 1e-10, "{kind:?}");
                    assert!(rel_dev(o1, o2) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spherical_zeta_matches_l_factor_for_trivial_characters() {
        let e = ext(3, ExtKind::Unramified, 12);
        let ef = e.field();
        let one = MultChar::trivial(&ef);
        let f = LocalField::Ground(e.base());
        let input = AsaiInput::new(e, one.clone(), one.clone(), AddChar::standard(&f), e.xi()).unwrap();
        let l = crate::asai::l_gal_asai(&input).unwrap();
        for s in default_grid() {
            let z = zeta_rs_spherical(s, &one, &one, &LatticeSum::unit()).unwrap();
            assert!(rel_dev(z, l.eval(s).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn box_fourier_transform() {
        let f = LocalField::Ground(Qp::new(5, 12).unwrap());
        let psi = AddChar::standard(&f);
        let unit = Schwartz2::product_box(&f, f.zero(), 0, f.zero(), 0);
        let hat = fourier_transform_simple(&unit, &psi).unwrap();
        for (x, y) in [(0, 0), (1, 3), (7, 2)] {
            let (x, y) = (f.from_i64(x), f.from_i64(y));
            assert!((hat.eval(&psi, &x, &y).unwrap() - 1.0).norm() < 1e-14);
        }
        let pts = [f.from_rational(1, 5).unwrap(), f.from_i64(0)];
        assert!(hat.eval(&psi, &pts[0], &pts[1]).unwrap().norm() < 1e-14);

        let small = Schwartz2::product_box(&f, f.zero(), 1, f.zero(), 0);
        let sh = fourier_transform_simple(&small, &psi).unwrap();
        let v = sh.eval(&psi, &f.from_i64(3), &f.from_rational(2, 5).unwrap()).unwrap();
        assert!((v - 0.2).norm() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let a = f.from_rational(rng.gen_range(0..50), 5).unwrap();
            let b = f.from_i64(rng.gen_range(0..50));
            let phi = Schwartz2::product_box(&f, a, rng.gen_range(-1..3), b, rng.gen_range(-1..3));
            let twice = fourier_transform_simple(&fourier_transform_simple(&phi, &psi).unwrap(), &psi).unwrap();
            for _ in 0..10 {
                let x = f.from_rational(rng.gen_range(-200..200), 25).unwrap();
                let y = f.from_rational(rng.gen_range(-200..200), 5).unwrap();
                let lhs = twice.eval(&psi, &x, &y).unwrap();
                let rhs = phi.eval(&psi, &(-x), &(-y)).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn lattice_transform_agrees_with_box_transform() {
        let f = LocalField::Ground(Qp::new(3, 12).unwrap());
        let psi = AddChar::standard(&f);
        let phi = LatticeSum { terms: vec![(0, Complex64::new(1.0, 0.0)), (2, Complex64::new(0.5, 0.5))] };
        let direct = lattice_to_schwartz2(&f, &phi.fourier(3));
        let boxes = fourier_transform_simple(&lattice_to_schwartz2(&f, &phi), &psi).unwrap();
        for (x, y) in [(0i64, 0i64), (1, 9), (2, 3)] {
            for d in [1i64, 3, 9] {
                let (x, y) = (f.from_rational(x, d).unwrap(), f.from_rational(y, d).unwrap());
                let a = direct.eval(&psi, &x, &y).unwrap();
                let b = boxes.eval(&psi, &x, &y).unwrap();
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
