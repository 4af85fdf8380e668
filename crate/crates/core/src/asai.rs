//! Non-archimedean Asai gamma, L and epsilon factors of principal series
//! `Ind(mu, nu)` of `GL_2(E)`, built from Tate factors of their constituents.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::characters::{omega_ef, AddChar, MultChar};
use crate::config::{default_grid, TOL_NONARCH};
use crate::error::{AsaiError, Result};
use crate::factor::{approx_equal, NonArchFactor};
use crate::field::{EElement, FieldTag, LocalField, QuadExtension};
use crate::tate::{eps_nonarch, gamma_tate_nonarch, l_nonarch, langlands_constant};

/// Name of the normalization of the Asai epsilon factor used throughout.
pub const NORMALIZATION: &str = "flicker";

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `tau = mu2 |.|^{v2} + nu2 |.|^{-v2}` on `GL_2(F)`.
#[derive(Clone, Debug)]
pub struct Tau {
    pub mu2: MultChar,
    pub nu2: MultChar,
    pub v2: Complex64,
}

/// A principal series `pi = Ind(mu, nu)` of `GL_2(E)` with the auxiliary data
/// entering its Asai factors.
#[derive(Clone, Debug)]
pub struct AsaiInput {
    pub ext: QuadExtension,
    pub mu: MultChar,
    pub nu: MultChar,
    pub psi: AddChar,
    pub xi: EElement,
    pub twist: Option<MultChar>,
    pub tau: Option<Tau>,
}

fn on_f(ext: &QuadExtension, chi: &MultChar, what: &str) -> Result<()> {
    if chi.tag() != FieldTag::F || chi.field().base() != ext.base() {
        return Err(AsaiError::Invalid(format!("{what} must be a character of F^x")));
    }
    Ok(())
}

impl AsaiInput {
    pub fn new(ext: QuadExtension, mu: MultChar, nu: MultChar, psi: AddChar, xi: EElement) -> Result<Self> {
        let ef = ext.field();
        if mu.field() != &ef || nu.field() != &ef {
            return Err(AsaiError::Invalid("mu and nu must be characters of E^x".into()));
        }
        if psi.field() != &LocalField::Ground(ext.base()) {
            return Err(AsaiError::Invalid("psi must be an additive character of F".into()));
        }
        if xi.is_zero() {
            return Err(AsaiError::Invalid("xi must be nonzero".into()));
        }
        if !ef.trace(&xi).is_zero() {
            return Err(AsaiError::Invalid("xi must have trace zero".into()));
        }
        Ok(AsaiInput { ext, mu, nu, psi, xi, twist: None, tau: None })
    }

    pub fn with_twist(mut self, chi: MultChar) -> Result<Self> {
        on_f(&self.ext, &chi, "the twist")?;
        self.twist = Some(chi);
        Ok(self)
    }

    pub fn with_tau(mut self, tau: Tau) -> Result<Self> {
        on_f(&self.ext, &tau.mu2, "mu2")?;
        on_f(&self.ext, &tau.nu2, "nu2")?;
        self.tau = Some(tau);
        Ok(self)
    }

    pub fn with_psi(&self, psi: AddChar) -> Self {
        AsaiInput { psi, ..self.clone() }
    }

    pub fn with_xi(&self, xi: EElement) -> Result<Self> {
        let mut out = AsaiInput::new(self.ext, self.mu.clone(), self.nu.clone(), self.psi, xi)?;
        out.twist = self.twist.clone();
        out.tau = self.tau.clone();
        Ok(out)
    }

    fn f(&self) -> LocalField {
        LocalField::Ground(self.ext.base())
    }

    fn p(&self) -> u64 {
        self.ext.base().p()
    }

    /// `(mu nu)|_F * chi^2`, the central character of `pi (x) chi` on `F^x`.
    pub fn omega_pi_f(&self) -> Result<MultChar> {
        let w = self.mu.mul(&self.nu)?.restrict_to_f()?;
        match &self.twist {
            Some(chi) => w.mul(&chi.pow(2)),
            None => Ok(w),
        }
    }

    /// `omega_pi|_F * mu2 nu2`.
    pub fn omega_total(&self) -> Result<MultChar> {
        let w = self.mu.mul(&self.nu)?.restrict_to_f()?;
        match &self.tau {
            Some(t) => w.mul(&t.mu2)?.mul(&t.nu2),
            None => Ok(w),
        }
    }

    /// The constituents `(mu|_F chi, nu|_F chi, mu nu^sigma (chi o N))`.
    pub fn constituents(&self) -> Result<[MultChar; 3]> {
        let mut a = self.mu.restrict_to_f()?;
        let mut b = self.nu.restrict_to_f()?;
        let mut c = self.mu.mul(&self.nu.sigma_conjugate()?)?;
        if let Some(chi) = &self.twist {
            a = a.mul(chi)?;
            b = b.mul(chi)?;
            c = c.mul(&chi.compose_norm(&self.ext)?)?;
        }
        Ok([a, b, c])
    }

    /// `(mu^{-1}, nu^{-1}, chi^{-1})` with the same `psi` and `xi`.
    pub fn contragredient(&self) -> Self {
        AsaiInput {
            mu: self.mu.inv(),
            nu: self.nu.inv(),
            twist: self.twist.as_ref().map(|c| c.inv()),
            tau: None,
            ..self.clone()
        }
    }

    /// `nu(-1) chi(-1)`.
    fn sign_nu(&self) -> Result<Complex64> {
        let m1 = self.ext.field().from_i64(-1);
        let mut v = self.nu.eval(&m1)?;
        if let Some(chi) = &self.twist {
            v *= chi.eval(&self.f().from_i64(-1))?;
        }
        Ok(v)
    }

    /// `(mu nu)(xi) chi(xi^2)`.
    pub fn omega_at_xi(&self) -> Result<Complex64> {
        let ef = self.ext.field();
        let mut v = self.mu.mul(&self.nu)?.eval(&self.xi)?;
        if let Some(chi) = &self.twist {
            v *= chi.eval(&ef.mul(&self.xi, &self.xi))?;
        }
        Ok(v)
    }
}

/// `|x|_F^{u s + w}` for `ord_F x = v`.
pub fn abs_power(p: u64, v: i64, u: i64, w: f64) -> NonArchFactor {
    NonArchFactor::monomial(p, c64((p as f64).powf(-(v as f64) * w), 0.0), v * u)
}

/// `ord_F` of an element of `F` given inside `E`.
fn ord_f(ext: &QuadExtension, x: &EElement) -> Result<i64> {
    Ok(ext.field().ord(x)? / ext.e() as i64)
}

/// `nu(-1) gamma(mu|_F, psi) gamma(nu|_F, psi) gamma(mu nu^sigma, psi_xi)` for
/// arbitrary `psi` and `xi`.
pub fn gamma_rs_direct(input: &AsaiInput) -> Result<NonArchFactor> {
    let [a, b, c] = input.constituents()?;
    let psi_xi = input.psi.psi_xi(&input.ext, &input.xi)?;
    Ok(gamma_tate_nonarch(&a, &input.psi)?
        .mul(&gamma_tate_nonarch(&b, &input.psi)?)?
        .mul(&gamma_tate_nonarch(&c, &psi_xi)?)?
        .scale(input.sign_nu()?))
}

/// How `(psi, xi)` was moved to conductor zero.
#[derive(Clone, Debug, Serialize)]
pub struct Renormalization {
    /// `psi' = psi^a` with `ord_F a = a_ord`.
    pub a_ord: i64,
    /// `xi' = b xi` with `ord_F b = b_ord`.
    pub b_ord: i64,
    /// Factor with `gamma(psi, xi) = correction * gamma(psi', xi')`.
    pub correction: NonArchFactor,
    /// Grid deviation between the renormalized and the direct computation.
    pub direct_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsaiGamma {
    pub factor: NonArchFactor,
    pub renormalization: Option<Renormalization>,
    pub normalization: &'static str,
}

/// The Rankin-Selberg Asai gamma factor of `pi (x) chi`.
pub fn gamma_rs(input: &AsaiInput) -> Result<AsaiGamma> {
    let c_psi = input.psi.conductor()?;
    let c_xi = input.psi.psi_xi(&input.ext, &input.xi)?.conductor()?;
    if c_psi == 0 && c_xi == 0 {
        return Ok(AsaiGamma { factor: gamma_rs_direct(input)?, renormalization: None, normalization: NORMALIZATION });
    }
    let f = input.f();
    let base = input.ext.base();
    let p = input.p();
    let a_ord = c_psi;
    let psi1 = input.psi.shift(&f.embed(base.pi_pow(a_ord)))?;
    let c1 = psi1.psi_xi(&input.ext, &input.xi)?.conductor()?;
    let e = input.ext.e() as i64;
    if c1 % e != 0 {
        return Err(AsaiError::Consistency(format!("conductor {c1} of psi_xi not divisible by e")));
    }
    let b_ord = c1 / e;
    let ef = input.ext.field();
    let xi1 = ef.mul(&ef.embed(base.pi_pow(b_ord)), &input.xi);
    let normalized = input.with_psi(psi1).with_xi(xi1)?;
    let core = gamma_rs_direct(&normalized)?;
    let w = input.omega_pi_f()?;
    let pa = f.embed(base.pi_pow(a_ord));
    let pb = f.embed(base.pi_pow(b_ord));
    let correction = abs_power(p, a_ord, -4, 2.0)
        .mul(&abs_power(p, b_ord, -2, 1.0))?
        .scale(1.0 / (w.eval(&pa)?.powi(2) * w.eval(&pb)?));
    let factor = core.mul(&correction)?;
    let direct = gamma_rs_direct(input)?;
    let cmp = approx_equal(&factor, &direct, &default_grid(), TOL_NONARCH)?;
    if !cmp.equal {
        return Err(AsaiError::Consistency(format!(
            "renormalized gamma differs from the direct product (deviation {:e})",
            cmp.max_deviation
        )));
    }
    Ok(AsaiGamma {
        factor,
        renormalization: Some(Renormalization { a_ord, b_ord, correction, direct_deviation: cmp.max_deviation }),
        normalization: NORMALIZATION,
    })
}

/// `L(s, mu|_F chi) L(s, nu|_F chi) L(s, mu nu^sigma (chi o N))`.
pub fn l_gal_asai(input: &AsaiInput) -> Result<NonArchFactor> {
    let [a, b, c] = input.constituents()?;
    l_nonarch(&a).mul(&l_nonarch(&b))?.mul(&l_nonarch(&c))
}

/// `gamma_RS L(s) / L^vee(1 - s)`.
pub fn eps_rs(input: &AsaiInput) -> Result<NonArchFactor> {
    let l = l_gal_asai(input)?;
    let l_dual = l_gal_asai(&input.contragredient())?.reflect();
    gamma_rs(input)?.factor.mul(&l)?.div(&l_dual)
}

/// The Galois-side epsilon factor with its constituents.
#[derive(Clone, Debug, Serialize)]
pub struct GalEps {
    /// `lambda_{E/F}(psi)`.
    pub lambda: Complex64,
    /// `eps(mu|_F chi, psi)`, `eps(nu|_F chi, psi)`, `eps(mu nu^sigma (chi o N), psi o tr)`.
    pub constituents: [NonArchFactor; 3],
    pub total: NonArchFactor,
}

pub fn eps_gal(input: &AsaiInput) -> Result<GalEps> {
    let [a, b, c] = input.constituents()?;
    let lambda = langlands_constant(&input.ext, &input.psi)?;
    let psi_e = input.psi.via_trace(&input.ext);
    let constituents = [eps_nonarch(&a, &input.psi)?, eps_nonarch(&b, &input.psi)?, eps_nonarch(&c, &psi_e)?];
    let total = constituents[0].mul(&constituents[1])?.mul(&constituents[2])?.scale(lambda);
    Ok(GalEps { lambda, constituents, total })
}

/// `lambda gamma(mu|_F chi) gamma(nu|_F chi) gamma(mu nu^sigma (chi o N), psi o tr)`.
pub fn gamma_gal(input: &AsaiInput) -> Result<NonArchFactor> {
    let [a, b, c] = input.constituents()?;
    let lambda = langlands_constant(&input.ext, &input.psi)?;
    let psi_e = input.psi.via_trace(&input.ext);
    Ok(gamma_tate_nonarch(&a, &input.psi)?
        .mul(&gamma_tate_nonarch(&b, &input.psi)?)?
        .mul(&gamma_tate_nonarch(&c, &psi_e)?)?
        .scale(lambda))
}

/// Grid comparison of `eps_RS` with `omega(xi)|xi^2|^{s-1/2} lambda^{-1} eps_Gal`.
#[derive(Clone, Debug, Serialize)]
pub struct EpsComparison {
    pub eps_rs: NonArchFactor,
    pub predicted: NonArchFactor,
    pub gal: GalEps,
    pub omega_xi: Complex64,
    pub grid: Vec<Complex64>,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub equal: bool,
}

pub fn eps_gal_comparison(input: &AsaiInput, grid: &[Complex64], tol: f64) -> Result<EpsComparison> {
    let e_rs = eps_rs(input)?;
    let gal = eps_gal(input)?;
    let omega_xi = input.omega_at_xi()?;
    let v = input.ext.f() as i64 * input.ext.field().ord(&input.xi)?;
    let predicted = gal
        .total
        .mul(&abs_power(input.p(), v, 1, -0.5))?
        .scale(omega_xi / gal.lambda);
    let cmp = approx_equal(&e_rs, &predicted, grid, tol)?;
    Ok(EpsComparison {
        eps_rs: e_rs,
        predicted,
        gal,
        omega_xi,
        grid: grid.to_vec(),
        deviations: cmp.deviations,
        max_deviation: cmp.max_deviation,
        equal: cmp.equal,
    })
}

fn tau_of(input: &AsaiInput) -> Result<&Tau> {
    input.tau.as_ref().ok_or_else(|| AsaiError::Invalid("twisted Asai factors need tau".into()))
}

fn twisted(input: &AsaiInput, chi: &MultChar) -> Result<AsaiInput> {
    let mut out = input.clone();
    out.tau = None;
    out.twist = Some(match &input.twist {
        Some(t) => t.mul(chi)?,
        None => chi.clone(),
    });
    Ok(out)
}

/// Both assemblies of `gamma^{PSR}(s, pi x tau)` and their agreement.
#[derive(Clone, Debug, Serialize)]
pub struct PsrGamma {
    pub assembly1: NonArchFactor,
    pub assembly2: NonArchFactor,
    pub grid: Vec<Complex64>,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub equal: bool,
    pub renormalizations: Vec<Renormalization>,
}

/// `omega(c)^{-1} |c|^{-2s+1}` for `c = 4 xi^{2k}`.
fn xi_power_prefactor(input: &AsaiInput, omega: &MultChar, k: i64) -> Result<NonArchFactor> {
    let ef = input.ext.field();
    let xi_k = ef.pow(&ef.mul(&input.xi, &input.xi), k);
    let c = ef.mul(&ef.from_i64(4), &xi_k);
    let v = ord_f(&input.ext, &c)?;
    Ok(abs_power(input.p(), v, -2, 1.0).scale(1.0 / omega.eval(&c)?))
}

pub fn gamma_psr(input: &AsaiInput, grid: &[Complex64], tol: f64) -> Result<PsrGamma> {
    let tau = tau_of(input)?;
    let omega = input.omega_total()?;
    let in1 = twisted(input, &tau.mu2)?;
    let in2 = twisted(input, &tau.nu2)?;
    let g1 = gamma_rs(&in1)?;
    let g2 = gamma_rs(&in2)?;
    let renormalizations = [&g1, &g2].iter().filter_map(|g| g.renormalization.clone()).collect();
    let assembly1 = xi_power_prefactor(input, &omega, 2)?
        .mul(&g1.factor.shift(tau.v2))?
        .mul(&g2.factor.shift(-tau.v2))?;
    let sign = omega_ef(&input.ext).eval(&input.f().from_i64(-1))?;
    let assembly2 = xi_power_prefactor(input, &omega, 1)?
        .mul(&gamma_gal(&in1)?.shift(tau.v2))?
        .mul(&gamma_gal(&in2)?.shift(-tau.v2))?
        .scale(sign);
    let cmp = approx_equal(&assembly1, &assembly2, grid, tol)?;
    Ok(PsrGamma {
        assembly1,
        assembly2,
        grid: grid.to_vec(),
        deviations: cmp.deviations,
        max_deviation: cmp.max_deviation,
        equal: cmp.equal,
        renormalizations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Dichotomy {
    pub sign: i8,
    pub raw: Complex64,
    pub omega_ef_minus_one: Complex64,
    /// `eps_Gal(1/2 + v2, As pi (x) mu2)` and `eps_Gal(1/2 - v2, As pi (x) nu2)`.
    pub constituent_eps: [Complex64; 2],
}

/// `omega_{E/F}(-1) eps_Gal(1/2, As pi (x) tau)` when `omega_pi|_F omega_tau = 1`.
pub fn dichotomy_sign(input: &AsaiInput) -> Result<Dichotomy> {
    let tau = tau_of(input)?;
    let omega = input.omega_total()?;
    if !omega.approx_eq(&MultChar::trivial(omega.field()), 1e-12) {
        return Err(AsaiError::Precondition("the dichotomy sign needs omega_pi|_F omega_tau = 1".into()));
    }
    let half = c64(0.5, 0.0);
    let e1 = eps_gal(&twisted(input, &tau.mu2)?)?.total.eval(half + tau.v2)?;
    let e2 = eps_gal(&twisted(input, &tau.nu2)?)?.total.eval(half - tau.v2)?;
    let w = omega_ef(&input.ext).eval(&input.f().from_i64(-1))?;
    let raw = w * e1 * e2;
    let sign = if (raw - 1.0).norm() < TOL_NONARCH {
        1
    } else if (raw + 1.0).norm() < TOL_NONARCH {
        -1
    } else {
        return Err(AsaiError::Consistency(format!("central epsilon value {raw} is not a sign")));
    };
    Ok(Dichotomy { sign, raw, omega_ef_minus_one: w, constituent_eps: [e1, e2] })
}

/// The split algebra `E = F x F`: `pi = pi1 x pi2` with `pi_i = Ind(mu_i, nu_i)`
/// and `xi = (xi0, -xi0)`.
#[derive(Clone, Debug, Serialize)]
pub struct SplitCheck {
    pub lhs: NonArchFactor,
    pub rhs: NonArchFactor,
    pub max_deviation: f64,
    pub equal: bool,
}

pub fn split_check(
    pi1: (&MultChar, &MultChar),
    pi2: (&MultChar, &MultChar),
    psi: &AddChar,
    xi0: &EElement,
    grid: &[Complex64],
    tol: f64,
) -> Result<SplitCheck> {
    let f = *psi.field();
    let (mu1, nu1) = pi1;
    let (mu2, nu2) = pi2;
    let m1 = f.from_i64(-1);
    let eps = |chi: &MultChar, psi: &AddChar| eps_nonarch(chi, psi);
    let psi_p = psi.shift(xi0)?;
    let psi_m = psi.shift(&(-*xi0))?;
    let sign = nu1.eval(&m1)? * nu2.eval(&m1)?;
    let lhs = eps(&mu1.mul(mu2)?, psi)?
        .mul(&eps(&nu1.mul(nu2)?, psi)?)?
        .mul(&eps(&mu1.mul(nu2)?, &psi_p)?)?
        .mul(&eps(&nu1.mul(mu2)?, &psi_m)?)?
        .scale(sign);
    let omega_xi = mu1.mul(nu1)?.eval(xi0)? * mu2.mul(nu2)?.eval(&(-*xi0))?;
    let v = f.ord(xi0)?;
    let rhs = eps(&mu1.mul(mu2)?, psi)?
        .mul(&eps(&mu1.mul(nu2)?, psi)?)?
        .mul(&eps(&nu1.mul(mu2)?, psi)?)?
        .mul(&eps(&nu1.mul(nu2)?, psi)?)?
        .mul(&abs_power(f.p(), v, 2, -1.0))?
        .scale(omega_xi);
    let cmp = approx_equal(&lhs, &rhs, grid, tol)?;
    Ok(SplitCheck { lhs, rhs, max_deviation: cmp.max_deviation, equal: cmp.equal })
}

/// A random principal-series input with conductors at most `max_conductor`.
pub fn random_input<R: Rng + ?Sized>(ext: &QuadExtension, max_conductor: u32, rng: &mut R) -> Result<AsaiInput> {
    let ef = ext.field();
    let f = LocalField::Ground(ext.base());
    let mu = MultChar::random(&ef, rng.gen_range(0..=max_conductor).max(1), rng)?;
    let nu = MultChar::random(&ef, rng.gen_range(0..=max_conductor).max(1), rng)?;
    AsaiInput::new(*ext, mu, nu, AddChar::standard(&f), ext.xi())
}

/// A random `tau` with `omega_pi|_F mu2 nu2 = 1`.
pub fn random_self_dual_tau<R: Rng + ?Sized>(input: &AsaiInput, max_conductor: u32, rng: &mut R) -> Result<Tau> {
    let f = LocalField::Ground(input.ext.base());
    let mu2 = MultChar::random(&f, rng.gen_range(1..=max_conductor.max(1)), rng)?;
    let nu2 = input.mu.mul(&input.nu)?.restrict_to_f()?.mul(&mu2)?.inv();
    let v2 = c64(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
    Ok(Tau { mu2, nu2, v2 })
}
