//! Tate local factors of characters of `F^x` and `E^x`.
//!
//! Non-archimedean gamma factors come from the local functional equation
//! evaluated on Schwartz functions that are finite sums of twisted boxes
//! `coef * psi(beta x) * 1_{alpha + uniformizer^m O}(x)`. Such sums are closed
//! under the Fourier transform, and their zeta integrals are finite shell
//! sums plus geometric tails.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{omega_ef, AddChar, MultChar};
use crate::config::{default_grid, TOL_PHI};
use crate::error::{AsaiError, Result};
use crate::factor::{rel_dev, ArchFactor, NonArchFactor};
use crate::field::{EElement, LocalField, QuadExtension};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `coef * psi(twist * x) * 1_{center + uniformizer^level O}(x)`.
#[derive(Clone, Copy, Debug)]
pub struct TwistedBox {
    pub coef: Complex64,
    pub center: EElement,
    pub twist: EElement,
    pub level: i64,
}

/// A Schwartz function on a local field, as a sum of twisted boxes.
#[derive(Clone, Debug)]
pub struct Schwartz {
    pub field: LocalField,
    pub boxes: Vec<TwistedBox>,
}

impl Schwartz {
    /// The indicator of `center + uniformizer^level O`.
    pub fn indicator(field: &LocalField, center: EElement, level: i64) -> Self {
        Schwartz {
            field: *field,
            boxes: vec![TwistedBox { coef: c64(1.0, 0.0), center, twist: field.zero(), level }],
        }
    }

    pub fn eval(&self, x: &EElement, psi: &AddChar) -> Result<Complex64> {
        let f = &self.field;
        let mut total = c64(0.0, 0.0);
        for b in &self.boxes {
            let d = *x - b.center;
            if d.is_zero() || f.ord(&d)? >= b.level {
                total += b.coef * psi.eval(&f.mul(&b.twist, x))?;
            }
        }
        Ok(total)
    }

    /// Fourier transform for the measure self-dual with respect to `psi`.
    pub fn fourier(&self, psi: &AddChar) -> Result<Schwartz> {
        let f = &self.field;
        let c = psi.conductor()?;
        let q = f.q() as f64;
        let boxes = self
            .boxes
            .iter()
            .map(|b| {
                let vol = q.powf(c as f64 / 2.0 - b.level as f64);
                Ok(TwistedBox {
                    coef: b.coef * vol * psi.eval(&f.mul(&b.center, &b.twist))?,
                    center: -b.twist,
                    twist: b.center,
                    level: c - b.level,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Schwartz { field: *f, boxes })
    }
}

/// `sum_v I_v z^v + sum tails coef * z^V / (1 - z)`.
#[derive(Clone, Debug, Default)]
pub struct ZetaSeries {
    pub terms: BTreeMap<i64, Complex64>,
    pub tails: Vec<(i64, Complex64)>,
}

impl ZetaSeries {
    fn add_term(&mut self, v: i64, c: Complex64) {
        *self.terms.entry(v).or_insert(c64(0.0, 0.0)) += c;
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut total: Complex64 = self.terms.iter().map(|(&v, &c)| c * z.powi(v as i32)).sum();
        for &(v, c) in &self.tails {
            if c.norm() == 0.0 {
                continue;
            }
            let d = 1.0 - z;
            if d.norm() < 1e-13 {
                return Err(AsaiError::Pole(format!("zeta tail at z = {z}")));
            }
            total += c * z.powi(v as i32) / d;
        }
        Ok(total)
    }
}

/// Average of `chi0(u) psi(beta * pi^v * u)` over `u` in `u0 + pi^j O`, with `j = 0`
/// meaning all of `O^x`, for the normalized measure `vol(O^x) = 1`.
fn unit_average(
    chi: &MultChar,
    psi: &AddChar,
    c_psi: i64,
    beta: &EElement,
    v: i64,
    coset: Option<(EElement, u32)>,
) -> Result<Complex64> {
    let f = chi.field();
    let twist_level = if beta.is_zero() { 0 } else { c_psi - f.ord(beta)? - v };
    let j = coset.map(|(_, j)| j).unwrap_or(0);
    let level = (chi.conductor() as i64).max(twist_level).max(j as i64).max(1) as u32;
    if level + 1 > f.max_level() {
        return Err(AsaiError::Precision { needed: level as i64 + 1, available: f.precision() });
    }
    let weight = 1.0 / ((f.q() - 1) as f64 * (f.q() as f64).powi(level as i32 - 1));
    let pv = f.pi_pow(v);
    let bpv = f.mul(beta, &pv);
    let reps: Vec<EElement> = match coset {
        None => f.unit_representatives(level)?,
        Some((u0, j)) => {
            let pj = f.pi_pow(j as i64);
            f.integer_representatives(level - j)?.iter().map(|r| u0 + f.mul(&pj, r)).collect()
        }
    };
    let mut total = c64(0.0, 0.0);
    for u in &reps {
        let mut a = chi.unit_angle(u)?;
        if !beta.is_zero() {
            a += psi.angle(&f.mul(&bpv, u))?;
        }
        total += a.to_complex();
    }
    Ok(total * weight)
}

/// Zeta integral `Z(s, chi, phi)` as a series in `z = chi(pi) q^{-s}`.
pub fn tate_zeta(chi: &MultChar, psi: &AddChar, phi: &Schwartz) -> Result<ZetaSeries> {
    let f = chi.field();
    let c_psi = psi.conductor()?;
    let mut out = ZetaSeries::default();
    for b in &phi.boxes {
        let ball = b.center.is_zero() || f.ord(&b.center)? >= b.level;
        if ball {
            let m = b.level;
            let stable = if b.twist.is_zero() { m } else { m.max(c_psi - f.ord(&b.twist)?) };
            for v in m..stable {
                out.add_term(v, b.coef * unit_average(chi, psi, c_psi, &b.twist, v, None)?);
            }
            if chi.is_unramified() {
                out.tails.push((stable, b.coef));
            }
        } else {
            let w = f.ord(&b.center)?;
            let u0 = f.unit_part(&b.center)?;
            let j = (b.level - w) as u32;
            out.add_term(w, b.coef * unit_average(chi, psi, c_psi, &b.twist, w, Some((u0, j)))?);
        }
    }
    Ok(out)
}

fn z_of(chi: &MultChar, s: Complex64) -> Complex64 {
    let q = chi.field().q() as f64;
    chi.value_on_uniformizer() * (-s * q.ln()).exp()
}

/// `Z(1-s, chi^{-1}, phi^) / Z(s, chi, phi)` at one point.
pub fn gamma_oracle_at(chi: &MultChar, psi: &AddChar, phi: &Schwartz, s: Complex64) -> Result<Complex64> {
    let zs = tate_zeta(chi, psi, phi)?;
    let chi_inv = chi.inv();
    let zd = tate_zeta(&chi_inv, psi, &phi.fourier(psi)?)?;
    gamma_from_series(chi, &chi_inv, &zs, &zd, s)
}

fn gamma_from_series(chi: &MultChar, chi_inv: &MultChar, zs: &ZetaSeries, zd: &ZetaSeries, s: Complex64) -> Result<Complex64> {
    let num = zd.eval(z_of(chi_inv, 1.0 - s))?;
    let den = zs.eval(z_of(chi, s))?;
    if den.norm() < 1e-300 {
        return Err(AsaiError::Pole(format!("zeta integral vanishes at {s}")));
    }
    Ok(num / den)
}

/// Test functions used by the functional-equation oracle: the primary one,
/// `1_{1 + pi^max(c,1) O}`, a seeded random translate and the Fourier
/// transform of the second, which is a twisted box.
pub fn test_functions(chi: &MultChar, psi: &AddChar) -> Result<Vec<Schwartz>> {
    let f = chi.field();
    let c = chi.conductor() as i64;
    let primary = if chi.is_unramified() {
        Schwartz::indicator(f, f.zero(), 0)
    } else {
        Schwartz::indicator(f, f.one(), c)
    };
    let second = Schwartz::indicator(f, f.one(), c.max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a7e ^ ((c as u64) << 8) ^ f.q());
    let units = f.unit_representatives(1)?;
    let u = units[rng.gen_range(0..units.len())];
    let j = rng.gen_range(-1..=1);
    let center = f.mul(&f.pi_pow(j), &(u + f.mul(&f.pi_pow(1), &f.from_i64(rng.gen_range(0..f.p() as i64)))));
    let third = Schwartz::indicator(f, center, j + c.max(1) + rng.gen_range(0..=1));
    let fourth = second.fourier(psi)?;
    Ok(vec![primary, second, third, fourth])
}

/// `L(s, chi)`: `(1 - chi(pi) q^{-s})^{-1}` when unramified, else 1.
pub fn l_nonarch(chi: &MultChar) -> NonArchFactor {
    let f = chi.field();
    if chi.is_unramified() {
        NonArchFactor::euler(f.p(), chi.value_on_uniformizer(), f.f() as i64, 0)
    } else {
        NonArchFactor::one(f.p())
    }
}

/// The Tate factors of one character.
#[derive(Clone, Debug, Serialize)]
pub struct TateFactors {
    pub l: NonArchFactor,
    /// `L(1 - s, chi^{-1})`.
    pub l_dual: NonArchFactor,
    pub eps: NonArchFactor,
    pub gamma: NonArchFactor,
    /// Exponent `n` in `eps = c q^{-n s}`.
    pub eps_exponent: i64,
    /// Largest relative disagreement among the test functions.
    pub phi_deviation: f64,
}

fn check_precision(chi: &MultChar, c_psi: i64) -> Result<()> {
    let needed = chi.conductor() as i64 + c_psi.abs() + 2;
    let available = chi.field().max_level() as i64;
    if needed > available {
        return Err(AsaiError::Precision { needed, available: chi.field().precision() });
    }
    Ok(())
}

/// `gamma(s, chi, psi)` from the functional equation, with the Phi-independence check.
pub fn tate_factors(chi: &MultChar, psi: &AddChar) -> Result<TateFactors> {
    if chi.field() != psi.field() {
        return Err(AsaiError::Invalid("character and additive character live on different fields".into()));
    }
    let f = chi.field();
    let c_psi = psi.conductor()?;
    check_precision(chi, c_psi)?;
    let chi_inv = chi.inv();
    let probes = [c64(0.3, 0.17), c64(1.3, 0.17)];
    let points: Vec<Complex64> = default_grid().into_iter().chain(probes).collect();

    let mut tables: Vec<Vec<Complex64>> = Vec::new();
    for phi in test_functions(chi, psi)? {
        let zs = tate_zeta(chi, psi, &phi)?;
        let zd = tate_zeta(&chi_inv, psi, &phi.fourier(psi)?)?;
        tables.push(
            points
                .iter()
                .map(|&s| gamma_from_series(chi, &chi_inv, &zs, &zd, s))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let mut phi_deviation: f64 = 0.0;
    for t in &tables[1..] {
        for (a, b) in t.iter().zip(&tables[0]) {
            phi_deviation = phi_deviation.max(rel_dev(*a, *b));
        }
    }
    if phi_deviation > TOL_PHI {
        return Err(AsaiError::Consistency(format!(
            "functional-equation ratio depends on the test function (deviation {phi_deviation:e})"
        )));
    }

    let l = l_nonarch(chi);
    let l_dual = l_nonarch(&chi_inv).reflect();
    let gammas = &tables[0];
    let eps_at = |i: usize| -> Result<Complex64> { Ok(gammas[i] * l.eval(points[i])? / l_dual.eval(points[i])?) };
    let n_grid = points.len() - 2;
    let (e0, e1) = (eps_at(n_grid)?, eps_at(n_grid + 1)?);
    let q = f.q() as f64;
    let n = (-(e1 / e0).norm().ln() / q.ln()).round() as i64;
    let c = e0 * (probes[0] * n as f64 * q.ln()).exp();
    let eps = NonArchFactor::monomial(f.p(), c, n * f.f() as i64);
    for i in 0..points.len() {
        let dev = rel_dev(eps_at(i)?, eps.eval(points[i])?);
        if dev > 1e-9 {
            return Err(AsaiError::Consistency(format!(
                "epsilon factor is not a monomial in q^-s (deviation {dev:e} at s = {})",
                points[i]
            )));
        }
    }
    let gamma = eps.mul(&l_dual)?.div(&l)?;
    Ok(TateFactors { l, l_dual, eps, gamma, eps_exponent: n, phi_deviation })
}

pub fn gamma_tate_nonarch(chi: &MultChar, psi: &AddChar) -> Result<NonArchFactor> {
    Ok(tate_factors(chi, psi)?.gamma)
}

pub fn eps_nonarch(chi: &MultChar, psi: &AddChar) -> Result<NonArchFactor> {
    Ok(tate_factors(chi, psi)?.eps)
}

/// `sum chi^{-1}(x) psi(x)` over `x` with `ord x = -c(chi) - c(psi)` modulo
/// `1 + pi^{c(chi)} O`.
pub fn gauss_sum(chi: &MultChar, psi: &AddChar) -> Result<Complex64> {
    if chi.is_unramified() {
        return Err(AsaiError::Invalid("Gauss sum of an unramified character".into()));
    }
    let f = chi.field();
    let c = chi.conductor();
    let c_psi = psi.conductor()?;
    check_precision(chi, c_psi)?;
    let inv = chi.inv();
    let mut total = c64(0.0, 0.0);
    for x in f.shell_representatives(-(c as i64) - c_psi, c)? {
        total += inv.eval(&x)? * psi.eval(&x)?;
    }
    Ok(total)
}

/// `lambda_{E/F}(psi) := eps(1/2, omega_{E/F}, psi)`.
pub fn langlands_constant(ext: &QuadExtension, psi: &AddChar) -> Result<Complex64> {
    eps_nonarch(&omega_ef(ext), psi)?.eval(c64(0.5, 0.0))
}

/// Archimedean L and epsilon of `sgn^m |.|^lambda` with respect to
/// `psi_a(x) = exp(2 pi i a x)` on the reals.
pub fn l_eps_arch_real(m: u8, lambda: Complex64, a: f64) -> (ArchFactor, ArchFactor) {
    let m = m % 2;
    let l = ArchFactor::zeta_r(lambda + m as f64);
    let sign = if a < 0.0 && m == 1 { -1.0 } else { 1.0 };
    let mut eps = ArchFactor::constant(c64(0.0, 1.0).powi(m as i32) * sign);
    if (a.abs() - 1.0).abs() > 0.0 {
        eps.expos.push(crate::factor::ExpoTerm { base: a.abs(), u: 1.0, v: lambda - 0.5 });
    }
    (l, eps)
}

/// Archimedean L and epsilon of `(z/|z|)^n |z|_C^lambda` with respect to
/// `psi_a(tr z)`, `psi_a(x) = exp(2 pi i a x)`, `a` complex.
pub fn l_eps_arch_complex(n: i64, lambda: Complex64, a: Complex64) -> (ArchFactor, ArchFactor) {
    let l = ArchFactor::zeta_c(lambda + n.unsigned_abs() as f64 / 2.0);
    let unit = (a / a.norm()).powi(n as i32);
    let mut eps = ArchFactor::constant(c64(0.0, 1.0).powi(n.unsigned_abs() as i32) * unit);
    let abs_c = a.norm_sqr();
    if (abs_c - 1.0).abs() > 0.0 {
        eps.expos.push(crate::factor::ExpoTerm { base: abs_c, u: 1.0, v: lambda - 0.5 });
    }
    (l, eps)
}

/// `lambda_{C/R}(psi_a) = sgn(a) i`.
pub fn langlands_constant_arch(a: f64) -> Complex64 {
    c64(0.0, a.signum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::characters::{pu, UnifValue};
    use crate::field::ExtKind;
    use crate::padic::{legendre, Qp};
    use crate::quadrature::integrate_2d;

    fn ground(p: u64) -> LocalField {
        LocalField::Ground(Qp::new(p, 12).unwrap())
    }

    fn legendre_char(p: u64) -> MultChar {
        let f = ground(p);
        MultChar::from_angles(&f, 1, vec![Angle::half()], UnifValue::one(), c64(0.0, 0.0)).unwrap()
    }

    #[test]
    fn trivial_character_gamma() {
        let f = ground(3);
        let g = gamma_tate_nonarch(&MultChar::trivial(&f), &AddChar::standard(&f)).unwrap();
        for s in default_grid() {
            let expect = (1.0 - (-s * 3f64.ln()).exp()) / (1.0 - ((s - 1.0) * 3f64.ln()).exp());
            assert!(rel_dev(g.eval(s).unwrap(), expect) < 1e-12);
        }
    }

    #[test]
    fn unramified_l_factor() {
        let f = ground(5);
        let chi = MultChar::unramified(&f, UnifValue::Exact(Angle::new(1, 4)), c64(0.0, 0.0));
        let l = l_nonarch(&chi);
        let s = c64(0.7, 0.2);
        let expect = 1.0 / (1.0 - c64(0.0, 1.0) * (-s * 5f64.ln()).exp());
        assert!(rel_dev(l.eval(s).unwrap(), expect) < 1e-14);
        assert!(l_nonarch(&legendre_char(5)).is_monomial());
        let eps = eps_nonarch(&chi, &AddChar::standard(&f)).unwrap();
        assert!(rel_dev(eps.eval(s).unwrap(), c64(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn legendre_gauss_sums() {
        let g5 = gauss_sum(&legendre_char(5), &AddChar::standard(&ground(5))).unwrap();
        assert!((g5 - c64(5f64.sqrt(), 0.0)).norm() < 1e-12);
        let g3 = gauss_sum(&legendre_char(3), &AddChar::standard(&ground(3))).unwrap();
        assert!((g3 - c64(0.0, 3f64.sqrt())).norm() < 1e-12);
        let f = ground(5);
        let eps = eps_nonarch(&legendre_char(5), &AddChar::standard(&f)).unwrap();
        assert_eq!(eps.m, 1);
        assert!((eps.eval(c64(0.5, 0.0)).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn epsilon_is_normalized_gauss_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [3, 5] {
            let f = ground(p);
            let psi = AddChar::standard(&f);
            for c in 1..=2 {
                let chi = MultChar::random_with_conductor(&f, c, &mut rng).unwrap();
                let tf = tate_factors(&chi, &psi).unwrap();
                assert_eq!(tf.eps_exponent, c as i64);
                let g = gauss_sum(&chi, &psi).unwrap();
                let expect = g / (p as f64).powf(c as f64 / 2.0);
                assert!((tf.eps.eval(c64(0.5, 0.0)).unwrap() - expect).norm() < 1e-10);
                assert!(tf.phi_deviation < 1e-10);
            }
        }
    }

    #[test]
    fn functional_equation_with_negated_character() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let p = if rng.gen_bool(0.5) { 3 } else { 5 };
            let f = ground(p);
            let chi = MultChar::random(&f, rng.gen_range(1..=2), &mut rng).unwrap();
            let psi = AddChar::standard(&f);
            let g = gamma_tate_nonarch(&chi, &psi).unwrap();
            let gd = gamma_tate_nonarch(&chi.inv(), &psi.negate()).unwrap().reflect();
            for s in default_grid() {
                assert!(rel_dev(g.eval(s).unwrap() * gd.eval(s).unwrap(), c64(1.0, 0.0)) < 1e-9);
            }
        }
    }

    #[test]
    fn additive_shift_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = ground(5);
        let psi = AddChar::standard(&f);
        for c in 0..=2 {
            let chi = MultChar::random_with_conductor(&f, c, &mut rng).unwrap();
            let eps = eps_nonarch(&chi, &psi).unwrap();
            for a in [pu(&f, 1, 1), pu(&f, 0, 3), pu(&f, -1, 2)] {
                let shifted = eps_nonarch(&chi, &psi.shift(&a).unwrap()).unwrap();
                let abs = f.abs(&a);
                for s in default_grid() {
                    let expect = chi.eval(&a).unwrap() * c64(abs, 0.0).powc(s - 0.5) * eps.eval(s).unwrap();
                    assert!(rel_dev(shifted.eval(s).unwrap(), expect) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn unramified_twist_of_level_r_character() {
        // eps(s, mu, psi) = mu(p)^r q^{-r(s - 1/2)} for c(psi) = -r, up to |.| normalization
        let f = ground(3);
        let mu = MultChar::unramified(&f, UnifValue::Exact(Angle::new(1, 6)), c64(0.0, 0.0));
        for r in 1..=2 {
            let psi = AddChar::standard(&f).shift(&f.pi_pow(r)).unwrap();
            let eps = eps_nonarch(&mu, &psi).unwrap();
            for s in default_grid() {
                let expect = mu.value_on_uniformizer().powi(r as i32) * (-(s - 0.5) * (r as f64) * 3f64.ln()).exp();
                assert!(rel_dev(eps.eval(s).unwrap(), expect) < 1e-10);
            }
        }
    }

    #[test]
    fn gauss_sum_moduli() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for p in [3u64, 5, 7] {
            let f = ground(p);
            let psi = AddChar::standard(&f);
            for n in 1..=3 {
                let chi = MultChar::random_with_conductor(&f, n, &mut rng).unwrap();
                let g = gauss_sum(&chi, &psi).unwrap();
                assert!((g.norm() - (p as f64).powf(n as f64 / 2.0)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn quadratic_extension_characters() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for kind in ExtKind::ALL {
            let ext = QuadExtension::new(Qp::new(3, 12).unwrap(), kind);
            let ef = ext.field();
            let psi = AddChar::standard(&ground(3)).psi_xi(&ext, &ext.xi()).unwrap();
            for level in 1..=2 {
                let chi = MultChar::random(&ef, level, &mut rng).unwrap();
                let tf = tate_factors(&chi, &psi).unwrap();
                assert!(tf.phi_deviation < 1e-10);
                assert!((tf.eps.eval(c64(0.5, 0.0)).unwrap().norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn langlands_constants() {
        for p in [3u64, 5, 7] {
            let ext = QuadExtension::new(Qp::new(p, 12).unwrap(), ExtKind::Unramified);
            let lam = langlands_constant(&ext, &AddChar::standard(&ground(p))).unwrap();
            assert!((lam - 1.0).norm() < 1e-12);
            for kind in [ExtKind::RamifiedP, ExtKind::RamifiedUp] {
                let ext = QuadExtension::new(Qp::new(p, 12).unwrap(), kind);
                let lam = langlands_constant(&ext, &AddChar::standard(&ground(p))).unwrap();
                let w = omega_ef(&ext);
                let wm1 = w.eval(&ground(p).from_i64(-1)).unwrap();
                assert!((lam * lam - wm1).norm() < 1e-10);
                let _ = legendre;
            }
        }
        assert_eq!(langlands_constant_arch(1.0), c64(0.0, 1.0));
        assert_eq!(langlands_constant_arch(-2.0), c64(0.0, -1.0));
    }

    #[test]
    fn arch_real_epsilons() {
        let (l, e) = l_eps_arch_real(0, c64(0.0, 0.0), 1.0);
        assert!(rel_dev(l.eval(c64(2.0, 0.0)).unwrap(), c64(1.0 / std::f64::consts::PI, 0.0)) < 1e-14);
        assert_eq!(e.eval(c64(0.3, 0.0)).unwrap(), c64(1.0, 0.0));
        let (_, e) = l_eps_arch_real(1, c64(0.0, 0.0), 1.0);
        assert_eq!(e.eval(c64(0.3, 0.0)).unwrap(), c64(0.0, 1.0));
    }

    #[test]
    fn arch_complex_epsilon_matches_fourier_oracle() {
        // Phi(z) = conj(z)^n e^{-2 pi |z|^2} for n >= 0 and z^{|n|} e^{..} for n < 0;
        // the self-dual transform for psi(tr z) is eps * (pairing monomial) e^{-2 pi |w|^2}.
        use std::f64::consts::PI;
        for n in [-2i64, -1, 1, 2] {
            let w0 = c64(0.31, -0.22);
            let phi = |x: f64, y: f64| {
                let z = c64(x, y);
                let mono = if n >= 0 { z.conj().powi(n as i32) } else { z.powi((-n) as i32) };
                mono * (-2.0 * PI * z.norm_sqr()).exp()
            };
            let q = integrate_2d(
                |x, y| {
                    let z = c64(x, y);
                    let t = 2.0 * (z * w0).re;
                    phi(x, y) * c64(0.0, 2.0 * PI * t).exp() * 2.0
                },
                (-4.0, 4.0),
                (-4.0, 4.0),
                1e-11,
                1e-13,
            )
            .unwrap();
            let mono = if n >= 0 { w0.powi(n as i32) } else { w0.conj().powi((-n) as i32) };
            let ratio = q.value / (mono * (-2.0 * PI * w0.norm_sqr()).exp());
            let (_, eps) = l_eps_arch_complex(n, c64(0.0, 0.0), c64(1.0, 0.0));
            assert!((ratio - eps.eval(c64(0.5, 0.0)).unwrap()).norm() < 1e-8, "n = {n}: {ratio}");
        }
    }

    #[test]
    fn extension_independence_of_characters_and_zeta() {
        let f = ground(5);
        let chi = legendre_char(5);
        let psi = AddChar::standard(&f);
        let phi = Schwartz::indicator(&f, f.one(), 1);
        let g = gamma_oracle_at(&chi, &psi, &phi, c64(0.7, 0.0)).unwrap();
        let expect = gamma_tate_nonarch(&chi, &psi).unwrap().eval(c64(0.7, 0.0)).unwrap();
        assert!(rel_dev(g, expect) < 1e-12);
    }
}
