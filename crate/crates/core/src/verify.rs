//! Self-contained verification suites comparing the closed-form factors with
//! their oracles on seeded random data.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angle::Angle;
use crate::arch::{
    combinatorial_identity, eps_rs_transform, l_eps_gal_arch, sample_pairs, z_by_quadrature, zeta_integral_case,
    zeta_whittaker_closed, zeta_whittaker_quadrature, CChar, RealChar, WhittakerIndex,
};
use crate::asai::{
    abs_power, dichotomy_sign, eps_gal_comparison, eps_rs, gamma_psr, gamma_rs, random_input, random_self_dual_tau,
    split_check, AsaiInput, Tau,
};
use crate::characters::{pu, AddChar, MultChar, UnifValue};
use crate::config::Config;
use crate::error::{AsaiError, Result};
use crate::factor::{rel_dev, Factor};
use crate::field::{ExtKind, LocalField, QuadExtension};
use crate::oracle::{check_whittaker_closed_form, gamma_spherical_oracle, section_case, LatticeSum};
use crate::padic::Qp;
use crate::tate::{gauss_sum, langlands_constant_arch, tate_factors};
use crate::units::UnitGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Nonarch,
    Arch,
}

impl std::str::FromStr for Suite {
    type Err = AsaiError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonarch" => Ok(Suite::Nonarch),
            "arch" => Ok(Suite::Arch),
            _ => Err(AsaiError::Invalid(format!("unknown suite '{s}'"))),
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

type Outcome = Result<(f64, String)>;
type CheckFn = fn(&Config, &mut ChaCha8Rng) -> Outcome;

struct Check {
    name: &'static str,
    tol: fn(&Config) -> f64,
    run: CheckFn,
    /// Exact checks report a mismatch count rather than a deviation.
    exact: bool,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ext(p: u64, kind: ExtKind, prec: u32) -> Result<QuadExtension> {
    Ok(QuadExtension::new(Qp::new(p, prec)?, kind))
}

fn grid_dev(cfg: &Config, f: &dyn Factor, g: &dyn Factor) -> Result<f64> {
    cfg.grid.iter().try_fold(0.0f64, |m, &s| Ok(m.max(rel_dev(f.eval_at(s)?, g.eval_at(s)?))))
}

fn gauss_modulus(cfg: &Config, _: &mut ChaCha8Rng) -> Outcome {
    let (mut worst, mut count) = (0.0f64, 0);
    for p in [3u64, 5, 7] {
        let f = LocalField::Ground(Qp::new(p, cfg.precision)?);
        let psi = AddChar::standard(&f);
        for n in 1..=3u32 {
            for angles in UnitGroup::get(&f, n)?.all_characters() {
                let chi = MultChar::from_angles(&f, n, angles, UnifValue::one(), c64(0.0, 0.0))?;
                if chi.conductor() == n {
                    worst = worst.max((gauss_sum(&chi, &psi)?.norm() - (p as f64).powf(n as f64 / 2.0)).abs());
                    count += 1;
                }
            }
        }
    }
    Ok((worst, format!("{count} primitive characters")))
}

fn phi_independence(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..50 {
        let p = [3u64, 5][i % 2];
        let field = if i % 4 < 2 {
            LocalField::Ground(Qp::new(p, cfg.precision)?)
        } else {
            ext(p, ExtKind::ALL[i / 4 % 3], cfg.precision)?.field()
        };
        let chi = MultChar::random(&field, rng.gen_range(1..=2), rng)?;
        worst = worst.max(tate_factors(&chi, &AddChar::standard(&field))?.phi_deviation);
    }
    Ok((worst, "50 characters".into()))
}

fn spherical(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for p in [3u64, 5] {
        for kind in ExtKind::ALL {
            let e = ext(p, kind, cfg.precision)?;
            let ef = e.field();
            for _ in 0..10 {
                let mut draw = || {
                    let t = UnifValue::Exact(Angle::new(rng.gen_range(0..24), 24));
                    MultChar::unramified(&ef, t, c64(rng.gen_range(-0.2..0.2), rng.gen_range(-1.0..1.0)))
                };
                let (mu, nu) = (draw(), draw());
                let input =
                    AsaiInput::new(e, mu.clone(), nu.clone(), AddChar::standard(&LocalField::Ground(e.base())), e.xi())?;
                let g = gamma_rs(&input)?.factor;
                for &s in &cfg.grid {
                    worst = worst.max(rel_dev(g.eval(s)?, gamma_spherical_oracle(s, &mu, &nu, &LatticeSum::unit())?));
                }
            }
        }
    }
    Ok((worst, "60 unramified pairs".into()))
}

fn whittaker_exact(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let (mut checked, mut bad) = (0, 0);
    let mut cases = BTreeSet::new();
    for p in [3u64, 5] {
        for kind in ExtKind::ALL {
            let e = ext(p, kind, cfg.precision.max(18))?;
            let psi = AddChar::standard(&LocalField::Ground(e.base())).psi_xi(&e, &e.xi())?;
            for c in 1..=2 {
                for _ in 0..4 {
                    let mu = MultChar::random_with_conductor(&e.field(), c, rng)?;
                    let r = section_case(&mu)?.r as i64;
                    let pts: Vec<(i64, i64)> = (-r - 1..=1).map(|k| (k, rng.gen_range(1..p as i64))).collect();
                    for chk in check_whittaker_closed_form(&mu, &psi, &pts)? {
                        checked += 1;
                        cases.insert(chk.case);
                        bad += usize::from(!chk.exact_match);
                    }
                }
            }
        }
    }
    Ok((bad as f64, format!("{checked} exact comparisons, cases {cases:?}, {bad} mismatches")))
}

fn epsilon_comparison(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let e = ext([3u64, 5][i / 10], ExtKind::ALL[i % 3], cfg.precision)?;
        let input = random_input(&e, 2, rng)?;
        worst = worst.max(eps_gal_comparison(&input, &cfg.grid, cfg.tol_nonarch)?.max_deviation);
    }
    Ok((worst, "20 inputs".into()))
}

fn random_tau(f: &LocalField, rng: &mut ChaCha8Rng) -> Result<Tau> {
    Ok(Tau {
        mu2: MultChar::random(f, rng.gen_range(1..=2), rng)?,
        nu2: MultChar::random(f, rng.gen_range(1..=2), rng)?,
        v2: c64(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)),
    })
}

fn twisted_assemblies(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let e = ext([3u64, 5][i / 10], ExtKind::ALL[i % 3], cfg.precision)?;
        let input = random_input(&e, 2, rng)?;
        let tau = random_tau(&LocalField::Ground(e.base()), rng)?;
        worst = worst.max(gamma_psr(&input.with_tau(tau)?, &cfg.grid, cfg.tol_nonarch)?.max_deviation);
    }
    Ok((worst, "20 inputs".into()))
}

fn dependence(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for p in [3u64, 5] {
        for kind in ExtKind::ALL {
            let e = ext(p, kind, cfg.precision)?;
            let ef = e.field();
            let f = LocalField::Ground(e.base());
            let input = random_input(&e, 2, rng)?.with_tau(random_tau(&f, rng)?)?;
            let (w_pi, w) = (input.omega_pi_f()?, input.omega_total()?);
            let (k, u) = (rng.gen_range(-1..=1i64), rng.gen_range(1..p as i64));
            let a = pu(&f, k, u);
            let shifted = input.with_psi(input.psi.shift(&a)?);
            let scaled = input.with_xi(ef.mul(&ef.embed(a.a), &input.xi))?;
            let law = gamma_rs(&input)?.factor.mul(&abs_power(p, k, 4, -2.0))?.scale(w_pi.eval(&a)?.powi(2));
            worst = worst.max(grid_dev(cfg, &gamma_rs(&shifted)?.factor, &law)?);
            let law = eps_rs(&input)?.mul(&abs_power(p, k, 2, -1.0))?.scale(w_pi.eval(&a)?);
            worst = worst.max(grid_dev(cfg, &eps_rs(&scaled)?, &law)?);
            let g = gamma_psr(&input, &cfg.grid, cfg.tol_nonarch)?.assembly1;
            let law = g.mul(&abs_power(p, k, 8, -4.0))?.scale(w.eval(&a)?.powi(4));
            worst = worst.max(grid_dev(cfg, &gamma_psr(&shifted, &cfg.grid, cfg.tol_nonarch)?.assembly1, &law)?);
            let law = g.mul(&abs_power(p, k, -4, 2.0))?.scale(w.eval(&a)?.powi(-2));
            worst = worst.max(grid_dev(cfg, &gamma_psr(&scaled, &cfg.grid, cfg.tol_nonarch)?.assembly1, &law)?);
        }
    }
    Ok((worst, "psi and xi laws for gamma_RS, eps_RS and the twisted gamma".into()))
}

fn dichotomy(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    let mut moved = 0;
    for i in 0..20 {
        let p = [3u64, 5][i / 10];
        let e = ext(p, ExtKind::ALL[i % 3], cfg.precision)?;
        let ef = e.field();
        let base = random_input(&e, 2, rng)?;
        let tau = random_self_dual_tau(&base, 2, rng)?;
        let input = base.with_tau(tau)?;
        let d = dichotomy_sign(&input)?;
        worst = worst.max((d.raw - d.sign as f64).norm());
        let a = pu(&LocalField::Ground(e.base()), rng.gen_range(-1..=1), rng.gen_range(1..p as i64));
        let by_psi = dichotomy_sign(&input.with_psi(input.psi.shift(&a)?))?.sign;
        let by_xi = dichotomy_sign(&input.with_xi(ef.mul(&ef.embed(a.a), &input.xi))?)?.sign;
        moved += usize::from(by_psi != d.sign) + usize::from(by_xi != d.sign);
    }
    if moved > 0 {
        return Ok((f64::INFINITY, format!("{moved} sign changes under psi/xi rescaling")));
    }
    Ok((worst, "20 bundles with omega = 1".into()))
}

fn split(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for p in [3u64, 5] {
        let f = LocalField::Ground(Qp::new(p, cfg.precision)?);
        for _ in 0..3 {
            let ch: Vec<MultChar> = (0..4).map(|_| MultChar::random(&f, 2, rng)).collect::<Result<_>>()?;
            let xi0 = pu(&f, rng.gen_range(-1..=1), 2);
            let r = split_check((&ch[0], &ch[1]), (&ch[2], &ch[3]), &AddChar::standard(&f), &xi0, &cfg.grid, cfg.tol_nonarch)?;
            worst = worst.max(r.max_deviation);
        }
    }
    Ok((worst, "6 split inputs".into()))
}

fn case_table_check(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    let mut ids = BTreeSet::new();
    for (mu, nu) in sample_pairs(rng, 4, 0.3) {
        let ev = zeta_integral_case(&cfg.grid, &mu, &nu)?;
        ids.insert(ev.datum.case_id);
        worst = worst.max(ev.c_spread).max(ev.c_dual_spread).max(ev.table_deviation).max(ev.relation_deviation);
    }
    Ok((worst, format!("cases {ids:?}")))
}

fn case_quadrature(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for (mu, nu) in sample_pairs(rng, 2, 0.3) {
        let ev = zeta_integral_case(&cfg.grid, &mu, &nu)?;
        for pt in ev.points.iter().filter(|pt| pt.s.re >= 1.0) {
            worst = worst.max(rel_dev(z_by_quadrature(pt.s, &ev.datum, &mu, &nu)?, pt.z));
        }
    }
    Ok((worst, "Z(s, W, Phi) by quadrature for 10 pairs".into()))
}

fn closed_vs_quadrature(_: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let idx = WhittakerIndex::new((rng.gen_range(0..3), rng.gen_range(0..3)), (rng.gen_range(0..3), rng.gen_range(0..3)));
        let mu = CChar::new(c64(rng.gen_range(-0.25..0.25), rng.gen_range(-1.0..1.0)), rng.gen_range(-3..=3));
        let n2 = idx.a.0 as i64 - idx.a.1 as i64 + mu.n - idx.b.0 as i64 + idx.b.1 as i64;
        let nu = CChar::new(c64(rng.gen_range(-0.25..0.25), rng.gen_range(-1.0..1.0)), n2);
        let chi = RealChar::new((mu.n + (idx.a.0 + idx.a.1) as i64).rem_euclid(2) as u8, c64(0.1, 0.2));
        let s = c64(rng.gen_range(1.0..2.5), rng.gen_range(-1.5..1.5));
        let closed = zeta_whittaker_closed(s, &idx, &chi, &mu, &nu)?;
        worst = worst.max(rel_dev(zeta_whittaker_quadrature(s, &idx, &chi, &mu, &nu)?, closed));
    }
    Ok((worst, "10 admissible indices".into()))
}

fn combinatorial(_: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for n in 0..=6u32 {
        for _ in 0..20 {
            let z = c64(rng.gen_range(0.1..3.0), rng.gen_range(-2.0..2.0));
            let w = c64(n as f64 + rng.gen_range(0.1..3.0), rng.gen_range(-2.0..2.0));
            worst = worst.max(combinatorial_identity(n, z, w)?.deviation);
        }
    }
    Ok((worst, "N <= 6, 20 points each".into()))
}

fn arch_dependence(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for (mu, nu) in sample_pairs(rng, 1, 0.3) {
        let ev = zeta_integral_case(&cfg.grid, &mu, &nu)?;
        for (b, c) in [(2.0, 1.0), (-1.5, 0.5), (0.7, -3.0)] {
            let eps = eps_rs_transform(ev.eps_rs, &mu, &nu, b, c)?;
            let gal = l_eps_gal_arch(&mu, &nu, b).1;
            let xi = c64(0.0, c);
            for &s in &cfg.grid {
                let lhs = eps.eval(s)? / mu.mul(&nu).eval(xi)
                    * ((-s + 0.5) * xi.norm_sqr().ln()).exp()
                    * langlands_constant_arch(b);
                worst = worst.max(rel_dev(lhs, gal.eval(s)?));
            }
        }
    }
    Ok((worst, "eps_RS under (psi^b, c xi)".into()))
}

fn tol_nonarch(c: &Config) -> f64 {
    c.tol_nonarch
}
fn tol_arch(c: &Config) -> f64 {
    c.tol_arch
}
fn tol_phi(c: &Config) -> f64 {
    c.tol_phi
}
fn tol_gauss(_: &Config) -> f64 {
    1e-9
}
fn tol_exact(_: &Config) -> f64 {
    0.5
}

fn checks(suite: Suite) -> Vec<Check> {
    let c = |name, tol, run, exact| Check { name, tol, run, exact };
    match suite {
        Suite::Nonarch => vec![
            c("gauss-sum-modulus", tol_gauss as fn(&Config) -> f64, gauss_modulus as CheckFn, false),
            c("phi-independence", tol_phi, phi_independence, false),
            c("spherical-gamma", tol_nonarch, spherical, false),
            c("whittaker-closed-forms", tol_exact, whittaker_exact, true),
            c("epsilon-comparison", tol_nonarch, epsilon_comparison, false),
            c("twisted-assemblies", tol_nonarch, twisted_assemblies, false),
            c("dependence-laws", tol_nonarch, dependence, false),
            c("dichotomy", tol_nonarch, dichotomy, false),
            c("split-case", tol_nonarch, split, false),
        ],
        Suite::Arch => vec![
            c("case-table", tol_arch as fn(&Config) -> f64, case_table_check as CheckFn, false),
            c("case-quadrature", tol_arch, case_quadrature, false),
            c("closed-form-vs-quadrature", tol_arch, closed_vs_quadrature, false),
            c("combinatorial-identity", |_| 1e-9, combinatorial, false),
            c("arch-dependence", tol_arch, arch_dependence, false),
        ],
    }
}

/// Runs the given suites with a fixed seed. Checks run on separate threads;
/// results come back ordered by suite, then by check.
pub fn run(suites: &[Suite], cfg: &Config, seed: u64) -> Vec<CheckResult> {
    let mut jobs: Vec<(Suite, usize, Check)> = Vec::new();
    let mut sorted: Vec<Suite> = suites.to_vec();
    sorted.sort();
    sorted.dedup();
    for s in sorted {
        jobs.extend(checks(s).into_iter().enumerate().map(|(i, c)| (s, i, c)));
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(suite, i, check)| {
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((*i as u64) << 8) ^ *suite as u64);
                    let start = Instant::now();
                    let tol = (check.tol)(cfg);
                    let (passed, max_deviation, detail) = match (check.run)(cfg, &mut rng) {
                        Ok((dev, detail)) => (if check.exact { dev == 0.0 } else { dev < tol }, dev, detail),
                        Err(e) => (false, f64::INFINITY, format!("error: {e}")),
                    };
                    CheckResult {
                        suite: *suite,
                        name: check.name,
                        passed,
                        max_deviation,
                        tolerance: if check.exact { 0.0 } else { tol },
                        detail,
                        seconds: start.elapsed().as_secs_f64(),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
    })
}
