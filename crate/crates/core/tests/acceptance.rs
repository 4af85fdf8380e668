//! End-to-end acceptance checks, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL` line with its measured deviation and runtime.

use std::time::{Duration, Instant};

use asai_core::arch::{
    case_table, combinatorial_identity, eps_rs_transform, l_eps_gal_arch, sample_pairs, z_by_quadrature,
    zeta_integral_case, zeta_whittaker_closed, zeta_whittaker_quadrature,
};
use asai_core::asai::{
    abs_power, dichotomy_sign, eps_gal_comparison, eps_rs, gamma_psr, gamma_rs, random_input, random_self_dual_tau,
};
use asai_core::characters::pu;
use asai_core::config::{TOL_ARCH, TOL_NONARCH, TOL_PHI};
use asai_core::factor::rel_dev;
use asai_core::oracle::{check_whittaker_closed_form, gamma_spherical_oracle, section_case, LatticeSum};
use asai_core::tate::{gauss_sum, langlands_constant_arch, tate_factors};
use asai_core::units::UnitGroup;
use asai_core::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ext(p: u64, kind: ExtKind, prec: u32) -> QuadExtension {
    QuadExtension::new(Qp::new(p, prec).unwrap(), kind)
}

fn report(n: u32, ok: bool, detail: String, elapsed: Duration) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} ({detail}; {:.2} s)", elapsed.as_secs_f64());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn max_grid_dev(f: &dyn Factor, g: &dyn Factor) -> f64 {
    default_grid().into_iter().map(|s| rel_dev(f.eval_at(s).unwrap(), g.eval_at(s).unwrap())).fold(0.0, f64::max)
}

#[test]
fn criterion_01_gauss_sum_modulus() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for p in [3u64, 5, 7] {
        let f = LocalField::Ground(Qp::new(p, 12).unwrap());
        let psi = AddChar::standard(&f);
        for n in 1..=3u32 {
            let group = UnitGroup::get(&f, n).unwrap();
            for angles in group.all_characters() {
                let chi = MultChar::from_angles(&f, n, angles, UnifValue::one(), c64(0.0, 0.0)).unwrap();
                if chi.conductor() != n {
                    continue;
                }
                let g = gauss_sum(&chi, &psi).unwrap();
                worst = worst.max((g.norm() - (p as f64).powf(n as f64 / 2.0)).abs());
                count += 1;
            }
        }
    }
    let t = start.elapsed();
    report(1, worst < 1e-9 && t < Duration::from_secs(5), format!("{count} characters, max |dev| {worst:.1e}"), t);
}

#[test]
fn criterion_02_phi_independence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let p = if i % 2 == 0 { 3 } else { 5 };
        let field = match i % 4 {
            0 | 1 => LocalField::Ground(Qp::new(p, 12).unwrap()),
            _ => ext(p, ExtKind::ALL[i / 4 % 3], 12).field(),
        };
        let chi = MultChar::random(&field, rng.gen_range(1..=2), &mut rng).unwrap();
        let tf = tate_factors(&chi, &AddChar::standard(&field)).unwrap();
        worst = worst.max(tf.phi_deviation);
    }
    report(2, worst < TOL_PHI, format!("50 characters, max deviation {worst:.1e}"), start.elapsed());
}

#[test]
fn criterion_03_unramified_gamma_vs_spherical_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for p in [3u64, 5] {
        for kind in ExtKind::ALL {
            let e = ext(p, kind, 12);
            let ef = e.field();
            let f = LocalField::Ground(e.base());
            for _ in 0..10 {
                let mut draw = || {
                    let t = UnifValue::Exact(Angle::new(rng.gen_range(0..24), 24));
                    MultChar::unramified(&ef, t, c64(rng.gen_range(-0.2..0.2), rng.gen_range(-1.0..1.0)))
                };
                let (mu, nu) = (draw(), draw());
                let input = AsaiInput::new(e, mu.clone(), nu.clone(), AddChar::standard(&f), e.xi()).unwrap();
                let g = gamma_rs(&input).unwrap().factor;
                for s in default_grid() {
                    let o = gamma_spherical_oracle(s, &mu, &nu, &LatticeSum::unit()).unwrap();
                    worst = worst.max(rel_dev(g.eval(s).unwrap(), o));
                }
            }
        }
    }
    let t = start.elapsed();
    report(3, worst < TOL_NONARCH && t < Duration::from_secs(30), format!("60 pairs, max deviation {worst:.1e}"), t);
}

#[test]
fn criterion_04_whittaker_closed_forms_exact() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let (mut checked, mut mismatches) = (0, 0);
    let mut cases_seen = std::collections::BTreeSet::new();
    for p in [3u64, 5] {
        for kind in ExtKind::ALL {
            let e = ext(p, kind, 18);
            let ef = e.field();
            let psi = AddChar::standard(&LocalField::Ground(e.base())).psi_xi(&e, &e.xi()).unwrap();
            for c in 1..=2u32 {
                for _ in 0..8 {
                    let Ok(mu) = MultChar::random_with_conductor(&ef, c, &mut rng) else { break };
                    let info = section_case(&mu).unwrap();
                    let r = info.r as i64;
                    let pts: Vec<(i64, i64)> = (-r - 1..=1).map(|k| (k, rng.gen_range(1..p as i64))).collect();
                    for chk in check_whittaker_closed_form(&mu, &psi, &pts).unwrap() {
                        checked += 1;
                        cases_seen.insert(chk.case);
                        if !chk.exact_match {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    report(
        4,
        mismatches == 0 && cases_seen.len() == 2,
        format!("{checked} exact comparisons over closed-form cases {cases_seen:?}, {mismatches} mismatches"),
        start.elapsed(),
    );
}

#[test]
fn criterion_05_epsilon_comparison() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for i in 0..20 {
        let p = if i < 10 { 3 } else { 5 };
        let e = ext(p, ExtKind::ALL[i % 3], 12);
        let input = random_input(&e, 2, &mut rng).unwrap();
        let cmp = eps_gal_comparison(&input, &default_grid(), TOL_NONARCH).unwrap();
        worst = worst.max(cmp.max_deviation);
        ok &= cmp.equal;
    }
    report(5, ok && worst < TOL_NONARCH, format!("20 inputs, max deviation {worst:.1e}"), start.elapsed());
}

#[test]
fn criterion_06_arch_case_table() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let pairs = sample_pairs(&mut rng, 4, 0.3);
    let (mut spread, mut table, mut relation, mut quad): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut ids = std::collections::BTreeSet::new();
    let mut eps_exact = true;
    for (mu, nu) in &pairs {
        let ev = zeta_integral_case(&default_grid(), mu, nu).unwrap();
        ids.insert(ev.datum.case_id);
        spread = spread.max(ev.c_spread).max(ev.c_dual_spread);
        table = table.max(ev.table_deviation);
        relation = relation.max(ev.relation_deviation);
        let allowed = [c64(1.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0)];
        eps_exact &= allowed.iter().any(|a| (ev.eps_rs - a).norm() < 1e-12) && (ev.eps_rs - ev.datum.eps).norm() < 1e-12;
        for s in [c64(1.3, 0.0), c64(2.1, 0.5)] {
            let q = z_by_quadrature(s, &ev.datum, mu, nu).unwrap();
            let closed = ev.points.iter().find(|pt| pt.s == s).unwrap().z;
            quad = quad.max(rel_dev(q, closed));
        }
    }
    let t = start.elapsed();
    let ok = ids.len() == 5
        && spread < TOL_ARCH
        && table < TOL_ARCH
        && relation < TOL_ARCH
        && quad < TOL_ARCH
        && eps_exact
        && t < Duration::from_secs(60);
    report(
        6,
        ok,
        format!(
            "{} pairs over cases {ids:?}; spread {spread:.1e}, table {table:.1e}, relation {relation:.1e}, quadrature {quad:.1e}",
            pairs.len()
        ),
        t,
    );
}

#[test]
fn criterion_07_closed_form_vs_quadrature() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 10 {
        let idx = WhittakerIndex::new((rng.gen_range(0..3), rng.gen_range(0..3)), (rng.gen_range(0..3), rng.gen_range(0..3)));
        let mu = CChar::new(c64(rng.gen_range(-0.25..0.25), rng.gen_range(-1.0..1.0)), rng.gen_range(-3..=3));
        let n2 = idx.a.0 as i64 - idx.a.1 as i64 + mu.n - idx.b.0 as i64 + idx.b.1 as i64;
        let nu = CChar::new(c64(rng.gen_range(-0.25..0.25), rng.gen_range(-1.0..1.0)), n2);
        let m = (mu.n + (idx.a.0 + idx.a.1) as i64).rem_euclid(2) as u8;
        let chi = RealChar::new(m, c64(rng.gen_range(-0.2..0.2), rng.gen_range(-0.5..0.5)));
        let s = c64(rng.gen_range(1.0..2.5), rng.gen_range(-1.5..1.5));
        let closed = zeta_whittaker_closed(s, &idx, &chi, &mu, &nu).unwrap();
        let quad = zeta_whittaker_quadrature(s, &idx, &chi, &mu, &nu).unwrap();
        worst = worst.max(rel_dev(quad, closed));
        done += 1;
    }
    report(7, worst < TOL_ARCH, format!("10 admissible indices, max deviation {worst:.1e}"), start.elapsed());
}

#[test]
fn criterion_08_combinatorial_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut worst: f64 = 0.0;
    for n in 0..=6u32 {
        for _ in 0..20 {
            let z = c64(rng.gen_range(0.1..3.0), rng.gen_range(-2.0..2.0));
            let w = c64(n as f64 + rng.gen_range(0.1..3.0), rng.gen_range(-2.0..2.0));
            worst = worst.max(combinatorial_identity(n, z, w).unwrap().deviation);
        }
    }
    report(8, worst < 1e-9, format!("N <= 6 at 20 points each, max deviation {worst:.1e}"), start.elapsed());
}

#[test]
fn criterion_09_twisted_assemblies() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for i in 0..20 {
        let p = if i < 10 { 3 } else { 5 };
        let e = ext(p, ExtKind::ALL[i % 3], 12);
        let f = LocalField::Ground(e.base());
        let input = random_input(&e, 2, &mut rng).unwrap();
        let tau = Tau {
            mu2: MultChar::random(&f, rng.gen_range(1..=2), &mut rng).unwrap(),
            nu2: MultChar::random(&f, rng.gen_range(1..=2), &mut rng).unwrap(),
            v2: c64(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)),
        };
        let r = gamma_psr(&input.with_tau(tau).unwrap(), &default_grid(), TOL_NONARCH).unwrap();
        worst = worst.max(r.max_deviation);
        ok &= r.equal;
    }
    report(9, ok && worst < TOL_NONARCH, format!("20 inputs, max deviation {worst:.1e}"), start.elapsed());
}

#[test]
fn criterion_10_dependence_laws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut worst: f64 = 0.0;
    for p in [3u64, 5] {
        for kind in ExtKind::ALL {
            let e = ext(p, kind, 12);
            let ef = e.field();
            let f = LocalField::Ground(e.base());
            let base = random_input(&e, 2, &mut rng).unwrap();
            let tau = Tau {
                mu2: MultChar::random(&f, 1, &mut rng).unwrap(),
                nu2: MultChar::random(&f, 1, &mut rng).unwrap(),
                v2: c64(0.15, -0.1),
            };
            let input = base.with_tau(tau).unwrap();
            let w_pi = input.omega_pi_f().unwrap();
            let w = input.omega_total().unwrap();
            let (k, u) = (rng.gen_range(-1..=1i64), rng.gen_range(1..p as i64));
            let a = pu(&f, k, u);
            let shifted = input.with_psi(input.psi.shift(&a).unwrap());
            let scaled = input.with_xi(ef.mul(&ef.embed(a.a), &input.xi)).unwrap();

            // gamma_RS under psi -> psi^a
            let law = gamma_rs(&input).unwrap().factor.mul(&abs_power(p, k, 4, -2.0)).unwrap().scale(w_pi.eval(&a).unwrap().powi(2));
            worst = worst.max(max_grid_dev(&gamma_rs(&shifted).unwrap().factor, &law));

            // eps_RS under xi -> a xi
            let law = eps_rs(&input).unwrap().mul(&abs_power(p, k, 2, -1.0)).unwrap().scale(w_pi.eval(&a).unwrap());
            worst = worst.max(max_grid_dev(&eps_rs(&scaled).unwrap(), &law));

            // twisted gamma under psi -> psi^a and xi -> a xi
            let g = gamma_psr(&input, &default_grid(), TOL_NONARCH).unwrap().assembly1;
            let law = g.mul(&abs_power(p, k, 8, -4.0)).unwrap().scale(w.eval(&a).unwrap().powi(4));
            let g_psi = gamma_psr(&shifted, &default_grid(), TOL_NONARCH).unwrap().assembly1;
            worst = worst.max(max_grid_dev(&g_psi, &law));
            let law = g.mul(&abs_power(p, k, -4, 2.0)).unwrap().scale(w.eval(&a).unwrap().powi(-2));
            let g_xi = gamma_psr(&scaled, &default_grid(), TOL_NONARCH).unwrap().assembly1;
            worst = worst.max(max_grid_dev(&g_xi, &law));
        }
    }

    // archimedean: eps_RS(psi^b, c xi) = omega(b^2 c)|b^2 c|^{2s-1} eps_RS, checked against eps_Gal(psi^b)
    for (mu, nu) in sample_pairs(&mut rng, 1, 0.3) {
        let ev = zeta_integral_case(&default_grid(), &mu, &nu).unwrap();
        for (b, c) in [(2.0, 1.0), (-1.5, 0.5), (0.7, -3.0)] {
            let eps = eps_rs_transform(ev.eps_rs, &mu, &nu, b, c).unwrap();
            let gal = l_eps_gal_arch(&mu, &nu, b).1;
            let xi = c64(0.0, c);
            for s in default_grid() {
                let lhs = eps.eval(s).unwrap() / mu.mul(&nu).eval(xi)
                    * ((-s + 0.5) * xi.norm_sqr().ln()).exp()
                    * langlands_constant_arch(b);
                worst = worst.max(rel_dev(lhs, gal.eval(s).unwrap()));
            }
        }
    }
    report(10, worst < TOL_NONARCH, format!("max deviation {worst:.1e}"), start.elapsed());
}

#[test]
fn criterion_11_dichotomy() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut worst: f64 = 0.0;
    let mut invariant = true;
    let mut signs = [0usize; 2];
    for i in 0..20 {
        let p = if i < 10 { 3 } else { 5 };
        let e = ext(p, ExtKind::ALL[i % 3], 12);
        let ef = e.field();
        let f = LocalField::Ground(e.base());
        let base = random_input(&e, 2, &mut rng).unwrap();
        let tau = random_self_dual_tau(&base, 2, &mut rng).unwrap();
        let input = base.with_tau(tau).unwrap();
        let d = dichotomy_sign(&input).unwrap();
        worst = worst.max((d.raw - d.sign as f64).norm());
        signs[(d.sign > 0) as usize] += 1;
        let a = pu(&f, rng.gen_range(-1..=1), rng.gen_range(1..p as i64));
        let moved_psi = input.with_psi(input.psi.shift(&a).unwrap());
        let moved_xi = input.with_xi(ef.mul(&ef.embed(a.a), &input.xi)).unwrap();
        invariant &= dichotomy_sign(&moved_psi).unwrap().sign == d.sign;
        invariant &= dichotomy_sign(&moved_xi).unwrap().sign == d.sign;
    }
    report(
        11,
        worst < TOL_NONARCH && invariant,
        format!("20 bundles ({} with +1, {} with -1), max |raw - sign| {worst:.1e}, invariant {invariant}", signs[1], signs[0]),
        start.elapsed(),
    );
}

#[test]
fn case_table_is_exhaustive() {
    for n1 in -4..=4 {
        for n2 in -4..=4 {
            let d = case_table(&CChar::new(c64(0.0, 0.0), n1), &CChar::new(c64(0.0, 0.0), n2));
            assert!((1..=5).contains(&d.case_id));
        }
    }
}
