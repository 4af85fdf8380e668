//! Adaptive Gauss-Legendre quadrature for complex-valued integrands.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{AsaiError, Result};

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, by Newton iteration
/// on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

struct Rules {
    lo: (Vec<f64>, Vec<f64>),
    hi: (Vec<f64>, Vec<f64>),
}

fn rules() -> &'static Rules {
    static R: OnceLock<Rules> = OnceLock::new();
    R.get_or_init(|| Rules { lo: gauss_legendre(10), hi: gauss_legendre(20) })
}

fn apply<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> Complex64 {
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    rule.0.iter().zip(&rule.1).map(|(&x, &w)| f(m + h * x) * w).sum::<Complex64>() * h
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quad {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// Integrates `f` over `[a, b]`, bisecting panels until the 10- and 20-point
/// rules agree to `max(tol_abs, tol_rel * |integral|)`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol_rel: f64, tol_abs: f64) -> Result<Quad> {
    let r = rules();
    let mut stack = vec![(a, b, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut panels = 0;
    let coarse = apply(&f, a, b, &r.hi);
    let scale = coarse.norm().max(tol_abs);
    while let Some((lo, hi, depth)) = stack.pop() {
        let g10 = apply(&f, lo, hi, &r.lo);
        let g20 = apply(&f, lo, hi, &r.hi);
        let e = (g20 - g10).norm();
        let width_share = (hi - lo) / (b - a);
        let budget = (tol_rel * scale).max(tol_abs) * width_share.max(1e-6);
        if e <= budget || depth >= 40 {
            if depth >= 40 && e > budget {
                return Err(AsaiError::Quadrature(e));
            }
            total += g20;
            err += e;
            panels += 1;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(Quad { value: total, error: err, panels })
}

/// Nested 2-D integration over a rectangle.
pub fn integrate_2d<F: Fn(f64, f64) -> Complex64>(
    f: F,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    tol_rel: f64,
    tol_abs: f64,
) -> Result<Quad> {
    let failure = std::cell::Cell::new(None);
    let inner = |x: f64| match integrate(|y| f(x, y), ay, by, tol_rel * 0.1, tol_abs * 0.1) {
        Ok(q) => q.value,
        Err(e) => {
            failure.set(Some(e));
            Complex64::new(0.0, 0.0)
        }
    };
    let q = integrate(inner, ax, bx, tol_rel, tol_abs)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(q)
}
