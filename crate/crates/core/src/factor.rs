//! Symbolic L, epsilon and gamma factors with numeric evaluation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AsaiError, Result};
use crate::gamma_fn::ln_gamma;

const POLE_EPS: f64 = 1e-13;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `1 - alpha * p^{-(a s + k)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerTerm {
    pub alpha: Complex64,
    pub a: i64,
    pub k: i64,
}

impl EulerTerm {
    pub fn new(alpha: Complex64, a: i64, k: i64) -> Self {
        EulerTerm { alpha, a, k }
    }

    pub fn eval(&self, p: u64, s: Complex64) -> Complex64 {
        let e = -(s * self.a as f64 + self.k as f64) * (p as f64).ln();
        1.0 - self.alpha * e.exp()
    }

    fn reflect(&self) -> Self {
        EulerTerm { alpha: self.alpha, a: -self.a, k: self.a + self.k }
    }

    fn shift(&self, p: u64, v: Complex64) -> Self {
        let f = (-(v * self.a as f64) * (p as f64).ln()).exp();
        EulerTerm { alpha: self.alpha * f, ..*self }
    }
}

/// `c * p^{-m s} * prod(num) / prod(den)` for a residue characteristic `p`.
///
/// For factors of a quadratic extension `a` is the residue degree, so that
/// `p^{-a s} = q_E^{-s}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonArchFactor {
    pub p: u64,
    pub c: Complex64,
    pub m: i64,
    pub num: Vec<EulerTerm>,
    pub den: Vec<EulerTerm>,
}

impl NonArchFactor {
    pub fn constant(p: u64, c: Complex64) -> Self {
        NonArchFactor { p, c, m: 0, num: vec![], den: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, c64(1.0, 0.0))
    }

    /// `c * p^{-m s}`.
    pub fn monomial(p: u64, c: Complex64, m: i64) -> Self {
        NonArchFactor { p, c, m, num: vec![], den: vec![] }
    }

    /// `(1 - alpha p^{-(a s + k)})^{-1}`.
    pub fn euler(p: u64, alpha: Complex64, a: i64, k: i64) -> Self {
        NonArchFactor { p, c: c64(1.0, 0.0), m: 0, num: vec![], den: vec![EulerTerm::new(alpha, a, k)] }
    }

    pub fn is_monomial(&self) -> bool {
        self.num.is_empty() && self.den.is_empty()
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let lp = (self.p as f64).ln();
        let mut v = self.c * (-(s * self.m as f64) * lp).exp();
        for t in &self.den {
            let d = t.eval(self.p, s);
            if d.norm() < POLE_EPS {
                return Err(AsaiError::Pole(format!("{s}")));
            }
            v /= d;
        }
        for t in &self.num {
            v *= t.eval(self.p, s);
        }
        Ok(v)
    }

    fn check_p(&self, o: &NonArchFactor) -> Result<()> {
        if self.p != o.p {
            return Err(AsaiError::Invalid(format!("factors over p = {} and p = {}", self.p, o.p)));
        }
        Ok(())
    }

    pub fn mul(&self, o: &NonArchFactor) -> Result<NonArchFactor> {
        self.check_p(o)?;
        let mut num = self.num.clone();
        num.extend_from_slice(&o.num);
        let mut den = self.den.clone();
        den.extend_from_slice(&o.den);
        Ok(NonArchFactor { p: self.p, c: self.c * o.c, m: self.m + o.m, num, den }.simplify())
    }

    pub fn div(&self, o: &NonArchFactor) -> Result<NonArchFactor> {
        self.mul(&o.inv())
    }

    pub fn inv(&self) -> NonArchFactor {
        NonArchFactor { p: self.p, c: 1.0 / self.c, m: -self.m, num: self.den.clone(), den: self.num.clone() }
    }

    pub fn scale(&self, z: Complex64) -> NonArchFactor {
        NonArchFactor { c: self.c * z, ..self.clone() }
    }

    /// `s -> 1 - s`.
    pub fn reflect(&self) -> NonArchFactor {
        let lp = (self.p as f64).ln();
        NonArchFactor {
            p: self.p,
            c: self.c * (-(self.m as f64) * lp).exp(),
            m: -self.m,
            num: self.num.iter().map(EulerTerm::reflect).collect(),
            den: self.den.iter().map(EulerTerm::reflect).collect(),
        }
    }

    /// `s -> s + v`.
    pub fn shift(&self, v: Complex64) -> NonArchFactor {
        let lp = (self.p as f64).ln();
        NonArchFactor {
            p: self.p,
            c: self.c * (-(v * self.m as f64) * lp).exp(),
            m: self.m,
            num: self.num.iter().map(|t| t.shift(self.p, v)).collect(),
            den: self.den.iter().map(|t| t.shift(self.p, v)).collect(),
        }
    }

    /// Cancels identical numerator and denominator terms.
    pub fn simplify(mut self) -> NonArchFactor {
        let mut i = 0;
        while i < self.num.len() {
            let t = self.num[i];
            if let Some(j) = self
                .den
                .iter()
                .position(|d| d.a == t.a && d.k == t.k && (d.alpha - t.alpha).norm() < 1e-13)
            {
                self.den.remove(j);
                self.num.remove(i);
            } else {
                i += 1;
            }
        }
        self
    }
}

/// `Gamma(a s + b)^mult`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaTerm {
    pub a: f64,
    pub b: Complex64,
    pub mult: i32,
}

/// `base^{u s + v}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpoTerm {
    pub base: f64,
    pub u: f64,
    pub v: Complex64,
}

/// `c * prod Gamma(a s + b)^mult * prod base^{u s + v}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchFactor {
    pub c: Complex64,
    pub gammas: Vec<GammaTerm>,
    pub expos: Vec<ExpoTerm>,
}

impl ArchFactor {
    pub fn constant(c: Complex64) -> Self {
        ArchFactor { c, gammas: vec![], expos: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(c64(1.0, 0.0))
    }

    /// `zeta_R(s + w) = pi^{-(s+w)/2} Gamma((s+w)/2)`.
    pub fn zeta_r(w: Complex64) -> Self {
        ArchFactor {
            c: c64(1.0, 0.0),
            gammas: vec![GammaTerm { a: 0.5, b: w / 2.0, mult: 1 }],
            expos: vec![ExpoTerm { base: PI, u: -0.5, v: -w / 2.0 }],
        }
    }

    /// `zeta_C(s + w) = 2 (2 pi)^{-(s+w)} Gamma(s+w)`.
    pub fn zeta_c(w: Complex64) -> Self {
        ArchFactor {
            c: c64(2.0, 0.0),
            gammas: vec![GammaTerm { a: 1.0, b: w, mult: 1 }],
            expos: vec![ExpoTerm { base: 2.0 * PI, u: -1.0, v: -w }],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.gammas.is_empty() && self.expos.is_empty()
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let mut log = c64(0.0, 0.0);
        for g in &self.gammas {
            if g.mult == 0 {
                continue;
            }
            let z = s * g.a + g.b;
            match ln_gamma(z) {
                Ok(l) => log += l * g.mult as f64,
                Err(_) if g.mult < 0 => return Ok(c64(0.0, 0.0)),
                Err(_) => return Err(AsaiError::Pole(format!("{s}"))),
            }
        }
        for e in &self.expos {
            log += (s * e.u + e.v) * e.base.ln();
        }
        Ok(self.c * log.exp())
    }

    pub fn mul(&self, o: &ArchFactor) -> ArchFactor {
        let mut gammas = self.gammas.clone();
        gammas.extend_from_slice(&o.gammas);
        let mut expos = self.expos.clone();
        expos.extend_from_slice(&o.expos);
        ArchFactor { c: self.c * o.c, gammas, expos }.simplify()
    }

    pub fn div(&self, o: &ArchFactor) -> ArchFactor {
        self.mul(&o.inv())
    }

    pub fn inv(&self) -> ArchFactor {
        ArchFactor {
            c: 1.0 / self.c,
            gammas: self.gammas.iter().map(|g| GammaTerm { mult: -g.mult, ..*g }).collect(),
            expos: self.expos.iter().map(|e| ExpoTerm { base: e.base, u: -e.u, v: -e.v }).collect(),
        }
    }

    pub fn scale(&self, z: Complex64) -> ArchFactor {
        ArchFactor { c: self.c * z, ..self.clone() }
    }

    /// `s -> 1 - s`.
    pub fn reflect(&self) -> ArchFactor {
        ArchFactor {
            c: self.c,
            gammas: self.gammas.iter().map(|g| GammaTerm { a: -g.a, b: g.b + g.a, mult: g.mult }).collect(),
            expos: self.expos.iter().map(|e| ExpoTerm { base: e.base, u: -e.u, v: e.v + e.u }).collect(),
        }
    }

    /// `s -> s + v`.
    pub fn shift(&self, v: Complex64) -> ArchFactor {
        ArchFactor {
            c: self.c,
            gammas: self.gammas.iter().map(|g| GammaTerm { b: g.b + v * g.a, ..*g }).collect(),
            expos: self.expos.iter().map(|e| ExpoTerm { v: e.v + v * e.u, ..*e }).collect(),
        }
    }

    /// Merges Gamma terms with equal arguments and drops zero multiplicities.
    pub fn simplify(mut self) -> ArchFactor {
        let mut merged: Vec<GammaTerm> = Vec::new();
        for g in self.gammas {
            match merged.iter_mut().find(|h| h.a == g.a && (h.b - g.b).norm() < 1e-14) {
                Some(h) => h.mult += g.mult,
                None => merged.push(g),
            }
        }
        merged.retain(|g| g.mult != 0);
        self.gammas = merged;
        self
    }
}

/// `1`, `-0.5`, `0.25i`, `(0.5-0.866i)`: twelve significant digits, near-integers snapped.
pub fn fmt_complex(z: Complex64) -> String {
    let scale = z.norm().max(1.0);
    let clean = |x: f64| {
        let r = x.round();
        if (x - r).abs() < 1e-12 * scale { r + 0.0 } else { x }
    };
    let (re, im) = (clean(z.re), clean(z.im));
    let num = |x: f64| {
        let mag = x.abs().log10().floor() as i32;
        if x == 0.0 || x.fract() == 0.0 && mag < 15 {
            format!("{x}")
        } else if !(-4..15).contains(&mag) {
            format!("{x:.11e}")
        } else {
            let t = format!("{x:.*}", (11 - mag).max(0) as usize);
            if t.contains('.') { t.trim_end_matches('0').trim_end_matches('.').to_string() } else { t }
        }
    };
    match (re == 0.0, im == 0.0) {
        (_, true) => num(re),
        (true, false) if im == 1.0 => "i".into(),
        (true, false) if im == -1.0 => "-i".into(),
        (true, false) => format!("{}i", num(im)),
        _ => format!("({}{}{}i)", num(re), if im < 0.0 { "-" } else { "+" }, num(im.abs())),
    }
}

fn fmt_exponent(a: i64, k: i64) -> String {
    let s_part = match a {
        0 => String::new(),
        1 => "s".into(),
        -1 => "-s".into(),
        _ => format!("{a}s"),
    };
    match (s_part.is_empty(), k) {
        (true, k) => format!("{k}"),
        (false, 0) => s_part,
        (false, k) if k > 0 => format!("{s_part}+{k}"),
        (false, k) => format!("{s_part}{k}"),
    }
}

impl std::fmt::Display for NonArchFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let p = self.p;
        let term = |t: &EulerTerm| {
            let coef = if t.alpha == c64(1.0, 0.0) { String::new() } else { format!("{}*", fmt_complex(t.alpha)) };
            format!("(1 - {coef}{p}^-({}))", fmt_exponent(t.a, t.k))
        };
        let mut parts = vec![fmt_complex(self.c)];
        if self.m != 0 {
            parts.push(format!("{p}^-({})", fmt_exponent(self.m, 0)));
        }
        parts.extend(self.num.iter().map(term));
        if parts.len() > 1 && parts[0] == "1" {
            parts.remove(0);
        }
        write!(f, "{}", parts.join(" * "))?;
        if !self.den.is_empty() {
            write!(f, " / {}", self.den.iter().map(term).collect::<Vec<_>>().join(""))?;
        }
        Ok(())
    }
}

impl std::fmt::Display for ArchFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lin = |a: f64, b: Complex64| {
            let a = match a {
                1.0 => "s".to_string(),
                -1.0 => "-s".to_string(),
                a => format!("{a}s"),
            };
            if b == c64(0.0, 0.0) { a } else { format!("{a}+{}", fmt_complex(b)) }
        };
        let mut parts = vec![fmt_complex(self.c)];
        for g in &self.gammas {
            let pow = if g.mult == 1 { String::new() } else { format!("^{}", g.mult) };
            parts.push(format!("Gamma({}){pow}", lin(g.a, g.b)));
        }
        for e in &self.expos {
            parts.push(format!("{}^({})", (e.base * 1e12).round() / 1e12, lin(e.u, e.v)));
        }
        if parts.len() > 1 && parts[0] == "1" {
            parts.remove(0);
        }
        write!(f, "{}", parts.join(" * "))
    }
}

/// Anything that can be evaluated pointwise in `s`.
pub trait Factor {
    fn eval_at(&self, s: Complex64) -> Result<Complex64>;
}

impl Factor for NonArchFactor {
    fn eval_at(&self, s: Complex64) -> Result<Complex64> {
        self.eval(s)
    }
}

impl Factor for ArchFactor {
    fn eval_at(&self, s: Complex64) -> Result<Complex64> {
        self.eval(s)
    }
}

/// A factor given by a closure.
pub struct FnFactor<F: Fn(Complex64) -> Result<Complex64>>(pub F);

impl<F: Fn(Complex64) -> Result<Complex64>> Factor for FnFactor<F> {
    fn eval_at(&self, s: Complex64) -> Result<Complex64> {
        (self.0)(s)
    }
}

/// Relative deviation `|x - y| / max(|x|, |y|)`, with `0` for two zeros.
pub fn rel_dev(x: Complex64, y: Complex64) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).norm() / scale
    }
}

/// Outcome of a grid comparison.
#[derive(Clone, Debug, Serialize)]
pub struct GridComparison {
    pub equal: bool,
    pub max_deviation: f64,
    pub deviations: Vec<f64>,
}

/// Compares two factors at every grid point with relative tolerance `tol`.
pub fn approx_equal(f: &dyn Factor, g: &dyn Factor, grid: &[Complex64], tol: f64) -> Result<GridComparison> {
    if grid.is_empty() {
        return Err(AsaiError::EmptyGrid);
    }
    let mut deviations = Vec::with_capacity(grid.len());
    for &s in grid {
        deviations.push(rel_dev(f.eval_at(s)?, g.eval_at(s)?));
    }
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    Ok(GridComparison { equal: max_deviation < tol, max_deviation, deviations })
}

/// Evaluation table of a factor on a grid.
pub fn eval_table(f: &dyn Factor, grid: &[Complex64]) -> Result<Vec<(Complex64, Complex64)>> {
    grid.iter().map(|&s| Ok((s, f.eval_at(s)?))).collect()
}
