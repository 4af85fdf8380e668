use asai_core::arch::{case_table, z_by_quadrature, z_pair, zeta_integral_case, CaseDatum};
use asai_core::asai::{dichotomy_sign, eps_gal_comparison, eps_rs, gamma_psr, gamma_rs, l_gal_asai};
use asai_core::descriptor::{parse_rational, AsaiBundle, CharDesc, RepDesc};
use asai_core::factor::fmt_complex;
use asai_core::tate::{gauss_sum, tate_factors};
use asai_core::verify::{self, Suite};
use asai_core::{AddChar, CChar, Config, ExtKind, FieldDesc, FieldTag, NonArchFactor};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::parse;
use crate::table::Table;

/// What a command produced, plus an optional verification failure.
pub struct Report {
    pub json: Value,
    pub table: String,
    pub failure: Option<CliError>,
}

impl Report {
    fn ok(json: Value, table: String) -> Self {
        Report { json, table, failure: None }
    }

    fn check(mut self, passed: bool, what: &str) -> Self {
        if !passed {
            self.failure = Some(CliError::verify(format!("{what} failed")));
        }
        self
    }
}

fn eval_cell(f: &NonArchFactor, s: Complex64) -> Value {
    match f.eval(s) {
        Ok(z) => json!([z.re, z.im]),
        Err(_) => json!("pole"),
    }
}

fn eval_text(f: &NonArchFactor, s: Complex64) -> String {
    f.eval(s).map(fmt_complex).unwrap_or_else(|_| "pole".into())
}

fn grid_rows(grid: &[Complex64], cols: &[(&str, &NonArchFactor)]) -> (Value, Table) {
    let mut header = vec!["s".to_string()];
    header.extend(cols.iter().map(|(n, _)| n.to_string()));
    let mut table = Table::new(header);
    let rows = grid
        .iter()
        .map(|&s| {
            let mut row = serde_json::Map::new();
            row.insert("s".into(), json!([s.re, s.im]));
            let mut cells = vec![fmt_complex(s)];
            for (name, f) in cols {
                row.insert(name.to_string(), eval_cell(f, s));
                cells.push(eval_text(f, s));
            }
            table.row(cells);
            Value::Object(row)
        })
        .collect();
    (Value::Array(rows), table)
}

fn parse_ext(text: &str) -> CliResult<ExtKind> {
    serde_json::from_value(Value::String(text.to_string()))
        .map_err(|_| CliError::input(format!("--ext: '{text}' is not one of unramified, ramified-p, ramified-up")))
}

fn field_arg(field: Option<&str>, ext: Option<&str>) -> CliResult<FieldDesc> {
    let text = field.ok_or_else(|| CliError::input("--field is required"))?;
    let mut fd: FieldDesc = parse::json("field", text)?;
    if let Some(e) = ext {
        fd.ext = Some(parse_ext(e)?);
    }
    Ok(fd)
}

// ---------------------------------------------------------------- tate

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TateInput {
    pub field: FieldDesc,
    #[serde(rename = "char")]
    pub chi: CharDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_shift: Option<String>,
}

pub struct TateArgs<'a> {
    pub bundle: Option<&'a str>,
    pub field: Option<&'a str>,
    pub ext: Option<&'a str>,
    pub chi: Option<&'a str>,
    pub psi_shift: Option<&'a str>,
}

impl TateArgs<'_> {
    fn input(&self) -> CliResult<TateInput> {
        if let Some(b) = self.bundle {
            return parse::json("bundle", b);
        }
        let field = field_arg(self.field, self.ext)?;
        let tag = if field.ext.is_some() { FieldTag::E } else { FieldTag::F };
        let chi = parse::character("char", self.chi.unwrap_or("trivial"), tag)?;
        Ok(TateInput { field, chi, psi_shift: self.psi_shift.map(str::to_string) })
    }
}

pub fn tate(args: &TateArgs, cfg: &Config) -> CliResult<Report> {
    let input = args.input()?;
    let chi = input.chi.build(&input.field)?;
    let field = *chi.field();
    let mut psi = AddChar::standard(&field);
    if let Some(a) = &input.psi_shift {
        let r = parse_rational(a)?;
        if *r.numer() == 0 {
            return Err(CliError::input("--psi-shift must be nonzero"));
        }
        psi = psi.shift(&field.embed(field.base().from_ratio(r)?))?;
    }
    let tf = tate_factors(&chi, &psi)?;
    let gauss = if chi.conductor() > 0 { Some(gauss_sum(&chi, &psi)?) } else { None };
    let (rows, table) = grid_rows(&cfg.grid, &[("L", &tf.l), ("eps", &tf.eps), ("gamma", &tf.gamma)]);
    let passed = tf.phi_deviation <= cfg.tol_phi;
    let json = json!({
        "command": "tate",
        "input": input,
        "conductor": chi.conductor(),
        "L": tf.l,
        "L_dual": tf.l_dual,
        "eps": tf.eps,
        "gamma": tf.gamma,
        "eps_exponent": tf.eps_exponent,
        "gauss_sum": gauss,
        "display": {
            "L": tf.l.to_string(),
            "eps": tf.eps.to_string(),
            "gamma": tf.gamma.to_string(),
        },
        "phi_deviation": tf.phi_deviation,
        "tolerance": cfg.tol_phi,
        "passed": passed,
        "grid": rows,
    });
    let mut text = format!(
        "conductor      {}\nL(s)           {}\neps(s)         {}\ngamma(s)       {}\n",
        chi.conductor(),
        tf.l,
        tf.eps,
        tf.gamma
    );
    if let Some(g) = gauss {
        text += &format!("gauss sum      {}\n", fmt_complex(g));
    }
    text += &format!("Phi deviation  {:.3e}\n\n{}", tf.phi_deviation, table.render());
    Ok(Report::ok(json, text).check(passed, "Phi-independence of the Tate gamma factor"))
}

// ---------------------------------------------------------------- asai bundles

pub struct BundleArgs<'a> {
    pub bundle: Option<&'a str>,
    pub field: Option<&'a str>,
    pub ext: Option<&'a str>,
    pub mu: Option<&'a str>,
    pub nu: Option<&'a str>,
    pub psi_shift: Option<&'a str>,
    pub xi_scale: Option<&'a str>,
    pub twist: Option<&'a str>,
}

impl BundleArgs<'_> {
    /// `twist_is_tau` selects whether `--twist` names a character of `F^x`
    /// or a principal series `tau = Ind(mu2, nu2)` of `GL_2(F)`.
    fn bundle(&self, twist_is_tau: bool) -> CliResult<AsaiBundle> {
        if let Some(b) = self.bundle {
            return parse::bundle("bundle", b);
        }
        let field = field_arg(self.field, self.ext)?;
        if field.ext.is_none() {
            return Err(CliError::input("an extension is required: pass --ext or \"ext\" in --field"));
        }
        let mu = parse::character("char", self.mu.unwrap_or("trivial"), FieldTag::E)?;
        let nu = parse::character("char2", self.nu.unwrap_or("trivial"), FieldTag::E)?;
        let (twist, tau) = match self.twist {
            None => (None, None),
            Some(t) if twist_is_tau => (None, Some(parse::tau("twist", t)?)),
            Some(t) => (Some(parse::character("twist", t, FieldTag::F)?), None),
        };
        Ok(AsaiBundle {
            field,
            pi: RepDesc::PrincipalSeries { mu, nu },
            psi_shift: self.psi_shift.map(str::to_string),
            xi_scale: self.xi_scale.map(str::to_string),
            twist,
            tau,
        })
    }
}

pub fn asai(args: &BundleArgs, cfg: &Config) -> CliResult<Report> {
    let bundle = args.bundle(false)?;
    let input = bundle.build()?;
    let gamma = gamma_rs(&input)?;
    let l = l_gal_asai(&input)?;
    let l_dual = l_gal_asai(&input.contragredient())?.reflect();
    let eps = eps_rs(&input)?;
    let cmp = eps_gal_comparison(&input, &cfg.grid, cfg.tol_nonarch)?;
    let (rows, mut table) = grid_rows(
        &cfg.grid,
        &[("gamma_RS", &gamma.factor), ("L", &l), ("eps_RS", &eps), ("eps_pred", &cmp.predicted)],
    );
    table.column("deviation", cmp.deviations.iter().map(|d| format!("{d:.2e}")));
    let json = json!({
        "command": "asai",
        "input": bundle,
        "normalization": gamma.normalization,
        "gamma_rs": gamma.factor,
        "renormalization": gamma.renormalization,
        "L": l,
        "L_dual": l_dual,
        "eps_rs": eps,
        "eps_gal": cmp.gal,
        "eps_predicted": cmp.predicted,
        "omega_xi": cmp.omega_xi,
        "deviations": cmp.deviations,
        "max_deviation": cmp.max_deviation,
        "tolerance": cfg.tol_nonarch,
        "passed": cmp.equal,
        "display": {
            "gamma_rs": gamma.factor.to_string(),
            "L": l.to_string(),
            "eps_rs": eps.to_string(),
            "eps_gal": cmp.gal.total.to_string(),
        },
        "grid": rows,
    });
    let mut text = format!(
        "gamma_RS(s)    {}\nL(s)           {}\neps_RS(s)      {}\neps_Gal(s)     {}\nlambda         {}\nomega(xi)      {}\n",
        gamma.factor,
        l,
        eps,
        cmp.gal.total,
        fmt_complex(cmp.gal.lambda),
        fmt_complex(cmp.omega_xi),
    );
    if let Some(r) = &gamma.renormalization {
        text += &format!(
            "renormalized   psi -> psi^a (ord a = {}), xi -> b xi (ord b = {}), correction {}\n",
            r.a_ord, r.b_ord, r.correction
        );
    }
    text += &format!("max deviation  {:.3e}\n\n{}", cmp.max_deviation, table.render());
    Ok(Report::ok(json, text).check(cmp.equal, "eps_RS versus eps_Gal comparison"))
}

pub fn twisted_asai(args: &BundleArgs, cfg: &Config) -> CliResult<Report> {
    let bundle = args.bundle(true)?;
    let input = bundle.build()?;
    let psr = gamma_psr(&input, &cfg.grid, cfg.tol_nonarch)?;
    let (rows, mut table) = grid_rows(&cfg.grid, &[("assembly1", &psr.assembly1), ("assembly2", &psr.assembly2)]);
    table.column("deviation", psr.deviations.iter().map(|d| format!("{d:.2e}")));
    let json = json!({
        "command": "twisted-asai",
        "input": bundle,
        "assembly1": psr.assembly1,
        "assembly2": psr.assembly2,
        "renormalizations": psr.renormalizations,
        "deviations": psr.deviations,
        "max_deviation": psr.max_deviation,
        "tolerance": cfg.tol_nonarch,
        "passed": psr.equal,
        "display": {
            "assembly1": psr.assembly1.to_string(),
            "assembly2": psr.assembly2.to_string(),
        },
        "grid": rows,
    });
    let mut text = format!("assembly 1     {}\nassembly 2     {}\n", psr.assembly1, psr.assembly2);
    for r in &psr.renormalizations {
        text += &format!("renormalized   ord a = {}, ord b = {}, correction {}\n", r.a_ord, r.b_ord, r.correction);
    }
    text += &format!("max deviation  {:.3e}\n\n{}", psr.max_deviation, table.render());
    Ok(Report::ok(json, text).check(psr.equal, "agreement of the two gamma^PSR assemblies"))
}

pub fn dichotomy(args: &BundleArgs) -> CliResult<Report> {
    let bundle = args.bundle(true)?;
    let input = bundle.build()?;
    if input.tau.is_none() {
        return Err(CliError::input("dichotomy needs tau: pass --twist '{\"mu2\": ..., \"nu2\": ...}'"));
    }
    let d = dichotomy_sign(&input)?;
    let sign = if d.sign > 0 { "+1" } else { "-1" };
    let json = json!({
        "command": "dichotomy",
        "input": bundle,
        "sign": sign,
        "raw": d.raw,
        "omega_ef_minus_one": d.omega_ef_minus_one,
        "constituent_eps": d.constituent_eps,
    });
    let text = format!(
        "{sign}\nomega_E/F(-1)            {}\neps(1/2 + v2, As x mu2)  {}\neps(1/2 - v2, As x nu2)  {}\n",
        fmt_complex(d.omega_ef_minus_one),
        fmt_complex(d.constituent_eps[0]),
        fmt_complex(d.constituent_eps[1]),
    );
    Ok(Report::ok(json, text))
}

// ---------------------------------------------------------------- archimedean

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchInput {
    pub n1: i64,
    pub n2: i64,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

pub struct ArchArgs<'a> {
    pub bundle: Option<&'a str>,
    pub n1: Option<i64>,
    pub n2: Option<i64>,
    pub lambda1: Option<&'a str>,
    pub lambda2: Option<&'a str>,
}

impl ArchArgs<'_> {
    fn input(&self) -> CliResult<ArchInput> {
        if let Some(b) = self.bundle {
            return parse::json("bundle", b);
        }
        let lam = |flag, v: Option<&str>| v.map_or(Ok(Complex64::new(0.0, 0.0)), |t| parse::complex(flag, t));
        Ok(ArchInput {
            n1: self.n1.unwrap_or(0),
            n2: self.n2.unwrap_or(0),
            lambda1: lam("lambda1", self.lambda1)?,
            lambda2: lam("lambda2", self.lambda2)?,
        })
    }
}

/// Quadrature of `Z(s)` where it converges, compared with the closed form.
fn quadrature_deviations(grid: &[Complex64], datum: &CaseDatum, mu: &CChar, nu: &CChar) -> Vec<Option<f64>> {
    grid.iter()
        .map(|&s| {
            let (z, _) = z_pair(s, datum, mu, nu).ok()?;
            let q = z_by_quadrature(s, datum, mu, nu).ok()?;
            Some((q - z).norm() / z.norm().max(1e-300))
        })
        .collect()
}

pub fn arch_zeta(args: &ArchArgs, cfg: &Config) -> CliResult<Report> {
    let input = args.input()?;
    let mu = CChar::new(input.lambda1, input.n1);
    let nu = CChar::new(input.lambda2, input.n2);
    let datum = case_table(&mu, &nu);
    let ev = zeta_integral_case(&cfg.grid, &mu, &nu)?;
    let quad = quadrature_deviations(&cfg.grid, &datum, &mu, &nu);
    let quad_max = quad.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    let worst = [ev.c_spread, ev.c_dual_spread, ev.relation_deviation, ev.table_deviation, quad_max]
        .into_iter()
        .fold(0.0f64, f64::max);
    let passed = worst <= cfg.tol_arch;

    let mut table = Table::new(["s", "Z", "Z_dual", "Z/L", "Z_dual/L_dual", "quad dev"].map(String::from).to_vec());
    for (pt, q) in ev.points.iter().zip(&quad) {
        table.row(vec![
            fmt_complex(pt.s),
            fmt_complex(pt.z),
            fmt_complex(pt.z_dual),
            fmt_complex(pt.ratio),
            fmt_complex(pt.ratio_dual),
            q.map_or("n/a".into(), |d| format!("{d:.2e}")),
        ]);
    }
    let json = json!({
        "command": "arch-zeta",
        "input": input,
        "case": ev.datum.case_id,
        "swapped": ev.datum.swapped,
        "phi": ev.datum.phi,
        "w_terms": ev.datum.w_terms,
        "c": ev.datum.c,
        "c_dual": ev.datum.c_dual,
        "c_measured": ev.c_mean,
        "c_dual_measured": ev.c_dual_mean,
        "c_spread": ev.c_spread,
        "c_dual_spread": ev.c_dual_spread,
        "table_deviation": ev.table_deviation,
        "eps_rs": ev.eps_rs,
        "eps_gal": ev.eps_gal,
        "relation_deviation": ev.relation_deviation,
        "quadrature_deviations": quad,
        "max_deviation": worst,
        "tolerance": cfg.tol_arch,
        "passed": passed,
        "points": ev.points,
    });
    let text = format!(
        "case           {}{}\nc              {}  (measured {})\nc_dual         {}  (measured {})\neps_RS         {}\neps_Gal        {}\nspread         {:.2e} / {:.2e}\nrelation dev   {:.2e}\ntable dev      {:.2e}\nquadrature dev {:.2e}\n\n{}",
        ev.datum.case_id,
        if ev.datum.swapped { " (mu, nu swapped)" } else { "" },
        fmt_complex(ev.datum.c),
        fmt_complex(ev.c_mean),
        fmt_complex(ev.datum.c_dual),
        fmt_complex(ev.c_dual_mean),
        fmt_complex(ev.eps_rs),
        fmt_complex(ev.eps_gal),
        ev.c_spread,
        ev.c_dual_spread,
        ev.relation_deviation,
        ev.table_deviation,
        quad_max,
        table.render(),
    );
    Ok(Report::ok(json, text).check(passed, "archimedean zeta integral check"))
}

// ---------------------------------------------------------------- verify

pub fn verify(suites: &[Suite], cfg: &Config, seed: u64) -> CliResult<Report> {
    let results = verify::run(suites, cfg, seed);
    let all_passed = results.iter().all(|r| r.passed);
    let mut table = Table::new(["suite", "check", "result", "max dev", "tol", "time", "detail"].map(String::from).to_vec());
    for r in &results {
        table.row(vec![
            format!("{:?}", r.suite).to_lowercase(),
            r.name.to_string(),
            if r.passed { "PASS" } else { "FAIL" }.to_string(),
            format!("{:.2e}", r.max_deviation),
            format!("{:.0e}", r.tolerance),
            format!("{:.2}s", r.seconds),
            r.detail.clone(),
        ]);
    }
    let json = json!({
        "command": "verify",
        "seed": seed,
        "suites": suites,
        "config": cfg,
        "passed": all_passed,
        "checks": results,
    });
    let failed = results.iter().filter(|r| !r.passed).count();
    let text = format!("{}\n{} checks, {} failed\n", table.render(), results.len(), failed);
    Ok(Report::ok(json, text).check(all_passed, "verification suite"))
}
