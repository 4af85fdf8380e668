//! `asai`: local factors of Asai representations from the command line.

mod commands;
mod error;
mod parse;
mod table;

use std::io::Write;
use std::process::ExitCode;

use asai_core::verify::Suite;
use asai_core::Config;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::Value;

use commands::{ArchArgs, BundleArgs, Report, TateArgs};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "asai", version, about = "Local L-, epsilon- and gamma-factors of Asai representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Evaluation grid as JSON, e.g. '[0.7, [2.1, 0.5]]'.
    #[arg(long, global = true)]
    grid: Option<String>,

    /// Comparison tolerance; overrides the default for the chosen command.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Tate L-, epsilon- and gamma-factors of one character.
    Tate {
        #[command(flatten)]
        field: FieldArgs,
        /// Character descriptor JSON, or `trivial`.
        #[arg(long = "char")]
        chi: Option<String>,
        /// Rational `a` with psi = psi0(a x).
        #[arg(long, allow_hyphen_values = true)]
        psi_shift: Option<String>,
        #[arg(long)]
        bundle: Option<String>,
    },
    /// Asai gamma, L and epsilon factors of Ind(mu, nu), optionally twisted by a character of F^x.
    Asai(Bundle),
    /// gamma^PSR of pi x tau, assembled in two ways; --twist is tau = Ind(mu2, nu2).
    TwistedAsai(Bundle),
    /// Sign of the central epsilon value of As(pi) x tau; --twist is tau.
    Dichotomy(Bundle),
    /// Archimedean zeta integrals for Ind(mu, nu) with mu = z^-n1 |z|^2lambda1 style characters of C^x.
    ArchZeta {
        #[arg(long, allow_hyphen_values = true)]
        n1: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        n2: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda2: Option<String>,
        #[arg(long)]
        bundle: Option<String>,
    },
    /// Run the oracle suites.
    Verify {
        /// nonarch, arch or all.
        #[arg(value_name = "SUITE")]
        positional: Option<String>,
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field descriptor JSON, e.g. '{"p": 5, "ext": "unramified"}'.
    #[arg(long)]
    field: Option<String>,
    /// unramified, ramified-p or ramified-up.
    #[arg(long)]
    ext: Option<String>,
}

#[derive(Args)]
struct Bundle {
    #[command(flatten)]
    field: FieldArgs,
    /// mu, a character of E^x (JSON or `trivial`).
    #[arg(long = "char")]
    mu: Option<String>,
    /// nu, a character of E^x (JSON or `trivial`).
    #[arg(long = "char2")]
    nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    psi_shift: Option<String>,
    /// Rational `c` with xi = c sqrt(d).
    #[arg(long, allow_hyphen_values = true)]
    xi_scale: Option<String>,
    #[arg(long)]
    twist: Option<String>,
    /// A complete input bundle, or a JSON document previously emitted by this tool.
    #[arg(long)]
    bundle: Option<String>,
}

impl Bundle {
    fn args<'a>(&'a self, bundle: Option<&'a str>) -> BundleArgs<'a> {
        BundleArgs {
            bundle,
            field: self.field.field.as_deref(),
            ext: self.field.ext.as_deref(),
            mu: self.mu.as_deref(),
            nu: self.nu.as_deref(),
            psi_shift: self.psi_shift.as_deref(),
            xi_scale: self.xi_scale.as_deref(),
            twist: self.twist.as_deref(),
        }
    }
}

/// Splits a previously emitted document into its `input` and `s_grid`.
fn unwrap_bundle(text: Option<&str>) -> CliResult<(Option<String>, Option<Vec<Complex64>>)> {
    let Some(text) = text else { return Ok((None, None)) };
    let v: Value = parse::json("bundle", text)?;
    match v {
        Value::Object(mut m) if m.contains_key("command") && m.contains_key("input") => {
            let grid = match m.remove("s_grid") {
                Some(g) => Some(
                    serde_json::from_value(g).map_err(|e| CliError::input(format!("--bundle at `s_grid`: {e}")))?,
                ),
                None => None,
            };
            Ok((Some(m["input"].to_string()), grid))
        }
        _ => Ok((Some(text.to_string()), None)),
    }
}

fn suites_of(name: &str) -> CliResult<Vec<Suite>> {
    match name {
        "all" => Ok(vec![Suite::Arch, Suite::Nonarch]),
        s => Ok(vec![s.parse().map_err(|_| CliError::input(format!("unknown suite '{s}': use nonarch, arch or all")))?]),
    }
}

fn run(cli: &Cli) -> CliResult<Report> {
    let mut cfg = Config::from_env();
    let bundle_text = match &cli.command {
        Command::Tate { bundle, .. } | Command::ArchZeta { bundle, .. } => bundle.as_deref(),
        Command::Asai(b) | Command::TwistedAsai(b) | Command::Dichotomy(b) => b.bundle.as_deref(),
        Command::Verify { .. } => None,
    };
    let (bundle, bundle_grid) = unwrap_bundle(bundle_text)?;
    if let Some(g) = parse::grid(cli.grid.as_deref())?.or(bundle_grid) {
        if g.is_empty() {
            return Err(asai_core::AsaiError::EmptyGrid.into());
        }
        cfg.grid = g;
    }
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::input("--tol must be a positive number"));
        }
        match cli.command {
            Command::ArchZeta { .. } => cfg.tol_arch = t,
            Command::Tate { .. } => cfg.tol_phi = t,
            Command::Verify { .. } => {
                cfg.tol_nonarch = t;
                cfg.tol_arch = t;
                cfg.tol_phi = t;
            }
            _ => cfg.tol_nonarch = t,
        }
    }
    let bundle = bundle.as_deref();
    let mut report = match &cli.command {
        Command::Tate { field, chi, psi_shift, .. } => commands::tate(
            &TateArgs {
                bundle,
                field: field.field.as_deref(),
                ext: field.ext.as_deref(),
                chi: chi.as_deref(),
                psi_shift: psi_shift.as_deref(),
            },
            &cfg,
        )?,
        Command::Asai(b) => commands::asai(&b.args(bundle), &cfg)?,
        Command::TwistedAsai(b) => commands::twisted_asai(&b.args(bundle), &cfg)?,
        Command::Dichotomy(b) => commands::dichotomy(&b.args(bundle))?,
        Command::ArchZeta { n1, n2, lambda1, lambda2, .. } => commands::arch_zeta(
            &ArchArgs { bundle, n1: *n1, n2: *n2, lambda1: lambda1.as_deref(), lambda2: lambda2.as_deref() },
            &cfg,
        )?,
        Command::Verify { positional, suite, seed } => {
            let name = match (positional, suite) {
                (Some(a), Some(b)) if a != b => {
                    return Err(CliError::input(format!("conflicting suites '{a}' and '{b}'")))
                }
                (Some(a), _) => a.as_str(),
                (None, Some(b)) => b.as_str(),
                (None, None) => "all",
            };
            commands::verify(&suites_of(name)?, &cfg, *seed)?
        }
    };
    if let Value::Object(m) = &mut report.json {
        if !matches!(cli.command, Command::Verify { .. }) {
            m.insert("s_grid".into(), serde_json::to_value(&cfg.grid).expect("grid serializes"));
        }
    }
    Ok(report)
}

fn emit(cli: &Cli, report: &Report) -> CliResult<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
        Format::Table => report.table.clone(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|report| {
        emit(&cli, &report)?;
        report.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
