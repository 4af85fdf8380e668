//! Default evaluation grid, tolerances and working precision.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_PRECISION: u32 = 12;
pub const PRECISION_ENV: &str = "ASAI_PRECISION";

pub const TOL_NONARCH: f64 = 1e-8;
pub const TOL_ARCH: f64 = 1e-6;
pub const TOL_PHI: f64 = 1e-10;

/// `{0.7, 1.3, 2.1+0.5i, 0.4-0.8i, 1.05}`.
pub fn default_grid() -> Vec<Complex64> {
    vec![
        Complex64::new(0.7, 0.0),
        Complex64::new(1.3, 0.0),
        Complex64::new(2.1, 0.5),
        Complex64::new(0.4, -0.8),
        Complex64::new(1.05, 0.0),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub grid: Vec<Complex64>,
    pub tol_nonarch: f64,
    pub tol_arch: f64,
    pub tol_phi: f64,
    pub precision: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            grid: default_grid(),
            tol_nonarch: TOL_NONARCH,
            tol_arch: TOL_ARCH,
            tol_phi: TOL_PHI,
            precision: DEFAULT_PRECISION,
        }
    }
}

impl Config {
    /// Defaults with the precision taken from `ASAI_PRECISION` when set.
    pub fn from_env() -> Self {
        Config { precision: env_precision().unwrap_or(DEFAULT_PRECISION), ..Default::default() }
    }
}

/// The precision requested through `ASAI_PRECISION`, if it parses.
pub fn env_precision() -> Option<u32> {
    std::env::var(PRECISION_ENV).ok()?.trim().parse().ok()
}
