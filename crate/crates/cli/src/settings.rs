//! Configuration layering: built-in defaults, then an optional JSON file,
//! then command-line flags.

use std::path::Path;

use casimir_core::exact::NumericsConfig;
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{usage, CliResult};
use crate::sweep::Spacing;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub numerics: NumericsConfig,
    pub workers: Option<usize>,
    pub sweep: SweepFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepFile {
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub steps: Option<usize>,
    pub spacing: Option<Spacing>,
    pub quantities: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
                Ok(serde_json::from_str(&text)?)
            }
        }
    }
}

/// Numerical overrides shared by every command.
#[derive(Debug, Clone, Default, Args)]
pub struct NumericsArgs {
    /// Relative tolerance of each quadrature.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance of each quadrature.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Bisection budget per quadrature.
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// Relative size below which order-sum terms stop the sum.
    #[arg(long, global = true)]
    pub n_tol: Option<f64>,
    /// Largest Bessel order summed.
    #[arg(long, global = true)]
    pub n_cap: Option<u32>,
    /// Step in alpha for pressure derivatives.
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
}

impl NumericsArgs {
    pub fn apply(&self, mut cfg: NumericsConfig) -> CliResult<NumericsConfig> {
        if let Some(v) = self.rel_tol {
            cfg.quad.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.quad.abs_tol = v;
        }
        if let Some(v) = self.max_subdivisions {
            cfg.quad.max_subdivisions = v;
        }
        if let Some(v) = self.n_tol {
            cfg.n_tol = v;
        }
        if let Some(v) = self.n_cap {
            cfg.n_hard_cap = v;
        }
        if let Some(v) = self.fd_step {
            cfg.fd_step = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Everything a command needs after layering.
pub struct Context {
    pub numerics: NumericsConfig,
    pub pool: rayon::ThreadPool,
    pub file: FileConfig,
}

impl Context {
    pub fn build(config: Option<&Path>, workers: Option<usize>, numerics: &NumericsArgs) -> CliResult<Self> {
        let file = FileConfig::load(config)?;
        let numerics = numerics.apply(file.numerics)?;
        // zero lets the pool use every available core
        let workers = match workers.or(file.workers) {
            Some(0) => return Err(usage("workers must be at least 1")),
            Some(n) => n,
            None => 0,
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| usage(format!("cannot start worker pool: {e}")))?;
        Ok(Self { numerics, pool, file })
    }
}

/// Configuration echoed into JSON output. The worker count is left out so
/// that output does not depend on it.
#[derive(Serialize)]
pub struct Meta<'a, P: Serialize> {
    pub version: &'static str,
    pub config: ConfigEcho<'a, P>,
}

#[derive(Serialize)]
pub struct ConfigEcho<'a, P: Serialize> {
    pub numerics: &'a NumericsConfig,
    pub command: P,
}

pub fn meta<P: Serialize>(numerics: &NumericsConfig, command: P) -> Meta<'_, P> {
    Meta {
        version: env!("CARGO_PKG_VERSION"),
        config: ConfigEcho { numerics, command },
    }
}
