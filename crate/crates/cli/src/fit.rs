//! `fit-p`: best effective-area exponent against the exact results.

use std::path::PathBuf;

use casimir_core::approx::{fit_objective, fit_p, FitMode};
use casimir_core::exact::{e12_reduced, pressure_inner};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{usage, CliResult};
use crate::output::{emit, to_json};
use crate::settings::{meta, Context};
use crate::sweep::Spacing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Energy,
    Pressure,
}

impl From<Mode> for FitMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Energy => FitMode::Energy,
            Mode::Pressure => FitMode::Pressure,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    #[arg(long, default_value_t = 1.5)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub alpha_max: f64,
    /// Number of grid points; one point is allowed and usually gives a flat
    /// objective.
    #[arg(long, default_value_t = 4)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
    #[arg(long, value_enum, default_value_t = Mode::Energy)]
    pub mode: Mode,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Spacing of the objective curve written for plotting.
const CURVE_STEP: f64 = 0.01;

#[derive(Serialize)]
struct CurvePoint {
    p: f64,
    objective: f64,
}

#[derive(Serialize)]
struct FitJson<M: Serialize> {
    meta: M,
    mode: Mode,
    alphas: Vec<f64>,
    exact_values: Vec<f64>,
    p_star: f64,
    objective: f64,
    flat: bool,
    non_unimodal: bool,
    rows: Vec<CurvePoint>,
}

fn grid(args: &FitArgs) -> CliResult<Vec<f64>> {
    if !(args.alpha_min.is_finite() && args.alpha_min > 1.0) {
        return Err(usage("alpha must exceed 1"));
    }
    if args.steps == 0 {
        return Err(usage("steps must be at least 1"));
    }
    if args.steps == 1 {
        return Ok(vec![args.alpha_min]);
    }
    if !(args.alpha_max.is_finite() && args.alpha_max > args.alpha_min) {
        return Err(usage("alpha_max must be finite and exceed alpha_min"));
    }
    let request = crate::sweep::SweepRequest {
        alpha_min: args.alpha_min,
        alpha_max: args.alpha_max,
        steps: args.steps,
        spacing: args.spacing,
        quantities: Vec::new(),
    };
    Ok(request.grid())
}

pub fn cmd_fit(args: &FitArgs, ctx: &Context) -> CliResult<()> {
    let alphas = grid(args)?;
    let cfg = ctx.numerics;
    if args.mode == Mode::Pressure && alphas[0] <= 1.0 + 2.0 * cfg.fd_step {
        return Err(usage(format!("pressure needs alpha_min > 1 + 2·fd_step = {}", 1.0 + 2.0 * cfg.fd_step)));
    }
    let exact_values = ctx.pool.install(|| {
        alphas
            .par_iter()
            .map(|&alpha| match args.mode {
                Mode::Energy => Ok(e12_reduced(alpha, &cfg)?.require_converged()?.e12_hat),
                Mode::Pressure => Ok(pressure_inner(alpha, &cfg)?.p_hat),
            })
            .collect::<casimir_core::Result<Vec<f64>>>()
    })?;
    let mode = FitMode::from(args.mode);
    let fit = fit_p(&alphas, &exact_values, mode)?;
    let steps = (1.0 / CURVE_STEP).round() as usize;
    let rows = (0..=steps)
        .map(|i| {
            let p = i as f64 / steps as f64;
            Ok(CurvePoint { p, objective: fit_objective(&alphas, &exact_values, mode, p)? })
        })
        .collect::<casimir_core::Result<Vec<_>>>()?;
    let out = FitJson {
        meta: meta(&cfg, args),
        mode: args.mode,
        alphas,
        exact_values,
        p_star: fit.p_star,
        objective: fit.objective,
        flat: fit.flat,
        non_unimodal: fit.non_unimodal,
        rows,
    };
    emit(args.out.as_deref(), &to_json(&out)?)
}
