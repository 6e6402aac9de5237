//! `energy`: exact interaction and total energy at one α.

use casimir_core::exact::{e12_reduced, pressure_inner, total_from_interaction};
use clap::Args;
use serde::Serialize;

use crate::error::CliResult;
use crate::output::{emit, to_json};
use crate::settings::{meta, Context};

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    /// Radius ratio b/a (> 1).
    #[arg(long)]
    pub alpha: f64,
    /// Also compute the pressure on the inner cylinder.
    #[arg(long)]
    pub pressure: bool,
    /// Include the contribution of every Bessel order.
    #[arg(long, short)]
    pub verbose: bool,
}

#[derive(Serialize)]
struct EnergyRow {
    alpha: f64,
    e12_hat: f64,
    e_total_hat: f64,
    error_estimate: f64,
    quad_error: f64,
    truncation_error: f64,
    n_max_used: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_flagged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_n: Option<Vec<(u32, f64)>>,
}

#[derive(Serialize)]
struct EnergyJson<M: Serialize> {
    meta: M,
    rows: [EnergyRow; 1],
}

pub fn cmd_energy(args: &EnergyArgs, ctx: &Context) -> CliResult<()> {
    let cfg = ctx.numerics;
    let r = e12_reduced(args.alpha, &cfg)?.require_converged()?;
    let pressure = if args.pressure { Some(pressure_inner(args.alpha, &cfg)?) } else { None };
    let row = EnergyRow {
        alpha: args.alpha,
        e12_hat: r.e12_hat,
        e_total_hat: total_from_interaction(args.alpha, r.e12_hat),
        error_estimate: r.error_estimate(),
        quad_error: r.quad_error,
        truncation_error: r.truncation_error,
        n_max_used: r.n_max_used,
        p_hat: pressure.as_ref().map(|p| p.p_hat),
        p_error: pressure.as_ref().map(|p| p.error_estimate),
        p_flagged: pressure.as_ref().map(|p| p.flagged),
        per_n: args.verbose.then(|| r.per_n.clone()),
    };
    emit(None, &to_json(&EnergyJson { meta: meta(&cfg, args), rows: [row] })?)
}
