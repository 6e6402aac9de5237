//! `sweep`: exact and approximate quantities over a grid in α.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use casimir_core::approx::{proximity_energy, proximity_pressure, semiclassical_energy, ProximityParams};
use casimir_core::exact::{e12_reduced, pressure_inner, total_from_interaction, NumericsConfig};
use casimir_core::Error as CoreError;
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{usage, CliError, CliResult};
use crate::output::{emit, optional_float, resolve_format, to_json, Format, Table};
use crate::settings::{meta, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    /// Uniform in `ln(α − 1)`, denser towards contact.
    LogGap,
}

/// A requested output quantity. `proximity` and `discrepancy` carry the
/// effective-area exponent and default to 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "quantity", content = "p", rename_all = "snake_case")]
pub enum Quantity {
    E12,
    ETotal,
    Pressure,
    Proximity(f64),
    Semiclassical,
    Discrepancy(f64),
}

impl Quantity {
    fn rank(&self) -> (u8, f64) {
        match *self {
            Quantity::E12 => (0, 0.0),
            Quantity::ETotal => (1, 0.0),
            Quantity::Pressure => (2, 0.0),
            Quantity::Proximity(p) => (3, p),
            Quantity::Semiclassical => (4, 0.0),
            Quantity::Discrepancy(p) => (5, p),
        }
    }

    fn columns(&self) -> Vec<String> {
        match *self {
            Quantity::E12 => vec!["e12_hat".into(), "e12_error".into()],
            Quantity::ETotal => vec!["e_total_hat".into()],
            Quantity::Pressure => vec!["p_hat".into(), "p_error".into()],
            Quantity::Proximity(p) => vec![format!("proximity_energy_p{p}"), format!("proximity_pressure_p{p}")],
            Quantity::Semiclassical => vec!["semiclassical_energy".into()],
            Quantity::Discrepancy(p) => vec![format!("energy_discrepancy_p{p}"), format!("pressure_discrepancy_p{p}")],
        }
    }

    fn needs_energy(&self) -> bool {
        matches!(self, Quantity::E12 | Quantity::ETotal | Quantity::Discrepancy(_))
    }

    fn needs_pressure(&self) -> bool {
        matches!(self, Quantity::Pressure | Quantity::Discrepancy(_))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::E12 => f.write_str("e12"),
            Quantity::ETotal => f.write_str("e_total"),
            Quantity::Pressure => f.write_str("pressure"),
            Quantity::Proximity(p) => write!(f, "proximity({p})"),
            Quantity::Semiclassical => f.write_str("semiclassical"),
            Quantity::Discrepancy(p) => write!(f, "discrepancy({p})"),
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    /// Accepts `name`, `name(p)` and `name:p`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (name, arg) = if let Some(open) = s.find('(') {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| format!("unbalanced parenthesis in quantity {s:?}"))?;
            (&s[..open], Some(inner))
        } else if let Some((name, arg)) = s.split_once(':') {
            (name, Some(arg))
        } else {
            (s, None)
        };
        let exponent = || -> Result<f64, String> {
            let p = match arg {
                None => 0.5,
                Some(a) => a.trim().parse::<f64>().map_err(|e| format!("bad exponent in {s:?}: {e}"))?,
            };
            ProximityParams::new(p).map_err(|e| e.to_string())?;
            Ok(p)
        };
        let plain = |q: Quantity| match arg {
            None => Ok(q),
            Some(_) => Err(format!("quantity {name:?} takes no argument")),
        };
        match name.trim() {
            "e12" => plain(Quantity::E12),
            "e_total" => plain(Quantity::ETotal),
            "pressure" => plain(Quantity::Pressure),
            "semiclassical" => plain(Quantity::Semiclassical),
            "proximity" => Ok(Quantity::Proximity(exponent()?)),
            "discrepancy" => Ok(Quantity::Discrepancy(exponent()?)),
            other => Err(format!(
                "unknown quantity {other:?}; expected e12, e_total, pressure, proximity(p), semiclassical or discrepancy(p)"
            )),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Smallest α (> 1).
    #[arg(long)]
    pub alpha_min: Option<f64>,
    /// Largest α.
    #[arg(long)]
    pub alpha_max: Option<f64>,
    /// Number of grid points (≥ 2).
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// Comma-separated list: e12, e_total, pressure, proximity(p),
    /// semiclassical, discrepancy(p).
    #[arg(long, value_delimiter = ',')]
    pub quantities: Option<Vec<String>>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the file extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A validated sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRequest {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub steps: usize,
    pub spacing: Spacing,
    pub quantities: Vec<Quantity>,
}

pub const DEFAULT_QUANTITIES: &str = "e12,pressure,proximity(0.5),discrepancy(0.5)";

impl SweepRequest {
    pub fn resolve(args: &SweepArgs, ctx: &Context) -> CliResult<Self> {
        let file = &ctx.file.sweep;
        let names: Vec<String> = match (&args.quantities, &file.quantities) {
            (Some(q), _) | (None, Some(q)) => q.clone(),
            (None, None) => DEFAULT_QUANTITIES.split(',').map(String::from).collect(),
        };
        let mut quantities = names
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.parse::<Quantity>().map_err(usage))
            .collect::<CliResult<Vec<_>>>()?;
        quantities.sort_by(|a, b| {
            let (ra, pa) = a.rank();
            let (rb, pb) = b.rank();
            ra.cmp(&rb).then(pa.total_cmp(&pb))
        });
        quantities.dedup();
        let request = Self {
            alpha_min: args.alpha_min.or(file.alpha_min).unwrap_or(1.1),
            alpha_max: args.alpha_max.or(file.alpha_max).unwrap_or(4.0),
            steps: args.steps.or(file.steps).unwrap_or(30),
            spacing: args.spacing.or(file.spacing).unwrap_or(Spacing::Linear),
            quantities,
        };
        request.validate(&ctx.numerics)?;
        Ok(request)
    }

    fn validate(&self, cfg: &NumericsConfig) -> CliResult<()> {
        if self.quantities.is_empty() {
            return Err(usage("no quantities requested"));
        }
        if !(self.alpha_min.is_finite() && self.alpha_min > 1.0) {
            return Err(usage("alpha must exceed 1"));
        }
        if !(self.alpha_max.is_finite() && self.alpha_max > self.alpha_min) {
            return Err(usage("alpha_max must be finite and exceed alpha_min"));
        }
        if self.steps < 2 {
            return Err(usage("steps must be at least 2"));
        }
        if self.quantities.iter().any(Quantity::needs_pressure) && self.alpha_min <= 1.0 + 2.0 * cfg.fd_step {
            return Err(usage(format!(
                "pressure needs alpha_min > 1 + 2·fd_step = {}",
                1.0 + 2.0 * cfg.fd_step
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == 0 {
                    return self.alpha_min;
                }
                if i == last {
                    return self.alpha_max;
                }
                let t = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.alpha_min + (self.alpha_max - self.alpha_min) * t,
                    Spacing::LogGap => {
                        let (lo, hi) = ((self.alpha_min - 1.0).ln(), (self.alpha_max - 1.0).ln());
                        1.0 + (lo + (hi - lo) * t).exp()
                    }
                }
            })
            .collect()
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["alpha".to_string()];
        cols.extend(self.quantities.iter().flat_map(Quantity::columns));
        cols.push("status".into());
        cols
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// The pressure derivative estimates disagreed more than expected.
    Flagged,
    NonConvergence,
    Domain,
}

impl Status {
    fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Flagged => "flagged",
            Status::NonConvergence => "non_convergence",
            Status::Domain => "domain",
        }
    }

    fn from_error(e: &CoreError) -> Self {
        match e {
            CoreError::Domain(_) => Status::Domain,
            _ => Status::NonConvergence,
        }
    }

    fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Flagged => 1,
            Status::NonConvergence => 2,
            Status::Domain => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// One α of the sweep. Every column is present; failed entries are `None`.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub alpha: f64,
    pub values: BTreeMap<String, Option<f64>>,
    pub error_estimates: BTreeMap<String, f64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip)]
    ordered: Vec<Option<f64>>,
}

fn compute_row(alpha: f64, req: &SweepRequest, cfg: &NumericsConfig) -> OutputRecord {
    let mut status = Status::Ok;
    let mut message = None;
    let mut note = |e: &CoreError, status: &mut Status| {
        *status = status.worst(Status::from_error(e));
        message.get_or_insert_with(|| e.to_string());
    };

    let energy = if req.quantities.iter().any(Quantity::needs_energy) {
        match e12_reduced(alpha, cfg).and_then(|r| r.require_converged()) {
            Ok(r) => Some(r),
            Err(e) => {
                note(&e, &mut status);
                None
            }
        }
    } else {
        None
    };
    let pressure = if req.quantities.iter().any(Quantity::needs_pressure) {
        match pressure_inner(alpha, cfg) {
            Ok(p) => {
                if p.flagged {
                    status = status.worst(Status::Flagged);
                }
                Some(p)
            }
            Err(e) => {
                note(&e, &mut status);
                None
            }
        }
    } else {
        None
    };
    let e12 = energy.as_ref().map(|r| r.e12_hat);
    let p_hat = pressure.as_ref().map(|p| p.p_hat);
    // the closed-form approximations only fail on domain errors, already
    // excluded by validation
    let params = |p: f64| ProximityParams::new(p).expect("validated exponent");
    let relative = |approx: f64, exact: Option<f64>| exact.map(|x| (approx - x) / x);

    let mut ordered = Vec::new();
    let mut error_estimates = BTreeMap::new();
    for q in &req.quantities {
        match *q {
            Quantity::E12 => {
                ordered.push(e12);
                ordered.push(energy.as_ref().map(|r| r.error_estimate()));
                if let Some(r) = &energy {
                    error_estimates.insert("e12_hat".to_string(), r.error_estimate());
                }
            }
            Quantity::ETotal => {
                ordered.push(e12.map(|e| total_from_interaction(alpha, e)));
                if let Some(r) = &energy {
                    error_estimates.insert("e_total_hat".to_string(), r.error_estimate());
                }
            }
            Quantity::Pressure => {
                ordered.push(p_hat);
                ordered.push(pressure.as_ref().map(|p| p.error_estimate));
                if let Some(p) = &pressure {
                    error_estimates.insert("p_hat".to_string(), p.error_estimate);
                }
            }
            Quantity::Proximity(p) => {
                ordered.push(proximity_energy(alpha, params(p)).ok());
                ordered.push(proximity_pressure(alpha, params(p)).ok());
            }
            Quantity::Semiclassical => ordered.push(semiclassical_energy(alpha).ok()),
            Quantity::Discrepancy(p) => {
                let pe = proximity_energy(alpha, params(p)).expect("validated alpha");
                let pp = proximity_pressure(alpha, params(p)).expect("validated alpha");
                ordered.push(relative(pe, e12));
                ordered.push(relative(pp, p_hat));
            }
        }
    }
    let names: Vec<String> = req.quantities.iter().flat_map(Quantity::columns).collect();
    let values = names.into_iter().zip(ordered.iter().copied()).collect();
    OutputRecord { alpha, values, error_estimates, status, message, ordered }
}

/// Evaluate every grid point on the context's pool. Results come back in
/// grid order whatever the scheduling.
pub fn run_sweep(req: &SweepRequest, ctx: &Context) -> Vec<OutputRecord> {
    let grid = req.grid();
    let cfg = ctx.numerics;
    ctx.pool.install(|| grid.par_iter().map(|&alpha| compute_row(alpha, req, &cfg)).collect())
}

pub fn render_csv(req: &SweepRequest, rows: &[OutputRecord]) -> String {
    let mut table = Table::new(req.columns());
    for r in rows {
        let mut cells = vec![crate::output::float(r.alpha)];
        cells.extend(r.ordered.iter().map(|v| optional_float(*v)));
        cells.push(r.status.as_str().to_string());
        table.rows.push(cells);
    }
    table.to_csv()
}

#[derive(Serialize)]
struct SweepJson<'a, M: Serialize> {
    meta: M,
    columns: Vec<String>,
    rows: &'a [OutputRecord],
}

pub fn cmd_sweep(args: &SweepArgs, ctx: &Context) -> CliResult<()> {
    let req = SweepRequest::resolve(args, ctx)?;
    let format = resolve_format(args.format, args.out.as_deref());
    let rows = run_sweep(&req, ctx);
    let text = match format {
        Format::Csv => render_csv(&req, &rows),
        Format::Json => to_json(&SweepJson {
            meta: meta(&ctx.numerics, &req),
            columns: req.columns(),
            rows: &rows,
        })?,
    };
    emit(args.out.as_deref(), &text)?;

    let failed: Vec<&OutputRecord> = rows
        .iter()
        .filter(|r| matches!(r.status, Status::NonConvergence | Status::Domain))
        .collect();
    match failed.first() {
        None => Ok(()),
        Some(first) => {
            let msg = format!(
                "{} of {} rows failed; first at alpha = {}: {}",
                failed.len(),
                rows.len(),
                first.alpha,
                first.message.as_deref().unwrap_or("unknown error")
            );
            Err(if failed.iter().any(|r| r.status == Status::NonConvergence) {
                CliError::Core(CoreError::NonConvergence(msg))
            } else {
                CliError::Core(CoreError::Domain(msg))
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantity_parsing() {
        assert_eq!("e12".parse::<Quantity>().unwrap(), Quantity::E12);
        assert_eq!("proximity(0.25)".parse::<Quantity>().unwrap(), Quantity::Proximity(0.25));
        assert_eq!("proximity:1".parse::<Quantity>().unwrap(), Quantity::Proximity(1.0));
        assert_eq!("discrepancy".parse::<Quantity>().unwrap(), Quantity::Discrepancy(0.5));
        assert!("proximity(2)".parse::<Quantity>().is_err());
        assert!("e12(0.5)".parse::<Quantity>().is_err());
        assert!("energy".parse::<Quantity>().is_err());
        assert!("proximity(0.5".parse::<Quantity>().is_err());
    }

    fn request(spacing: Spacing) -> SweepRequest {
        SweepRequest { alpha_min: 1.1, alpha_max: 4.0, steps: 30, spacing, quantities: vec![Quantity::E12] }
    }

    #[test]
    fn grids_hit_both_ends() {
        for spacing in [Spacing::Linear, Spacing::LogGap] {
            let g = request(spacing).grid();
            assert_eq!(g.len(), 30);
            assert_eq!((g[0], g[29]), (1.1, 4.0));
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
        let g = request(Spacing::LogGap).grid();
        assert!(g[1] - g[0] < g[29] - g[28]);
    }

    #[test]
    fn columns_follow_fixed_order() {
        let req = SweepRequest {
            quantities: vec![Quantity::E12, Quantity::Proximity(0.5), Quantity::Discrepancy(0.5)],
            ..request(Spacing::Linear)
        };
        assert_eq!(
            req.columns().join(","),
            "alpha,e12_hat,e12_error,proximity_energy_p0.5,proximity_pressure_p0.5,\
             energy_discrepancy_p0.5,pressure_discrepancy_p0.5,status"
        );
    }
}
