//! `eccentric` and `freq-shift`: force between offset cylinders.

use std::path::PathBuf;

use casimir_core::eccentric::{
    energy_eccentric, f0, force_closed_form, force_eccentric_numeric, frequency_shift, EccentricGeometry,
    ResonatorParams, Warning,
};
use casimir_core::exact::ConcentricGeometry;
use casimir_core::units::HBAR_C;
use casimir_core::Error as CoreError;
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{usage, CliError, CliResult};
use crate::output::{emit, float, optional_float, resolve_format, to_json, Format, Table};
use crate::settings::{meta, Context};

#[derive(Debug, Clone, Args, Serialize)]
pub struct EccentricArgs {
    /// Inner radius in metres.
    #[arg(long)]
    pub a: f64,
    /// Outer radius in metres.
    #[arg(long)]
    pub b: f64,
    /// Cylinder length in metres.
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    /// Comma-separated offsets in units of b − a.
    #[arg(long, value_delimiter = ',', conflicts_with = "eps")]
    pub eps_tilde: Option<Vec<f64>>,
    /// Comma-separated offsets in metres.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Resonator effective mass in kilograms.
    #[arg(long, requires = "omega0")]
    pub mass: Option<f64>,
    /// Resonator angular frequency in rad/s.
    #[arg(long, requires = "mass")]
    pub omega0: Option<f64>,
    #[arg(long, short)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip)]
    pub format: Option<Format>,
}

const DEFAULT_EPS_TILDE: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Serialize)]
struct EccentricRow {
    eps_tilde: f64,
    eps: f64,
    energy: f64,
    f_numeric: f64,
    f_closed_form: f64,
    rel_diff: Option<f64>,
    f0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    freq_shift: Option<f64>,
    warnings: Vec<Warning>,
    converged: bool,
}

fn warning_codes(w: &[Warning]) -> String {
    w.iter()
        .map(|w| serde_json::to_value(w).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
        .collect::<Vec<_>>()
        .join(";")
}

/// `freq_shift_only` is the `freq-shift` alias: resonator parameters are
/// required and the default offset is zero.
pub fn cmd_eccentric(args: &EccentricArgs, ctx: &Context, freq_shift_only: bool) -> CliResult<()> {
    let base = ConcentricGeometry::new(args.a, args.b, args.length)?;
    let resonator = match (args.mass, args.omega0) {
        (Some(m), Some(w)) => Some(ResonatorParams::new(m, w)?),
        _ if freq_shift_only => return Err(usage("freq-shift needs --mass and --omega0")),
        _ => None,
    };
    // reject every bad offset before computing anything
    let geoms = match (&args.eps, &args.eps_tilde) {
        (Some(eps), _) => eps.iter().map(|&e| EccentricGeometry::new(base, e)).collect::<Result<Vec<_>, _>>()?,
        (None, Some(t)) => t
            .iter()
            .map(|&t| EccentricGeometry::from_eps_tilde(base, t))
            .collect::<Result<Vec<_>, _>>()?,
        (None, None) => {
            let defaults: &[f64] = if freq_shift_only { &[0.0] } else { &DEFAULT_EPS_TILDE };
            defaults
                .iter()
                .map(|&t| EccentricGeometry::from_eps_tilde(base, t))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    if geoms.is_empty() {
        return Err(usage("no offsets given"));
    }
    let shift = resonator.map(|r| frequency_shift(&base, &r));
    let spec = ctx.numerics.quad;
    let force_unit = f0(&base) * HBAR_C;

    let rows = ctx.pool.install(|| {
        geoms
            .par_iter()
            .map(|g| -> casimir_core::Result<EccentricRow> {
                let energy = energy_eccentric(g, &spec)?;
                let numeric = force_eccentric_numeric(g, &spec)?;
                let closed = force_closed_form(g)?;
                let mut warnings = numeric.warnings.clone();
                if let Some(s) = &shift {
                    warnings.extend(s.warnings.iter().filter(|w| !warnings.contains(w)).copied().collect::<Vec<_>>());
                }
                Ok(EccentricRow {
                    eps_tilde: g.eps_tilde(),
                    eps: g.eps,
                    energy: energy.si(),
                    f_numeric: numeric.si(),
                    f_closed_form: closed * HBAR_C,
                    rel_diff: (closed != 0.0).then(|| (numeric.value - closed) / closed),
                    f0: force_unit,
                    freq_shift: shift.as_ref().map(|s| s.ratio),
                    warnings,
                    converged: energy.converged && numeric.converged,
                })
            })
            .collect::<casimir_core::Result<Vec<_>>>()
    })?;

    let with_shift = shift.is_some();
    let text = match resolve_format(args.format, args.out.as_deref()) {
        Format::Json => {
            #[derive(Serialize)]
            struct EccentricJson<'a, M: Serialize> {
                meta: M,
                rows: &'a [EccentricRow],
            }
            to_json(&EccentricJson { meta: meta(&ctx.numerics, args), rows: &rows })?
        }
        Format::Csv => {
            let mut header: Vec<String> = ["eps_tilde", "eps_m", "energy_j", "f_numeric_n", "f_closed_form_n", "rel_diff", "f0_n"]
                .map(String::from)
                .to_vec();
            if with_shift {
                header.push("freq_shift".into());
            }
            header.extend(["warnings".to_string(), "status".to_string()]);
            let mut table = Table::new(header);
            for r in &rows {
                let mut cells = vec![
                    float(r.eps_tilde),
                    float(r.eps),
                    float(r.energy),
                    float(r.f_numeric),
                    float(r.f_closed_form),
                    optional_float(r.rel_diff),
                    float(r.f0),
                ];
                if with_shift {
                    cells.push(optional_float(r.freq_shift));
                }
                cells.push(warning_codes(&r.warnings));
                cells.push(if r.converged { "ok" } else { "non_convergence" }.to_string());
                table.rows.push(cells);
            }
            table.to_csv()
        }
    };
    emit(args.out.as_deref(), &text)?;
    match rows.iter().find(|r| !r.converged) {
        Some(r) => Err(CliError::Core(CoreError::NonConvergence(format!(
            "quadrature at eps_tilde = {} missed its tolerance",
            r.eps_tilde
        )))),
        None => Ok(()),
    }
}
