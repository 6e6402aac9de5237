//! `orbits`: periodic orbits of the annular billiard.

use std::path::PathBuf;

use casimir_core::approx::{enumerate_orbits, OrbitKind};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::CliResult;
use crate::output::{emit, float, to_json};
use crate::settings::{meta, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrbitFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrbitArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Longest orbit listed, in units of the outer radius.
    #[arg(long, default_value_t = 12.0)]
    pub length_cap: f64,
    /// Most outer-wall bounces per polygon orbit.
    #[arg(long, default_value_t = 64)]
    pub max_bounces: u32,
    #[arg(long, value_enum, default_value_t = OrbitFormat::Text)]
    #[serde(skip)]
    pub format: OrbitFormat,
    #[arg(long, short)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

pub fn cmd_orbits(args: &OrbitArgs, ctx: &Context) -> CliResult<()> {
    let orbits = enumerate_orbits(args.alpha, args.length_cap, args.max_bounces)?;
    let text = match args.format {
        OrbitFormat::Json => {
            #[derive(Serialize)]
            struct OrbitJson<'a, M: Serialize> {
                meta: M,
                rows: &'a [casimir_core::approx::Orbit],
            }
            to_json(&OrbitJson { meta: meta(&ctx.numerics, args), rows: &orbits })?
        }
        OrbitFormat::Text => {
            let mut s = format!("{:<8} {:>4} {:>4} {:>4} {:>22} {}\n", "kind", "v", "w", "rep", "length/b", "admissible");
            for o in &orbits {
                let kind = match o.kind {
                    OrbitKind::TypeI => "type-I",
                    OrbitKind::TypeII => "type-II",
                };
                s += &format!(
                    "{:<8} {:>4} {:>4} {:>4} {:>22} {}\n",
                    kind,
                    o.v,
                    o.w,
                    o.repetition,
                    float(o.length),
                    o.admissible
                );
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)
}
