//! Proximity-force and semiclassical approximations for concentric
//! cylinders.
//!
//! The proximity energy integrates the parallel-plate energy density
//! `−π²ħc/(720 l³)` over an effective area `A_eff = 2πL a^p b^(1−p)`; in units
//! of `ħcL/a²` that is `ê_I = −(π³/360) α^(1−p)/(α − 1)³`.
//!
//! The semiclassical energy is dominated by the radial bouncing orbit and
//! its repetitions and equals the geometric-mean (`p = 1/2`) proximity
//! energy; that identity is what [`semiclassical_energy`] returns. No trace
//! formula amplitudes are evaluated. [`enumerate_orbits`] lists the
//! periodic orbits of the annular billiard that the resummation runs over.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, domain, Result};

/// `π³/360`, the parallel-plate coefficient after the angular integral.
pub const PFA_COEFFICIENT: f64 = PI * PI * PI / 360.0;

/// Exponent of the effective area `2πL a^p b^(1−p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProximityParams {
    p: f64,
}

impl ProximityParams {
    pub const INNER: Self = Self { p: 1.0 };
    pub const OUTER: Self = Self { p: 0.0 };
    pub const GEOMETRIC_MEAN: Self = Self { p: 0.5 };

    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self { p })
        } else {
            Err(domain(format!("effective-area exponent p must lie in [0, 1], got {p}")))
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Proximity interaction energy in units of `ħcL/a²`.
pub fn proximity_energy(alpha: f64, params: ProximityParams) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(-PFA_COEFFICIENT * alpha.powf(1.0 - params.p) / (alpha - 1.0).powi(3))
}

/// `dê_I/dα`.
pub fn proximity_energy_derivative(alpha: f64, params: ProximityParams) -> Result<f64> {
    check_alpha(alpha)?;
    let p = params.p;
    let g = alpha - 1.0;
    Ok(-PFA_COEFFICIENT
        * ((1.0 - p) * alpha.powf(-p) / g.powi(3) - 3.0 * alpha.powf(1.0 - p) / g.powi(4)))
}

/// Proximity pressure on the inner cylinder, `2ê_I + αê_I'`, in units of
/// `ħc/(2πa⁴)`.
pub fn proximity_pressure(alpha: f64, params: ProximityParams) -> Result<f64> {
    let e = proximity_energy(alpha, params)?;
    let de = proximity_energy_derivative(alpha, params)?;
    Ok(2.0 * e + alpha * de)
}

/// Semiclassical interaction energy in units of `ħcL/a²`. Identical to the
/// geometric-mean proximity energy.
pub fn semiclassical_energy(alpha: f64) -> Result<f64> {
    proximity_energy(alpha, ProximityParams::GEOMETRIC_MEAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMode {
    Energy,
    Pressure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutcome {
    pub p_star: f64,
    pub objective: f64,
    /// The scanned objective was not unimodal; `p_star` is the scan minimum.
    pub non_unimodal: bool,
    /// The objective barely changes with `p`, so `p_star` is not identified.
    pub flat: bool,
}

/// Spacing of the dense scan used to check unimodality.
pub const FIT_SCAN_STEP: f64 = 1e-3;
/// Mean per-point objective range below which the fit is reported flat.
pub const FLAT_OBJECTIVE_RANGE: f64 = 1e-4;

/// Sum of squared relative discrepancies between the proximity quantity at
/// exponent `p` and `exact_values`.
pub fn fit_objective(alpha_grid: &[f64], exact_values: &[f64], mode: FitMode, p: f64) -> Result<f64> {
    let params = ProximityParams::new(p)?;
    alpha_grid.iter().zip(exact_values).try_fold(0.0, |acc, (&alpha, &exact)| {
        let approx = match mode {
            FitMode::Energy => proximity_energy(alpha, params)?,
            FitMode::Pressure => proximity_pressure(alpha, params)?,
        };
        let r = (approx - exact) / exact;
        Ok(acc + r * r)
    })
}

/// Best-fit effective-area exponent by golden-section search on `[0, 1]`,
/// checked against a dense scan.
pub fn fit_p(alpha_grid: &[f64], exact_values: &[f64], mode: FitMode) -> Result<FitOutcome> {
    if alpha_grid.is_empty() || alpha_grid.len() != exact_values.len() {
        return Err(domain("fit needs equally long, non-empty alpha and value lists"));
    }
    if exact_values.iter().any(|v| *v == 0.0 || !v.is_finite()) {
        return Err(domain("exact values must be finite and non-zero"));
    }
    let objective = |p: f64| fit_objective(alpha_grid, exact_values, mode, p);

    let steps = (1.0 / FIT_SCAN_STEP).round() as usize;
    let scan = (0..=steps)
        .map(|i| {
            let p = i as f64 / steps as f64;
            objective(p).map(|s| (p, s))
        })
        .collect::<Result<Vec<_>>>()?;
    let (scan_p, scan_min) = scan
        .iter()
        .copied()
        .fold((0.0, f64::INFINITY), |best, (p, s)| if s < best.1 { (p, s) } else { best });
    let scan_max = scan.iter().map(|&(_, s)| s).fold(f64::NEG_INFINITY, f64::max);

    // unimodal: non-increasing up to the minimum, non-decreasing after it
    let turn = scan.iter().position(|&(p, _)| p == scan_p).unwrap_or(0);
    let unimodal = scan[..=turn].windows(2).all(|w| w[1].1 <= w[0].1)
        && scan[turn..].windows(2).all(|w| w[1].1 >= w[0].1);
    let flat = (scan_max - scan_min) / (alpha_grid.len() as f64) < FLAT_OBJECTIVE_RANGE;

    if !unimodal {
        return Ok(FitOutcome { p_star: scan_p, objective: scan_min, non_unimodal: true, flat });
    }
    let (p_star, value) = golden_section(objective, 0.0, 1.0, 1e-10)?;
    Ok(FitOutcome { p_star, objective: value, non_unimodal: false, flat })
}

fn golden_section(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    // the search interval is closed, so compare with the end points too
    let mid = 0.5 * (lo + hi);
    let candidates = [(mid, f(mid)?), (0.0, f(0.0)?), (1.0, f(1.0)?)];
    Ok(candidates
        .into_iter()
        .fold((mid, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best }))
}

// ---------------------------------------------------------------------------
// Periodic orbits

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbitKind {
    /// Polygon reflecting only off the outer wall.
    TypeI,
    /// Bounces between both walls.
    TypeII,
}

/// A planar periodic orbit between the cylinders. Lengths are in units of `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Orbit {
    pub kind: OrbitKind,
    /// Bounces on the outer cylinder per period.
    pub v: u32,
    /// Winding number around the axis.
    pub w: u32,
    /// Traversals of the primitive orbit (always 1 for type I).
    pub repetition: u32,
    pub length: f64,
    /// For type I, whether the polygon clears the inner cylinder.
    pub admissible: bool,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Periodic orbits no longer than `length_cap` (units of `b`).
///
/// Type I polygons `(v, w)` with `gcd(v, w) = 1`, `1 ≤ w ≤ v/2` and
/// `v ≤ max_bounces` have length `2v sin(πw/v)` and are admissible when
/// `cos(πw/v) ≥ 1/α`. Their lengths stay below `2πw`, so without the bounce
/// limit the list would be infinite. Type II is the radial orbit
/// `(v, w) = (1, 0)` of length `2(1 − 1/α)` and its repetitions.
pub fn enumerate_orbits(alpha: f64, length_cap: f64, max_bounces: u32) -> Result<Vec<Orbit>> {
    check_alpha(alpha)?;
    if !(length_cap > 0.0 && length_cap.is_finite()) {
        return Err(domain("length cap must be positive and finite"));
    }
    let mut orbits = Vec::new();
    for v in 2..=max_bounces {
        for w in 1..=v / 2 {
            if gcd(v, w) != 1 {
                continue;
            }
            let angle = PI * f64::from(w) / f64::from(v);
            let length = 2.0 * f64::from(v) * angle.sin();
            if length <= length_cap {
                orbits.push(Orbit {
                    kind: OrbitKind::TypeI,
                    v,
                    w,
                    repetition: 1,
                    length,
                    // the chord's distance from the axis is b·cos(πw/v)
                    admissible: angle.cos() >= 1.0 / alpha,
                });
            }
        }
    }
    let radial = 2.0 * (1.0 - 1.0 / alpha);
    for r in 1.. {
        let length = radial * f64::from(r);
        if length > length_cap {
            break;
        }
        orbits.push(Orbit {
            kind: OrbitKind::TypeII,
            v: 1,
            w: 0,
            repetition: r,
            length,
            admissible: true,
        });
    }
    orbits.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.kind.cmp(&b.kind))
            .then(a.v.cmp(&b.v))
            .then(a.w.cmp(&b.w))
    });
    Ok(orbits)
}
