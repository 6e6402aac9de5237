//! Exact interaction energy of two concentric perfectly conducting cylinders.
//!
//! Energies are dimensionless, `ê = E·a²/(ħcL)`, and depend on the geometry
//! only through `α = b/a`. The main path is the single integral
//!
//! ```text
//! ê₁₂(α) = (1/4π) Σ_{n=-∞}^{∞} ∫_0^∞ y ln F_n(y, α) dy
//! ```
//!
//! obtained from the mode-sum double integral over `(k_z, y)` by doing the
//! `k_z` integral in closed form and integrating by parts in `y`.
//! [`e12_double_integral_oracle`] evaluates the double integral as written,
//! with a numerical `y` derivative, and exists to check that reduction.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, domain, Error, Result};
use crate::quadrature::{integrate_semi_infinite, QuadratureResult, QuadratureSpec};
use crate::specfun::log_ratios;
use crate::units::HBAR_C;

/// Casimir energy of an isolated cylinder is `-0.01356 ħcL/R²`.
pub const SINGLE_CYLINDER_COEFFICIENT: f64 = 0.01356;

/// Inner radius `a`, outer radius `b`, length `length`. The formulas assume
/// `length ≫ b`; that is not checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentricGeometry {
    pub a: f64,
    pub b: f64,
    pub length: f64,
}

impl ConcentricGeometry {
    pub fn new(a: f64, b: f64, length: f64) -> Result<Self> {
        let finite = a.is_finite() && b.is_finite() && length.is_finite();
        if !(finite && a > 0.0 && b > a && length > 0.0) {
            return Err(domain(format!(
                "need 0 < a < b and length > 0, got a = {a}, b = {b}, length = {length}"
            )));
        }
        Ok(Self { a, b, length })
    }

    pub fn alpha(&self) -> f64 {
        self.b / self.a
    }

    /// `ħcL/a²` in joules when lengths are in metres.
    pub fn energy_unit(&self) -> f64 {
        HBAR_C * self.length / (self.a * self.a)
    }

    /// `ħc/(2πa⁴)` in pascals when lengths are in metres.
    pub fn pressure_unit(&self) -> f64 {
        HBAR_C / (2.0 * PI * self.a.powi(4))
    }

    /// Interaction energy in joules.
    pub fn interaction_energy(&self, cfg: &NumericsConfig) -> Result<f64> {
        Ok(e12_reduced(self.alpha(), cfg)?.e12_hat * self.energy_unit())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsConfig {
    /// `quad.tail_cut` is a multiplier: the first semi-infinite panel is
    /// `tail_cut/(α − 1)` wide.
    pub quad: QuadratureSpec,
    /// Stop the order sum after two consecutive terms below
    /// `n_tol·|partial sum|`.
    pub n_tol: f64,
    pub n_hard_cap: u32,
    /// Step in α for the pressure derivative.
    pub fd_step: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            quad: QuadratureSpec::default(),
            n_tol: 1e-10,
            n_hard_cap: 2000,
            fd_step: 1e-4,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        if self.n_tol.is_nan() || self.n_tol <= 0.0 {
            return Err(domain("n_tol must be positive"));
        }
        if self.n_hard_cap < 1 {
            return Err(domain("n_hard_cap must be at least 1"));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(domain("fd_step must be positive"));
        }
        Ok(())
    }

    fn panel_spec(&self, alpha: f64) -> QuadratureSpec {
        self.quad.with_tail_cut(self.quad.tail_cut / (alpha - 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyResult {
    pub alpha: f64,
    /// `E₁₂·a²/(ħcL)`
    pub e12_hat: f64,
    /// Contribution of each `|n|` to `e12_hat`; orders `±n` are combined.
    pub per_n: Vec<(u32, f64)>,
    pub n_max_used: u32,
    pub quad_error: f64,
    /// Geometric bound on the orders beyond `n_max_used`.
    pub truncation_error: f64,
    /// The order sum stopped at `n_hard_cap` rather than by tolerance.
    pub hit_n_cap: bool,
    /// Orders whose integral did not meet its tolerance.
    pub unconverged_orders: Vec<u32>,
}

impl EnergyResult {
    pub fn converged(&self) -> bool {
        !self.hit_n_cap && self.unconverged_orders.is_empty()
    }

    pub fn error_estimate(&self) -> f64 {
        self.quad_error + self.truncation_error
    }

    /// `Err(NonConvergence)` unless both the order sum and every integral met
    /// their tolerances.
    pub fn require_converged(self) -> Result<Self> {
        if self.hit_n_cap {
            return Err(Error::NonConvergence(format!(
                "order sum at alpha = {} reached the cap n = {}",
                self.alpha, self.n_max_used
            )));
        }
        if let Some(n) = self.unconverged_orders.first() {
            return Err(Error::NonConvergence(format!(
                "integral for order {n} at alpha = {} missed its tolerance",
                self.alpha
            )));
        }
        Ok(self)
    }
}

/// `ln F_n(y, α)`: the sum of `ln(1 − R)` over the plain and the primed
/// Bessel ratio `R`.
pub fn log_f_n(n: u32, y: f64, alpha: f64) -> Result<f64> {
    let (plain, primed) = log_ratios(i64::from(n), y, alpha)?;
    Ok(log_one_minus_exp(plain) + log_one_minus_exp(primed))
}

/// `ln(1 − e^x)` for `x < 0`, accurate at both ends.
fn log_one_minus_exp(x: f64) -> f64 {
    if x < -std::f64::consts::LN_2 {
        (-x.exp()).ln_1p()
    } else {
        (-x.exp_m1()).ln()
    }
}

/// Runs `integrate` with an integrand that may fail; the first failure is
/// returned instead of the (poisoned) quadrature result.
fn integrate_fallible(
    integrand: impl Fn(f64) -> Result<f64>,
    integrate: impl FnOnce(&dyn Fn(f64) -> f64) -> Result<QuadratureResult>,
) -> Result<QuadratureResult> {
    let failure: Cell<Option<Error>> = Cell::new(None);
    let wrapped = |y: f64| match integrand(y) {
        Ok(v) => v,
        Err(e) => {
            let first = failure.take().unwrap_or(e);
            failure.set(Some(first));
            f64::NAN
        }
    };
    let result = integrate(&wrapped)?;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(result),
    }
}

/// Sums per-order terms `term(n)` (already weighted and normalised) until
/// the tolerance rule or the cap stops it.
fn sum_orders(
    alpha: f64,
    cfg: &NumericsConfig,
    mut term: impl FnMut(u32) -> Result<QuadratureResult>,
) -> Result<EnergyResult> {
    let mut per_n = Vec::new();
    let mut total = 0.0;
    let mut quad_error = 0.0;
    let mut unconverged_orders = Vec::new();
    let mut small_in_a_row = 0;
    let mut hit_n_cap = true;
    for n in 0..=cfg.n_hard_cap {
        let r = term(n)?;
        if !r.converged {
            unconverged_orders.push(n);
        }
        total += r.value;
        quad_error += r.error_estimate;
        per_n.push((n, r.value));
        if n > 0 && r.value.abs() < cfg.n_tol * total.abs() {
            small_in_a_row += 1;
            if small_in_a_row == 2 {
                hit_n_cap = false;
                break;
            }
        } else {
            small_in_a_row = 0;
        }
    }
    let truncation_error = match per_n.as_slice() {
        [.., (_, prev), (_, last)] => {
            let q = (last / prev).abs();
            if q < 1.0 {
                last.abs() * q / (1.0 - q)
            } else {
                last.abs()
            }
        }
        _ => 0.0,
    };
    Ok(EnergyResult {
        alpha,
        e12_hat: total,
        n_max_used: per_n.last().map_or(0, |&(n, _)| n),
        per_n,
        quad_error,
        truncation_error,
        hit_n_cap,
        unconverged_orders,
    })
}

fn order_weight(n: u32) -> f64 {
    if n == 0 {
        1.0
    } else {
        2.0
    }
}

/// Exact dimensionless interaction energy from the reduced single integral.
pub fn e12_reduced(alpha: f64, cfg: &NumericsConfig) -> Result<EnergyResult> {
    check_alpha(alpha)?;
    cfg.validate()?;
    let spec = cfg.panel_spec(alpha);
    let scale = 1.0 / (4.0 * PI);
    sum_orders(alpha, cfg, |n| {
        let r = integrate_fallible(
            |y| Ok(y * log_f_n(n, y, alpha)?),
            |f| integrate_semi_infinite(f, &spec),
        )?;
        let w = order_weight(n) * scale;
        Ok(QuadratureResult {
            value: w * r.value,
            error_estimate: w * r.error_estimate,
            ..r
        })
    })
}

/// `d/dy ln F_n(y, α)` by the five-point central difference.
fn d_log_f_dy(n: u32, y: f64, alpha: f64) -> Result<f64> {
    // step well inside both the distance to y = 0 and the decay length
    let h = 1e-3 * y.min(1.0 / (alpha - 1.0));
    let f = |t: f64| log_f_n(n, t, alpha);
    Ok((f(y - 2.0 * h)? - 8.0 * f(y - h)? + 8.0 * f(y + h)? - f(y + 2.0 * h)?) / (12.0 * h))
}

/// The exact energy from the double integral over `k_z` and `y`, with the
/// branch `Im √(k_z² − y²) = √(y² − k_z²)` for `y > |k_z|`.
///
/// The inner integral is taken in `s = √(y² − k_z²)`, which removes the
/// square-root endpoint at `y = |k_z|`. Orders are combined as in
/// [`e12_reduced`]. This is slow and meant for verification.
pub fn e12_double_integral_oracle(alpha: f64, cfg: &NumericsConfig) -> Result<EnergyResult> {
    check_alpha(alpha)?;
    cfg.validate()?;
    let spec = cfg.panel_spec(alpha);
    // ê = −(1/4π²) Σ_n ∫_{−∞}^{∞} dk ∫_{|k|}^{∞} √(y² − k²) ∂_y ln F_n dy
    let scale = -1.0 / (2.0 * PI * PI);
    sum_orders(alpha, cfg, |n| {
        let inner_converged = Cell::new(true);
        let outer = integrate_fallible(
            |k| {
                let r = integrate_fallible(
                    |s| {
                        let y = k.hypot(s);
                        Ok(s * s / y * d_log_f_dy(n, y, alpha)?)
                    },
                    |f| integrate_semi_infinite(f, &spec),
                )?;
                inner_converged.set(inner_converged.get() && r.converged);
                Ok(r.value)
            },
            |f| integrate_semi_infinite(f, &spec),
        )?;
        let w = order_weight(n) * scale;
        Ok(QuadratureResult {
            value: w * outer.value,
            error_estimate: (w * outer.error_estimate).abs(),
            converged: outer.converged && inner_converged.get(),
            ..outer
        })
    })
}

/// `ê_C = ê₁₂ − 0.01356 (1 + α⁻²)`, the total energy in units of `ħcL/a²`.
pub fn e_total(alpha: f64, cfg: &NumericsConfig) -> Result<f64> {
    let e12 = e12_reduced(alpha, cfg)?.require_converged()?;
    Ok(total_from_interaction(alpha, e12.e12_hat))
}

pub fn total_from_interaction(alpha: f64, e12_hat: f64) -> f64 {
    e12_hat - SINGLE_CYLINDER_COEFFICIENT * (1.0 + alpha.powi(-2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureResult {
    pub alpha: f64,
    /// `2ê + αê'`, the outward pressure on the inner cylinder in units of
    /// `ħc/(2πa⁴)`.
    pub p_hat: f64,
    pub e12_hat: f64,
    /// Richardson-extrapolated `dê/dα`.
    pub derivative: f64,
    pub error_estimate: f64,
    /// Difference between the step-`h` and step-`h/2` derivatives.
    pub fd_disagreement: f64,
    /// The two derivative estimates differ by more than ten times what the
    /// step size and quadrature noise account for.
    pub flagged: bool,
}

/// Pressure on the inner cylinder from `P = −(1/2πaL) ∂E₁₂/∂a` at fixed `b`.
pub fn pressure_inner(alpha: f64, cfg: &NumericsConfig) -> Result<PressureResult> {
    check_alpha(alpha)?;
    cfg.validate()?;
    let h = cfg.fd_step;
    if alpha <= 1.0 + 2.0 * h {
        return Err(domain(format!("pressure needs alpha > 1 + 2·fd_step = {}", 1.0 + 2.0 * h)));
    }
    let energy = |a: f64| -> Result<(f64, f64)> {
        let r = e12_reduced(a, cfg)?.require_converged()?;
        Ok((r.e12_hat, r.error_estimate()))
    };
    let (e0, err0) = energy(alpha)?;
    let (ep, errp) = energy(alpha + h)?;
    let (em, errm) = energy(alpha - h)?;
    let (ep2, errp2) = energy(alpha + 0.5 * h)?;
    let (em2, errm2) = energy(alpha - 0.5 * h)?;
    pressure_from_samples(alpha, h, [em, em2, e0, ep2, ep], [errm, errm2, err0, errp2, errp])
}

/// Pressure from energies at `α − h, α − h/2, α, α + h/2, α + h`.
pub fn pressure_from_samples(
    alpha: f64,
    h: f64,
    energies: [f64; 5],
    errors: [f64; 5],
) -> Result<PressureResult> {
    let [em, em2, e0, ep2, ep] = energies;
    let d_h = (ep - em) / (2.0 * h);
    let d_h2 = (ep2 - em2) / h;
    let derivative = (4.0 * d_h2 - d_h) / 3.0;
    let noise = (errors[0] + errors[4]) / (2.0 * h) + (errors[1] + errors[3]) / h;
    let disagreement = (d_h - d_h2).abs();
    // the energy varies on the scale α − 1, so the O(h²) truncation of a
    // central difference is about (h/(α − 1))² relative
    let expected = 2.5 * (h / (alpha - 1.0)).powi(2) * d_h.abs() + noise;
    let p_hat = 2.0 * e0 + alpha * derivative;
    if !p_hat.is_finite() {
        return Err(Error::NonConvergence(format!("pressure at alpha = {alpha} is not finite")));
    }
    Ok(PressureResult {
        alpha,
        p_hat,
        e12_hat: e0,
        derivative,
        error_estimate: 2.0 * errors[2] + alpha * (noise + disagreement / 3.0),
        fd_disagreement: disagreement,
        flagged: disagreement > 10.0 * expected,
    })
}
