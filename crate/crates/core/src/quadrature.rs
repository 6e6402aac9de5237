//! Adaptive Gauss–Kronrod (10/21 point) integration.
//!
//! Finite intervals are bisected at the panel with the largest error until
//! the summed estimate meets `max(abs_tol, rel_tol·|value|)`. Semi-infinite
//! ranges are cut into panels `[0,c], [c,2c], [2c,4c], ...`, each integrated
//! adaptively, until a panel is negligible and an exponential tail bound
//! taken from the last panel is below tolerance as well.
//!
//! All sums run in a fixed order, so results are bit-reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisection budget for one finite interval; also the panel budget on
    /// semi-infinite ranges.
    pub max_subdivisions: usize,
    /// Width of the first semi-infinite panel.
    pub tail_cut: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 200,
            tail_cut: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(domain("max_subdivisions must be at least 1"));
        }
        if !(self.tail_cut.is_finite() && self.tail_cut > 0.0) {
            return Err(domain("tail_cut must be positive and finite"));
        }
        Ok(())
    }

    pub fn with_tail_cut(self, tail_cut: f64) -> Self {
        Self { tail_cut, ..self }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// False when the subdivision or panel budget ran out first.
    pub converged: bool,
}

// Kronrod abscissae on [0,1] (descending) with the Gauss points at odd
// positions; the last entry is the centre.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Panel {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_centre = f(centre);
    let mut kronrod = WGK[10] * f_centre;
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut values = [0.0; 20];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        values[2 * j] = f1;
        values[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (f_centre - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((values[2 * j] - mean).abs() + (values[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    Panel { lo, hi, value, error }
}

const RULE_POINTS: usize = 21;

fn adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
    floor: f64,
) -> QuadratureResult {
    let mut panels = vec![gauss_kronrod(f, lo, hi)];
    let mut evaluations = RULE_POINTS;
    let mut bisections = 0;
    loop {
        let (value, error) = totals(&mut panels);
        if !(value.is_finite() && error.is_finite()) {
            return QuadratureResult { value, error_estimate: error, evaluations, converged: false };
        }
        if error <= spec.target(value).max(floor) {
            return QuadratureResult { value, error_estimate: error, evaluations, converged: true };
        }
        if bisections >= spec.max_subdivisions {
            return QuadratureResult { value, error_estimate: error, evaluations, converged: false };
        }
        // largest error first; ties go to the leftmost panel
        let worst = panels
            .iter()
            .enumerate()
            .fold(0, |best, (i, p)| if p.error > panels[best].error { i } else { best });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if !(mid > p.lo && mid < p.hi) {
            // interval exhausted at machine resolution
            panels.push(p);
            let (value, error) = totals(&mut panels);
            return QuadratureResult { value, error_estimate: error, evaluations, converged: false };
        }
        panels.push(gauss_kronrod(f, p.lo, mid));
        panels.push(gauss_kronrod(f, mid, p.hi));
        evaluations += 2 * RULE_POINTS;
        bisections += 1;
    }
}

/// Sum in left-to-right order so the result does not depend on the
/// bisection history.
fn totals(panels: &mut [Panel]) -> (f64, f64) {
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// Integral of `f` over `[lo, hi]`.
pub fn integrate_finite<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(domain(format!("integration bounds must satisfy lo < hi, got [{lo}, {hi}]")));
    }
    Ok(adaptive(&mut f, lo, hi, spec, 0.0))
}

/// Integral of `f` over `[0, ∞)` for integrands with eventually exponential
/// decay; the first panel has width `spec.tail_cut`.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    spec.validate()?;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut lo = 0.0;
    let mut previous: Option<f64> = None;
    let mut converged = true;
    for _ in 0..spec.max_subdivisions {
        let hi = if lo == 0.0 { spec.tail_cut } else { 2.0 * lo };
        // each panel only needs to be accurate relative to the running total
        let floor = 0.1 * spec.target(value);
        let panel = adaptive(&mut f, lo, hi, spec, floor);
        evaluations += panel.evaluations;
        converged &= panel.converged;
        value += panel.value;
        error += panel.error_estimate;

        let negligible = panel.value.abs() < spec.target(value);
        if negligible {
            if let Some(prev) = previous {
                if let Some(tail) = exponential_tail(prev, panel.value) {
                    if tail < spec.target(value) {
                        return Ok(QuadratureResult {
                            value,
                            error_estimate: error + tail,
                            evaluations,
                            converged,
                        });
                    }
                }
            } else if panel.value == 0.0 && f(hi) == 0.0 {
                evaluations += 1;
                return Ok(QuadratureResult { value, error_estimate: error, evaluations, converged });
            }
        }
        previous = Some(panel.value);
        lo = hi;
    }
    Ok(QuadratureResult { value, error_estimate: error, evaluations, converged: false })
}

/// Tail beyond the last panel assuming exponential decay. Panels double in
/// width, so if the contents fall from `prev` to `last` the decay constant
/// over one panel width is at least that ratio, and every following panel
/// holds at most the square of the previous ratio.
fn exponential_tail(prev: f64, last: f64) -> Option<f64> {
    if last == 0.0 {
        return Some(0.0);
    }
    if prev == 0.0 || prev.signum() != last.signum() {
        return None;
    }
    let q = (last / prev).abs();
    if q >= 0.5 {
        return None;
    }
    // next panel ≤ |last|·q², then ≤ |last|·q²·q⁴, ... bounded by a geometric
    // series in q²
    Some(2.0 * last.abs() * q * q / (1.0 - q * q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn finite_analytic_cases() {
        let spec = QuadratureSpec::default();
        let r = integrate_finite(f64::sin, 0.0, PI, &spec).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12 && r.converged);
        let r = integrate_finite(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, &spec).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn peaked_periodic_integrand_matches_tighter_run() {
        let f = |t: f64| t.sin() / (1.0 + 0.05 * t.sin() - 0.9).powi(4);
        let spec = QuadratureSpec::default();
        let coarse = integrate_finite(f, 0.0, 2.0 * PI, &spec).unwrap();
        let fine = integrate_finite(f, 0.0, 2.0 * PI, &spec.with_rel_tol(1e-10)).unwrap();
        assert!(coarse.converged && fine.converged);
        assert!(((coarse.value - fine.value) / fine.value).abs() < 1e-9);
        assert!((coarse.value - fine.value).abs() <= 10.0 * coarse.error_estimate);
    }

    #[test]
    fn semi_infinite_analytic_cases() {
        let spec = QuadratureSpec::default();
        let r = integrate_semi_infinite(|x| (-x).exp(), &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12 && r.converged, "{r:?}");
        let r = integrate_semi_infinite(|x| x * (-2.0 * x).exp(), &spec).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12, "{r:?}");
        let r = integrate_semi_infinite(|x| (-x).exp(), &spec.with_tail_cut(0.01)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let spec = QuadratureSpec { max_subdivisions: 2, ..Default::default() };
        let r = integrate_finite(|x: f64| x.sqrt().recip(), 0.0, 1.0, &spec).unwrap();
        assert!(!r.converged);
        let r = integrate_finite(|x: f64| x.abs().sqrt().recip(), -1.0, 1.0, &spec).unwrap();
        assert!(!r.converged);
        let r = integrate_semi_infinite(|_| 1.0, &spec).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn rejects_invalid_input() {
        let spec = QuadratureSpec::default();
        assert!(integrate_finite(f64::sin, 1.0, 1.0, &spec).is_err());
        let bad = QuadratureSpec { rel_tol: 0.0, ..spec };
        assert!(integrate_finite(f64::sin, 0.0, 1.0, &bad).is_err());
        let bad = QuadratureSpec { max_subdivisions: 0, ..spec };
        assert!(integrate_semi_infinite(f64::sin, &bad).is_err());
    }

    #[test]
    fn success_meets_its_own_tolerance() {
        let spec = QuadratureSpec::default();
        let r = integrate_finite(|x: f64| (3.0 * x).cos() * x.exp(), -2.0, 5.0, &spec).unwrap();
        assert!(r.converged);
        assert!(r.error_estimate <= spec.abs_tol.max(spec.rel_tol * r.value.abs()));
    }
}
