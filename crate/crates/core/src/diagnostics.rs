//! Degeneracy diagnostics for solved interpolants.
//!
//! A trivial interpolant hits every label with a narrow spike and is close
//! to zero everywhere else. The triviality index `τ` compares the largest
//! field magnitude away from the samples with the largest label:
//!
//! ```text
//! τ = max_{p ∈ probes, dist(p, X) > δ} |h(p)| / max_i |y_i|
//! ```
//!
//! The exclusion radius `δ` is the larger of five Nyquist-scale spike
//! widths `5/((2M+1)Δξ)` and a tenth of the smallest sample spacing.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{sobolev_quadratic_form, FrequencyGrid, Spectrum};
use crate::samples::{distance, SampleSet};
use crate::solver::{solve_general, SolveConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivialityConfig {
    /// Multiple of the Nyquist scale `1/((2M+1)Δξ)` in the exclusion radius.
    pub nyquist_multiple: f64,
    /// Fraction of the minimum sample spacing in the exclusion radius.
    pub spacing_fraction: f64,
    /// `τ` below this classifies the interpolant as trivial.
    pub threshold: f64,
}

impl Default for TrivialityConfig {
    fn default() -> Self {
        Self {
            nyquist_multiple: 5.0,
            spacing_fraction: 0.1,
            threshold: 0.1,
        }
    }
}

impl TrivialityConfig {
    pub fn exclusion_radius(&self, grid: &FrequencyGrid, samples: &SampleSet) -> f64 {
        let nyquist = self.nyquist_multiple / ((2 * grid.band_limit() + 1) as f64 * grid.mesh());
        let spacing = samples.min_pairwise_distance();
        if spacing.is_finite() {
            nyquist.max(self.spacing_fraction * spacing)
        } else {
            nyquist
        }
    }
}

pub const MIN_PROBES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Trivial,
    Nontrivial,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Trivial => "trivial",
            Classification::Nontrivial => "nontrivial",
        })
    }
}

/// Axis-aligned box in which fields are probed.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalWindow {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl EvalWindow {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InvalidParameter("window bounds must have equal nonzero length".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InvalidParameter("window lower bounds must be below upper bounds".into()));
        }
        Ok(Self { lower, upper })
    }

    /// The samples' bounding box grown to 1.5 times its extent per axis; an
    /// axis with zero extent gets half-width 1.
    pub fn around(samples: &SampleSet) -> Self {
        let (lower, upper) = samples
            .bounding_box()
            .into_iter()
            .map(|(lo, hi)| {
                let span = hi - lo;
                if span > 0.0 {
                    (lo - 0.25 * span, hi + 0.25 * span)
                } else {
                    (lo - 1.0, hi + 1.0)
                }
            })
            .unzip();
        Self { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    /// Uniform grid with `per_axis` points per axis including the faces,
    /// first coordinate varying slowest.
    pub fn lattice(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let per_axis = per_axis.max(2);
        let mut out = vec![Vec::new()];
        for k in 0..self.dim() {
            let (lo, hi) = (self.lower[k], self.upper[k]);
            let step = (hi - lo) / (per_axis - 1) as f64;
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..per_axis).map(move |i| {
                        let mut p = prefix.clone();
                        p.push(if i + 1 == per_axis { hi } else { lo + step * i as f64 });
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Points per axis giving about `total` lattice points.
    pub fn per_axis_for(&self, total: usize) -> usize {
        let per = (total as f64).powf(1.0 / self.dim() as f64);
        ((per + 1e-9).floor() as usize).max(2)
    }

    /// Default probe count: 512 in one dimension, 64 per axis otherwise.
    pub fn default_probes(&self) -> usize {
        if self.dim() == 1 {
            512
        } else {
            64usize.pow(self.dim() as u32)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    /// `h(x_i) − y_i`.
    pub values: Vec<f64>,
    pub max_abs: f64,
}

pub fn constraint_residual(spectrum: &Spectrum, samples: &SampleSet) -> Result<Residuals> {
    let field = spectrum.evaluate_many(samples.points())?;
    let values: Vec<f64> = field
        .values
        .iter()
        .zip(samples.labels())
        .map(|(h, y)| h - y)
        .collect();
    let max_abs = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(Residuals { values, max_abs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triviality {
    /// `τ` clamped to `[0, 1]`.
    pub tau: f64,
    /// Unclamped ratio; exceeds one when the field overshoots the labels.
    pub tau_raw: f64,
    pub clamped: bool,
    pub classification: Classification,
    /// Probes that survived the exclusion balls.
    pub probe_count: usize,
    pub exclusion_radius: f64,
}

pub fn triviality_index(
    spectrum: &Spectrum,
    samples: &SampleSet,
    window: &EvalWindow,
    probes: usize,
    config: &TrivialityConfig,
) -> Result<Triviality> {
    if probes < MIN_PROBES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_PROBES} probes, got {probes}")));
    }
    if window.dim() != samples.dim() {
        return Err(Error::DimensionMismatch {
            expected: samples.dim(),
            got: window.dim(),
        });
    }
    if let Some(outside) = samples.points().iter().position(|x| !window.contains(x)) {
        return Err(Error::InvalidParameter(format!(
            "evaluation window does not contain sample {}",
            outside + 1
        )));
    }
    let radius = config.exclusion_radius(spectrum.grid(), samples);
    let kept: Vec<Vec<f64>> = window
        .lattice(window.per_axis_for(probes))
        .into_iter()
        .filter(|p| samples.points().iter().all(|x| distance(p, x) > radius))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyProbeSet { radius });
    }
    let field = spectrum.evaluate_many(&kept)?;
    let peak = field.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let scale = samples.max_abs_label();
    let tau_raw = if scale > 0.0 {
        peak / scale
    } else if peak == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let tau = tau_raw.min(1.0);
    Ok(Triviality {
        tau,
        tau_raw,
        clamped: tau_raw > 1.0,
        classification: if tau < config.threshold {
            Classification::Trivial
        } else {
            Classification::Nontrivial
        },
        probe_count: kept.len(),
        exclusion_radius: radius,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub q_alpha: f64,
    pub max_residual: f64,
    pub triviality_index: f64,
    pub tau_raw: f64,
    pub classification: Classification,
    pub probe_count: usize,
}

/// Objective, residual and triviality of a solved spectrum.
pub fn diagnose(
    spectrum: &Spectrum,
    samples: &SampleSet,
    alpha: f64,
    window: &EvalWindow,
    probes: usize,
    config: &TrivialityConfig,
) -> Result<DiagnosticsReport> {
    let residual = constraint_residual(spectrum, samples)?;
    let triviality = triviality_index(spectrum, samples, window, probes, config)?;
    Ok(DiagnosticsReport {
        q_alpha: sobolev_quadratic_form(spectrum, alpha),
        max_residual: residual.max_abs,
        triviality_index: triviality.tau,
        tau_raw: triviality.tau_raw,
        classification: triviality.classification,
        probe_count: triviality.probe_count,
    })
}

/// Full width at half maximum of `|field|` along each axis through
/// `center`, averaged over axes. Marches outward in steps of `step` up to
/// `max_radius`, then bisects the crossing. After 64 uniform steps the
/// step grows by a quarter per iteration.
pub fn half_max_width<F>(field: F, center: &[f64], max_radius: f64, step: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let peak = field(center).abs();
    if !(peak > 0.0) {
        return Err(Error::InvalidParameter("field vanishes at the spike centre".into()));
    }
    let half = 0.5 * peak;
    let mut total = 0.0;
    for axis in 0..center.len() {
        let at = |r: f64| {
            let mut p = center.to_vec();
            p[axis] += r;
            field(&p).abs()
        };
        for direction in [1.0, -1.0] {
            let mut inner = 0.0;
            let mut outer = None;
            let mut r = step;
            while r <= max_radius {
                if at(direction * r) <= half {
                    outer = Some(r);
                    break;
                }
                inner = r;
                r = if r < 64.0 * step { r + step } else { 1.25 * r };
            }
            if outer.is_none() && inner < max_radius && at(direction * max_radius) <= half {
                outer = Some(max_radius);
            }
            let mut outer = outer.ok_or(Error::HalfLevelNotCrossed { axis, radius: max_radius })?;
            for _ in 0..60 {
                let mid = 0.5 * (inner + outer);
                if at(direction * mid) <= half {
                    outer = mid;
                } else {
                    inner = mid;
                }
            }
            total += 0.5 * (inner + outer);
        }
    }
    Ok(total / center.len() as f64)
}

/// [`half_max_width`] of a spectrum's field, searching up to half a period
/// with steps of an eighth of the Nyquist scale.
pub fn spike_width(spectrum: &Spectrum, center: &[f64]) -> Result<f64> {
    spectrum.grid().check_point(center)?;
    let grid = spectrum.grid();
    let step = 1.0 / (8.0 * (2 * grid.band_limit() + 1) as f64 * grid.mesh());
    let max_radius = 0.5 * grid.period();
    half_max_width(
        |x| {
            spectrum
                .evaluate_complex(x)
                .map(|z| z.re)
                .unwrap_or(f64::NAN)
        },
        center,
        max_radius,
        step,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandLimitConvergence {
    pub band_limits: Vec<usize>,
    pub points: Vec<Vec<f64>>,
    /// Field values on `points`, one row per band limit.
    pub fields: Vec<Vec<f64>>,
    /// `(M_a, M_b, sup |h_a − h_b|)` for every pair of entries in
    /// `band_limits`, in list order.
    pub sup_differences: Vec<(usize, usize, f64)>,
}

impl BandLimitConvergence {
    /// Sup-difference between the fields at band limits `a` and `b`.
    pub fn sup_difference(&self, a: usize, b: usize) -> Option<f64> {
        self.sup_differences
            .iter()
            .find(|(i, j, _)| (*i == a && *j == b) || (*i == b && *j == a))
            .map(|t| t.2)
    }
}

/// Solves at each band limit with a fixed mesh and compares the fields on a
/// common set of points.
pub fn convergence_in_bandlimit(
    samples: &SampleSet,
    config: &SolveConfig,
    mesh: f64,
    band_limits: &[usize],
    points: &[Vec<f64>],
) -> Result<BandLimitConvergence> {
    if band_limits.len() < 2 {
        return Err(Error::InvalidParameter("need at least two band limits".into()));
    }
    if band_limits.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("band limits must be ascending".into()));
    }
    let fields = band_limits
        .iter()
        .map(|&m| {
            let grid = FrequencyGrid::new(samples.dim(), m, mesh)?;
            let spectrum = solve_general(&grid, samples, config)?;
            Ok(spectrum.evaluate_many(points)?.values)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sup_differences = Vec::new();
    for a in 0..fields.len() {
        for b in (a + 1)..fields.len() {
            let d = fields[a]
                .par_iter()
                .zip(&fields[b])
                .map(|(x, y)| (x - y).abs())
                .reduce(|| 0.0, f64::max);
            sup_differences.push((band_limits[a], band_limits[b], d));
        }
    }
    Ok(BandLimitConvergence {
        band_limits: band_limits.to_vec(),
        points: points.to_vec(),
        fields,
        sup_differences,
    })
}

/// One row of an exponent sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub band_limit: usize,
    pub lambda: f64,
    pub report: DiagnosticsReport,
}

/// Solves and diagnoses at each `α` on a fixed grid.
pub fn sweep_alpha(
    grid: &FrequencyGrid,
    samples: &SampleSet,
    lambda: f64,
    alphas: &[f64],
    window: &EvalWindow,
    probes: usize,
    config: &TrivialityConfig,
) -> Result<Vec<SweepRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            let solve = SolveConfig::new(alpha, lambda)?;
            let spectrum = solve_general(grid, samples, &solve)?;
            Ok(SweepRow {
                alpha,
                band_limit: grid.band_limit(),
                lambda,
                report: diagnose(&spectrum, samples, alpha, window, probes, config)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn two_points() -> SampleSet {
        SampleSet::new(vec![vec![-0.5], vec![0.5]], vec![0.9, 0.9]).unwrap()
    }

    #[test]
    fn residual_of_zero_field() {
        let grid = FrequencyGrid::new(1, 3, 0.1).unwrap();
        let r = constraint_residual(&Spectrum::zeros(grid), &two_points()).unwrap();
        assert_eq!(r.values, vec![-0.9, -0.9]);
        assert_eq!(r.max_abs, 0.9);
    }

    #[test]
    fn constant_and_zero_fields() {
        let grid = FrequencyGrid::new(1, 100, 0.1).unwrap();
        let samples = two_points();
        let window = EvalWindow::around(&samples);
        let cfg = TrivialityConfig::default();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
        coeffs[100] = Complex64::new(0.9, 0.0);
        let constant = Spectrum::new_hermitian(grid, coeffs).unwrap();
        let t = triviality_index(&constant, &samples, &window, 512, &cfg).unwrap();
        assert!((t.tau - 1.0).abs() < 1e-12);
        assert_eq!(t.classification, Classification::Nontrivial);

        let t = triviality_index(&Spectrum::zeros(grid), &samples, &window, 512, &cfg).unwrap();
        assert_eq!(t.tau, 0.0);
        assert_eq!(t.classification, Classification::Trivial);
    }

    #[test]
    fn probe_preconditions() {
        let grid = FrequencyGrid::new(1, 10, 0.1).unwrap();
        let samples = two_points();
        let cfg = TrivialityConfig::default();
        let window = EvalWindow::around(&samples);
        assert!(triviality_index(&Spectrum::zeros(grid), &samples, &window, 16, &cfg).is_err());
        let narrow = EvalWindow::new(vec![-0.4], vec![0.4]).unwrap();
        assert!(triviality_index(&Spectrum::zeros(grid), &samples, &narrow, 64, &cfg).is_err());
        let greedy = TrivialityConfig {
            spacing_fraction: 5.0,
            ..cfg
        };
        assert!(matches!(
            triviality_index(&Spectrum::zeros(grid), &samples, &window, 64, &greedy),
            Err(Error::EmptyProbeSet { .. })
        ));
    }

    #[test]
    fn window_defaults() {
        let w = EvalWindow::around(&two_points());
        assert_eq!(w.lower, vec![-0.75]);
        assert_eq!(w.upper, vec![0.75]);
        assert_eq!(w.default_probes(), 512);
        let lattice = w.lattice(512);
        assert_eq!(lattice.len(), 512);
        assert_eq!(lattice[511], vec![0.75]);
        let plane = EvalWindow::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(plane.per_axis_for(plane.default_probes()), 64);
    }

    #[test]
    fn gaussian_width() {
        let sigma = 0.3;
        let w = half_max_width(|x| (-x[0] * x[0] / (2.0 * sigma * sigma)).exp(), &[0.0], 3.0, sigma / 50.0).unwrap();
        let exact = 2.0 * sigma * (2.0 * std::f64::consts::LN_2).sqrt();
        assert!(((w - exact) / exact).abs() < 0.01);
    }

    #[test]
    fn half_level_must_be_crossed() {
        let err = half_max_width(|_| 1.0, &[0.0, 0.0], 1.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::HalfLevelNotCrossed { axis: 0, .. }));
    }

    #[test]
    fn identical_band_limits_agree() {
        let samples = two_points();
        let cfg = SolveConfig::new(4.0, 0.1).unwrap();
        let pts: Vec<Vec<f64>> = (0..50).map(|i| vec![-1.0 + 0.04 * i as f64]).collect();
        let c = convergence_in_bandlimit(&samples, &cfg, 0.1, &[20, 20], &pts).unwrap();
        assert_eq!(c.sup_difference(20, 20), Some(0.0));
        assert!(convergence_in_bandlimit(&samples, &cfg, 0.1, &[20], &pts).is_err());
        assert!(convergence_in_bandlimit(&samples, &cfg, 0.1, &[20, 10], &pts).is_err());
    }
}
