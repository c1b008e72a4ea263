//! The critical exponent `α = d`.
//!
//! For the Gaussian profile `ψ_σ(ξ) = (2π)^{d/2} σ^d e^{−2π²σ²‖ξ‖²}`, whose
//! inverse transform is the bump `e^{−‖x‖²/2σ²}`, radial reduction gives
//!
//! ```text
//! ∫ ⟨ξ⟩^α |ψ_σ|² dξ = (2π)^d σ^{d−α} ω_d ∫₀^∞ r^{d−1} (σ² + r²)^{α/2} e^{−4π²r²} dr
//! ∫ ‖ξ‖^α |ψ_σ|² dξ = (2π)^d σ^{d−α} ω_d ∫₀^∞ r^{α+d−1} e^{−4π²r²} dr
//! ```
//!
//! As `σ → 0` both tend to `0`, to `C_d = ½(d−1)!(2π)^{−d} ω_d`, or to `∞`
//! for `α < d`, `α = d`, `α > d` respectively. This module evaluates those
//! integrals by adaptive quadrature, classifies finite sweeps over `σ`, and
//! measures how the norm of Gaussian RBF interpolants collapses.

mod decay;
pub mod quadrature;

pub use decay::{rbf_norm_decay_study, DecayRow};

use std::f64::consts::{PI, TAU};

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use quadrature::{integrate, QuadratureOptions};

/// Surface area of the unit `(d−1)`-sphere, `ω_d = 2π^{d/2}/Γ(d/2)`.
pub fn sphere_surface_area(dim: usize) -> f64 {
    assert!(dim >= 1, "dimension must be at least 1");
    2.0 * PI.powf(0.5 * dim as f64) / gamma(0.5 * dim as f64)
}

/// `∫₀^∞ r^k e^{−4π²r²} dr = ½ Γ((k+1)/2) (4π²)^{−(k+1)/2}`.
pub fn gaussian_radial_moment(k: f64) -> f64 {
    assert!(k >= 0.0, "moment order must be non-negative");
    let s = 0.5 * (k + 1.0);
    0.5 * gamma(s) * (4.0 * PI * PI).powf(-s)
}

/// `C_d = ½ (d−1)! (2π)^{−d} ω_d`.
pub fn critical_constant(dim: usize) -> f64 {
    let factorial: f64 = (1..dim).map(|k| k as f64).product();
    0.5 * factorial * TAU.powi(-(dim as i32)) * sphere_surface_area(dim)
}

/// Upper radial limit beyond which `r^k e^{−4π²r²}` is below `1e−150` of
/// its peak.
pub(crate) fn radial_cutoff(k: f64) -> f64 {
    3.0 + 3.0 * (k.max(0.0) / (8.0 * PI * PI)).sqrt()
}

/// `ψ_σ(ξ)` given `‖ξ‖²`.
pub fn gaussian_profile(sigma: f64, dim: usize, xi_norm_sq: f64) -> f64 {
    TAU.powf(0.5 * dim as f64) * sigma.powi(dim as i32) * (-2.0 * PI * PI * sigma * sigma * xi_norm_sq).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormVariant {
    /// `‖ξ‖^α` weight.
    Homogeneous,
    /// `⟨ξ⟩^α = (1 + ‖ξ‖²)^{α/2}` weight.
    Bracket,
}

impl std::str::FromStr for NormVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homogeneous" => Ok(NormVariant::Homogeneous),
            "bracket" => Ok(NormVariant::Bracket),
            other => Err(Error::InvalidParameter(format!(
                "unknown norm variant {other:?} (expected homogeneous or bracket)"
            ))),
        }
    }
}

/// Gaussian probe of width `σ` in `d` dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProbe {
    sigma: f64,
    dim: usize,
}

impl GaussianProbe {
    /// Checks at ten frequencies that the one-dimensional factor of the
    /// profile is the cosine transform of the spatial bump.
    pub fn new(sigma: f64, dim: usize) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        let scale = 1.0 / (2.0 * sigma * sigma);
        let reach = 12.0 * sigma;
        let peak = TAU.sqrt() * sigma;
        for k in 0..10 {
            let xi = k as f64 * 0.15 / sigma;
            let ft = integrate(
                |x| (-x * x * scale).exp() * (TAU * xi * x).cos(),
                -reach,
                reach,
                QuadratureOptions {
                    rel_tol: 0.0,
                    abs_tol: 1e-12 * peak,
                    max_intervals: 2_000,
                },
            )?;
            let closed = gaussian_profile(sigma, 1, xi * xi);
            if (ft.value - closed).abs() > 1e-9 * peak {
                return Err(Error::InvalidParameter(format!(
                    "Gaussian profile check failed at xi = {xi}: {} vs {closed}",
                    ft.value
                )));
            }
        }
        Ok(Self { sigma, dim })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spectral(&self, xi: &[f64]) -> f64 {
        gaussian_profile(self.sigma, self.dim, xi.iter().map(|v| v * v).sum())
    }

    pub fn spatial(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        (-r2 / (2.0 * self.sigma * self.sigma)).exp()
    }

    pub fn sobolev_norm(&self, alpha: f64, variant: NormVariant) -> Result<f64> {
        gaussian_sobolev_norm(self.sigma, alpha, self.dim, variant)
    }
}

/// Squared `H^{α/2}`-type norm of the Gaussian bump of width `σ`, by
/// adaptive radial quadrature at relative tolerance `1e−10`.
pub fn gaussian_sobolev_norm(sigma: f64, alpha: f64, dim: usize, variant: NormVariant) -> Result<f64> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be non-negative, got {alpha}")));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let d = dim as f64;
    let four_pi_sq = 4.0 * PI * PI;
    let options = QuadratureOptions::with_rel_tol(1e-10);
    let radial = match variant {
        NormVariant::Homogeneous => {
            let k = alpha + d - 1.0;
            let q = integrate(|r| r.powf(k) * (-four_pi_sq * r * r).exp(), 0.0, radial_cutoff(k), options)?;
            let closed = gaussian_radial_moment(k);
            if ((q.value - closed) / closed).abs() > 1e-8 {
                return Err(Error::Quadrature {
                    estimate: (q.value - closed).abs(),
                    intervals: q.intervals,
                });
            }
            q.value
        }
        NormVariant::Bracket => {
            let s2 = sigma * sigma;
            let q = integrate(
                |r| r.powf(d - 1.0) * (s2 + r * r).powf(0.5 * alpha) * (-four_pi_sq * r * r).exp(),
                0.0,
                radial_cutoff(alpha + d - 1.0),
                options,
            )?;
            q.value
        }
    };
    Ok(TAU.powi(dim as i32) * sigma.powf(d - alpha) * sphere_surface_area(dim) * radial)
}

/// Outcome of a `σ → 0` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    ToZero,
    FiniteLimit(f64),
    Diverges,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ToZero => "to_zero",
            Verdict::FiniteLimit(_) => "finite_limit",
            Verdict::Diverges => "diverges",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub sigma: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitClassification {
    pub dim: usize,
    pub alpha: f64,
    pub verdict: Verdict,
    /// Least-squares slope of `log value` against `log σ` over the tail.
    pub tail_slope: f64,
    pub evidence: Vec<SweepPoint>,
}

impl LimitClassification {
    /// `value · σ^{α−d}` for each evidence row.
    pub fn scaled_values(&self) -> Vec<f64> {
        let exponent = self.alpha - self.dim as f64;
        self.evidence.iter().map(|p| p.value * p.sigma.powf(exponent)).collect()
    }
}

/// Slope magnitude separating a finite limit from a power law.
pub const SLOPE_THRESHOLD: f64 = 0.2;
/// Largest relative spread of the tail values accepted as a finite limit.
pub const FINITE_SPREAD: f64 = 0.05;
/// Number of trailing sweep points used by the classification.
pub const TAIL_POINTS: usize = 3;

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), &(x, y)| {
        let dx = x.ln() - mx;
        (num + dx * (y.ln() - my), den + dx * dx)
    });
    num / den
}

/// Evaluates the Gaussian norm at each `σ` (descending, at least four
/// values over at least two decades) and classifies the limit from the
/// last three points.
pub fn limit_sweep(dim: usize, alpha: f64, sigmas: &[f64], variant: NormVariant) -> Result<LimitClassification> {
    if sigmas.len() < 4 {
        return Err(Error::InvalidParameter("a limit sweep needs at least four sigma values".into()));
    }
    if sigmas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("sigma values must be strictly descending".into()));
    }
    if sigmas[0] / sigmas[sigmas.len() - 1] < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter("sigma values must span at least two decades".into()));
    }
    let evidence = sigmas
        .iter()
        .map(|&sigma| {
            gaussian_sobolev_norm(sigma, alpha, dim, variant).map(|value| SweepPoint { sigma, value })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &evidence[evidence.len() - TAIL_POINTS..];
    let pairs: Vec<(f64, f64)> = tail.iter().map(|p| (p.sigma, p.value)).collect();
    let slope = log_log_slope(&pairs);
    let values: Vec<f64> = tail.iter().map(|p| p.value).collect();
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let increasing = values.windows(2).all(|w| w[1] > w[0]);

    let verdict = if slope > SLOPE_THRESHOLD {
        if !decreasing {
            return Err(Error::InconsistentEvidence(format!(
                "slope {slope:.3} suggests decay but the tail is not monotone: {values:?}"
            )));
        }
        Verdict::ToZero
    } else if slope < -SLOPE_THRESHOLD {
        if !increasing {
            return Err(Error::InconsistentEvidence(format!(
                "slope {slope:.3} suggests growth but the tail is not monotone: {values:?}"
            )));
        }
        Verdict::Diverges
    } else {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let spread = values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
            - values.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        if spread / mean >= FINITE_SPREAD {
            return Err(Error::InconsistentEvidence(format!(
                "flat slope {slope:.3} but tail spread {:.2}% exceeds {:.0}%",
                100.0 * spread / mean,
                100.0 * FINITE_SPREAD
            )));
        }
        Verdict::FiniteLimit(mean)
    };
    Ok(LimitClassification {
        dim,
        alpha,
        verdict,
        tail_slope: slope,
        evidence,
    })
}
