use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{bracket_power, FrequencyGrid, MultiIndex, Spectrum};

/// Closed-form solution for one sample at the origin with label 2 and an
/// even, zero-mean spectrum.
///
/// With `v_j = (1 + j²Δξ²)^{−α/2}` and `Z² = Σ_{j=1}^{M} v_j`:
///
/// ```text
/// φ_j  = v_j / ((Z² + λ) Δξ)                       j = 1..M, φ_{−j} = φ_j, φ_0 = 0
/// h(x) = 2/(Z² + λ) · Σ_{j=1}^{M} v_j cos(2π j Δξ x)
/// ```
#[derive(Debug, Clone)]
pub struct SinglePointSolution {
    grid: FrequencyGrid,
    alpha: f64,
    lambda: f64,
    decay: Vec<f64>,
    z_sq: f64,
}

pub fn solve_single_point_analytic(
    band_limit: usize,
    mesh: f64,
    alpha: f64,
    lambda: f64,
) -> Result<SinglePointSolution> {
    let grid = FrequencyGrid::new(1, band_limit, mesh)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be non-negative, got {lambda}")));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
    }
    let decay: Vec<f64> = (1..=band_limit)
        .map(|j| 1.0 / bracket_power((j as f64 * mesh).powi(2), alpha))
        .collect();
    let z_sq = decay.iter().sum();
    Ok(SinglePointSolution {
        grid,
        alpha,
        lambda,
        decay,
        z_sq,
    })
}

impl SinglePointSolution {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `Z² = Σ_{j=1}^{M} (1 + j²Δξ²)^{−α/2}`.
    pub fn z_sq(&self) -> f64 {
        self.z_sq
    }

    /// `h(0) = 2Z²/(Z² + λ)`.
    pub fn value_at_origin(&self) -> f64 {
        2.0 * self.z_sq / (self.z_sq + self.lambda)
    }

    /// Density values `φ_j`, `j = 1..M`, in the normalization where the
    /// constraint reads `Σ_{j≥1} φ_j Δξ = 1`.
    pub fn density_coefficients(&self) -> Vec<f64> {
        let denom = (self.z_sq + self.lambda) * self.grid.mesh();
        self.decay.iter().map(|v| v / denom).collect()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let phase = TAU * self.grid.mesh() * x;
        let sum: f64 = self
            .decay
            .iter()
            .enumerate()
            .map(|(k, v)| v * (phase * (k + 1) as f64).cos())
            .sum();
        2.0 * sum / (self.z_sq + self.lambda)
    }

    pub fn evaluate_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.par_iter().map(|&x| self.evaluate(x)).collect()
    }

    /// The same field as a measure-absorbed spectrum, `φ_j Δξ` at `±j`.
    pub fn spectrum(&self) -> Spectrum {
        let m = self.grid.band_limit();
        let denom = self.z_sq + self.lambda;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (k, v) in self.decay.iter().enumerate() {
            let j = (k + 1) as i64;
            let value = Complex64::new(v / denom, 0.0);
            coeffs[m + j as usize] = value;
            coeffs[m - j as usize] = value;
        }
        debug_assert_eq!(self.grid.flat_index(&MultiIndex(vec![0])), Some(m));
        Spectrum::new_hermitian(self.grid, coeffs).expect("even real coefficients are hermitian")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_interpolation_without_regularization() {
        let s = solve_single_point_analytic(2, 1.0, 2.0, 0.0).unwrap();
        assert!((s.z_sq() - 0.7).abs() < 1e-15);
        assert!((s.value_at_origin() - 2.0).abs() < 1e-15);
        assert!((s.evaluate(0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn regularized_halves_the_value() {
        let s = solve_single_point_analytic(2, 1.0, 2.0, 0.7).unwrap();
        assert!((s.value_at_origin() - 1.0).abs() < 1e-15);
        assert!((s.evaluate(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_constraint() {
        let s = solve_single_point_analytic(50, 0.05, 1.5, 0.0).unwrap();
        let total: f64 = s.density_coefficients().iter().map(|p| p * 0.05).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn spectrum_consistent_with_evaluator() {
        let s = solve_single_point_analytic(40, 0.1, 3.0, 0.3).unwrap();
        let spectrum = s.spectrum();
        assert_eq!(spectrum.coeffs()[40], Complex64::new(0.0, 0.0));
        for x in [-2.3, -0.4, 0.0, 0.17, 1.9] {
            let a = spectrum.evaluate(&[x]).unwrap();
            assert!((a - s.evaluate(x)).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(solve_single_point_analytic(0, 1.0, 1.0, 0.0).is_err());
        assert!(solve_single_point_analytic(3, -1.0, 1.0, 0.0).is_err());
        assert!(solve_single_point_analytic(3, 1.0, 1.0, -0.5).is_err());
    }
}
