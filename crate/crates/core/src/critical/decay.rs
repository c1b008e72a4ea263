use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::quadrature::{integrate, QuadratureOptions};
use super::gaussian_profile;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::samples::SampleSet;
use crate::solver::{assemble_constraint_matrix, gaussian_rbf_interpolant};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub sigma: f64,
    /// `Σ_J ⟨ξ_J⟩^α |φ_σ(ξ_J)|² Δξ^d` on the grid.
    pub q_grid: f64,
    /// The same integral by adaptive quadrature (one dimension only).
    pub q_quadrature: Option<f64>,
}

/// `H^{α/2}` quadratic form of the Gaussian RBF interpolant at each `σ`.
///
/// The grid band must reach `6/(2πσ_min)` so the discarded Gaussian tail is
/// negligible.
pub fn rbf_norm_decay_study(
    samples: &SampleSet,
    alpha: f64,
    sigmas: &[f64],
    grid: &FrequencyGrid,
) -> Result<Vec<DecayRow>> {
    if sigmas.is_empty() {
        return Err(Error::InvalidParameter("no sigma values given".into()));
    }
    if grid.dim() != samples.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: samples.dim(),
        });
    }
    let sigma_min = sigmas.iter().copied().fold(f64::INFINITY, f64::min);
    let required = 6.0 / (TAU * sigma_min);
    if grid.band() < required {
        return Err(Error::BandTooSmall {
            band: grid.band(),
            sigma: sigma_min,
            required,
        });
    }
    let matrix = assemble_constraint_matrix(grid, samples)?;
    let weights = grid.japanese_weights(alpha);
    let norms_sq: Vec<f64> = grid
        .squared_index_norms()
        .into_iter()
        .map(|n2| n2 * grid.mesh() * grid.mesh())
        .collect();
    let cell = grid.mesh().powi(grid.dim() as i32);

    sigmas
        .iter()
        .map(|&sigma| {
            let rbf = gaussian_rbf_interpolant(samples, sigma)?;
            let g: Vec<_> = rbf
                .coefficients()
                .iter()
                .map(|&v| num_complex::Complex64::new(v, 0.0))
                .collect();
            // Σ_i g_i e^{−2πiΔξ J·x_i} is Aᴴg.
            let modulation = matrix.adjoint_apply(&g);
            let q_grid: f64 = modulation
                .par_iter()
                .zip(norms_sq.par_iter())
                .zip(weights.par_iter())
                .map(|((m, &n2), &w)| {
                    let psi = gaussian_profile(sigma, grid.dim(), n2);
                    w * m.norm_sqr() * psi * psi
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum::<f64>()
                * cell;
            let q_quadrature = if samples.dim() == 1 {
                // |φ_σ|² is even in ξ for real coefficients.
                let reach = (80.0f64).sqrt() / (2.0 * PI * sigma);
                let q = integrate(
                    |xi| (1.0 + xi * xi).powf(0.5 * alpha) * rbf.spectral_density(&[xi]),
                    0.0,
                    reach,
                    QuadratureOptions::with_rel_tol(1e-10),
                )?;
                Some(2.0 * q.value)
            } else {
                None
            };
            Ok(DecayRow {
                sigma,
                q_grid,
                q_quadrature,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::{gaussian_sobolev_norm, NormVariant};

    #[test]
    fn single_bump_matches_radial_norm() {
        let samples = SampleSet::new(vec![vec![0.0]], vec![1.0]).unwrap();
        let grid = FrequencyGrid::new(1, 4000, 0.01).unwrap();
        let rows = rbf_norm_decay_study(&samples, 0.5, &[0.1, 0.05], &grid).unwrap();
        for row in rows {
            let exact = gaussian_sobolev_norm(row.sigma, 0.5, 1, NormVariant::Bracket).unwrap();
            assert!(((row.q_grid - exact) / exact).abs() < 0.01);
            let quad = row.q_quadrature.unwrap();
            assert!(((quad - exact) / exact).abs() < 1e-8);
        }
    }

    #[test]
    fn narrow_band_rejected() {
        let samples = SampleSet::new(vec![vec![0.0]], vec![1.0]).unwrap();
        let grid = FrequencyGrid::new(1, 100, 0.1).unwrap();
        let err = rbf_norm_decay_study(&samples, 0.5, &[0.1, 0.01], &grid).unwrap_err();
        match err {
            Error::BandTooSmall { required, .. } => assert!((required - 600.0 / TAU).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }
}
