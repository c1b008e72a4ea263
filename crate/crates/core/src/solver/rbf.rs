use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::critical::gaussian_profile;
use crate::error::{Error, Result};
use crate::samples::{distance_sq, SampleSet};

/// Gaussian RBF interpolant `h_σ(x) = Σ_i g_i exp(−‖x − x_i‖²/2σ²)`.
///
/// Its Fourier transform is `φ_σ(ξ) = Σ_i g_i e^{−2πiξ·x_i} ψ_σ(ξ)`, where
/// `ψ_σ` is the Gaussian profile whose inverse transform is the bump above.
#[derive(Debug, Clone)]
pub struct RbfInterpolant {
    centers: SampleSet,
    sigma: f64,
    coefficients: Vec<f64>,
}

/// Solves `A_σ g = Y` with `(A_σ)_{ij} = exp(−‖x_i − x_j‖²/2σ²)`, refusing
/// kernels that are not strictly row diagonally dominant.
pub fn gaussian_rbf_interpolant(samples: &SampleSet, sigma: f64) -> Result<RbfInterpolant> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let n = samples.len();
    let scale = 1.0 / (2.0 * sigma * sigma);
    let kernel = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            (-distance_sq(samples.point(i), samples.point(j)) * scale).exp()
        }
    });
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| kernel[(i, j)]).sum();
        if !(off < 1.0) {
            return Err(Error::NotDiagonallyDominant {
                row: i,
                off_diagonal: off,
                sigma,
                min_distance: samples.min_pairwise_distance(),
            });
        }
    }
    let rhs = DVector::from_column_slice(samples.labels());
    let g = kernel.lu().solve(&rhs).ok_or_else(|| Error::Singular {
        factorization: "LU (Gaussian kernel matrix)",
        reason: "zero pivot".into(),
    })?;
    Ok(RbfInterpolant {
        centers: samples.clone(),
        sigma,
        coefficients: g.as_slice().to_vec(),
    })
}

impl RbfInterpolant {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn centers(&self) -> &SampleSet {
        &self.centers
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let scale = 1.0 / (2.0 * self.sigma * self.sigma);
        self.centers
            .points()
            .iter()
            .zip(&self.coefficients)
            .map(|(c, g)| g * (-distance_sq(x, c) * scale).exp())
            .sum()
    }

    /// Continuous spectrum `φ_σ(ξ)`.
    pub fn spectrum_at(&self, xi: &[f64]) -> Complex64 {
        let norm_sq: f64 = xi.iter().map(|v| v * v).sum();
        let profile = gaussian_profile(self.sigma, self.centers.dim(), norm_sq);
        let modulation: Complex64 = self
            .centers
            .points()
            .iter()
            .zip(&self.coefficients)
            .map(|(c, &g)| {
                let dot: f64 = xi.iter().zip(c).map(|(a, b)| a * b).sum();
                Complex64::from_polar(g, -TAU * dot)
            })
            .sum();
        modulation * profile
    }

    /// `|φ_σ(ξ)|²`.
    pub fn spectral_density(&self, xi: &[f64]) -> f64 {
        self.spectrum_at(xi).norm_sqr()
    }
}
