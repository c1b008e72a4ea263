//! Discretized minimum-norm interpolation on a frequency grid.
//!
//! The regularized problem solved here is
//!
//! ```text
//! minimize  ‖Aφ − Y‖² + λ Σ_J w_J |φ_J|²,    A_{kJ} = exp(2πi Δξ J·x_k)
//! ```
//!
//! with `w_J` either the Japanese-bracket weight `⟨ξ_J⟩^α` or caller
//! supplied weights. Two algebraically identical routes exist:
//!
//! * dense normal equations `(AᴴA + λW) φ = AᴴY`, a `G×G` factorization
//!   kept as a small-grid oracle;
//! * the dual identity `φ = W⁻¹Aᴴ (AW⁻¹Aᴴ + λI)⁻¹ Y`, which only factors an
//!   `n×n` Hermitian matrix and also covers the exact-constraint limit `λ = 0`.
//!
//! The SVD route, the closed-form single-point solution and the Gaussian
//! RBF construction live in the submodules.

mod rbf;
mod single_point;
mod svd;

pub use rbf::{gaussian_rbf_interpolant, RbfInterpolant};
pub use single_point::{solve_single_point_analytic, SinglePointSolution};
pub use svd::{ridge_svd_solve, solve_via_svd};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, Spectrum};
use crate::samples::SampleSet;

/// The dense path refuses grids with more frequencies than this.
pub const DENSE_GRID_LIMIT: usize = 4096;

/// Relative pivot below which the dual Cholesky factor is declared singular.
const DUAL_PIVOT_RATIO: f64 = 1e-13;

/// Row-major `n × G` plane-wave matrix `A_{kJ} = exp(2πi Δξ J·x_k)`.
#[derive(Debug, Clone)]
pub struct ConstraintMatrix {
    grid: FrequencyGrid,
    rows: usize,
    entries: Vec<Complex64>,
}

pub fn assemble_constraint_matrix(grid: &FrequencyGrid, samples: &SampleSet) -> Result<ConstraintMatrix> {
    if samples.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: samples.dim(),
        });
    }
    let rows: Vec<Vec<Complex64>> = samples
        .points()
        .par_iter()
        .map(|x| grid.plane_wave(x))
        .collect::<Result<_>>()?;
    Ok(ConstraintMatrix {
        grid: *grid,
        rows: samples.len(),
        entries: rows.into_iter().flatten().collect(),
    })
}

impl ConstraintMatrix {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.grid.len()
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        let g = self.ncols();
        &self.entries[k * g..(k + 1) * g]
    }

    pub fn entry(&self, k: usize, flat: usize) -> Complex64 {
        self.entries[k * self.ncols() + flat]
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.ncols(), &self.entries)
    }

    /// `Aφ`.
    pub fn apply(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows)
            .map(|k| self.row(k).iter().zip(coeffs).map(|(a, c)| a * c).sum())
            .collect()
    }

    /// `Aᴴv`, each column summed over rows in index order.
    pub fn adjoint_apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let g = self.ncols();
        (0..g)
            .into_par_iter()
            .map(|flat| {
                (0..self.rows)
                    .map(|k| self.entries[k * g + flat].conj() * v[k])
                    .sum()
            })
            .collect()
    }

    /// `A D Aᴴ` for a real diagonal `D`, returned as an `n×n` Hermitian matrix.
    pub fn weighted_gram(&self, diagonal: &[f64]) -> DMatrix<Complex64> {
        let n = self.rows;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|k| (k..n).map(move |l| (k, l))).collect();
        let values: Vec<Complex64> = pairs
            .par_iter()
            .map(|&(k, l)| {
                self.row(k)
                    .iter()
                    .zip(self.row(l))
                    .zip(diagonal)
                    .map(|((a, b), &d)| a * b.conj() * d)
                    .sum()
            })
            .collect();
        let mut gram = DMatrix::zeros(n, n);
        for (&(k, l), v) in pairs.iter().zip(values) {
            gram[(k, l)] = v;
            gram[(l, k)] = v.conj();
        }
        for k in 0..n {
            gram[(k, k)].im = 0.0;
        }
        gram
    }
}

/// Spectral weights entering the penalty `λ Σ w_J |φ_J|²`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightVariant {
    /// `⟨ξ_J⟩^α`.
    JapaneseBracket,
    /// One positive weight per grid index in storage order. An infinite
    /// weight pins that coefficient to zero (dual path only).
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvePath {
    Dense,
    Dual,
    /// Dense when the grid is no larger than the sample count (the dual
    /// system is then rank deficient) and `λ > 0`; dual otherwise.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub weights: WeightVariant,
    pub path: SolvePath,
}

impl SolveConfig {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be non-negative, got {lambda}"
            )));
        }
        Ok(Self {
            alpha,
            lambda,
            weights: WeightVariant::JapaneseBracket,
            path: SolvePath::Dual,
        })
    }

    pub fn with_path(mut self, path: SolvePath) -> Self {
        self.path = path;
        self
    }

    pub fn with_custom_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = WeightVariant::Custom(weights);
        self
    }

    /// Resolved weights for `grid`.
    pub fn weights_for(&self, grid: &FrequencyGrid) -> Result<Vec<f64>> {
        match &self.weights {
            WeightVariant::JapaneseBracket => Ok(grid.japanese_weights(self.alpha)),
            WeightVariant::Custom(w) => {
                if w.len() != grid.len() {
                    return Err(Error::DimensionMismatch {
                        expected: grid.len(),
                        got: w.len(),
                    });
                }
                if w.iter().any(|&v| v.is_nan() || v <= 0.0) {
                    return Err(Error::InvalidParameter("custom weights must be positive".into()));
                }
                Ok(w.clone())
            }
        }
    }

    fn resolve_path(&self, grid: &FrequencyGrid, samples: &SampleSet, weights: &[f64]) -> SolvePath {
        match self.path {
            SolvePath::Auto => {
                let dense_ok = self.lambda > 0.0
                    && grid.len() <= samples.len()
                    && grid.len() <= DENSE_GRID_LIMIT
                    && weights.iter().all(|w| w.is_finite());
                if dense_ok {
                    SolvePath::Dense
                } else {
                    SolvePath::Dual
                }
            }
            p => p,
        }
    }
}

/// Solves the regularized interpolation problem on `grid`.
pub fn solve_general(grid: &FrequencyGrid, samples: &SampleSet, config: &SolveConfig) -> Result<Spectrum> {
    let weights = config.weights_for(grid)?;
    let path = config.resolve_path(grid, samples, &weights);
    if path == SolvePath::Dense && grid.len() > DENSE_GRID_LIMIT {
        return Err(Error::DenseGuard {
            size: grid.len(),
            limit: DENSE_GRID_LIMIT,
        });
    }
    let matrix = assemble_constraint_matrix(grid, samples)?;
    let coeffs = match path {
        SolvePath::Dense => dense_coefficients(&matrix, samples.labels(), &weights, config.lambda)?,
        _ => dual_coefficients(&matrix, samples.labels(), &weights, config.lambda)?,
    };
    finish(grid, coeffs, &weights)
}

pub(crate) fn finish(grid: &FrequencyGrid, coeffs: Vec<Complex64>, weights: &[f64]) -> Result<Spectrum> {
    let even = (0..grid.len()).all(|flat| weights[flat] == weights[grid.mirror(flat)]);
    if even {
        Spectrum::new_hermitian(*grid, coeffs)
    } else {
        Spectrum::new(*grid, coeffs)
    }
}

fn real_to_complex(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// `W⁻¹Aᴴ (AW⁻¹Aᴴ + λI)⁻¹ Y`.
pub(crate) fn dual_coefficients(
    matrix: &ConstraintMatrix,
    labels: &[f64],
    weights: &[f64],
    lambda: f64,
) -> Result<Vec<Complex64>> {
    let inverse: Vec<f64> = weights
        .iter()
        .map(|&w| if w.is_infinite() { 0.0 } else { 1.0 / w })
        .collect();
    let mut system = matrix.weighted_gram(&inverse);
    let n = system.nrows();
    for k in 0..n {
        system[(k, k)] += lambda;
    }
    let scale = (0..n).map(|k| system[(k, k)].re).fold(0.0, f64::max);
    let cholesky = nalgebra::linalg::Cholesky::new(system.clone()).ok_or_else(|| Error::Singular {
        factorization: "Cholesky (n×n dual system)",
        reason: "matrix is not positive definite; duplicate points or rank-deficient constraints".into(),
    })?;
    let l = cholesky.l_dirty();
    let min_pivot = (0..n).map(|k| l[(k, k)].re.powi(2)).fold(f64::INFINITY, f64::min);
    if !(min_pivot > DUAL_PIVOT_RATIO * scale) {
        return Err(Error::Singular {
            factorization: "Cholesky (n×n dual system)",
            reason: format!("pivot {min_pivot:e} negligible against diagonal scale {scale:e}"),
        });
    }
    let rhs = DVector::from_vec(real_to_complex(labels));
    let c = cholesky.solve(&rhs);
    let back = matrix.adjoint_apply(c.as_slice());
    Ok(back
        .into_iter()
        .zip(&inverse)
        .map(|(v, &winv)| v * winv)
        .collect())
}

/// `(AᴴA + λW)⁻¹ AᴴY`.
pub(crate) fn dense_coefficients(
    matrix: &ConstraintMatrix,
    labels: &[f64],
    weights: &[f64],
    lambda: f64,
) -> Result<Vec<Complex64>> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(
            "dense normal equations need lambda > 0; use the dual path for exact constraints".into(),
        ));
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidParameter("dense path needs finite weights".into()));
    }
    let a = matrix.to_dmatrix();
    let adjoint = a.adjoint();
    let mut normal = &adjoint * &a;
    for (k, &w) in weights.iter().enumerate() {
        normal[(k, k)] += lambda * w;
    }
    let rhs = &adjoint * DVector::from_vec(real_to_complex(labels));
    let cholesky = nalgebra::linalg::Cholesky::new(normal).ok_or_else(|| Error::Singular {
        factorization: "Cholesky (G×G normal equations)",
        reason: "matrix is not positive definite".into(),
    })?;
    Ok(cholesky.solve(&rhs).as_slice().to_vec())
}

/// Total Tikhonov objective `‖Aφ − Y‖² + λ Σ w_J|φ_J|²` of a spectrum.
pub fn tikhonov_objective(spectrum: &Spectrum, samples: &SampleSet, config: &SolveConfig) -> Result<f64> {
    let weights = config.weights_for(spectrum.grid())?;
    let misfit = data_misfit(spectrum, samples)?;
    Ok(misfit * misfit + config.lambda * crate::grid::weighted_quadratic_form(spectrum, &weights))
}

/// `‖Aφ − Y‖₂` with the complex field values.
pub fn data_misfit(spectrum: &Spectrum, samples: &SampleSet) -> Result<f64> {
    let mut total = 0.0;
    for (x, &y) in samples.points().iter().zip(samples.labels()) {
        total += (spectrum.evaluate_complex(x)? - y).norm_sqr();
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples_1d(points: &[f64], labels: &[f64]) -> SampleSet {
        SampleSet::new(points.iter().map(|&p| vec![p]).collect(), labels.to_vec()).unwrap()
    }

    #[test]
    fn constraint_row_at_origin_is_ones() {
        let grid = FrequencyGrid::new(2, 3, 0.4).unwrap();
        let s = SampleSet::new(vec![vec![0.0, 0.0]], vec![1.0]).unwrap();
        let a = assemble_constraint_matrix(&grid, &s).unwrap();
        assert!(a.row(0).iter().all(|z| *z == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn constraint_row_half_period() {
        let grid = FrequencyGrid::new(1, 1, 1.0).unwrap();
        let a = assemble_constraint_matrix(&grid, &samples_1d(&[0.5], &[1.0])).unwrap();
        let expect = [-1.0, 1.0, -1.0];
        for (z, e) in a.row(0).iter().zip(expect) {
            assert!((z - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn constraint_entries_unit_modulus() {
        let grid = FrequencyGrid::new(2, 6, 0.37).unwrap();
        let s = SampleSet::new(vec![vec![0.3, -2.1], vec![5.5, 0.01]], vec![1.0, 2.0]).unwrap();
        let a = assemble_constraint_matrix(&grid, &s).unwrap();
        for k in 0..2 {
            assert!(a.row(k).iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let grid = FrequencyGrid::new(2, 1, 1.0).unwrap();
        assert!(matches!(
            assemble_constraint_matrix(&grid, &samples_1d(&[0.0], &[1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_point_exact_constraint() {
        let grid = FrequencyGrid::new(1, 1, 1.0).unwrap();
        let cfg = SolveConfig::new(0.0, 0.0).unwrap();
        let s = solve_general(&grid, &samples_1d(&[0.0], &[2.0]), &cfg).unwrap();
        for z in s.coeffs() {
            assert!((z - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-15);
        }
        assert!((s.evaluate(&[0.0]).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn single_point_regularized() {
        let grid = FrequencyGrid::new(1, 1, 1.0).unwrap();
        let cfg = SolveConfig::new(0.0, 3.0).unwrap();
        let s = solve_general(&grid, &samples_1d(&[0.0], &[2.0]), &cfg).unwrap();
        for z in s.coeffs() {
            assert!((z - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        }
        assert!((s.evaluate(&[0.0]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dense_agrees_with_dual() {
        let grid = FrequencyGrid::new(1, 8, 0.3).unwrap();
        let samples = samples_1d(&[-0.71, 0.12, 0.93], &[0.4, -1.1, 0.8]);
        let cfg = SolveConfig::new(4.0, 0.5).unwrap();
        let dual = solve_general(&grid, &samples, &cfg).unwrap();
        let dense = solve_general(&grid, &samples, &cfg.clone().with_path(SolvePath::Dense)).unwrap();
        let diff = dual
            .coeffs()
            .iter()
            .zip(dense.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10, "diff {diff}");
    }

    #[test]
    fn dense_guard_and_lambda_zero_refused() {
        let grid = FrequencyGrid::new(1, 2100, 0.1).unwrap();
        let cfg = SolveConfig::new(1.0, 0.5).unwrap().with_path(SolvePath::Dense);
        let err = solve_general(&grid, &samples_1d(&[0.0], &[1.0]), &cfg).unwrap_err();
        assert!(matches!(err, Error::DenseGuard { size: 4201, .. }));
        assert!(err.to_string().contains("dual"));

        let small = FrequencyGrid::new(1, 2, 0.1).unwrap();
        let cfg = SolveConfig::new(1.0, 0.0).unwrap().with_path(SolvePath::Dense);
        assert!(solve_general(&small, &samples_1d(&[0.0], &[1.0]), &cfg).is_err());
    }

    #[test]
    fn aliased_points_make_dual_singular() {
        // x and x + 1/Δξ produce identical constraint rows.
        let grid = FrequencyGrid::new(1, 4, 0.5).unwrap();
        let cfg = SolveConfig::new(2.0, 0.0).unwrap();
        let err = solve_general(&grid, &samples_1d(&[0.1, 2.1], &[1.0, 2.0]), &cfg).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }), "{err}");
        assert!(err.to_string().contains("dual"));
    }

    #[test]
    fn auto_path_picks_dense_for_tiny_grids() {
        let grid = FrequencyGrid::new(1, 1, 0.5).unwrap();
        let samples = samples_1d(&[-0.3, 0.0, 0.4, 0.9], &[1.0, 0.5, -0.2, 0.3]);
        let cfg = SolveConfig::new(2.0, 0.1).unwrap().with_path(SolvePath::Auto);
        let s = solve_general(&grid, &samples, &cfg).unwrap();
        let dense = solve_general(&grid, &samples, &cfg.clone().with_path(SolvePath::Dense)).unwrap();
        assert_eq!(s, dense);
    }

    #[test]
    fn negative_lambda_rejected() {
        assert!(SolveConfig::new(1.0, -1e-3).is_err());
    }

    #[test]
    fn infinite_weight_pins_coefficient() {
        let grid = FrequencyGrid::new(1, 3, 0.5).unwrap();
        let mut w = grid.japanese_weights(2.0);
        w[3] = f64::INFINITY;
        let cfg = SolveConfig::new(2.0, 0.0).unwrap().with_custom_weights(w);
        let s = solve_general(&grid, &samples_1d(&[0.2, -0.4], &[1.0, 0.5]), &cfg).unwrap();
        assert_eq!(s.coeffs()[3], Complex64::new(0.0, 0.0));
        assert!((s.evaluate(&[0.2]).unwrap() - 1.0).abs() < 1e-12);
    }
}
