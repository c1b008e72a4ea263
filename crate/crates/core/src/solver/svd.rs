use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{assemble_constraint_matrix, finish, SolveConfig};
use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, Spectrum};
use crate::samples::SampleSet;

/// Unit-penalty ridge solution `(ÃᴴÃ + I)⁻¹Ãᴴb` through the SVD `Ã = UΣVᴴ`:
/// `φ̃ = V D Uᴴ b` with `D_ii = σ_i / (σ_i² + 1)`.
pub fn ridge_svd_solve(a_tilde: &DMatrix<Complex64>, b: &[f64]) -> Result<Vec<Complex64>> {
    if a_tilde.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a_tilde.nrows(),
            got: b.len(),
        });
    }
    if a_tilde.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidParameter("matrix entries must be finite".into()));
    }
    let svd = a_tilde.clone().svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u.as_ref(), svd.v_t.as_ref()) else {
        return Err(Error::Singular {
            factorization: "SVD",
            reason: "singular vectors unavailable".into(),
        });
    };
    let rhs = DVector::from_iterator(b.len(), b.iter().map(|&v| Complex64::new(v, 0.0)));
    let mut projected = u.adjoint() * rhs;
    for (p, &s) in projected.iter_mut().zip(svd.singular_values.iter()) {
        *p *= s / (s * s + 1.0);
    }
    Ok((v_t.adjoint() * projected).as_slice().to_vec())
}

/// Solves the regularized problem by rescaling to a unit-penalty ridge
/// problem: with `ψ = √λ W^{1/2} φ` and `Ã = A W^{-1/2} / √λ` the objective
/// becomes `‖Ãψ − Y‖² + ‖ψ‖²`. Needs `λ > 0` and finite weights.
pub fn solve_via_svd(grid: &FrequencyGrid, samples: &SampleSet, config: &SolveConfig) -> Result<Spectrum> {
    if !(config.lambda > 0.0) {
        return Err(Error::InvalidParameter("the SVD route needs lambda > 0".into()));
    }
    let weights = config.weights_for(grid)?;
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidParameter("the SVD route needs finite weights".into()));
    }
    let matrix = assemble_constraint_matrix(grid, samples)?;
    let root_lambda = config.lambda.sqrt();
    let mut a_tilde = matrix.to_dmatrix();
    for (flat, &w) in weights.iter().enumerate() {
        let scale = 1.0 / (w.sqrt() * root_lambda);
        a_tilde.column_mut(flat).scale_mut(scale);
    }
    let psi = ridge_svd_solve(&a_tilde, samples.labels())?;
    let coeffs = psi
        .into_iter()
        .zip(&weights)
        .map(|(p, &w)| p / (w.sqrt() * root_lambda))
        .collect();
    finish(grid, coeffs, &weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_case() {
        let a = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let x = ridge_svd_solve(&a, &[1.0]).unwrap();
        assert!((x[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_rhs() {
        let a = DMatrix::from_fn(2, 4, |i, j| Complex64::new(i as f64 + 0.5, j as f64 - 1.0));
        let x = ridge_svd_solve(&a, &[0.0, 0.0]).unwrap();
        assert!(x.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn wrong_rhs_length() {
        let a = DMatrix::from_element(2, 3, Complex64::new(1.0, 0.0));
        assert!(ridge_svd_solve(&a, &[1.0]).is_err());
    }
}
