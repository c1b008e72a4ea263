//! Band-limited frequency lattices and spectra living on them.
//!
//! A [`FrequencyGrid`] covers the frequencies `J·Δξ` for every integer
//! multi-index `J ∈ {−M..M}^d`, zero included, so it holds `(2M+1)^d`
//! points. Coefficients are stored in lexicographic order of `J` with the
//! first component varying slowest; the flat position of `−J` is then the
//! mirror `G − 1 − flat(J)`.
//!
//! Spectra carry measure-absorbed coefficients: the field they represent is
//!
//! ```text
//! h(x) = Σ_J φ_J · exp(2πi Δξ J·x)
//! ```
//!
//! with no extra `Δξ^d` factor. The phase always includes `Δξ`, so `x` is a
//! physical coordinate and the field is periodic with period `1/Δξ`.

use std::borrow::Cow;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Absolute tolerance on the imaginary part of a real field value, scaled
/// by `max(1, Σ|φ_J|)`.
pub const FIELD_IMAG_TOL: f64 = 1e-10;

/// Tolerance on `|φ_{−J} − conj(φ_J)|` for a spectrum flagged hermitian,
/// scaled by `max(1, max|φ_J|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    dim: usize,
    band_limit: usize,
    mesh: f64,
}

impl FrequencyGrid {
    pub fn new(dim: usize, band_limit: usize, mesh: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("grid dimension must be at least 1".into()));
        }
        if band_limit == 0 {
            return Err(Error::InvalidParameter("band limit M must be at least 1".into()));
        }
        if !(mesh.is_finite() && mesh > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "frequency mesh must be positive and finite, got {mesh}"
            )));
        }
        let side = 2 * band_limit + 1;
        let fits = (0..dim).try_fold(1usize, |acc, _| acc.checked_mul(side)).is_some();
        if !fits {
            return Err(Error::InvalidParameter(format!(
                "grid with {side}^{dim} frequencies does not fit in memory"
            )));
        }
        Ok(Self {
            dim,
            band_limit,
            mesh,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Number of indices per axis, `2M + 1`.
    pub fn side(&self) -> usize {
        2 * self.band_limit + 1
    }

    /// Total number of grid frequencies, `(2M+1)^d`.
    pub fn len(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest represented frequency per axis, `M·Δξ`.
    pub fn band(&self) -> f64 {
        self.band_limit as f64 * self.mesh
    }

    /// Spatial period of every field on this grid.
    pub fn period(&self) -> f64 {
        1.0 / self.mesh
    }

    pub fn index_at(&self, flat: usize) -> MultiIndex {
        debug_assert!(flat < self.len());
        let side = self.side();
        let m = self.band_limit as i64;
        let mut components = vec![0i64; self.dim];
        let mut rest = flat;
        for slot in components.iter_mut().rev() {
            *slot = (rest % side) as i64 - m;
            rest /= side;
        }
        MultiIndex(components)
    }

    pub fn flat_index(&self, index: &MultiIndex) -> Option<usize> {
        if index.dim() != self.dim {
            return None;
        }
        let m = self.band_limit as i64;
        let side = self.side();
        index.0.iter().try_fold(0usize, |acc, &j| {
            (-m..=m)
                .contains(&j)
                .then(|| acc * side + (j + m) as usize)
        })
    }

    /// Flat position of `−J` given the flat position of `J`.
    pub fn mirror(&self, flat: usize) -> usize {
        self.len() - 1 - flat
    }

    /// `‖J‖²` (integer index norm) for every flat position.
    pub fn squared_index_norms(&self) -> Vec<f64> {
        let side = self.side();
        let m = self.band_limit as i64;
        let axis: Vec<f64> = (-m..=m).map(|j| (j * j) as f64).collect();
        let mut out = vec![0.0];
        for _ in 0..self.dim {
            out = out
                .iter()
                .flat_map(|&acc| axis.iter().map(move |&s| acc + s))
                .collect();
        }
        debug_assert_eq!(out.len(), side.pow(self.dim as u32));
        out
    }

    /// `‖J Δξ‖` for every flat position.
    pub fn frequency_norms(&self) -> Vec<f64> {
        self.squared_index_norms()
            .into_iter()
            .map(|n2| n2.sqrt() * self.mesh)
            .collect()
    }

    /// Japanese-bracket weights `(1 + ‖J‖²Δξ²)^{α/2}` in storage order.
    pub fn japanese_weights(&self, alpha: f64) -> Vec<f64> {
        let mesh_sq = self.mesh * self.mesh;
        self.squared_index_norms()
            .into_iter()
            .map(|n2| bracket_power(n2 * mesh_sq, alpha))
            .collect()
    }

    /// `exp(2πi Δξ j c)` for `j = −M..M`.
    pub fn axis_phases(&self, coordinate: f64) -> Vec<Complex64> {
        let m = self.band_limit as i64;
        let scale = TAU * self.mesh;
        (-m..=m)
            .map(|j| Complex64::from_polar(1.0, scale * j as f64 * coordinate))
            .collect()
    }

    /// The plane-wave row `exp(2πi Δξ J·x)` over all `J`, in storage order.
    pub fn plane_wave(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        self.check_point(x)?;
        let mut row = vec![Complex64::new(1.0, 0.0)];
        for &c in x {
            let table = self.axis_phases(c);
            row = row
                .iter()
                .flat_map(|&acc| table.iter().map(move |&t| acc * t))
                .collect();
        }
        Ok(row)
    }

    /// `Σ_J coeffs_J exp(2πi Δξ J·x)` by contracting one axis at a time.
    pub(crate) fn synthesize(&self, coeffs: &[Complex64], x: &[f64]) -> Complex64 {
        debug_assert_eq!(coeffs.len(), self.len());
        let side = self.side();
        let mut current: Cow<'_, [Complex64]> = Cow::Borrowed(coeffs);
        for &c in x.iter().rev() {
            let table = self.axis_phases(c);
            let next: Vec<Complex64> = current
                .chunks_exact(side)
                .map(|chunk| chunk.iter().zip(&table).map(|(a, t)| a * t).sum())
                .collect();
            current = Cow::Owned(next);
        }
        current[0]
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// `(1 + s)^{α/2}` with `s` a squared frequency norm.
pub(crate) fn bracket_power(norm_sq: f64, alpha: f64) -> f64 {
    (1.0 + norm_sq).powf(0.5 * alpha)
}

/// Integer multi-index `J = (j_1, …, j_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|j| j * j).sum()
    }

    pub fn negated(&self) -> Self {
        MultiIndex(self.0.iter().map(|j| -j).collect())
    }
}

/// Every index of the grid, lexicographically ordered.
pub fn enumerate_indices(grid: &FrequencyGrid) -> Vec<MultiIndex> {
    (0..grid.len()).map(|flat| grid.index_at(flat)).collect()
}

/// `(1 + ‖J‖²Δξ²)^{α/2}`.
pub fn japanese_bracket_weight(index: &MultiIndex, mesh: f64, alpha: f64) -> f64 {
    bracket_power(index.norm_sq() as f64 * mesh * mesh, alpha)
}

/// Coefficients `φ_J` on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: FrequencyGrid,
    coeffs: Vec<Complex64>,
    hermitian: bool,
}

/// Field values at a batch of points with the largest discarded imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldValues {
    pub values: Vec<f64>,
    pub max_imag: f64,
}

impl Spectrum {
    pub fn new(grid: FrequencyGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            grid,
            coeffs,
            hermitian: false,
        })
    }

    pub fn zeros(grid: FrequencyGrid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
            hermitian: true,
        }
    }

    /// Builds a spectrum flagged hermitian, verifying the symmetry.
    pub fn new_hermitian(grid: FrequencyGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        let mut spectrum = Self::new(grid, coeffs)?;
        let defect = spectrum.hermitian_defect();
        let tol = HERMITIAN_TOL * spectrum.max_abs().max(1.0);
        if defect > tol {
            return Err(Error::NonHermitian { imag: defect, tol });
        }
        spectrum.hermitian = true;
        Ok(spectrum)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, index: &MultiIndex) -> Option<Complex64> {
        self.grid.flat_index(index).map(|flat| self.coeffs[flat])
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max_J |φ_{−J} − conj(φ_J)|`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|flat| (self.coeffs[self.grid.mirror(flat)] - self.coeffs[flat].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn imag_tolerance(&self) -> f64 {
        let l1: f64 = self.coeffs.iter().map(|c| c.norm()).sum();
        FIELD_IMAG_TOL * l1.max(1.0)
    }

    /// `a·self + b·other` on the same grid. The result is flagged hermitian
    /// when both inputs are, since real scalars preserve the symmetry.
    pub fn combine(&self, a: f64, other: &Spectrum, b: f64) -> Result<Spectrum> {
        if self.grid != other.grid {
            return Err(Error::InvalidParameter("spectra live on different grids".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Ok(Spectrum {
            grid: self.grid,
            coeffs,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// Complex field value `Σ_J φ_J exp(2πiΔξ J·x)`.
    pub fn evaluate_complex(&self, x: &[f64]) -> Result<Complex64> {
        self.grid.check_point(x)?;
        Ok(self.grid.synthesize(&self.coeffs, x))
    }

    /// Real field value. Fails when the imaginary part is not negligible.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let z = self.evaluate_complex(x)?;
        let tol = self.imag_tolerance();
        if z.im.abs() > tol {
            return Err(Error::NonHermitian { imag: z.im.abs(), tol });
        }
        Ok(z.re)
    }

    /// Real field values at many points, evaluated in parallel.
    pub fn evaluate_many(&self, points: &[Vec<f64>]) -> Result<FieldValues> {
        for p in points {
            self.grid.check_point(p)?;
        }
        let raw: Vec<Complex64> = points
            .par_iter()
            .map(|p| self.grid.synthesize(&self.coeffs, p))
            .collect();
        let max_imag = raw.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let tol = self.imag_tolerance();
        if max_imag > tol {
            return Err(Error::NonHermitian { imag: max_imag, tol });
        }
        Ok(FieldValues {
            values: raw.into_iter().map(|z| z.re).collect(),
            max_imag,
        })
    }
}

/// Discrete `Q_α = Σ_J ⟨ξ_J⟩^α |φ_J|²`.
pub fn sobolev_quadratic_form(spectrum: &Spectrum, alpha: f64) -> f64 {
    let weights = spectrum.grid().japanese_weights(alpha);
    weighted_quadratic_form(spectrum, &weights)
}

/// `Σ_J w_J |φ_J|²`. Infinite weights on zero coefficients contribute zero.
pub fn weighted_quadratic_form(spectrum: &Spectrum, weights: &[f64]) -> f64 {
    spectrum
        .coeffs()
        .iter()
        .zip(weights)
        .map(|(c, &w)| {
            let m = c.norm_sqr();
            if m == 0.0 {
                0.0
            } else {
                w * m
            }
        })
        .sum()
}
