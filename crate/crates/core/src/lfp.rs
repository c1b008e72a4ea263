//! Linear frequency-principle dynamics on the frequency grid.
//!
//! Each Fourier mode of the network output relaxes towards the data at its
//! own rate `γ²(ξ)`:
//!
//! ```text
//! dφ_J/dt = −γ²_J · (1/n) Σ_i u(x_i) e^{−2πiΔξ J·x_i},   u = h − y
//! ```
//!
//! Starting from `h = 0`, the long-time limit is the interpolant minimising
//! `Σ_J γ_J^{−2} |φ_J|²`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, Spectrum};
use crate::samples::SampleSet;
use crate::solver::{assemble_constraint_matrix, solve_general, ConstraintMatrix, SolveConfig};

/// Rate of a ReLU network at frequency `‖ξ‖ > 0` in dimension `dim`:
/// `m₃/(16π⁴‖ξ‖^{d+3}) + m_{a²r}/(4π²‖ξ‖^{d+1})`.
pub fn relu_gamma_sq(xi_norm: f64, dim: usize, moment_r3: f64, moment_a2r: f64) -> Result<f64> {
    if !(xi_norm.is_finite() && xi_norm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma^2 is singular at |xi| = {xi_norm}; use a zero-mode policy"
        )));
    }
    let d = dim as i32;
    Ok(moment_r3 / (16.0 * PI.powi(4) * xi_norm.powi(d + 3))
        + moment_a2r / (4.0 * PI * PI * xi_norm.powi(d + 1)))
}

/// Treatment of the divergent rate at `ξ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroModePolicy {
    /// Use the rate at the nearest nonzero frequency, `‖ξ‖ = Δξ`.
    #[default]
    Cap,
    /// Freeze the zero mode at its initial value.
    Exclude,
}

impl std::str::FromStr for ZeroModePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cap" => Ok(ZeroModePolicy::Cap),
            "exclude" => Ok(ZeroModePolicy::Exclude),
            other => Err(Error::InvalidParameter(format!(
                "unknown zero-mode policy '{other}' (expected cap or exclude)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LfpKernel {
    grid: FrequencyGrid,
    gamma_sq: Vec<f64>,
    moment_r3: f64,
    moment_a2r: f64,
    policy: ZeroModePolicy,
}

impl LfpKernel {
    pub fn relu(grid: FrequencyGrid, moment_r3: f64, moment_a2r: f64, policy: ZeroModePolicy) -> Result<Self> {
        if !(moment_r3.is_finite() && moment_a2r.is_finite()) || moment_r3 < 0.0 || moment_a2r < 0.0 {
            return Err(Error::InvalidParameter("moments must be finite and non-negative".into()));
        }
        if moment_r3 == 0.0 && moment_a2r == 0.0 {
            return Err(Error::InvalidParameter("both moments vanish; the kernel is identically zero".into()));
        }
        let capped = relu_gamma_sq(grid.mesh(), grid.dim(), moment_r3, moment_a2r)?;
        let gamma_sq = grid
            .frequency_norms()
            .into_iter()
            .map(|r| {
                if r > 0.0 {
                    relu_gamma_sq(r, grid.dim(), moment_r3, moment_a2r)
                } else {
                    Ok(match policy {
                        ZeroModePolicy::Cap => capped,
                        ZeroModePolicy::Exclude => 0.0,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            gamma_sq,
            moment_r3,
            moment_a2r,
            policy,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Rates in grid storage order; zero on excluded modes.
    pub fn gamma_sq(&self) -> &[f64] {
        &self.gamma_sq
    }

    pub fn moment_r3(&self) -> f64 {
        self.moment_r3
    }

    pub fn moment_a2r(&self) -> f64 {
        self.moment_a2r
    }

    pub fn policy(&self) -> ZeroModePolicy {
        self.policy
    }

    pub fn total_rate(&self) -> f64 {
        self.gamma_sq.iter().sum()
    }

    /// Largest step for which the explicit Euler residual energy cannot grow.
    ///
    /// The residual map is `u ↦ (I − dt·K)u` with `K = (1/n)AΓAᴴ`, and
    /// `‖K‖ ≤ tr K = Σ_J γ²_J`.
    pub fn max_stable_dt(&self) -> f64 {
        1.0 / self.total_rate()
    }

    /// Weights `γ⁻²` for the equivalent minimum-norm problem; excluded modes
    /// get an infinite weight.
    pub fn solver_weights(&self) -> Vec<f64> {
        self.gamma_sq
            .iter()
            .map(|&g| if g > 0.0 { 1.0 / g } else { f64::INFINITY })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LfpState {
    pub spectrum: Spectrum,
    pub time: f64,
    /// `h(x_i) − y_i`.
    pub residuals: Vec<f64>,
}

impl LfpState {
    /// `h = 0` at `t = 0`.
    pub fn zero(grid: FrequencyGrid, samples: &SampleSet) -> Self {
        Self {
            spectrum: Spectrum::zeros(grid),
            time: 0.0,
            residuals: samples.labels().iter().map(|y| -y).collect(),
        }
    }

    pub fn from_spectrum(spectrum: Spectrum, samples: &SampleSet) -> Result<Self> {
        if !spectrum.is_hermitian() {
            return Err(Error::InvalidParameter("initial spectrum must be hermitian".into()));
        }
        let field = spectrum.evaluate_many(samples.points())?;
        let residuals = field.values.iter().zip(samples.labels()).map(|(h, y)| h - y).collect();
        Ok(Self {
            spectrum,
            time: 0.0,
            residuals,
        })
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|u| u.abs()).fold(0.0, f64::max)
    }

    /// `(1/n) Σ u(x_i)²`.
    pub fn energy(&self) -> f64 {
        self.residuals.iter().map(|u| u * u).sum::<f64>() / self.residuals.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub step: usize,
    pub time: f64,
    pub max_residual: f64,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct LfpTrajectory {
    pub checkpoints: Vec<Checkpoint>,
    pub final_state: LfpState,
    /// Steps at which the energy rose above its previous value by more
    /// than rounding.
    pub energy_increases: usize,
    pub steps: usize,
}

impl LfpTrajectory {
    pub fn energy_non_increasing(&self) -> bool {
        self.energy_increases == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub dt: f64,
    pub max_steps: usize,
    /// Record a checkpoint every this many steps (and at the last step).
    pub checkpoint_every: usize,
    /// Stop once the max residual drops below this; zero runs all steps.
    pub residual_target: f64,
}

impl EvolveOptions {
    pub fn fixed(dt: f64, steps: usize) -> Self {
        Self {
            dt,
            max_steps: steps,
            checkpoint_every: (steps / 100).max(1),
            residual_target: 0.0,
        }
    }

    pub fn until(dt: f64, residual_target: f64, max_steps: usize) -> Self {
        Self {
            residual_target,
            ..Self::fixed(dt, max_steps)
        }
    }
}

/// Explicit Euler integration of the flow from `state`.
pub fn lfp_evolve(
    state: LfpState,
    kernel: &LfpKernel,
    samples: &SampleSet,
    options: &EvolveOptions,
) -> Result<LfpTrajectory> {
    let max_dt = kernel.max_stable_dt();
    if !(options.dt > 0.0 && options.dt < max_dt) {
        return Err(Error::UnstableStep { dt: options.dt, max_dt });
    }
    if state.spectrum.grid() != kernel.grid() {
        return Err(Error::InvalidParameter("state and kernel live on different grids".into()));
    }
    if !state.spectrum.is_hermitian() {
        return Err(Error::InvalidParameter("initial spectrum must be hermitian".into()));
    }
    if state.residuals.len() != samples.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            got: state.residuals.len(),
        });
    }
    let matrix = assemble_constraint_matrix(kernel.grid(), samples)?;
    let grid = *kernel.grid();
    let scale: Vec<f64> = kernel
        .gamma_sq()
        .iter()
        .map(|g| options.dt * g / samples.len() as f64)
        .collect();
    let every = options.checkpoint_every.max(1);
    // Residuals cannot resolve below rounding of the labels.
    let floor = (1e-14 * samples.max_abs_label()).powi(2);

    let mut coeffs = state.spectrum.into_coeffs();
    let mut residuals = residuals_of(&matrix, &coeffs, samples.labels());
    let mut time = state.time;
    let mut energy = mean_square(&residuals);
    let mut checkpoints = vec![Checkpoint {
        step: 0,
        time,
        max_residual: max_abs(&residuals),
        energy,
    }];
    let mut increases = 0;
    let mut step = 0;
    while step < options.max_steps && max_abs(&residuals) >= options.residual_target {
        let drive = matrix.adjoint_apply(&real_to_complex(&residuals));
        for ((c, d), s) in coeffs.iter_mut().zip(&drive).zip(&scale) {
            *c -= d * *s;
        }
        step += 1;
        time = state.time + step as f64 * options.dt;
        residuals = residuals_of(&matrix, &coeffs, samples.labels());
        let next = mean_square(&residuals);
        if next > energy * (1.0 + 1e-12) + floor {
            increases += 1;
        }
        energy = next;
        if step % every == 0 {
            checkpoints.push(Checkpoint {
                step,
                time,
                max_residual: max_abs(&residuals),
                energy,
            });
        }
    }
    if checkpoints.last().map(|c| c.step) != Some(step) {
        checkpoints.push(Checkpoint {
            step,
            time,
            max_residual: max_abs(&residuals),
            energy,
        });
    }
    Ok(LfpTrajectory {
        checkpoints,
        final_state: LfpState {
            spectrum: Spectrum::new_hermitian(grid, coeffs)?,
            time,
            residuals,
        },
        energy_increases: increases,
        steps: step,
    })
}

fn residuals_of(matrix: &ConstraintMatrix, coeffs: &[Complex64], labels: &[f64]) -> Vec<f64> {
    matrix
        .apply(coeffs)
        .iter()
        .zip(labels)
        .map(|(h, y)| h.re - y)
        .collect()
}

fn real_to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn mean_square(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Minimiser of `Σ γ_J^{−2} |φ_J|²` subject to exact interpolation.
pub fn weighted_minimum_norm(kernel: &LfpKernel, samples: &SampleSet) -> Result<Spectrum> {
    let config = SolveConfig::new(0.0, 0.0)?.with_custom_weights(kernel.solver_weights());
    solve_general(kernel.grid(), samples, &config)
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub max_coefficient_difference: f64,
    pub tol: f64,
    pub passed: bool,
    pub steps: usize,
    pub max_residual: f64,
    pub energy_non_increasing: bool,
    pub simulated: Spectrum,
    pub minimum_norm: Spectrum,
}

/// Runs the flow from `h = 0` until the residual is below `tol/10` and
/// compares the result with [`weighted_minimum_norm`].
pub fn lfp_equivalence_check(
    samples: &SampleSet,
    kernel: &LfpKernel,
    dt: f64,
    tol: f64,
    max_steps: usize,
) -> Result<EquivalenceReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let target = tol / 10.0;
    let start = LfpState::zero(*kernel.grid(), samples);
    let run = lfp_evolve(start, kernel, samples, &EvolveOptions::until(dt, target, max_steps))?;
    let residual = run.final_state.max_residual();
    if residual >= target {
        return Err(Error::NotConverged {
            residual,
            target,
            steps: run.steps,
        });
    }
    let minimum_norm = weighted_minimum_norm(kernel, samples)?;
    let diff = run
        .final_state
        .spectrum
        .coeffs()
        .iter()
        .zip(minimum_norm.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(EquivalenceReport {
        max_coefficient_difference: diff,
        tol,
        passed: diff < tol,
        steps: run.steps,
        max_residual: residual,
        energy_non_increasing: run.energy_non_increasing(),
        simulated: run.final_state.spectrum,
        minimum_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_frequency_rate() {
        let g = relu_gamma_sq(1.0, 1, 1.0, 1.0).unwrap();
        let exact = 1.0 / (16.0 * PI.powi(4)) + 1.0 / (4.0 * PI * PI);
        assert!((g - exact).abs() < 1e-15);
        assert!((g - 0.025972).abs() < 1e-6);
        let ratio = relu_gamma_sq(1.0, 1, 1.0, 0.0).unwrap() / relu_gamma_sq(2.0, 1, 1.0, 0.0).unwrap();
        assert!((ratio - 16.0).abs() < 1e-12);
        assert!(relu_gamma_sq(0.0, 1, 1.0, 1.0).is_err());
    }

    #[test]
    fn kernel_rejects_degenerate_moments() {
        let grid = FrequencyGrid::new(1, 4, 0.1).unwrap();
        assert!(LfpKernel::relu(grid, 0.0, 0.0, ZeroModePolicy::Cap).is_err());
        assert!(LfpKernel::relu(grid, -1.0, 1.0, ZeroModePolicy::Cap).is_err());
    }

    #[test]
    fn zero_mode_policies() {
        let grid = FrequencyGrid::new(1, 4, 0.1).unwrap();
        let cap = LfpKernel::relu(grid, 1.0, 1.0, ZeroModePolicy::Cap).unwrap();
        assert_eq!(cap.gamma_sq()[4], cap.gamma_sq()[5]);
        let ex = LfpKernel::relu(grid, 1.0, 1.0, ZeroModePolicy::Exclude).unwrap();
        assert_eq!(ex.gamma_sq()[4], 0.0);
        assert!(ex.solver_weights()[4].is_infinite());
        for j in 5..8 {
            assert!(cap.gamma_sq()[j] > cap.gamma_sq()[j + 1]);
        }
    }

    #[test]
    fn zero_data_is_a_fixed_point() {
        let grid = FrequencyGrid::new(1, 8, 0.1).unwrap();
        let samples = SampleSet::new(vec![vec![0.2], vec![-0.7]], vec![0.0, 0.0]).unwrap();
        let kernel = LfpKernel::relu(grid, 1.0, 1.0, ZeroModePolicy::Cap).unwrap();
        let dt = 0.5 * kernel.max_stable_dt();
        let run = lfp_evolve(LfpState::zero(grid, &samples), &kernel, &samples, &EvolveOptions::fixed(dt, 50)).unwrap();
        assert!(run.final_state.spectrum.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn unstable_step_reports_bound() {
        let grid = FrequencyGrid::new(1, 8, 0.1).unwrap();
        let samples = SampleSet::new(vec![vec![0.0]], vec![1.0]).unwrap();
        let kernel = LfpKernel::relu(grid, 1.0, 1.0, ZeroModePolicy::Cap).unwrap();
        let dt = 2.0 * kernel.max_stable_dt();
        match lfp_evolve(LfpState::zero(grid, &samples), &kernel, &samples, &EvolveOptions::fixed(dt, 1)) {
            Err(Error::UnstableStep { max_dt, .. }) => assert!((max_dt - kernel.max_stable_dt()).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_point_scalar_driver() {
        let grid = FrequencyGrid::new(1, 16, 0.1).unwrap();
        let samples = SampleSet::new(vec![vec![0.0]], vec![0.8]).unwrap();
        let kernel = LfpKernel::relu(grid, 1.0, 1.0, ZeroModePolicy::Cap).unwrap();
        let total = kernel.total_rate();
        let dt = 0.5 / total;
        let steps = 37;
        let run = lfp_evolve(LfpState::zero(grid, &samples), &kernel, &samples, &EvolveOptions::fixed(dt, steps)).unwrap();
        let s = 0.8 / total * (1.0 - (1.0 - dt * total).powi(steps as i32));
        for (c, g) in run.final_state.spectrum.coeffs().iter().zip(kernel.gamma_sq()) {
            assert!((c.re - g * s).abs() < 1e-14 && c.im.abs() < 1e-14);
        }
        assert!(run.energy_non_increasing());
    }

    #[test]
    fn converges_to_minimum_norm() {
        let grid = FrequencyGrid::new(1, 16, 0.1).unwrap();
        let samples = SampleSet::new(vec![vec![-0.5], vec![0.5]], vec![0.9, 0.9]).unwrap();
        let kernel = LfpKernel::relu(grid, 1.0, 1.0, ZeroModePolicy::Cap).unwrap();
        let report = lfp_equivalence_check(&samples, &kernel, 0.9 * kernel.max_stable_dt(), 1e-8, 1_000_000).unwrap();
        assert!(report.passed, "{}", report.max_coefficient_difference);
        assert!(report.energy_non_increasing);
    }
}
