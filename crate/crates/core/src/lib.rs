//! Sobolev-regularized interpolation on band-limited frequency grids.
//!
//! The crate solves `min ‖Aφ − Y‖² + λ Σ ⟨ξ_J⟩^α |φ_J|²` over spectra on a
//! uniform frequency grid, detects when the resulting interpolant collapses
//! into isolated spikes, studies the Gaussian Sobolev norm near the critical
//! exponent `α = d`, and simulates linear frequency-principle dynamics whose
//! fixed point is a weighted minimum-norm interpolant.

pub mod cli;
pub mod critical;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod io;
pub mod lfp;
pub mod samples;
pub mod solver;
pub mod svg;

pub use critical::{
    critical_constant, gaussian_radial_moment, gaussian_sobolev_norm, limit_sweep, rbf_norm_decay_study,
    sphere_surface_area, LimitClassification, NormVariant, Verdict,
};
pub use diagnostics::{
    constraint_residual, convergence_in_bandlimit, diagnose, spike_width, sweep_alpha, triviality_index, Classification,
    DiagnosticsReport, EvalWindow, TrivialityConfig,
};
pub use error::{Error, Result};
pub use grid::{sobolev_quadratic_form, FrequencyGrid, MultiIndex, Spectrum};
pub use lfp::{lfp_equivalence_check, lfp_evolve, relu_gamma_sq, weighted_minimum_norm, EvolveOptions, LfpKernel, LfpState,
    ZeroModePolicy,};
pub use samples::SampleSet;
pub use solver::{
    gaussian_rbf_interpolant, solve_general, solve_single_point_analytic, solve_via_svd, SolveConfig, SolvePath,
};
