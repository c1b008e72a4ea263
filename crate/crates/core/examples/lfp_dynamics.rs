//! Linear frequency-principle flow from h = 0: low frequencies are learned
//! first and the limit is the γ⁻²-weighted minimum-norm interpolant.

use specbound::lfp::weighted_minimum_norm;
use specbound::{lfp_equivalence_check, lfp_evolve, EvolveOptions, FrequencyGrid, LfpKernel, LfpState, SampleSet, ZeroModePolicy};

fn main() -> specbound::Result<()> {
    let grid = FrequencyGrid::new(1, 64, 0.1)?;
    let kernel = LfpKernel::relu(grid, 1.0, 1.0, ZeroModePolicy::Cap)?;
    let samples = SampleSet::new(vec![vec![-0.5], vec![0.5]], vec![0.9, 0.9])?;
    let dt = 0.9 * kernel.max_stable_dt();

    let run = lfp_evolve(LfpState::zero(grid, &samples), &kernel, &samples, &EvolveOptions::fixed(dt, 40))?;
    for c in run.checkpoints.iter().step_by(8) {
        println!("t={:.4} max|u|={:.3e} energy={:.3e}", c.time, c.max_residual, c.energy);
    }
    println!("energy non-increasing: {}", run.energy_non_increasing());

    let report = lfp_equivalence_check(&samples, &kernel, dt, 1e-6, 100_000)?;
    println!(
        "steady state vs minimum norm: {:e} after {} steps ({})",
        report.max_coefficient_difference,
        report.steps,
        if report.passed { "pass" } else { "fail" }
    );

    let reference = weighted_minimum_norm(&kernel, &samples)?;
    let centre = grid.len() / 2;
    for j in 0..4 {
        println!("phi_{j} = {:.6}", reference.coeffs()[centre + j].re);
    }
    Ok(())
}
