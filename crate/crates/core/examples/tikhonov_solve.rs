//! Regularized interpolation of three 1-D samples along the dual, dense
//! and SVD routes.

use specbound::diagnostics::constraint_residual;
use specbound::solver::tikhonov_objective;
use specbound::{solve_general, solve_via_svd, FrequencyGrid, SampleSet, SolveConfig, SolvePath};

fn main() -> specbound::Result<()> {
    let samples = SampleSet::new(vec![vec![-0.6], vec![0.1], vec![0.7]], vec![0.4, -0.2, 0.9])?;
    let grid = FrequencyGrid::new(1, 8, 0.5)?;
    let config = SolveConfig::new(4.0, 0.5)?;

    let dual = solve_general(&grid, &samples, &config)?;
    let dense = solve_general(&grid, &samples, &config.clone().with_path(SolvePath::Dense))?;
    let svd = solve_via_svd(&grid, &samples, &config)?;

    let gap = |a: &specbound::Spectrum, b: &specbound::Spectrum| {
        a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    };
    println!("dual vs dense: {:e}", gap(&dual, &dense));
    println!("dual vs svd:   {:e}", gap(&dual, &svd));
    println!("objective:     {}", tikhonov_objective(&dual, &samples, &config)?);

    for lambda in [1.0, 1e-2, 1e-4, 0.0] {
        let s = solve_general(&grid, &samples, &SolveConfig::new(4.0, lambda)?)?;
        println!("lambda={lambda:<6} max residual {:e}", constraint_residual(&s, &samples)?.max_abs);
    }
    Ok(())
}
