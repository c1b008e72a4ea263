//! Gaussian RBF interpolants through two points: their H^{α/2} norm
//! vanishes with σ when α < d.

use specbound::critical::log_log_slope;
use specbound::{rbf_norm_decay_study, FrequencyGrid, SampleSet};

fn main() -> specbound::Result<()> {
    let samples = SampleSet::new(vec![vec![-0.5], vec![0.5]], vec![1.0, 1.0])?;
    let sigmas = [0.1, 0.05, 0.025, 0.0125];
    let grid = FrequencyGrid::new(1, 8000, 0.01)?;
    for alpha in [0.5, 2.0] {
        let rows = rbf_norm_decay_study(&samples, alpha, &sigmas, &grid)?;
        for r in &rows {
            println!("alpha={alpha} sigma={:<7} grid={:.8} quadrature={:.8}", r.sigma, r.q_grid, r.q_quadrature.unwrap());
        }
        let tail: Vec<_> = rows[1..].iter().map(|r| (r.sigma, r.q_grid)).collect();
        println!("  tail slope {:.3}", log_log_slope(&tail));
    }
    Ok(())
}
