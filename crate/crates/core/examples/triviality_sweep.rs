//! Trivial versus nontrivial interpolants on either side of α = d.

use specbound::io::parse_samples;
use specbound::{sweep_alpha, EvalWindow, FrequencyGrid, TrivialityConfig};

fn main() -> specbound::Result<()> {
    let cases = [
        (include_str!("../data/points_1d.csv"), 1000, 0.5, [0.5, 1.5, 3.0, 10.0]),
        (include_str!("../data/points_2d.csv"), 100, 0.2, [1.0, 1.9, 4.0, 10.0]),
    ];
    for (text, m, lambda, alphas) in cases {
        let samples = parse_samples(text, "preset", None)?;
        let grid = FrequencyGrid::new(samples.dim(), m, 0.1)?;
        let window = EvalWindow::around(&samples);
        let rows = sweep_alpha(
            &grid,
            &samples,
            lambda,
            &alphas,
            &window,
            window.default_probes(),
            &TrivialityConfig::default(),
        )?;
        println!("d = {}, M = {m}, lambda = {lambda}", samples.dim());
        for r in rows {
            println!(
                "  alpha={:<4} tau={:.4} {:<10} Q={:.5}",
                r.alpha, r.report.triviality_index, r.report.classification, r.report.q_alpha
            );
        }
    }
    Ok(())
}
