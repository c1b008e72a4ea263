//! Supercritical solutions stop changing once the band is wide enough.

use specbound::io::parse_samples;
use specbound::{convergence_in_bandlimit, EvalWindow, SolveConfig};

fn main() -> specbound::Result<()> {
    let samples = parse_samples(include_str!("../data/points_1d.csv"), "points_1d", None)?;
    let points = EvalWindow::around(&samples).lattice(512);
    for alpha in [0.5, 10.0] {
        let config = SolveConfig::new(alpha, 0.5)?;
        let table = convergence_in_bandlimit(&samples, &config, 0.1, &[250, 500, 1000], &points)?;
        for (a, b, d) in &table.sup_differences {
            println!("alpha={alpha:<4} D(M={a}, M={b}) = {d:e}");
        }
    }
    Ok(())
}
