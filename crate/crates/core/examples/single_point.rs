//! Closed-form single-point solution: the spike sharpens with M when α < 1.

use specbound::diagnostics::half_max_width;
use specbound::solve_single_point_analytic;

fn main() -> specbound::Result<()> {
    println!("{:>6} {:>7} {:>12} {:>12} {:>12}", "alpha", "M", "Z^2", "h(0)", "width");
    for alpha in [0.5, 1.5, 3.0, 10.0] {
        for m in [100, 1000, 10000] {
            let sol = solve_single_point_analytic(m, 0.01, alpha, 1.0)?;
            let step = 1.0 / (8.0 * (2 * m + 1) as f64 * 0.01);
            let width = half_max_width(|x| sol.evaluate(x[0]), &[0.0], 2.0, step)?;
            println!("{alpha:>6} {m:>7} {:>12.4} {:>12.6} {:>12.6}", sol.z_sq(), sol.value_at_origin(), width);
        }
    }
    Ok(())
}
