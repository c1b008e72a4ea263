//! Gaussian Sobolev norms as σ → 0 and the constant at α = d.

use specbound::{critical_constant, gaussian_sobolev_norm, limit_sweep, NormVariant};

fn main() -> specbound::Result<()> {
    for d in 1..=4 {
        let c = critical_constant(d);
        let v = gaussian_sobolev_norm(1e-4, d as f64, d, NormVariant::Bracket)?;
        println!("d={d} C_d={c:.10} norm(sigma=1e-4)={v:.10}");
    }
    let sigmas = [1e-1, 1e-2, 1e-3, 1e-4];
    for alpha in [0.5, 1.0, 2.0] {
        let result = limit_sweep(1, alpha, &sigmas, NormVariant::Bracket)?;
        println!("d=1 alpha={alpha}: {} (tail slope {:.4})", result.verdict.label(), result.tail_slope);
        for p in &result.evidence {
            println!("    sigma={:<7} value={:.6e}", p.sigma, p.value);
        }
    }
    Ok(())
}
