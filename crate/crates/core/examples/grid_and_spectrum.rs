//! Frequency grid layout, Japanese-bracket weights and field evaluation.

use num_complex::Complex64;
use specbound::grid::{enumerate_indices, sobolev_quadratic_form};
use specbound::{FrequencyGrid, MultiIndex, Spectrum};

fn main() -> specbound::Result<()> {
    let grid = FrequencyGrid::new(2, 2, 0.5)?;
    println!("d={} M={} G={} band={} period={}", grid.dim(), grid.band_limit(), grid.len(), grid.band(), grid.period());

    let indices = enumerate_indices(&grid);
    println!("first {:?}, last {:?}", indices[0], indices[grid.len() - 1]);

    let weights = grid.japanese_weights(2.0);
    for (j, w) in indices.iter().zip(&weights).take(3) {
        println!("w{:?} = {w}", j.components());
    }

    // cos(2π·0.5·x1) built from the pair J = ±(1, 0).
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    for j in [MultiIndex(vec![1, 0]), MultiIndex(vec![-1, 0])] {
        coeffs[grid.flat_index(&j).unwrap()] = Complex64::new(0.5, 0.0);
    }
    let spectrum = Spectrum::new_hermitian(grid, coeffs)?;
    for x in [[0.0, 0.0], [0.5, 0.3], [1.0, -0.7]] {
        println!("h({x:?}) = {:.6}", spectrum.evaluate(&x)?);
    }
    println!("Q_2 = {}", sobolev_quadratic_form(&spectrum, 2.0));
    Ok(())
}
