use num_complex::Complex64;
use proptest::prelude::*;
use specbound::critical::quadrature::{integrate, QuadratureOptions};
use specbound::critical::{gaussian_radial_moment, gaussian_sobolev_norm, sphere_surface_area};
use specbound::grid::{japanese_bracket_weight, sobolev_quadratic_form, weighted_quadratic_form};
use specbound::solver::tikhonov_objective;
use specbound::{
    critical_constant, solve_general, FrequencyGrid, MultiIndex, NormVariant, SampleSet, SolveConfig, SolvePath,
    Spectrum,
};

fn hermitian_from(grid: FrequencyGrid, raw: &[(f64, f64)]) -> Spectrum {
    let n = grid.len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for flat in 0..n {
        let mirror = grid.mirror(flat);
        let (re, im) = raw[flat.min(mirror) % raw.len()];
        coeffs[flat] = if flat == mirror {
            Complex64::new(re, 0.0)
        } else if flat < mirror {
            Complex64::new(re, im)
        } else {
            Complex64::new(re, -im)
        };
    }
    Spectrum::new_hermitian(grid, coeffs).unwrap()
}

fn two_points() -> SampleSet {
    SampleSet::new(vec![vec![-0.5], vec![0.5]], vec![0.9, 0.9]).unwrap()
}

fn scattered(points: &[f64]) -> SampleSet {
    let pts: Vec<Vec<f64>> = points.iter().map(|&x| vec![x]).collect();
    let labels = points.iter().map(|x| (3.0 * x).sin() + 0.5).collect();
    SampleSet::new(pts, labels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_weight_is_even(j in prop::collection::vec(-50i64..=50, 1..=3), mesh in 0.001f64..1.0, alpha in -4.0f64..12.0) {
        let index = MultiIndex(j);
        prop_assert_eq!(
            japanese_bracket_weight(&index, mesh, alpha),
            japanese_bracket_weight(&index.negated(), mesh, alpha)
        );
    }

    #[test]
    fn bracket_weight_grows_with_index_norm(a in 0i64..200, b in 0i64..200, mesh in 0.001f64..1.0, alpha in 0.01f64..12.0) {
        prop_assume!(a != b);
        let (lo, hi) = (a.min(b), a.max(b));
        let w_lo = japanese_bracket_weight(&MultiIndex(vec![lo]), mesh, alpha);
        let w_hi = japanese_bracket_weight(&MultiIndex(vec![hi]), mesh, alpha);
        prop_assert!(w_hi > w_lo, "w({hi}) = {w_hi} <= w({lo}) = {w_lo}");
    }

    #[test]
    fn zero_exponent_form_is_plain_energy(raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40), m in 1usize..12) {
        let spectrum = hermitian_from(FrequencyGrid::new(1, m, 0.1).unwrap(), &raw);
        let energy: f64 = spectrum.coeffs().iter().map(|c| c.norm_sqr()).sum();
        prop_assert_eq!(sobolev_quadratic_form(&spectrum, 0.0), energy);
    }

    #[test]
    fn hermitian_fields_are_real(raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..30), m in 1usize..6, dim in 1usize..=2, seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let spectrum = hermitian_from(FrequencyGrid::new(dim, m, 0.37).unwrap(), &raw);
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let points: Vec<Vec<f64>> = (0..1000)
            .map(|_| (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        let field = spectrum.evaluate_many(&points).unwrap();
        prop_assert!(field.max_imag < 1e-10, "imaginary residue {}", field.max_imag);
    }

    #[test]
    fn evaluation_is_linear(
        raw_a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..20),
        raw_b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..20),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        x in -4.0f64..4.0,
    ) {
        let grid = FrequencyGrid::new(1, 8, 0.2).unwrap();
        let phi = hermitian_from(grid, &raw_a);
        let psi = hermitian_from(grid, &raw_b);
        let combined = phi.combine(a, &psi, b).unwrap();
        let lhs = combined.evaluate_complex(&[x]).unwrap();
        let rhs = phi.evaluate_complex(&[x]).unwrap() * a + psi.evaluate_complex(&[x]).unwrap() * b;
        let scale = 1.0 + a.abs() * phi.coeffs().iter().map(|c| c.norm()).sum::<f64>()
            + b.abs() * psi.coeffs().iter().map(|c| c.norm()).sum::<f64>();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn solved_spectra_are_hermitian(
        xs in prop::collection::btree_set(-20i32..=20, 1..=5),
        alpha in 0.0f64..6.0,
        lambda in 1e-4f64..10.0,
        m in 4usize..40,
    ) {
        let points: Vec<f64> = xs.iter().map(|&k| k as f64 * 0.05).collect();
        let samples = scattered(&points);
        let spectrum = solve_general(&FrequencyGrid::new(1, m, 0.1).unwrap(), &samples, &SolveConfig::new(alpha, lambda).unwrap()).unwrap();
        let grid = *spectrum.grid();
        for flat in 0..grid.len() {
            let d = spectrum.coeffs()[grid.mirror(flat)] - spectrum.coeffs()[flat].conj();
            prop_assert!(d.norm() < 1e-12, "defect {} at {flat}", d.norm());
        }
    }

    #[test]
    fn homogeneous_norm_scales_exactly(sigma in 1e-3f64..2.0, alpha in 0.0f64..8.0, dim in 1usize..=4) {
        let at_sigma = gaussian_sobolev_norm(sigma, alpha, dim, NormVariant::Homogeneous).unwrap();
        let at_one = gaussian_sobolev_norm(1.0, alpha, dim, NormVariant::Homogeneous).unwrap();
        let predicted = sigma.powf(dim as f64 - alpha) * at_one;
        prop_assert!((at_sigma - predicted).abs() <= 1e-10 * predicted.abs());
    }

    #[test]
    fn bracket_dominates_homogeneous(sigma in 1e-4f64..2.0, alpha in 0.0f64..8.0, dim in 1usize..=4) {
        let bracket = gaussian_sobolev_norm(sigma, alpha, dim, NormVariant::Bracket).unwrap();
        let homogeneous = gaussian_sobolev_norm(sigma, alpha, dim, NormVariant::Homogeneous).unwrap();
        prop_assert!(bracket >= homogeneous * (1.0 - 1e-12), "{bracket} < {homogeneous}");
    }
}

#[test]
fn twenty_seeded_scaling_instances() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(20);
    for _ in 0..20 {
        let sigma: f64 = rng.random_range(1e-3..1.0);
        let alpha: f64 = rng.random_range(0.0..6.0);
        let dim = rng.random_range(1..=4usize);
        let lhs = gaussian_sobolev_norm(sigma, alpha, dim, NormVariant::Homogeneous).unwrap();
        let rhs = sigma.powf(dim as f64 - alpha) * gaussian_sobolev_norm(1.0, alpha, dim, NormVariant::Homogeneous).unwrap();
        assert!(((lhs - rhs) / rhs).abs() < 1e-10, "sigma={sigma} alpha={alpha} d={dim}");
    }
}

#[test]
fn bracket_approaches_homogeneous_at_critical_exponent() {
    for dim in 1..=3 {
        let gap = |sigma: f64| {
            let b = gaussian_sobolev_norm(sigma, dim as f64, dim, NormVariant::Bracket).unwrap();
            let h = gaussian_sobolev_norm(sigma, dim as f64, dim, NormVariant::Homogeneous).unwrap();
            (b - h) / h
        };
        let gaps: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|&s| gap(s)).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "d={dim}: {gaps:?}");
        assert!(gaps[3] < 1e-4, "d={dim}: {gaps:?}");
    }
}

#[test]
fn critical_constant_matches_closed_form() {
    let pi = std::f64::consts::PI;
    assert!((critical_constant(1) - 1.0 / (2.0 * pi)).abs() < 1e-15);
    assert!((critical_constant(2) - 1.0 / (4.0 * pi)).abs() < 1e-15);
    // d = 3: ½·2!·(2π)^{-3}·4π = 1/(2π²)
    assert!((critical_constant(3) - 1.0 / (2.0 * pi * pi)).abs() < 1e-15);
    for d in 1..=6usize {
        let fact: f64 = (1..d).map(|k| k as f64).product();
        let expected = 0.5 * fact * (2.0 * pi).powi(-(d as i32)) * sphere_surface_area(d);
        assert_eq!(critical_constant(d), expected);
    }
}

#[test]
fn radial_moments_match_quadrature() {
    let c = 4.0 * std::f64::consts::PI.powi(2);
    for k in [0.0, 0.5, 1.0, 2.0, 3.5, 6.0] {
        let q = integrate(|r: f64| r.powf(k) * (-c * r * r).exp(), 0.0, 4.0, QuadratureOptions::with_rel_tol(1e-13)).unwrap();
        let closed = gaussian_radial_moment(k);
        assert!(((q.value - closed) / closed).abs() < 1e-10, "k={k}: {} vs {closed}", q.value);
    }
    // Integer orders against the factorial forms.
    let pi = std::f64::consts::PI;
    assert!((gaussian_radial_moment(0.0) - pi.sqrt() / (2.0 * c.sqrt())).abs() < 1e-15);
    assert!((gaussian_radial_moment(1.0) - 1.0 / (2.0 * c)).abs() < 1e-15);
    assert!((gaussian_radial_moment(3.0) - 1.0 / (2.0 * c * c)).abs() < 1e-15);
}

#[test]
fn tikhonov_path_is_monotone_in_lambda() {
    let samples = scattered(&[-0.7, -0.2, 0.1, 0.6]);
    let grid = FrequencyGrid::new(1, 32, 0.1).unwrap();
    let alpha = 2.0;
    let weights = grid.japanese_weights(alpha);
    let mut last: Option<(f64, f64)> = None;
    for lambda in [1e-4, 1e-3, 1e-1, 1e1, 1e2] {
        let s = solve_general(&grid, &samples, &SolveConfig::new(alpha, lambda).unwrap()).unwrap();
        let penalty = weighted_quadratic_form(&s, &weights);
        let misfit = specbound::solver::data_misfit(&s, &samples).unwrap();
        if let Some((p, r)) = last {
            assert!(penalty <= p * (1.0 + 1e-9), "penalty rose at lambda={lambda}");
            assert!(misfit >= r * (1.0 - 1e-9), "misfit fell at lambda={lambda}");
        }
        last = Some((penalty, misfit));
    }
}

#[test]
fn objective_nests_in_band_limit() {
    let samples = scattered(&[-0.7, -0.2, 0.1, 0.6]);
    let config = SolveConfig::new(1.5, 0.05).unwrap();
    let mut last = f64::INFINITY;
    for m in [4, 8, 16, 32] {
        let grid = FrequencyGrid::new(1, m, 0.1).unwrap();
        let s = solve_general(&grid, &samples, &config).unwrap();
        let objective = tikhonov_objective(&s, &samples, &config).unwrap();
        assert!(objective <= last * (1.0 + 1e-12), "M={m}: {objective} > {last}");
        last = objective;
    }
}

#[test]
fn solution_paths_agree() {
    let samples = scattered(&[-0.4, 0.3, 0.8]);
    let grid = FrequencyGrid::new(1, 16, 0.1).unwrap();
    let base = SolveConfig::new(2.0, 0.3).unwrap();
    let dual = solve_general(&grid, &samples, &base.clone().with_path(SolvePath::Dual)).unwrap();
    let dense = solve_general(&grid, &samples, &base.clone().with_path(SolvePath::Dense)).unwrap();
    let gap = dual.coeffs().iter().zip(dense.coeffs()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(gap < 1e-10, "dual vs dense {gap}");

    let single = scattered(&[0.25]);
    let svd = specbound::solve_via_svd(&grid, &single, &base).unwrap();
    let dual = solve_general(&grid, &single, &base).unwrap();
    let gap = dual.coeffs().iter().zip(svd.coeffs()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(gap < 1e-10, "dual vs svd {gap}");
}

#[test]
fn residual_vanishes_as_lambda_shrinks() {
    let samples = scattered(&[-0.6, 0.0, 0.5]);
    let grid = FrequencyGrid::new(1, 40, 0.1).unwrap();
    let mut last = f64::INFINITY;
    for lambda in [1.0, 1e-2, 1e-4, 1e-6] {
        let s = solve_general(&grid, &samples, &SolveConfig::new(2.0, lambda).unwrap()).unwrap();
        let r = specbound::constraint_residual(&s, &samples).unwrap().max_abs;
        assert!(r < last, "lambda={lambda}: residual {r} did not drop below {last}");
        last = r;
    }
    assert!(last < 1e-4, "final residual {last}");
}

#[test]
fn two_point_field_is_even() {
    let grid = FrequencyGrid::new(1, 100, 0.1).unwrap();
    let s = solve_general(&grid, &two_points(), &SolveConfig::new(3.0, 0.5).unwrap()).unwrap();
    for x in [0.1, 0.37, 0.9, 2.2] {
        let (a, b) = (s.evaluate(&[x]).unwrap(), s.evaluate(&[-x]).unwrap());
        assert!((a - b).abs() < 1e-12);
    }
}
