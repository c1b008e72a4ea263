use num_complex::Complex64;
use specbound::diagnostics::{spike_width, triviality_index, Classification, EvalWindow, TrivialityConfig};
use specbound::lfp::{lfp_evolve, EvolveOptions, LfpState};
use specbound::{
    constraint_residual, lfp_equivalence_check, solve_general, sobolev_quadratic_form, sweep_alpha, weighted_minimum_norm,
    FrequencyGrid, LfpKernel, SampleSet, SolveConfig, SolvePath, Spectrum, ZeroModePolicy,
};

fn two_points() -> SampleSet {
    SampleSet::new(vec![vec![-0.5], vec![0.5]], vec![0.9, 0.9]).unwrap()
}

fn q_alpha(m: usize, alpha: f64, lambda: f64) -> f64 {
    let grid = FrequencyGrid::new(1, m, 0.1).unwrap();
    let s = solve_general(&grid, &two_points(), &SolveConfig::new(alpha, lambda).unwrap()).unwrap();
    sobolev_quadratic_form(&s, alpha)
}

#[test]
fn subcritical_norm_collapses_with_band_limit() {
    let q: Vec<f64> = [100, 400, 1600].iter().map(|&m| q_alpha(m, 0.5, 1e-4)).collect();
    for w in q.windows(2) {
        assert!(w[1] <= 0.9 * w[0], "{q:?}");
    }
}

#[test]
fn supercritical_norm_is_stable_in_band_limit() {
    let (a, b) = (q_alpha(800, 3.0, 1e-4), q_alpha(1600, 3.0, 1e-4));
    assert!(((b - a) / a).abs() < 0.05, "{a} -> {b}");
}

#[test]
fn nontriviality_is_monotone_in_alpha() {
    let samples = two_points();
    let grid = FrequencyGrid::new(1, 1000, 0.1).unwrap();
    let window = EvalWindow::around(&samples);
    let rows = sweep_alpha(
        &grid,
        &samples,
        0.5,
        &[0.5, 1.5, 3.0, 10.0],
        &window,
        window.default_probes(),
        &TrivialityConfig::default(),
    )
    .unwrap();
    let classes: Vec<_> = rows.iter().map(|r| r.report.classification).collect();
    assert_eq!(classes[0], Classification::Trivial);
    let first = classes.iter().position(|&c| c == Classification::Nontrivial).unwrap();
    assert!(classes[first..].iter().all(|&c| c == Classification::Nontrivial), "{classes:?}");
    for r in &rows {
        assert!((0.0..=1.0).contains(&r.report.triviality_index));
    }
}

#[test]
fn tau_over_one_is_clamped_and_reported() {
    // Peak between the samples exceeds the labels.
    let grid = FrequencyGrid::new(1, 40, 0.1).unwrap();
    let samples = SampleSet::new(vec![vec![-2.0], vec![2.0]], vec![0.1, 0.1]).unwrap();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    coeffs[40] = Complex64::new(1.0, 0.0);
    let spectrum = Spectrum::new_hermitian(grid, coeffs).unwrap();
    let window = EvalWindow::around(&samples);
    let t = triviality_index(&spectrum, &samples, &window, 64, &TrivialityConfig::default()).unwrap();
    assert!(t.clamped && t.tau == 1.0 && t.tau_raw > 1.0, "{t:?}");
}

#[test]
fn solver_residual_examples() {
    let grid = FrequencyGrid::new(1, 64, 0.1).unwrap();
    let samples = two_points();
    let base = SolveConfig::new(4.0, 1e-6).unwrap();
    let dual = solve_general(&grid, &samples, &base).unwrap();
    let r = constraint_residual(&dual, &samples).unwrap();
    assert!(r.max_abs < 1e-4, "{}", r.max_abs);

    // The G×G normal equations are too ill-conditioned at λ = 1e-6.
    let moderate = SolveConfig::new(4.0, 1e-2).unwrap();
    let dual = solve_general(&grid, &samples, &moderate).unwrap();
    let dense = solve_general(&grid, &samples, &moderate.with_path(SolvePath::Dense)).unwrap();
    let (r, rd) = (constraint_residual(&dual, &samples).unwrap(), constraint_residual(&dense, &samples).unwrap());
    for (a, b) in r.values.iter().zip(&rd.values) {
        assert!((a - b).abs() < 1e-10);
    }
}

/// Root of sin(πu)/(πu) = 1/2 by bisection.
fn dirichlet_half_point() -> f64 {
    let f = |u: f64| (std::f64::consts::PI * u).sin() / (std::f64::consts::PI * u) - 0.5;
    let (mut lo, mut hi) = (0.1, 0.9);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn flat_spectrum_spike_matches_dirichlet_width() {
    let u = dirichlet_half_point();
    assert!((u - 0.6034).abs() < 1e-3);
    for m in [50, 200] {
        let grid = FrequencyGrid::new(1, m, 0.1).unwrap();
        let coeffs = vec![Complex64::new(1.0 / grid.len() as f64, 0.0); grid.len()];
        let spectrum = Spectrum::new_hermitian(grid, coeffs).unwrap();
        let width = spike_width(&spectrum, &[0.0]).unwrap();
        let expected = 2.0 * u / ((2 * m + 1) as f64 * 0.1);
        assert!(((width - expected) / expected).abs() < 0.01, "M={m}: {width} vs {expected}");
    }
}

#[test]
fn spike_width_separates_regimes() {
    let samples = two_points();
    let grid = FrequencyGrid::new(1, 1000, 0.1).unwrap();
    let width = |alpha: f64| {
        let s = solve_general(&grid, &samples, &SolveConfig::new(alpha, 0.5).unwrap()).unwrap();
        spike_width(&s, &[0.5]).unwrap()
    };
    let spacing = 1.0;
    assert!(width(0.5) < 0.1 * spacing);
    assert!(width(10.0) > 0.5 * spacing);
}

fn kernel(m: usize) -> LfpKernel {
    LfpKernel::relu(FrequencyGrid::new(1, m, 0.1).unwrap(), 1.0, 1.0, ZeroModePolicy::Cap).unwrap()
}

#[test]
fn lfp_single_point_modes_share_one_driver() {
    let k = kernel(16);
    let grid = *k.grid();
    let y = 0.7;
    let samples = SampleSet::new(vec![vec![0.0]], vec![y]).unwrap();
    let dt = 0.5 * k.max_stable_dt();
    let total: f64 = k.gamma_sq().iter().sum();
    let limit: Vec<f64> = k.gamma_sq().iter().map(|g| y * g / total).collect();
    let mut state = LfpState::zero(grid, &samples);
    // Oracle: u_{t+1} = u_t (1 − dt Σγ²) and φ_J(t) = γ²_J S(t) with
    // S(t+1) = S(t) − dt u_t.
    let (mut u, mut s) = (-y, 0.0);
    for _ in 0..8 {
        let run = lfp_evolve(state, &k, &samples, &EvolveOptions::fixed(dt, 5)).unwrap();
        state = run.final_state;
        for _ in 0..5 {
            s -= dt * u;
            u *= 1.0 - dt * total;
        }
        let ratios: Vec<f64> = state.spectrum.coeffs().iter().zip(&limit).map(|(c, l)| c.re / l).collect();
        let r0 = ratios[0];
        assert!(ratios.iter().all(|r| (r - r0).abs() < 1e-10), "{ratios:?}");
        for (c, g) in state.spectrum.coeffs().iter().zip(k.gamma_sq()) {
            assert!((c.re - g * s).abs() < 1e-12 && c.im.abs() < 1e-12);
        }
    }
    let centre = grid.len() / 2;
    // The capped zero mode shares the rate of |J| = 1.
    assert_eq!(limit[centre], limit[centre + 1]);
    for j in 1..grid.band_limit() {
        assert!(limit[centre + j + 1] < limit[centre + j]);
    }
}

#[test]
fn lfp_steps_preserve_symmetry_and_descend() {
    let k = kernel(32);
    let samples = SampleSet::new(vec![vec![-0.7], vec![0.1], vec![0.4]], vec![0.3, -0.5, 1.2]).unwrap();
    let run = lfp_evolve(
        LfpState::zero(*k.grid(), &samples),
        &k,
        &samples,
        &EvolveOptions::fixed(0.9 * k.max_stable_dt(), 2000),
    )
    .unwrap();
    assert!(run.energy_non_increasing(), "{} increases", run.energy_increases);
    assert!(run.final_state.spectrum.hermitian_defect() < 1e-15);
    assert!(run.checkpoints.windows(2).all(|w| w[1].energy <= w[0].energy));
}

#[test]
fn two_point_flow_reaches_interpolation() {
    let k = kernel(64);
    let samples = two_points();
    let run = lfp_evolve(
        LfpState::zero(*k.grid(), &samples),
        &k,
        &samples,
        &EvolveOptions::fixed(0.9 * k.max_stable_dt(), 100_000),
    )
    .unwrap();
    assert!(run.final_state.max_residual() < 1e-6, "{}", run.final_state.max_residual());
}

#[test]
fn lfp_limits_match_weighted_minimum_norm() {
    let k = kernel(64);
    let report = lfp_equivalence_check(&two_points(), &k, 0.9 * k.max_stable_dt(), 1e-6, 1_000_000).unwrap();
    assert!(report.passed, "{}", report.max_coefficient_difference);
    assert!(report.max_residual < 1e-7);

    let zero = two_points().with_labels(vec![0.0, 0.0]).unwrap();
    assert!(weighted_minimum_norm(&k, &zero).unwrap().max_abs() == 0.0);
}
