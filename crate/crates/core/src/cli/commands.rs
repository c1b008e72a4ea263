use std::f64::consts::TAU;

use super::args::*;
use super::{reproduce, Context};
use crate::critical::{limit_sweep, log_log_slope, rbf_norm_decay_study, NormVariant};
use crate::diagnostics::{
    convergence_in_bandlimit, diagnose, half_max_width, DiagnosticsReport, EvalWindow, SweepRow, TrivialityConfig,
};
use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, Spectrum};
use crate::io;
use crate::lfp::{lfp_evolve, weighted_minimum_norm, EvolveOptions, LfpKernel, LfpState, ZeroModePolicy};
use crate::samples::SampleSet;
use crate::solver::{solve_general, solve_single_point_analytic, solve_via_svd, SolveConfig, SolvePath};
use crate::svg::{heatmap, LinePlot, Series};

pub(crate) fn dispatch(command: &Command, ctx: &mut Context) -> Result<()> {
    match command {
        Command::Solve(a) => solve(a, ctx),
        Command::SinglePoint(a) => single_point(a, ctx),
        Command::SweepAlpha(a) => sweep_alpha(a, ctx),
        Command::SweepBandlimit(a) => sweep_bandlimit(a, ctx),
        Command::Critical(a) => critical(a, ctx),
        Command::RbfDecay(a) => rbf_decay(a, ctx),
        Command::Lfp(a) => lfp(a, ctx),
        Command::Reproduce(a) => reproduce::run(a, ctx),
    }
}

fn load(data: &DataArgs, ctx: &mut Context) -> Result<SampleSet> {
    let samples = io::read_samples(&data.data, data.dim)?;
    ctx.input_file(&data.data)?;
    Ok(samples)
}

/// Second coordinate of the plotted slice through two-dimensional fields.
pub(crate) const SLICE_X2: f64 = 0.5;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Points on which fields are tabulated: a lattice over the window.
pub(crate) fn field_points(window: &EvalWindow) -> Vec<Vec<f64>> {
    let per_axis = if window.dim() == 1 { 512 } else { 64 };
    window.lattice(per_axis)
}

fn slice_points(window: &EvalWindow) -> Vec<Vec<f64>> {
    linspace(window.lower[0], window.upper[0], 256)
        .into_iter()
        .map(|x| {
            let mut p = vec![x, SLICE_X2];
            p.resize(window.dim(), 0.0);
            p
        })
        .collect()
}

/// Writes `{stem}_field.csv` and, when plotting, the matching SVGs.
pub(crate) fn emit_field(ctx: &mut Context, stem: &str, spectrum: &Spectrum, samples: &SampleSet) -> Result<()> {
    let window = EvalWindow::around(samples);
    let points = field_points(&window);
    let values = spectrum.evaluate_many(&points)?.values;
    io::write_field(&ctx.output(&format!("{stem}_field.csv")), &points, &values)?;
    if ctx.plot() {
        plot_fields(ctx, stem, stem, &[(stem.to_string(), spectrum)], samples)?;
        if samples.dim() == 2 {
            let per_axis = 64;
            let grid: Vec<Vec<f64>> = values.chunks(per_axis).map(|c| c.to_vec()).collect();
            let markers: Vec<(f64, f64)> = samples.points().iter().map(|p| (p[0], p[1])).collect();
            let svg = heatmap(
                stem,
                &grid,
                ((window.lower[0], window.upper[0]), (window.lower[1], window.upper[1])),
                &markers,
                ctx.timestamp(),
            );
            io::write_text(&ctx.output(&format!("{stem}_heatmap.svg")), &svg)?;
        }
    }
    Ok(())
}

/// Overlays fields: over the window in 1-D, along the slice `x2 = 0.5`
/// otherwise, with the samples that lie on the slice as markers.
pub(crate) fn plot_fields(
    ctx: &mut Context,
    name: &str,
    title: &str,
    fields: &[(String, &Spectrum)],
    samples: &SampleSet,
) -> Result<()> {
    let window = EvalWindow::around(samples);
    let points = if samples.dim() == 1 {
        window.lattice(512)
    } else {
        slice_points(&window)
    };
    let mut series = Vec::new();
    for (label, spectrum) in fields {
        let values = spectrum.evaluate_many(&points)?.values;
        series.push(Series::new(
            label.clone(),
            points.iter().zip(values).map(|(p, h)| (p[0], h)).collect(),
        ));
    }
    let markers = samples
        .points()
        .iter()
        .zip(samples.labels())
        .filter(|(p, _)| p.len() == 1 || (p[1] - SLICE_X2).abs() < 1e-12)
        .map(|(p, &y)| (p[0], y))
        .collect();
    let plot = LinePlot {
        title: title.to_string(),
        x_label: "x1".into(),
        y_label: "h".into(),
        series,
        markers,
        ..Default::default()
    };
    io::write_text(&ctx.output(&format!("{name}.svg")), &plot.render(ctx.timestamp()))
}

pub(crate) fn default_probes(window: &EvalWindow, probes: Option<usize>) -> usize {
    probes.unwrap_or_else(|| window.default_probes())
}

pub(crate) fn print_report(alpha: f64, report: &DiagnosticsReport) {
    println!(
        "alpha={alpha} tau={} ({}) q_alpha={} max_residual={} probes={}",
        report.triviality_index, report.classification, report.q_alpha, report.max_residual, report.probe_count
    );
}

fn solve(a: &SolveArgs, ctx: &mut Context) -> Result<()> {
    let samples = load(&a.data, ctx)?;
    let grid = FrequencyGrid::new(samples.dim(), a.grid.band_limit, a.grid.mesh)?;
    let config = SolveConfig::new(a.alpha, a.lambda)?;
    let spectrum = match a.path {
        PathChoice::Svd => solve_via_svd(&grid, &samples, &config)?,
        PathChoice::Dual => solve_general(&grid, &samples, &config.with_path(SolvePath::Dual))?,
        PathChoice::Dense => solve_general(&grid, &samples, &config.with_path(SolvePath::Dense))?,
        PathChoice::Auto => solve_general(&grid, &samples, &config.with_path(SolvePath::Auto))?,
    };
    let window = EvalWindow::around(&samples);
    let report = diagnose(
        &spectrum,
        &samples,
        a.alpha,
        &window,
        default_probes(&window, a.probes),
        &TrivialityConfig::default(),
    )?;
    io::write_spectrum(&ctx.output("spectrum.csv"), &spectrum)?;
    emit_field(ctx, "solve", &spectrum, &samples)?;
    io::write_sweep(
        &ctx.output("solve_report.csv"),
        &[SweepRow {
            alpha: a.alpha,
            band_limit: grid.band_limit(),
            lambda: a.lambda,
            report: report.clone(),
        }],
    )?;
    print_report(a.alpha, &report);
    Ok(())
}

/// Half-maximum width of a single-point solution searched over `[0, reach]`.
pub(crate) fn single_point_width(sol: &crate::solver::SinglePointSolution, reach: f64) -> Result<f64> {
    let grid = sol.grid();
    let step = 1.0 / (8.0 * (2 * grid.band_limit() + 1) as f64 * grid.mesh());
    let reach = reach.min(0.5 * grid.period());
    half_max_width(|x| sol.evaluate(x[0]), &[0.0], reach, step)
}

fn single_point(a: &SinglePointArgs, ctx: &mut Context) -> Result<()> {
    if !(a.half_width > 0.0) {
        return Err(Error::InvalidParameter("--half-width must be positive".into()));
    }
    let sol = solve_single_point_analytic(a.band_limit, a.mesh, a.alpha, a.lambda)?;
    let xs = linspace(-a.half_width, a.half_width, a.points);
    let values = sol.evaluate_many(&xs);
    let points: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    io::write_field(&ctx.output("single_point_field.csv"), &points, &values)?;
    let width = single_point_width(&sol, a.half_width)?;
    io::write_table(
        &ctx.output("single_point_summary.csv"),
        &["alpha", "M", "lambda", "z_sq", "h0", "spike_width"],
        [vec![
            a.alpha.to_string(),
            a.band_limit.to_string(),
            a.lambda.to_string(),
            sol.z_sq().to_string(),
            sol.value_at_origin().to_string(),
            width.to_string(),
        ]],
    )?;
    if ctx.plot() {
        let plot = LinePlot {
            title: format!("single point, alpha = {}", a.alpha),
            x_label: "x".into(),
            y_label: "h".into(),
            series: vec![Series::new(format!("alpha={}", a.alpha), xs.iter().copied().zip(values).collect())],
            ..Default::default()
        };
        io::write_text(&ctx.output("single_point_field.svg"), &plot.render(ctx.timestamp()))?;
    }
    println!(
        "Z^2={} h(0)={} spike_width={width}",
        sol.z_sq(),
        sol.value_at_origin()
    );
    Ok(())
}

/// Solves and diagnoses each exponent, keeping the spectra for plotting.
pub(crate) fn run_sweep(
    grid: &FrequencyGrid,
    samples: &SampleSet,
    lambda: f64,
    alphas: &[f64],
    probes: Option<usize>,
) -> Result<(Vec<SweepRow>, Vec<Spectrum>)> {
    let window = EvalWindow::around(samples);
    let probes = default_probes(&window, probes);
    let mut rows = Vec::new();
    let mut spectra = Vec::new();
    for &alpha in alphas {
        let spectrum = solve_general(grid, samples, &SolveConfig::new(alpha, lambda)?)?;
        let report = diagnose(&spectrum, samples, alpha, &window, probes, &TrivialityConfig::default())?;
        print_report(alpha, &report);
        rows.push(SweepRow {
            alpha,
            band_limit: grid.band_limit(),
            lambda,
            report,
        });
        spectra.push(spectrum);
    }
    Ok((rows, spectra))
}

fn sweep_alpha(a: &SweepAlphaArgs, ctx: &mut Context) -> Result<()> {
    let samples = load(&a.data, ctx)?;
    let grid = FrequencyGrid::new(samples.dim(), a.grid.band_limit, a.grid.mesh)?;
    let (rows, spectra) = run_sweep(&grid, &samples, a.lambda, &a.alphas, a.probes)?;
    io::write_sweep(&ctx.output("sweep.csv"), &rows)?;
    if ctx.plot() {
        let fields: Vec<(String, &Spectrum)> = a
            .alphas
            .iter()
            .zip(&spectra)
            .map(|(alpha, s)| (format!("alpha={alpha}"), s))
            .collect();
        plot_fields(ctx, "sweep_fields", "fields by exponent", &fields, &samples)?;
    }
    Ok(())
}

/// Evaluation points for band-limit comparisons: the field lattice, plus
/// the plotting slice in two or more dimensions.
pub(crate) fn convergence_points(samples: &SampleSet, per_axis: Option<usize>) -> Vec<Vec<f64>> {
    let window = EvalWindow::around(samples);
    let mut points = match per_axis {
        Some(n) => window.lattice(n),
        None => field_points(&window),
    };
    if samples.dim() > 1 {
        points.extend(slice_points(&window));
    }
    points
}

pub(crate) fn write_bandlimit_outputs(
    ctx: &mut Context,
    stem: &str,
    table: &crate::diagnostics::BandLimitConvergence,
    samples: &SampleSet,
) -> Result<()> {
    io::write_convergence(&ctx.output(&format!("{stem}_convergence.csv")), table)?;
    for (m, values) in table.band_limits.iter().zip(&table.fields) {
        io::write_field(&ctx.output(&format!("{stem}_field_M{m}.csv")), &table.points, values)?;
    }
    if ctx.plot() {
        let on_plot = |p: &Vec<f64>| samples.dim() == 1 || p.len() > 1 && (p[1] - SLICE_X2).abs() < 1e-12;
        let start = if samples.dim() == 1 { 0 } else { table.points.len() - 256 };
        let series = table
            .band_limits
            .iter()
            .zip(&table.fields)
            .map(|(m, values)| {
                Series::new(
                    format!("M={m}"),
                    table.points[start..]
                        .iter()
                        .zip(&values[start..])
                        .filter(|(p, _)| on_plot(p))
                        .map(|(p, &h)| (p[0], h))
                        .collect(),
                )
            })
            .collect();
        let markers = samples
            .points()
            .iter()
            .zip(samples.labels())
            .filter(|(p, _)| p.len() == 1 || (p[1] - SLICE_X2).abs() < 1e-12)
            .map(|(p, &y)| (p[0], y))
            .collect();
        let plot = LinePlot {
            title: "fields by band limit".into(),
            x_label: "x1".into(),
            y_label: "h".into(),
            series,
            markers,
            ..Default::default()
        };
        io::write_text(&ctx.output(&format!("{stem}_fields.svg")), &plot.render(ctx.timestamp()))?;
    }
    for &(a, b, d) in &table.sup_differences {
        println!("D(M={a}, M={b}) = {d}");
    }
    Ok(())
}

fn sweep_bandlimit(a: &SweepBandlimitArgs, ctx: &mut Context) -> Result<()> {
    let samples = load(&a.data, ctx)?;
    let config = SolveConfig::new(a.alpha, a.lambda)?;
    let points = convergence_points(&samples, a.points);
    let table = convergence_in_bandlimit(&samples, &config, a.mesh, &a.band_limits, &points)?;
    write_bandlimit_outputs(ctx, "bandlimit", &table, &samples)
}

pub(crate) fn variant(v: VariantChoice) -> NormVariant {
    match v {
        VariantChoice::Bracket => NormVariant::Bracket,
        VariantChoice::Homogeneous => NormVariant::Homogeneous,
    }
}

pub(crate) fn critical_sweep(
    ctx: &mut Context,
    name: &str,
    dim: usize,
    alpha: f64,
    sigmas: &[f64],
    v: NormVariant,
) -> Result<()> {
    let result = limit_sweep(dim, alpha, sigmas, v)?;
    io::write_critical(&ctx.output(&format!("{name}.csv")), &result)?;
    if ctx.plot() {
        let plot = LinePlot {
            title: format!("Gaussian norm, d = {dim}, alpha = {alpha}"),
            x_label: "sigma".into(),
            y_label: "norm".into(),
            series: vec![Series::new(
                result.verdict.label(),
                result.evidence.iter().map(|p| (p.sigma, p.value)).collect(),
            )],
            log_x: true,
            log_y: true,
            ..Default::default()
        };
        io::write_text(&ctx.output(&format!("{name}.svg")), &plot.render(ctx.timestamp()))?;
    }
    println!(
        "d={dim} alpha={alpha} verdict={} tail_slope={}",
        result.verdict.label(),
        result.tail_slope
    );
    Ok(())
}

fn critical(a: &CriticalArgs, ctx: &mut Context) -> Result<()> {
    critical_sweep(ctx, "critical", a.dim, a.alpha, &a.sigmas, variant(a.variant))
}

/// Smallest band limit whose band reaches `6/(2πσ)`.
pub(crate) fn decay_band_limit(sigma_min: f64, mesh: f64) -> usize {
    (6.0 / (TAU * sigma_min) / mesh).ceil() as usize
}

pub(crate) fn rbf_decay_table(
    ctx: &mut Context,
    name: &str,
    samples: &SampleSet,
    alpha: f64,
    sigmas: &[f64],
    mesh: f64,
    band_limit: Option<usize>,
) -> Result<()> {
    let sigma_min = sigmas.iter().copied().fold(f64::INFINITY, f64::min);
    if !(sigma_min > 0.0) {
        return Err(Error::InvalidParameter("sigma values must be positive".into()));
    }
    let m = band_limit.unwrap_or_else(|| decay_band_limit(sigma_min, mesh));
    let grid = FrequencyGrid::new(samples.dim(), m, mesh)?;
    let rows = rbf_norm_decay_study(samples, alpha, sigmas, &grid)?;
    io::write_decay(&ctx.output(&format!("{name}.csv")), &rows)?;
    let tail: Vec<(f64, f64)> = rows.iter().rev().take(3).rev().map(|r| (r.sigma, r.q_grid)).collect();
    if ctx.plot() {
        let plot = LinePlot {
            title: format!("RBF interpolant norm, alpha = {alpha}"),
            x_label: "sigma".into(),
            y_label: "Q".into(),
            series: vec![Series::new("grid", rows.iter().map(|r| (r.sigma, r.q_grid)).collect())],
            log_x: true,
            log_y: true,
            ..Default::default()
        };
        io::write_text(&ctx.output(&format!("{name}.svg")), &plot.render(ctx.timestamp()))?;
    }
    println!("alpha={alpha} M={m} tail_slope={}", log_log_slope(&tail));
    Ok(())
}

fn rbf_decay(a: &RbfDecayArgs, ctx: &mut Context) -> Result<()> {
    let samples = load(&a.data, ctx)?;
    rbf_decay_table(ctx, "rbf_decay", &samples, a.alpha, &a.sigmas, a.mesh, a.band_limit)
}

fn lfp(a: &LfpArgs, ctx: &mut Context) -> Result<()> {
    let samples = load(&a.data, ctx)?;
    let grid = FrequencyGrid::new(samples.dim(), a.grid.band_limit, a.grid.mesh)?;
    let policy = match a.zero_mode {
        ZeroModeChoice::Cap => ZeroModePolicy::Cap,
        ZeroModeChoice::Exclude => ZeroModePolicy::Exclude,
    };
    let kernel = LfpKernel::relu(grid, a.m3, a.ma2r, policy)?;
    let dt = a.dt.unwrap_or(0.9 * kernel.max_stable_dt());
    let target = a.tol.map(|t| t / 10.0).unwrap_or(0.0);
    let options = EvolveOptions {
        dt,
        max_steps: a.steps,
        checkpoint_every: (a.steps / a.checkpoints.max(1)).max(1),
        residual_target: target,
    };
    let run = lfp_evolve(LfpState::zero(grid, &samples), &kernel, &samples, &options)?;
    io::write_trajectory(&ctx.output("trajectory.csv"), &run.checkpoints)?;
    io::write_spectrum(&ctx.output("lfp_spectrum.csv"), &run.final_state.spectrum)?;
    if ctx.plot() {
        let plot = LinePlot {
            title: "LFP residual".into(),
            x_label: "t".into(),
            y_label: "max |u|".into(),
            series: vec![Series::new(
                "max residual",
                run.checkpoints
                    .iter()
                    .filter(|c| c.max_residual > 0.0)
                    .map(|c| (c.time, c.max_residual))
                    .collect(),
            )],
            log_y: true,
            ..Default::default()
        };
        io::write_text(&ctx.output("trajectory.svg"), &plot.render(ctx.timestamp()))?;
    }
    println!(
        "steps={} t={} max_residual={} energy_non_increasing={}",
        run.steps,
        run.final_state.time,
        run.final_state.max_residual(),
        run.energy_non_increasing()
    );
    if let Some(tol) = a.tol {
        let residual = run.final_state.max_residual();
        if residual >= target {
            return Err(Error::NotConverged {
                residual,
                target,
                steps: run.steps,
            });
        }
        let reference = weighted_minimum_norm(&kernel, &samples)?;
        let diff = run
            .final_state
            .spectrum
            .coeffs()
            .iter()
            .zip(reference.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        io::write_table(
            &ctx.output("lfp_equivalence.csv"),
            &["max_coefficient_difference", "tol", "passed", "steps", "max_residual", "energy_non_increasing"],
            [vec![
                diff.to_string(),
                tol.to_string(),
                (diff < tol).to_string(),
                run.steps.to_string(),
                residual.to_string(),
                run.energy_non_increasing().to_string(),
            ]],
        )?;
        println!("equivalence: max coefficient difference {diff} (tol {tol}) {}", if diff < tol { "pass" } else { "fail" });
    }
    Ok(())
}
