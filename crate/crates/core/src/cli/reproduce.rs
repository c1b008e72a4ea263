//! Preset experiments at desk scale.

use super::args::{ReproduceArgs, Target};
use super::commands::{
    convergence_points, critical_sweep, emit_field, plot_fields, run_sweep, single_point_width, write_bandlimit_outputs,
    rbf_decay_table,
};
use super::Context;
use crate::critical::{critical_constant, gaussian_sobolev_norm, NormVariant};
use crate::diagnostics::{convergence_in_bandlimit, spike_width};
use crate::error::Result;
use crate::grid::{FrequencyGrid, Spectrum};
use crate::io;
use crate::samples::SampleSet;
use crate::solver::{solve_single_point_analytic, SolveConfig};
use crate::svg::{LinePlot, Series};

pub const POINTS_1D: &str = include_str!("../../data/points_1d.csv");
pub const POINTS_2D: &str = include_str!("../../data/points_2d.csv");

pub const FIG1_ALPHAS: [f64; 4] = [0.5, 1.5, 3.0, 10.0];
pub const FIG3_ALPHAS_1D: [f64; 4] = [0.5, 1.5, 3.0, 10.0];
pub const FIG3_ALPHAS_2D: [f64; 4] = [1.0, 1.9, 4.0, 10.0];
pub const MESH: f64 = 0.1;
pub const LAMBDA_1D: f64 = 0.5;
pub const LAMBDA_2D: f64 = 0.2;

pub(crate) fn run(a: &ReproduceArgs, ctx: &mut Context) -> Result<()> {
    match a.target {
        Target::Fig1 => fig1(ctx, a.full_scale),
        Target::Fig2 => fig2(ctx),
        Target::Fig3 => fig3(ctx),
        Target::Critical => critical(ctx),
        Target::All => {
            fig1(ctx, a.full_scale)?;
            fig2(ctx)?;
            fig3(ctx)?;
            critical(ctx)
        }
    }
}

fn preset(ctx: &mut Context, name: &str, text: &str) -> Result<SampleSet> {
    let samples = io::parse_samples(text, name, None)?;
    ctx.input_bytes(&format!("preset:{name}"), text.as_bytes());
    io::write_text(&ctx.output(name), text)?;
    Ok(samples)
}

/// Single sample at the origin: the closed form over `[-1, 1]`.
fn fig1(ctx: &mut Context, full_scale: bool) -> Result<()> {
    let m = if full_scale { 1_000_000 } else { 10_000 };
    let (mesh, lambda) = (0.01, 1.0);
    let xs: Vec<f64> = (0..=2000).map(|i| -1.0 + i as f64 / 1000.0).collect();
    let points: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    let mut summary = Vec::new();
    let mut series = Vec::new();
    for alpha in FIG1_ALPHAS {
        let sol = solve_single_point_analytic(m, mesh, alpha, lambda)?;
        let values = sol.evaluate_many(&xs);
        io::write_field(&ctx.output(&format!("fig1_field_alpha{alpha}.csv")), &points, &values)?;
        let width = single_point_width(&sol, 1.0)?;
        println!("fig1 alpha={alpha} h(0)={} spike_width={width}", sol.value_at_origin());
        summary.push(vec![
            alpha.to_string(),
            m.to_string(),
            lambda.to_string(),
            sol.z_sq().to_string(),
            sol.value_at_origin().to_string(),
            width.to_string(),
        ]);
        series.push(Series::new(format!("alpha={alpha}"), xs.iter().copied().zip(values).collect()));
    }
    io::write_table(
        &ctx.output("fig1_summary.csv"),
        &["alpha", "M", "lambda", "z_sq", "h0", "spike_width"],
        summary,
    )?;
    if ctx.plot() {
        let plot = LinePlot {
            title: format!("single point, M = {m}"),
            x_label: "x".into(),
            y_label: "h".into(),
            series,
            ..Default::default()
        };
        io::write_text(&ctx.output("fig1.svg"), &plot.render(ctx.timestamp()))?;
    }
    Ok(())
}

/// Overlap of solutions across band limits at α = 10.
fn fig2(ctx: &mut Context) -> Result<()> {
    let alpha = 10.0;
    let cases: [(&str, &str, f64, [usize; 3]); 2] = [
        ("points_1d.csv", POINTS_1D, LAMBDA_1D, [250, 500, 1000]),
        ("points_2d.csv", POINTS_2D, LAMBDA_2D, [25, 50, 100]),
    ];
    for (name, text, lambda, band_limits) in cases {
        let samples = preset(ctx, name, text)?;
        let config = SolveConfig::new(alpha, lambda)?;
        let points = convergence_points(&samples, None);
        let table = convergence_in_bandlimit(&samples, &config, MESH, &band_limits, &points)?;
        write_bandlimit_outputs(ctx, &format!("fig2_{}d", samples.dim()), &table, &samples)?;
    }
    Ok(())
}

/// Exponent sweeps straddling α = d.
fn fig3(ctx: &mut Context) -> Result<()> {
    let samples = preset(ctx, "points_1d.csv", POINTS_1D)?;
    let grid = FrequencyGrid::new(1, 1000, MESH)?;
    let (rows, spectra) = run_sweep(&grid, &samples, LAMBDA_1D, &FIG3_ALPHAS_1D, None)?;
    io::write_sweep(&ctx.output("fig3_sweep.csv"), &rows)?;
    let mut widths = Vec::new();
    for (alpha, spectrum) in FIG3_ALPHAS_1D.iter().zip(&spectra) {
        emit_field_quiet(ctx, &format!("fig3_1d_alpha{alpha}"), spectrum, &samples)?;
        let center = samples.point(0).to_vec();
        widths.push(vec![alpha.to_string(), center[0].to_string(), spike_width(spectrum, &center)?.to_string()]);
    }
    io::write_table(&ctx.output("fig3_spike_width.csv"), &["alpha", "center", "width"], widths)?;
    if ctx.plot() {
        let fields = labelled(&FIG3_ALPHAS_1D, &spectra);
        plot_fields(ctx, "fig3_1d", "1-D fields by exponent", &fields, &samples)?;
    }

    let samples = preset(ctx, "points_2d.csv", POINTS_2D)?;
    let grid = FrequencyGrid::new(2, 100, MESH)?;
    let (rows, spectra) = run_sweep(&grid, &samples, LAMBDA_2D, &FIG3_ALPHAS_2D, None)?;
    io::write_sweep(&ctx.output("fig3_sweep_2d.csv"), &rows)?;
    for (alpha, spectrum) in FIG3_ALPHAS_2D.iter().zip(&spectra) {
        emit_field(ctx, &format!("fig3_2d_alpha{alpha}"), spectrum, &samples)?;
    }
    if ctx.plot() {
        let fields = labelled(&FIG3_ALPHAS_2D, &spectra);
        plot_fields(ctx, "fig3_2d_slice", "2-D fields along x2 = 0.5", &fields, &samples)?;
    }
    Ok(())
}

fn labelled<'a>(alphas: &[f64], spectra: &'a [Spectrum]) -> Vec<(String, &'a Spectrum)> {
    alphas.iter().zip(spectra).map(|(a, s)| (format!("alpha={a}"), s)).collect()
}

/// Field CSV only; the 1-D overlay plot replaces the per-exponent plots.
fn emit_field_quiet(ctx: &mut Context, stem: &str, spectrum: &Spectrum, samples: &SampleSet) -> Result<()> {
    let window = crate::diagnostics::EvalWindow::around(samples);
    let points = super::commands::field_points(&window);
    let values = spectrum.evaluate_many(&points)?.values;
    io::write_field(&ctx.output(&format!("{stem}_field.csv")), &points, &values)
}

/// Critical constants, the three limit regimes in 1-D and RBF norm decay.
fn critical(ctx: &mut Context) -> Result<()> {
    let mut rows = Vec::new();
    for d in 1..=3 {
        let c = critical_constant(d);
        let v = gaussian_sobolev_norm(1e-4, d as f64, d, NormVariant::Bracket)?;
        println!("d={d} C_d={c} norm(1e-4)={v}");
        rows.push(vec![d.to_string(), c.to_string(), v.to_string(), ((v - c) / c).to_string()]);
    }
    io::write_table(
        &ctx.output("critical_constants.csv"),
        &["dim", "c_d", "bracket_at_1e-4", "relative_error"],
        rows,
    )?;
    let sigmas = [1e-1, 1e-2, 1e-3, 1e-4];
    for alpha in [0.5, 1.0, 2.0] {
        critical_sweep(ctx, &format!("critical_d1_alpha{alpha}"), 1, alpha, &sigmas, NormVariant::Bracket)?;
    }
    let samples = preset(ctx, "points_1d.csv", POINTS_1D)?;
    let decay_sigmas = [0.1, 0.05, 0.025, 0.0125];
    for alpha in [0.5, 2.0] {
        rbf_decay_table(ctx, &format!("rbf_decay_alpha{alpha}"), &samples, alpha, &decay_sigmas, 0.01, None)?;
    }
    Ok(())
}
