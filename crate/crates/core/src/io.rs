//! CSV readers and writers.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! inputs give byte-identical files. Line endings are LF.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::critical::{DecayRow, LimitClassification};
use crate::diagnostics::{BandLimitConvergence, SweepRow};
use crate::error::{Error, Result};
use crate::grid::{enumerate_indices, FrequencyGrid, MultiIndex, Spectrum};
use crate::lfp::Checkpoint;
use crate::samples::SampleSet;

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        other => Error::Csv {
            path: path.display().to_string(),
            line,
            message: format!("{other:?}"),
        },
    }
}

fn write_rows(path: &Path, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn axis_names(prefix: &str, dim: usize) -> Vec<String> {
    (1..=dim).map(|k| format!("{prefix}{k}")).collect()
}

/// Reads a samples file with header `x1,…,xd,y`. When `expected_dim` is
/// given the header must agree with it.
pub fn read_samples(path: &Path, expected_dim: Option<usize>) -> Result<SampleSet> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    parse_samples(&text, &path.display().to_string(), expected_dim)
}

/// [`read_samples`] from an in-memory string; `source` names it in errors.
pub fn parse_samples(text: &str, source: &str, expected_dim: Option<usize>) -> Result<SampleSet> {
    let fail = |line: u64, message: String| Error::Csv {
        path: source.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let head = match records.next() {
        Some(r) => r.map_err(|e| fail(1, e.to_string()))?,
        None => return Err(fail(1, "file is empty; expected header x1,...,xd,y".into())),
    };
    let names: Vec<&str> = head.iter().collect();
    if names.len() < 2 {
        return Err(fail(1, format!("header needs at least two columns, got {}", names.len())));
    }
    let dim = names.len() - 1;
    let mut expected = axis_names("x", dim);
    expected.push("y".into());
    if names != expected {
        return Err(fail(1, format!("header must be {}, got {}", expected.join(","), names.join(","))));
    }
    if let Some(d) = expected_dim {
        if d != dim {
            return Err(fail(1, format!("header declares dimension {dim} but --dim is {d}")));
        }
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for record in records {
        let record = record.map_err(|e| fail(e.position().map(|p| p.line()).unwrap_or(0), e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != dim + 1 {
            return Err(fail(line, format!("expected {} columns, got {}", dim + 1, record.len())));
        }
        let mut values = Vec::with_capacity(dim + 1);
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                fail(line, format!("column {} ({}): cannot parse '{cell}' as a number", col + 1, expected[col]))
            })?;
            if !v.is_finite() {
                return Err(fail(line, format!("column {} ({}): value is not finite", col + 1, expected[col])));
            }
            values.push(v);
        }
        labels.push(values.pop().expect("dim + 1 columns"));
        points.push(values);
    }
    if points.is_empty() {
        return Err(fail(1, "no data rows after the header".into()));
    }
    SampleSet::new(points, labels)
}

pub fn write_samples(path: &Path, samples: &SampleSet) -> Result<()> {
    let mut head = axis_names("x", samples.dim());
    head.push("y".into());
    write_rows(
        path,
        &head,
        samples.points().iter().zip(samples.labels()).map(|(x, y)| {
            let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
            row.push(y.to_string());
            row
        }),
    )
}

/// Header `j1,…,jd,re,im`, one row per index in storage order.
pub fn write_spectrum(path: &Path, spectrum: &Spectrum) -> Result<()> {
    let grid = spectrum.grid();
    let mut head = axis_names("j", grid.dim());
    head.extend(["re".to_string(), "im".to_string()]);
    write_rows(
        path,
        &head,
        enumerate_indices(grid)
            .into_iter()
            .zip(spectrum.coeffs())
            .map(|(j, c)| {
                let mut row: Vec<String> = j.components().iter().map(i64::to_string).collect();
                row.push(c.re.to_string());
                row.push(c.im.to_string());
                row
            }),
    )
}

/// Reads a spectrum file written by [`write_spectrum`]. The band limit is
/// taken from the largest index; rows may come in any order.
pub fn read_spectrum(path: &Path, mesh: f64) -> Result<Spectrum> {
    let fail = |line: u64, message: String| Error::Csv {
        path: path.display().to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let head = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if head.len() < 3 {
        return Err(fail(1, "header must be j1,...,jd,re,im".into()));
    }
    let dim = head.len() - 2;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let index = (0..dim)
            .map(|k| {
                record[k]
                    .parse::<i64>()
                    .map_err(|_| fail(line, format!("column {}: '{}' is not an integer", k + 1, &record[k])))
            })
            .collect::<Result<Vec<_>>>()?;
        let parse = |k: usize| {
            record[k]
                .parse::<f64>()
                .map_err(|_| fail(line, format!("column {}: cannot parse '{}'", k + 1, &record[k])))
        };
        rows.push((line, MultiIndex(index), Complex64::new(parse(dim)?, parse(dim + 1)?)));
    }
    let band = rows
        .iter()
        .flat_map(|(_, j, _)| j.components().iter().map(|c| c.unsigned_abs() as usize))
        .max()
        .ok_or_else(|| fail(1, "no coefficient rows".into()))?;
    let grid = FrequencyGrid::new(dim, band.max(1), mesh)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (line, j, c) in rows {
        let flat = grid.flat_index(&j).ok_or_else(|| fail(line, "index outside the grid".into()))?;
        coeffs[flat] = c;
    }
    let hermitian_candidate = Spectrum::new(grid, coeffs.clone())?;
    if hermitian_candidate.hermitian_defect() <= crate::grid::HERMITIAN_TOL * hermitian_candidate.max_abs().max(1.0) {
        Spectrum::new_hermitian(grid, coeffs)
    } else {
        Ok(hermitian_candidate)
    }
}

/// Header `x1,…,xd,h`.
pub fn write_field(path: &Path, points: &[Vec<f64>], values: &[f64]) -> Result<()> {
    let dim = points.first().map(|p| p.len()).unwrap_or(1);
    let mut head = axis_names("x", dim);
    head.push("h".into());
    write_rows(
        path,
        &head,
        points.iter().zip(values).map(|(x, h)| {
            let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
            row.push(h.to_string());
            row
        }),
    )
}

/// Header `alpha,M,lambda,tau,classification,q_alpha,max_residual`.
pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> Result<()> {
    write_rows(
        path,
        &header(&["alpha", "M", "lambda", "tau", "classification", "q_alpha", "max_residual"]),
        rows.iter().map(|r| {
            vec![
                r.alpha.to_string(),
                r.band_limit.to_string(),
                r.lambda.to_string(),
                r.report.triviality_index.to_string(),
                r.report.classification.to_string(),
                r.report.q_alpha.to_string(),
                r.report.max_residual.to_string(),
            ]
        }),
    )
}

/// Header `sigma,value,scaled_value,verdict`; every row carries the verdict.
pub fn write_critical(path: &Path, result: &LimitClassification) -> Result<()> {
    let scaled = result.scaled_values();
    write_rows(
        path,
        &header(&["sigma", "value", "scaled_value", "verdict"]),
        result.evidence.iter().zip(scaled).map(|(p, s)| {
            vec![
                p.sigma.to_string(),
                p.value.to_string(),
                s.to_string(),
                result.verdict.label().to_string(),
            ]
        }),
    )
}

/// Header `t,max_residual,energy`.
pub fn write_trajectory(path: &Path, checkpoints: &[Checkpoint]) -> Result<()> {
    write_rows(
        path,
        &header(&["t", "max_residual", "energy"]),
        checkpoints
            .iter()
            .map(|c| vec![c.time.to_string(), c.max_residual.to_string(), c.energy.to_string()]),
    )
}

/// Header `sigma,q_grid,q_quadrature`; the last column is empty above one
/// dimension.
pub fn write_decay(path: &Path, rows: &[DecayRow]) -> Result<()> {
    write_rows(
        path,
        &header(&["sigma", "q_grid", "q_quadrature"]),
        rows.iter().map(|r| {
            vec![
                r.sigma.to_string(),
                r.q_grid.to_string(),
                r.q_quadrature.map(|q| q.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

/// Header `M_a,M_b,sup_difference`.
pub fn write_convergence(path: &Path, table: &BandLimitConvergence) -> Result<()> {
    write_rows(
        path,
        &header(&["M_a", "M_b", "sup_difference"]),
        table.sup_differences.iter().map(|&(a, b, d)| {
            vec![a.to_string(), b.to_string(), d.to_string()]
        }),
    )
}

/// Generic table with the given header.
pub fn write_table(path: &Path, columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    write_rows(path, &header(columns), rows)
}

/// Writes raw text, for the SVG and manifest outputs.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_file() {
        let s = parse_samples("x1,y\n-0.5,0.9\n0.5,0.9\n", "mem", Some(1)).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.labels(), &[0.9, 0.9]);
    }

    #[test]
    fn malformed_inputs() {
        let msg = |text: &str| parse_samples(text, "mem", None).unwrap_err().to_string();
        assert!(msg("x1,y\n").contains("no data rows"));
        assert!(msg("").contains("empty"));
        assert!(msg("x1,y\n1,2,3\n").contains("line 2"));
        let bad = msg("x1,x2,y\n1,2,3\n1,abc,3\n");
        assert!(bad.contains("line 3") && bad.contains("column 2"), "{bad}");
        assert!(msg("a,b\n1,2\n").contains("header"));
        assert!(matches!(
            parse_samples("x1,y\n1,2\n1,3\n", "mem", None),
            Err(Error::DuplicatePoint { first: 1, second: 2 })
        ));
        assert!(parse_samples("x1,x2,y\n1,2,3\n", "mem", Some(1))
            .unwrap_err()
            .to_string()
            .contains("--dim"));
    }

    #[test]
    fn spectrum_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let grid = FrequencyGrid::new(2, 2, 0.25).unwrap();
        let coeffs: Vec<Complex64> = (0..grid.len())
            .map(|k| {
                let m = grid.mirror(k) as f64;
                let k = k as f64;
                Complex64::new(k + m, 0.1 * (k - m))
            })
            .collect();
        let s = Spectrum::new_hermitian(grid, coeffs).unwrap();
        write_spectrum(&path, &s).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("j1,j2,re,im\n-2,-2,"));
        assert!(!text.contains('\r'));
        let back = read_spectrum(&path, 0.25).unwrap();
        assert_eq!(back, s);
    }
}
