//! Command-line front end.
//!
//! Every run writes `manifest.json` into the output directory, whether it
//! succeeds or not. Exit codes: 0 success, 1 numerical failure, 2 usage or
//! IO error.

mod args;
mod commands;
mod reproduce;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io::write_text;

pub use args::{Cli, Command};

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "SPECBOUND_THREADS";

/// Runs the command line given as `argv` (program name first) and returns
/// the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let expanded = match expand_config(&argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&expanded) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = match resolve_threads(cli.threads) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = fs::create_dir_all(&cli.out_dir) {
        eprintln!("error: {}", Error::io(&cli.out_dir, e));
        return 2;
    }

    let started = Instant::now();
    let mut ctx = Context::new(cli.out_dir.clone(), cli.plot, !cli.no_timestamp);
    let result = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| commands::dispatch(&cli.command, &mut ctx)),
        Err(e) => Err(Error::InvalidParameter(format!("cannot start thread pool: {e}"))),
    };
    let code = match &result {
        Ok(()) => 0,
        Err(e) if e.is_numerical() => 1,
        Err(_) => 2,
    };
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    let manifest = ctx.manifest(&cli, &argv, threads, started.elapsed().as_secs_f64(), &result, code);
    let path = cli.out_dir.join("manifest.json");
    if let Err(e) = write_text(&path, &manifest) {
        eprintln!("error: {e}");
        return if code == 0 { 2 } else { code };
    }
    code
}

fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    let threads = match flag {
        Some(t) => t,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{THREADS_ENV}='{v}' is not a thread count")))?,
            Err(_) => rayon::current_num_threads(),
        },
    };
    if threads == 0 {
        return Err(Error::InvalidParameter("thread count must be at least 1".into()));
    }
    Ok(threads)
}

/// Splices `key = value` lines from `--config FILE` in after the subcommand
/// name as `--key=value`. Keys already given on the command line are
/// skipped so the command line wins; `true`/`false` toggle bare flags.
fn expand_config(argv: &[String]) -> Result<Vec<String>> {
    let mut config = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut iter = argv.iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| Error::InvalidParameter("--config needs a file".into()))?;
            config = Some(PathBuf::from(path));
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
        } else {
            rest.push(arg.clone());
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let given = |key: &str| {
        let flag = format!("--{key}");
        rest.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
    };
    let mut injected = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Csv {
            path: path.display().to_string(),
            line: n as u64 + 1,
            message: "expected 'key = value'".into(),
        })?;
        let (key, value) = (key.trim(), value.trim().trim_matches('"'));
        if given(key) {
            continue;
        }
        match value {
            "true" => injected.push(format!("--{key}")),
            "false" => {}
            _ => injected.push(format!("--{key}={value}")),
        }
    }
    let position = rest
        .iter()
        .position(|a| args::SUBCOMMANDS.contains(&a.as_str()))
        .map(|p| p + 1)
        .unwrap_or(rest.len());
    rest.splice(position..position, injected);
    Ok(rest)
}

/// Output bookkeeping shared by all subcommands.
pub(crate) struct Context {
    out_dir: PathBuf,
    plot: bool,
    timestamp: bool,
    outputs: Vec<PathBuf>,
    inputs: Vec<(String, String)>,
}

impl Context {
    fn new(out_dir: PathBuf, plot: bool, timestamp: bool) -> Self {
        Self {
            out_dir,
            plot,
            timestamp,
            outputs: Vec::new(),
            inputs: Vec::new(),
        }
    }

    pub(crate) fn plot(&self) -> bool {
        self.plot
    }

    pub(crate) fn timestamp(&self) -> bool {
        self.timestamp
    }

    /// Path of an output file, recorded for the manifest.
    pub(crate) fn output(&mut self, name: &str) -> PathBuf {
        let path = self.out_dir.join(name);
        if !self.outputs.contains(&path) {
            self.outputs.push(path.clone());
        }
        path
    }

    pub(crate) fn input_file(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        self.input_bytes(&path.display().to_string(), &bytes);
        Ok(())
    }

    pub(crate) fn input_bytes(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push((name.to_string(), hex::encode(Sha256::digest(bytes))));
    }

    fn manifest(&self, cli: &Cli, argv: &[String], threads: usize, seconds: f64, result: &Result<()>, code: i32) -> String {
        let outputs: Vec<String> = self
            .outputs
            .iter()
            .filter(|p| fs::metadata(p).map(|m| m.len() > 0).unwrap_or(false))
            .map(|p| p.display().to_string())
            .collect();
        let inputs: Vec<_> = self
            .inputs
            .iter()
            .map(|(path, digest)| json!({ "path": path, "sha256": digest }))
            .collect();
        let value = json!({
            "command": cli.command.name(),
            "argv": argv,
            "parameters": serde_json::to_value(&cli.command).unwrap_or(serde_json::Value::Null),
            "out_dir": cli.out_dir.display().to_string(),
            "seed": cli.seed,
            "threads": threads,
            "plot": cli.plot,
            "inputs": inputs,
            "outputs": outputs,
            "duration_seconds": seconds,
            "status": if result.is_ok() { "ok" } else { "error" },
            "error": result.as_ref().err().map(|e| e.to_string()),
            "exit_code": code,
        });
        let mut text = serde_json::to_string_pretty(&value).unwrap_or_default();
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn config_lines_follow_subcommand_and_yield_to_argv() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.conf");
        fs::write(&cfg, "# preset\nalpha = 3\nlambda = 0.5\nplot = true\nno-timestamp = false\n").unwrap();
        let argv = strings(&["specbound", "solve", "--config", cfg.to_str().unwrap(), "--alpha", "10"]);
        let out = expand_config(&argv).unwrap();
        assert_eq!(out, strings(&["specbound", "solve", "--lambda=0.5", "--plot", "--alpha", "10"]));
    }

    #[test]
    fn threads_must_be_positive() {
        assert!(resolve_threads(Some(0)).is_err());
        assert_eq!(resolve_threads(Some(3)).unwrap(), 3);
    }
}
