use std::path::PathBuf;

use iconv_core::padding::{format_modes, parse_modes};
use iconv_core::{PadMode, Precision, Real};
use serde::Serialize;

use crate::args::Common;
use crate::failure::{Failure, Outcome};

/// Fully resolved settings of one run, echoed into its report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(serialize_with = "modes_token")]
    pub x_mode: Vec<PadMode>,
    #[serde(serialize_with = "modes_token")]
    pub w_mode: Vec<PadMode>,
    pub size: Vec<usize>,
    pub channels: usize,
    pub radius: usize,
    pub trials: usize,
    pub seed: u64,
    pub precision: Precision,
    pub tolerance: f64,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub report: Option<PathBuf>,
    pub rows: Option<Vec<usize>>,
    pub depth: usize,
    pub expect_failure: bool,
}

fn modes_token<S: serde::Serializer>(modes: &[PadMode], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_modes(modes))
}

/// Per-command defaults for flags the user left out.
pub struct Defaults {
    pub x_mode: &'static str,
    pub w_mode: Option<&'static str>,
    pub size: &'static str,
    pub channels: usize,
    pub trials: usize,
    pub depth: usize,
    /// Tolerance when not given, by precision.
    pub tolerance: fn(Precision) -> f64,
}

pub fn default_tolerance(p: Precision) -> f64 {
    match p {
        Precision::Single => f32::ROUNDTRIP_TOL,
        Precision::Double => f64::ROUNDTRIP_TOL,
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn modes(token: &str, flag: &str) -> Outcome<Vec<PadMode>> {
    let m = parse_modes(token).map_err(|e| usage(format!("--{flag}: {e}")))?;
    if m.is_empty() || m.len() > 2 {
        return Err(usage(format!(
            "--{flag}: give one or two modes, got {token:?}"
        )));
    }
    Ok(m)
}

fn list(token: &str, flag: &str) -> Outcome<Vec<usize>> {
    token
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("--{flag}: {t:?} is not a non-negative integer")))
        })
        .collect()
}

fn positive(value: usize, flag: &str) -> Outcome<usize> {
    if value == 0 {
        return Err(usage(format!("--{flag} must be positive")));
    }
    Ok(value)
}

impl RunConfig {
    pub fn resolve(command: &'static str, a: &Common, d: &Defaults) -> Outcome<Self> {
        let x_mode = modes(a.x_mode.as_deref().unwrap_or(d.x_mode), "x-mode")?;
        // kernel modes default to the input modes where the command says so
        let w_token = a
            .w_mode
            .clone()
            .or(d.w_mode.map(str::to_string))
            .unwrap_or_else(|| format_modes(&x_mode));
        let w_mode = modes(&w_token, "w-mode")?;
        if w_mode.len() != x_mode.len() {
            return Err(usage(format!(
                "--x-mode has {} axes but --w-mode has {}",
                x_mode.len(),
                w_mode.len()
            )));
        }

        let mut size = list(a.size.as_deref().unwrap_or(d.size), "size")?;
        for &s in &size {
            positive(s, "size")?;
        }
        if size.len() == 1 && x_mode.len() == 2 {
            size.push(size[0]);
        }
        if size.len() != x_mode.len() && command != "table" {
            return Err(usage(format!(
                "--size has {} axes but the modes have {}",
                size.len(),
                x_mode.len()
            )));
        }

        let precision: Precision = match &a.precision {
            Some(p) => p
                .parse()
                .map_err(|_| usage(format!("--precision must be single or double, got {p:?}")))?,
            None => Precision::Double,
        };
        let tolerance = a.tolerance.unwrap_or((d.tolerance)(precision));
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(usage("--tolerance must be a positive number"));
        }
        let rows = a.rows.as_deref().map(|r| list(r, "rows")).transpose()?;
        if let Some(rows) = &rows {
            if let Some(bad) = rows.iter().find(|&&r| !(1..=20).contains(&r)) {
                return Err(usage(format!("--rows: no row {bad}, rows run 1 to 20")));
            }
        }

        Ok(Self {
            command,
            x_mode,
            w_mode,
            size,
            channels: positive(a.channels.unwrap_or(d.channels), "channels")?,
            radius: a.radius.unwrap_or(1),
            trials: positive(a.trials.unwrap_or(d.trials), "trials")?,
            seed: a.seed.unwrap_or(0),
            precision,
            tolerance,
            input: a.input.clone(),
            output: a.output.clone(),
            report: a.report.clone(),
            rows,
            depth: positive(a.depth.unwrap_or(d.depth), "depth")?,
            expect_failure: a.expect_failure,
        })
    }
}
