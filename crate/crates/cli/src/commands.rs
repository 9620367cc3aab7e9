use iconv_core::io::{
    decode_tensor, encode_tensor, read_kernel_file, read_pgm, read_signal, read_tensor_file,
    write_pgm, write_tensor_file,
};
use iconv_core::layer::{periods_for, Layer};
use iconv_core::modes::{kernel_zero_flags, require_invertible, row_by_id, transition, TABLE};
use iconv_core::oracle::{supported_period, verify_table_row, RowReport};
use iconv_core::padding::format_modes;
use iconv_core::sampling::{random_kernel, random_signal, rng, well_conditioned_kernel};
use iconv_core::spectral::FrequencySet;
use iconv_core::{
    condition_report, forced_inverse, forward, inverse, ChannelSignal, Error, KernelSpec,
    LayerStack, PadMode, Precision, Real,
};
use serde_json::{json, Value};

use crate::args::Common;
use crate::config::RunConfig;
use crate::failure::{Failure, Outcome, EXIT_OK, EXIT_VERIFY};
use crate::report;

/// Report body plus a one-line summary for the terminal.
pub struct Finished {
    pub passed: bool,
    pub body: Value,
    pub summary: String,
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Runs a command, writes its report and maps the verdict to an exit code.
pub fn finish(config: &RunConfig, result: Finished) -> Outcome<i32> {
    let report = report::build(config, result.body);
    report::emit(config, &report)?;
    if config.report.is_some() {
        eprintln!("{}", result.summary);
    }
    Ok(if result.passed { EXIT_OK } else { EXIT_VERIFY })
}

fn radii(config: &RunConfig) -> Vec<usize> {
    vec![config.radius; config.x_mode.len()]
}

fn roundtrip_error<T: Real>(
    x: &ChannelSignal,
    spec: &KernelSpec,
    x_modes: &[PadMode],
    forced: bool,
) -> iconv_core::Result<f64> {
    let xt = x.cast::<T>();
    let (y, _) = forward(&xt, spec, x_modes)?;
    let back = if forced {
        forced_inverse(&y, spec, x_modes)?
    } else {
        inverse(&y, spec, x_modes)?
    };
    back.cast::<f64>().max_abs_diff(x)
}

pub fn roundtrip(config: &RunConfig) -> Outcome<Finished> {
    let x_modes = &config.x_mode;
    let w_modes = &config.w_mode;
    let invertible = match require_invertible(x_modes, w_modes) {
        Ok(_) => true,
        Err(e @ Error::NonInvertibleModePair { .. }) if !config.expect_failure => {
            return Err(e.into())
        }
        Err(Error::NonInvertibleModePair { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    let rows = x_modes
        .iter()
        .zip(w_modes)
        .map(|(&x, &w)| transition(x, w))
        .collect::<iconv_core::Result<Vec<_>>>()?;

    let file_input = match &config.input {
        Some(path) => {
            let s = read_signal(path)?;
            if s.ndim() != x_modes.len() {
                return Err(usage(format!(
                    "{} is {}D but {} mode(s) were given",
                    path.display(),
                    s.ndim(),
                    x_modes.len()
                )));
            }
            Some(s)
        }
        None => None,
    };
    let (dims, channels) = match &file_input {
        Some(s) => (s.dims().to_vec(), s.channels()),
        None => (config.size.clone(), config.channels),
    };
    let periods = periods_for(x_modes, &dims)?;
    let forced = !invertible;

    let mut g = rng(config.seed);
    let mut errors = Vec::with_capacity(config.trials);
    let mut ratios = Vec::with_capacity(config.trials);
    for _ in 0..config.trials {
        let spec = if invertible {
            well_conditioned_kernel(&mut g, channels, &radii(config), w_modes, x_modes, &periods)?.0
        } else {
            random_kernel(&mut g, channels, &radii(config), w_modes)?
        };
        let drawn;
        let x = match &file_input {
            Some(s) => s,
            None => {
                drawn = random_signal(&mut g, &dims, channels)?;
                &drawn
            }
        };
        ratios.push(condition_report(&spec, x_modes, &periods)?.min_ratio);
        errors.push(match config.precision {
            Precision::Double => roundtrip_error::<f64>(x, &spec, x_modes, forced)?,
            Precision::Single => roundtrip_error::<f32>(x, &spec, x_modes, forced)?,
        });
    }
    let max_error = errors.iter().copied().fold(0.0, f64::max);
    let passed = if config.expect_failure {
        forced && max_error > config.tolerance
    } else {
        max_error <= config.tolerance
    };
    let min_ratio = ratios.iter().flatten().copied().reduce(f64::min);
    let row_ids: Vec<usize> = rows.iter().map(|r| r.row).collect();
    Ok(Finished {
        passed,
        summary: format!(
            "roundtrip rows {row_ids:?}: max_abs_error {max_error:.3e}, tolerance {:e}: {}",
            config.tolerance,
            verdict(passed)
        ),
        body: json!({
            "rows": row_ids,
            "y_mode": format_modes(&rows.iter().map(|r| r.y_mode).collect::<Vec<_>>()),
            "invertible": invertible,
            "inverse": if forced { "forced" } else { "exact" },
            "dims": dims,
            "channels": channels,
            "periods": periods,
            "max_abs_error": max_error,
            "trial_errors": errors,
            "condition": {
                "min_ratio": min_ratio,
                "trial_min_ratios": ratios,
            },
            "passed": passed,
        }),
    })
}

pub fn table(config: &RunConfig) -> Outcome<Finished> {
    let m = match config.size[..] {
        [m] => m,
        _ => return Err(usage("table takes a single period, e.g. --size 16")),
    };
    if m % 2 == 1 {
        return Err(usage(format!("--size {m}: the period must be even")));
    }
    let ids: Vec<usize> = match &config.rows {
        Some(r) => r.clone(),
        None => TABLE.iter().map(|r| r.row).collect(),
    };
    let mut reports: Vec<RowReport> = Vec::with_capacity(ids.len());
    for &id in &ids {
        let period = supported_period(row_by_id(id)?, m);
        reports.push(verify_table_row(id, period, config.trials, config.seed)?);
    }
    let failed: Vec<usize> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.row_id)
        .collect();
    let passed = failed.is_empty();
    Ok(Finished {
        passed,
        summary: format!(
            "table M={m}: {}/{} rows pass{}",
            reports.len() - failed.len(),
            reports.len(),
            if passed {
                String::new()
            } else {
                format!(", failing rows {failed:?}")
            }
        ),
        body: json!({
            "period": m,
            "rows": reports,
            "failed_rows": failed,
            "passed": passed,
        }),
    })
}

pub fn spectrum(config: &RunConfig) -> Outcome<Finished> {
    let periods = config.size.clone();
    if let Some(m) = periods.iter().find(|&&m| m % 2 == 1) {
        return Err(usage(format!("--size {m}: spectrum periods must be even")));
    }
    let (spec, source) = match &config.input {
        Some(path) => {
            let (taps, c_out, c_in, extents) = read_kernel_file(path)?;
            if extents.len() != config.w_mode.len() {
                return Err(usage(format!(
                    "kernel file is {}D but {} kernel mode(s) were given",
                    extents.len(),
                    config.w_mode.len()
                )));
            }
            let spec = KernelSpec::from_extents(taps, c_out, c_in, &extents, config.w_mode.clone())
                .map_err(|e| Failure::Core(Error::Format(e.to_string())))?;
            (spec, "file")
        }
        None => {
            let mut g = rng(config.seed);
            (
                random_kernel(&mut g, config.channels, &radii(config), &config.w_mode)?,
                "random",
            )
        }
    };
    let report = condition_report(&spec, &config.x_mode, &periods)?;
    let zero_lines = FrequencySet::new(
        periods.clone(),
        config
            .w_mode
            .iter()
            .map(|&m| kernel_zero_flags(m))
            .collect::<iconv_core::Result<Vec<_>>>()?,
    );
    let tol = iconv_core::layer::DEFAULT_TOL_SING;
    let mut structural = Vec::new();
    let mut near_singular = Vec::new();
    let records: Vec<Value> = report
        .records
        .iter()
        .map(|r| {
            let on_line = zero_lines.contains_index(&r.frequency);
            if on_line {
                structural.push(r.frequency.clone());
            }
            let weak = !r.in_skip && r.ratio < tol;
            if weak {
                near_singular.push(r.frequency.clone());
            }
            json!({
                "frequency": r.frequency,
                "ratio": r.ratio,
                "in_skip": r.in_skip,
                "structural_zero": on_line,
                "near_singular": weak,
            })
        })
        .collect();
    let summary = format!(
        "spectrum periods {periods:?}: min ratio outside skip {}, {} structural zero(s), {} near-singular",
        report.min_ratio.map_or("n/a".into(), |r| format!("{r:.3e}")),
        structural.len(),
        near_singular.len()
    );
    Ok(Finished {
        passed: true,
        summary,
        body: json!({
            "periods": periods,
            "kernel": {
                "source": source,
                "c_out": spec.c_out(),
                "c_in": spec.c_in(),
                "radii": spec.radii(),
            },
            "tol_sing": tol,
            "records": records,
            "min_ratio": report.min_ratio,
            "min_frequency": report.min_frequency,
            "structural_zeros": structural,
            "near_singular": near_singular,
        }),
    })
}

fn depths(max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(1usize), |d| Some(d * 2))
        .take_while(|&d| d < max)
        .collect();
    out.push(max);
    out
}

pub fn stack(config: &RunConfig) -> Outcome<Finished> {
    let dims = config.size.clone();
    let channels = config.channels;
    let mut g = rng(config.seed);
    let mut layers = Vec::with_capacity(config.depth);
    let mut layer_info = Vec::with_capacity(config.depth);
    let mut x_modes = config.x_mode.clone();
    for index in 0..config.depth {
        let rows = require_invertible(&x_modes, &config.w_mode).map_err(|e| Error::Layer {
            index,
            source: Box::new(e),
        })?;
        let periods = periods_for(&x_modes, &dims)?;
        let (kernel, ratio) = well_conditioned_kernel(
            &mut g,
            channels,
            &radii(config),
            &config.w_mode,
            &x_modes,
            &periods,
        )
        .map_err(|e| Error::Layer {
            index,
            source: Box::new(e),
        })?;
        let y_modes: Vec<PadMode> = rows.iter().map(|r| r.y_mode).collect();
        layer_info.push(json!({
            "index": index,
            "x_mode": format_modes(&x_modes),
            "w_mode": format_modes(&config.w_mode),
            "y_mode": format_modes(&y_modes),
            "rows": rows.iter().map(|r| r.row).collect::<Vec<_>>(),
            "min_ratio": ratio,
        }));
        layers.push(Layer {
            kernel,
            x_modes: x_modes.clone(),
        });
        x_modes = y_modes;
    }

    let inputs = (0..config.trials)
        .map(|_| random_signal(&mut g, &dims, channels))
        .collect::<iconv_core::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut passed = true;
    for depth in depths(config.depth) {
        let stack = LayerStack::new(layers[..depth].to_vec())?;
        let (mut double, mut single) = (0.0f64, 0.0f64);
        for x in &inputs {
            let (y, _) = stack.forward(x)?;
            double = double.max(stack.inverse(&y)?.max_abs_diff(x)?);
            let (ys, _) = stack.forward(&x.cast::<f32>())?;
            single = single.max(stack.inverse(&ys)?.cast::<f64>().max_abs_diff(x)?);
        }
        let ok = double <= single && double <= config.tolerance;
        passed &= ok;
        rows.push(json!({
            "depth": depth,
            "double_error": double,
            "single_error": single,
            "double_not_worse": double <= single,
            "passed": ok,
        }));
    }
    let last = rows.last().cloned().unwrap_or(Value::Null);
    Ok(Finished {
        passed,
        summary: format!(
            "stack depth {}: double {:.3e}, single {:.3e}: {}",
            config.depth,
            last["double_error"].as_f64().unwrap_or(f64::NAN),
            last["single_error"].as_f64().unwrap_or(f64::NAN),
            verdict(passed)
        ),
        body: json!({
            "dims": dims,
            "channels": channels,
            "final_mode": format_modes(&x_modes),
            "layers": layer_info,
            "depths": rows,
            "passed": passed,
        }),
    })
}

fn is_pgm(path: &std::path::Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

/// Shape mismatches on file data are data errors here, not usage errors.
fn as_data_error(e: Error) -> Failure {
    match e {
        Error::Shape(msg) => Failure::Core(Error::Format(msg)),
        other => Failure::Core(other),
    }
}

pub fn convert(config: &RunConfig, args: &Common) -> Outcome<Finished> {
    let (Some(input), Some(output)) = (&config.input, &config.output) else {
        return Err(usage("convert needs --input and --output"));
    };
    let bytes = std::fs::read(input).map_err(Error::Io)?;
    let from = if bytes.starts_with(b"P5") {
        "pgm"
    } else {
        "icnv"
    };
    let to = if is_pgm(output) { "pgm" } else { "icnv" };
    let (dims, channels, precision) = match (from, to) {
        ("icnv", "icnv") => {
            // raw tensor copy keeps any rank, so kernel files convert too
            let t = decode_tensor(&bytes)?;
            let precision = if args.precision.is_some() {
                config.precision
            } else {
                t.precision
            };
            let encoded = encode_tensor(&t.data, &t.dims, t.channels, precision)?;
            std::fs::write(output, encoded).map_err(Error::Io)?;
            (t.dims, t.channels, Some(precision))
        }
        (_, "icnv") => {
            let s = read_pgm(input)?;
            write_tensor_file(&s, output, config.precision)?;
            (s.dims().to_vec(), 1, Some(config.precision))
        }
        _ => {
            let s = if from == "pgm" {
                read_pgm(input)?
            } else {
                read_tensor_file(input)?
            };
            write_pgm(&s, output).map_err(as_data_error)?;
            (s.dims().to_vec(), s.channels(), None)
        }
    };
    Ok(Finished {
        passed: true,
        summary: format!(
            "converted {} ({from}) to {} ({to})",
            input.display(),
            output.display()
        ),
        body: json!({
            "from": from,
            "to": to,
            "dims": dims,
            "channels": channels,
            "precision": precision,
        }),
    })
}
