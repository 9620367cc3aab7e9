//! Browser demo: three operations exposed to JavaScript, each taking plain
//! strings and numbers and returning a JSON document for the page to plot.
//!
//! The `*_json` functions are ordinary Rust and carry the logic; the
//! `#[wasm_bindgen]` wrappers only translate errors.

use iconv_core::layer::{forward_full, periods_for};
use iconv_core::modes::{is_invertible, kernel_zero_flags, transition};
use iconv_core::sampling::{random_kernel, random_signal, rng, well_conditioned_kernel};
use iconv_core::spectral::dft_forward;
use iconv_core::{
    forced_inverse, inverse, kernel_spectrum, pad_1d, ChannelSignal, Error, KernelSpec, PadMode,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub type DemoResult = Result<String, String>;

fn mode(token: &str) -> Result<PadMode, String> {
    token.trim().parse().map_err(|e: Error| e.to_string())
}

fn numbers(text: &str) -> Result<Vec<f64>, String> {
    let values: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| format!("{t:?} is not a number"))
        })
        .collect::<Result<_, _>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err("samples must be finite".into());
    }
    Ok(values)
}

fn magnitudes(x: &[f64]) -> Vec<f64> {
    dft_forward(x).iter().map(|z| z.norm()).collect()
}

fn done(v: Value) -> DemoResult {
    Ok(v.to_string())
}

/// Pads `samples` (comma or space separated) in `mode_token` and returns the
/// period, its DFT magnitudes and the frequencies the mode forces to zero.
pub fn pad_signal_json(samples: &str, mode_token: &str) -> DemoResult {
    let m = mode(mode_token)?;
    let x = numbers(samples)?;
    let xp = pad_1d(&x, m).map_err(|e| e.to_string())?;
    done(json!({
        "mode": m.token(),
        "base_length": x.len(),
        "period": xp.len(),
        "padded": xp,
        "magnitude": magnitudes(&xp),
        "prior_zeros": m.prior_zeros().indices(xp.len()),
    }))
}

/// Random 1D signal and kernel for one mode pair: forward, then the exact
/// inverse when the pair is invertible and a forced inverse when it is not.
/// Curves are for channel 0.
pub fn roundtrip_json(
    x_token: &str,
    w_token: &str,
    n: usize,
    channels: usize,
    seed: u64,
) -> DemoResult {
    let (xm, wm) = (mode(x_token)?, mode(w_token)?);
    let err = |e: Error| e.to_string();
    let row = transition(xm, wm).map_err(err)?;
    if !(2..=256).contains(&n) || !(1..=4).contains(&channels) {
        return Err("length must be 2..=256 and channels 1..=4".into());
    }
    let invertible = is_invertible(xm, wm).map_err(err)?;
    let periods = periods_for(&[xm], &[n]).map_err(err)?;
    let mut g = rng(seed);
    let spec = if invertible {
        well_conditioned_kernel(&mut g, channels, &[1], &[wm], &[xm], &periods)
            .map_err(err)?
            .0
    } else {
        random_kernel(&mut g, channels, &[1], &[wm]).map_err(err)?
    };
    let x = random_signal(&mut g, &[n], channels).map_err(err)?;
    let out = forward_full(&x, &spec, &[xm]).map_err(err)?;
    let y = out.window(&[n]).map_err(err)?;
    let back = if invertible {
        inverse(&y, &spec, &[xm])
    } else {
        forced_inverse(&y, &spec, &[xm])
    }
    .map_err(err)?;
    let period = periods[0];
    done(json!({
        "row": row.row,
        "x_mode": xm.token(),
        "w_mode": wm.token(),
        "y_mode": row.y_mode.token(),
        "invertible": invertible,
        "period": period,
        "x": x.channel(0),
        "y": y.channel(0),
        "y_period": &out.full[..period],
        "x_recovered": back.channel(0),
        "max_abs_error": back.max_abs_diff(&x).map_err(err)?,
    }))
}

/// Spectrum of a single-channel kernel given by its `2r+1` taps, embedded at
/// `period`. Returns real and imaginary parts, the gain `|W(k)| / max |W|` (how
/// much the inverse amplifies frequency `k`, inverted) and which frequencies the
/// input mode lets the inverse skip.
pub fn kernel_spectrum_json(taps: &str, w_token: &str, x_token: &str, period: usize) -> DemoResult {
    let (wm, xm) = (mode(w_token)?, mode(x_token)?);
    let taps = numbers(taps)?;
    if taps.len() % 2 == 0 {
        return Err(format!("need an odd number of taps, got {}", taps.len()));
    }
    if period % 2 == 1 || period < taps.len() || period > 1024 {
        return Err(format!(
            "period must be even, at least the tap count and at most 1024, got {period}"
        ));
    }
    let err = |e: Error| e.to_string();
    let r = taps.len() / 2;
    let spec = KernelSpec::new(taps, 1, 1, vec![r], vec![wm]).map_err(err)?;
    let w = kernel_spectrum::<f64>(&spec, &[period]).map_err(err)?;
    let mags: Vec<f64> = w.coeffs().iter().map(|z| z.norm()).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    let gain: Vec<f64> = mags
        .iter()
        .map(|m| if peak > 0.0 { m / peak } else { 0.0 })
        .collect();
    let structural = kernel_zero_flags(wm).map_err(err)?.indices(period);
    done(json!({
        "period": period,
        "real": w.coeffs().iter().map(|z| z.re).collect::<Vec<_>>(),
        "imag": w.coeffs().iter().map(|z| z.im).collect::<Vec<_>>(),
        "gain": gain,
        "skip": xm.prior_zeros().indices(period),
        "structural_zeros": structural,
        "invertible_with": xm.token(),
        "invertible": is_invertible(xm, wm).map_err(err)?,
    }))
}

/// Demo input with a readable default: a ramp with a bump.
pub fn sample_signal(n: usize) -> ChannelSignal {
    let data = (0..n)
        .map(|i| {
            let t = i as f64 / n.max(1) as f64;
            t + (-40.0 * (t - 0.6) * (t - 0.6)).exp()
        })
        .collect();
    ChannelSignal::from_1d(data).expect("finite samples")
}

fn js(r: DemoResult) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn pad_signal(samples: &str, mode: &str) -> Result<String, JsValue> {
    js(pad_signal_json(samples, mode))
}

#[wasm_bindgen]
pub fn roundtrip(
    x_mode: &str,
    w_mode: &str,
    n: usize,
    channels: usize,
    seed: u32,
) -> Result<String, JsValue> {
    js(roundtrip_json(x_mode, w_mode, n, channels, seed as u64))
}

#[wasm_bindgen]
pub fn kernel_spectrum_of(
    taps: &str,
    w_mode: &str,
    x_mode: &str,
    period: usize,
) -> Result<String, JsValue> {
    js(kernel_spectrum_json(taps, w_mode, x_mode, period))
}

#[wasm_bindgen]
pub fn default_samples(n: usize) -> String {
    sample_signal(n)
        .data()
        .iter()
        .map(|v| format!("{v:.3}"))
        .collect::<Vec<_>>()
        .join(", ")
}
