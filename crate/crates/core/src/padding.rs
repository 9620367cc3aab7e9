//! The five boundary extensions and their spectral zeros.
//!
//! Every extension produces one full period of an even length `M` with the base
//! samples at indices `0..N` ("canonical phase"):
//!
//! | mode | period  | layout                                               |
//! |------|---------|------------------------------------------------------|
//! | HS   | `2N`    | `x0..x[N-1], x[N-1]..x0`                             |
//! | WS   | `2N-2`  | `x0..x[N-1], x[N-2]..x1`                             |
//! | HA   | `2N`    | `x0..x[N-1], -x[N-1]..-x0`                           |
//! | WA   | `2N+2`  | `x0..x[N-1], 0, -x[N-1]..-x0, 0`                     |
//! | ZS   | `2N+2`  | `x0..x[N-1], e_even, x[N-1]..x0, e_odd`              |
//!
//! ZS picks `e_even = -2 sum(x[2n])` and `e_odd = -2 sum(x[2n+1])`, the only
//! values for which both the DC and the Nyquist coefficient of the period vanish.
//! That needs `N` even.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::ChannelSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PadMode {
    /// Half-sample symmetric.
    Hs,
    /// Whole-sample symmetric.
    Ws,
    /// Half-sample anti-symmetric.
    Ha,
    /// Whole-sample anti-symmetric.
    Wa,
    /// Zero-summed: symmetric with two extra samples that cancel DC and Nyquist.
    Zs,
}

impl PadMode {
    pub const ALL: [PadMode; 5] = [
        PadMode::Hs,
        PadMode::Ws,
        PadMode::Ha,
        PadMode::Wa,
        PadMode::Zs,
    ];

    pub fn token(self) -> &'static str {
        match self {
            PadMode::Hs => "hs",
            PadMode::Ws => "ws",
            PadMode::Ha => "ha",
            PadMode::Wa => "wa",
            PadMode::Zs => "zs",
        }
    }

    /// Spectral coefficients every signal padded in this mode has equal to zero.
    pub fn prior_zeros(self) -> ZeroFlags {
        match self {
            PadMode::Ws => ZeroFlags::NONE,
            PadMode::Hs => ZeroFlags::NYQUIST,
            PadMode::Ha => ZeroFlags::DC,
            PadMode::Wa | PadMode::Zs => ZeroFlags::BOTH,
        }
    }

    pub fn is_anti_symmetric(self) -> bool {
        matches!(self, PadMode::Ha | PadMode::Wa)
    }
}

impl fmt::Display for PadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for PadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hs" => Ok(PadMode::Hs),
            "ws" => Ok(PadMode::Ws),
            "ha" => Ok(PadMode::Ha),
            "wa" => Ok(PadMode::Wa),
            "zs" => Ok(PadMode::Zs),
            other => Err(Error::Format(format!("unknown padding mode {other:?}"))),
        }
    }
}

/// Parses `"wa"` or a per-axis pair such as `"wa,ws"`.
pub fn parse_modes(s: &str) -> Result<Vec<PadMode>> {
    let modes = s
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<PadMode>>>()?;
    if modes.len() > 2 {
        return Err(Error::Format(format!("at most two axes, got {s:?}")));
    }
    Ok(modes)
}

pub fn format_modes(modes: &[PadMode]) -> String {
    modes
        .iter()
        .map(|m| m.token())
        .collect::<Vec<_>>()
        .join(",")
}

/// Which of the two special frequencies (0 and `M/2`) are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ZeroFlags {
    pub dc: bool,
    pub nyquist: bool,
}

impl ZeroFlags {
    pub const NONE: ZeroFlags = ZeroFlags {
        dc: false,
        nyquist: false,
    };
    pub const DC: ZeroFlags = ZeroFlags {
        dc: true,
        nyquist: false,
    };
    pub const NYQUIST: ZeroFlags = ZeroFlags {
        dc: false,
        nyquist: true,
    };
    pub const BOTH: ZeroFlags = ZeroFlags {
        dc: true,
        nyquist: true,
    };

    pub fn union(self, other: ZeroFlags) -> ZeroFlags {
        ZeroFlags {
            dc: self.dc || other.dc,
            nyquist: self.nyquist || other.nyquist,
        }
    }

    pub fn contains(self, other: ZeroFlags) -> bool {
        (self.dc || !other.dc) && (self.nyquist || !other.nyquist)
    }

    /// Frequency indices for a period of length `m`.
    pub fn indices(self, m: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2);
        if self.dc {
            out.push(0);
        }
        if self.nyquist {
            out.push(m / 2);
        }
        out
    }

    pub fn hits(self, k: usize, m: usize) -> bool {
        (self.dc && k == 0) || (self.nyquist && 2 * k == m)
    }
}

pub fn padded_length(mode: PadMode, n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Shape(format!(
            "base length must be at least 2, got {n}"
        )));
    }
    match mode {
        PadMode::Hs | PadMode::Ha => Ok(2 * n),
        PadMode::Ws => Ok(2 * n - 2),
        PadMode::Wa => Ok(2 * n + 2),
        PadMode::Zs if n % 2 == 1 => Err(Error::OddLength { mode, len: n }),
        PadMode::Zs => Ok(2 * n + 2),
    }
}

/// Base length whose padded period in `mode` is `m`.
pub fn base_length(mode: PadMode, m: usize) -> Result<usize> {
    if m % 2 == 1 {
        return Err(Error::Shape(format!("period must be even, got {m}")));
    }
    let n = match mode {
        PadMode::Hs | PadMode::Ha => m / 2,
        PadMode::Ws => m / 2 + 1,
        PadMode::Wa | PadMode::Zs => (m / 2).saturating_sub(1),
    };
    padded_length(mode, n)?;
    Ok(n)
}

pub fn prior_zero_frequencies(mode: PadMode, m: usize) -> Vec<usize> {
    mode.prior_zeros().indices(m)
}

/// Writes one full period of `x` padded in `mode` into `out`.
pub(crate) fn pad_1d_into<T: Real>(x: &[T], mode: PadMode, out: &mut [T]) {
    let n = x.len();
    out[..n].copy_from_slice(x);
    let two = T::from_f(2.0);
    match mode {
        PadMode::Hs => {
            for (o, &v) in out[n..].iter_mut().zip(x.iter().rev()) {
                *o = v;
            }
        }
        PadMode::Ha => {
            for (o, &v) in out[n..].iter_mut().zip(x.iter().rev()) {
                *o = -v;
            }
        }
        PadMode::Ws => {
            for (o, &v) in out[n..].iter_mut().zip(x[1..n - 1].iter().rev()) {
                *o = v;
            }
        }
        PadMode::Wa => {
            out[n] = T::zero();
            for (o, &v) in out[n + 1..2 * n + 1].iter_mut().zip(x.iter().rev()) {
                *o = -v;
            }
            out[2 * n + 1] = T::zero();
        }
        PadMode::Zs => {
            let mut even = T::zero();
            let mut odd = T::zero();
            for (i, &v) in x.iter().enumerate() {
                if i % 2 == 0 {
                    even = even + v;
                } else {
                    odd = odd + v;
                }
            }
            out[n] = -two * even;
            for (o, &v) in out[n + 1..2 * n + 1].iter_mut().zip(x.iter().rev()) {
                *o = v;
            }
            out[2 * n + 1] = -two * odd;
        }
    }
}

pub fn pad_1d<T: Real>(x: &[T], mode: PadMode) -> Result<Vec<T>> {
    let m = padded_length(mode, x.len())?;
    let mut out = vec![T::zero(); m];
    pad_1d_into(x, mode, &mut out);
    Ok(out)
}

/// The base window `xp[0..n]` of a canonical period.
pub fn unpad_1d<T: Real>(xp: &[T], base_len: usize) -> Result<Vec<T>> {
    if base_len > xp.len() {
        return Err(Error::Shape(format!(
            "base length {base_len} exceeds period {}",
            xp.len()
        )));
    }
    Ok(xp[..base_len].to_vec())
}

/// `max |xp - pad_1d(xp[..base_len], mode)|`.
pub fn mode_residual<T: Real>(xp: &[T], mode: PadMode, base_len: usize) -> Result<f64> {
    let m = padded_length(mode, base_len)?;
    if xp.len() != m {
        return Err(Error::Shape(format!(
            "{mode} period for base {base_len} is {m}, got {}",
            xp.len()
        )));
    }
    let rebuilt = pad_1d(&xp[..base_len], mode)?;
    Ok(xp
        .iter()
        .zip(&rebuilt)
        .map(|(a, b)| (a.to_f() - b.to_f()).abs())
        .fold(0.0, f64::max))
}

pub fn verify_mode<T: Real>(xp: &[T], mode: PadMode, base_len: usize, tol: f64) -> Result<bool> {
    Ok(mode_residual(xp, mode, base_len)? <= tol)
}

/// One full period of a padded 1D or 2D multi-channel signal, in canonical phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedSignal<T = f64> {
    data: Vec<T>,
    channels: usize,
    base: Vec<usize>,
    modes: Vec<PadMode>,
    periods: Vec<usize>,
}

impl<T: Real> PaddedSignal<T> {
    /// Wraps existing period data, checking lengths only.
    pub fn from_periods(
        data: Vec<T>,
        channels: usize,
        base: Vec<usize>,
        modes: Vec<PadMode>,
    ) -> Result<Self> {
        if base.len() != modes.len() || base.is_empty() || base.len() > 2 {
            return Err(Error::Shape("one mode per axis, 1 or 2 axes".into()));
        }
        let periods = base
            .iter()
            .zip(&modes)
            .map(|(&n, &m)| padded_length(m, n))
            .collect::<Result<Vec<_>>>()?;
        if data.len() != channels * periods.iter().product::<usize>() {
            return Err(Error::Shape(format!(
                "periods {periods:?} x {channels} channels do not match {} samples",
                data.len()
            )));
        }
        Ok(Self {
            data,
            channels,
            base,
            modes,
            periods,
        })
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn modes(&self) -> &[PadMode] {
        &self.modes
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    /// Extracts the base window of every channel.
    pub fn unpad(&self) -> ChannelSignal<T> {
        let plane: usize = self.periods.iter().product();
        let mut out = Vec::with_capacity(self.channels * self.base.iter().product::<usize>());
        for c in 0..self.channels {
            let period = &self.data[c * plane..(c + 1) * plane];
            match self.base[..] {
                [n] => out.extend_from_slice(&period[..n]),
                [nh, nw] => {
                    let mw = self.periods[1];
                    for row in period.chunks_exact(mw).take(nh) {
                        out.extend_from_slice(&row[..nw]);
                    }
                }
                _ => unreachable!("validated at construction"),
            }
        }
        ChannelSignal::new(out, self.base.clone(), self.channels)
            .expect("window of a valid period is a valid signal")
    }

    /// Largest deviation from re-padding the base window.
    pub fn mode_residual(&self) -> f64 {
        let rebuilt = pad(&self.unpad(), &self.modes).expect("shape validated at construction");
        self.data
            .iter()
            .zip(rebuilt.data())
            .map(|(a, b)| (a.to_f() - b.to_f()).abs())
            .fold(0.0, f64::max)
    }

    pub fn conforms(&self, tol: f64) -> bool {
        self.mode_residual() <= tol
    }
}

/// Pads a 1D or 2D signal, one mode per axis.
pub fn pad<T: Real>(x: &ChannelSignal<T>, modes: &[PadMode]) -> Result<PaddedSignal<T>> {
    match (x.dims(), modes) {
        ([_], [mode]) => {
            let n = x.dims()[0];
            let m = padded_length(*mode, n)?;
            let mut data = vec![T::zero(); m * x.channels()];
            for (c, out) in data.chunks_exact_mut(m).enumerate() {
                pad_1d_into(x.channel(c), *mode, out);
            }
            Ok(PaddedSignal {
                data,
                channels: x.channels(),
                base: vec![n],
                modes: vec![*mode],
                periods: vec![m],
            })
        }
        ([_, _], [mh, mw]) => pad_2d(x, *mh, *mw),
        _ => Err(Error::Shape(format!(
            "{} mode(s) given for a {}D signal",
            modes.len(),
            x.ndim()
        ))),
    }
}

pub fn pad_2d<T: Real>(
    x: &ChannelSignal<T>,
    mode_h: PadMode,
    mode_w: PadMode,
) -> Result<PaddedSignal<T>> {
    pad_2d_ordered(x, mode_h, mode_w, true)
}

/// Pads along both axes; `h_first` selects which axis is extended first. The
/// two orders give the same period.
pub fn pad_2d_ordered<T: Real>(
    x: &ChannelSignal<T>,
    mode_h: PadMode,
    mode_w: PadMode,
    h_first: bool,
) -> Result<PaddedSignal<T>> {
    let [nh, nw] = match x.dims() {
        &[nh, nw] => [nh, nw],
        d => {
            return Err(Error::Shape(format!(
                "pad_2d needs a 2D signal, got dims {d:?}"
            )))
        }
    };
    let mh = padded_length(mode_h, nh)?;
    let mw = padded_length(mode_w, nw)?;
    let mut data = vec![T::zero(); x.channels() * mh * mw];
    let mut column = vec![T::zero(); nh];
    let mut column_out = vec![T::zero(); mh];
    for (c, out) in data.chunks_exact_mut(mh * mw).enumerate() {
        let src = x.channel(c);
        if h_first {
            // columns of the base into rows 0..mh, columns 0..nw
            for j in 0..nw {
                for i in 0..nh {
                    column[i] = src[i * nw + j];
                }
                pad_1d_into(&column, mode_h, &mut column_out);
                for i in 0..mh {
                    out[i * mw + j] = column_out[i];
                }
            }
            for row in out.chunks_exact_mut(mw) {
                let base: Vec<T> = row[..nw].to_vec();
                pad_1d_into(&base, mode_w, row);
            }
        } else {
            for i in 0..nh {
                pad_1d_into(
                    &src[i * nw..(i + 1) * nw],
                    mode_w,
                    &mut out[i * mw..(i + 1) * mw],
                );
            }
            for j in 0..mw {
                for i in 0..nh {
                    column[i] = out[i * mw + j];
                }
                pad_1d_into(&column, mode_h, &mut column_out);
                for i in 0..mh {
                    out[i * mw + j] = column_out[i];
                }
            }
        }
    }
    Ok(PaddedSignal {
        data,
        channels: x.channels(),
        base: vec![nh, nw],
        modes: vec![mode_h, mode_w],
        periods: vec![mh, mw],
    })
}

pub fn unpad_2d<T: Real>(p: &PaddedSignal<T>) -> Result<ChannelSignal<T>> {
    if p.base.len() != 2 {
        return Err(Error::Shape("unpad_2d needs a 2D padded signal".into()));
    }
    Ok(p.unpad())
}
