//! The invertible convolution layer.
//!
//! A kernel is a small `c_out x c_in` patch of odd extent `2r+1` per axis. It is
//! embedded into the full padded period with tap `j` at index `j mod M`, then
//! symmetrized per axis (`w + flip(w)` for WS, `w - flip(w)` for WA, with
//! `flip(w)[n] = w[(M - n) mod M]`). The symmetry axis of the result sits at
//! index 0, so convolving a canonically padded input keeps the output in
//! canonical phase and the output feature map is just the first `N` samples.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{kernel_zero_flags, require_invertible, transition, TransitionRow};
use crate::padding::{base_length, pad, padded_length, PadMode, PaddedSignal, ZeroFlags};
use crate::real::Real;
use crate::spectral::{
    condition_ratios, spectrum_matrix_inverse, spectrum_multiply, FrequencySet, Spectrum,
};
use crate::tensor::ChannelSignal;

/// Frequencies whose channel matrix has a smaller condition ratio than this are
/// treated as singular.
pub const DEFAULT_TOL_SING: f64 = 1e-10;

/// Learnable taps plus their per-axis symmetry mode.
///
/// Taps are laid out `[c_out][c_in][h](w)`, tap index `i` on an axis of radius
/// `r` being spatial offset `i - r`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    taps: Vec<f64>,
    c_out: usize,
    c_in: usize,
    radii: Vec<usize>,
    modes: Vec<PadMode>,
}

impl KernelSpec {
    /// Any kernel mode of the transition table is accepted here; only WS and
    /// WA kernels can be embedded and run through a layer.
    pub fn new(
        taps: Vec<f64>,
        c_out: usize,
        c_in: usize,
        radii: Vec<usize>,
        modes: Vec<PadMode>,
    ) -> Result<Self> {
        if radii.is_empty() || radii.len() > 2 || radii.len() != modes.len() {
            return Err(Error::Shape(format!(
                "{} radii and {} modes; need one of each per axis (1 or 2 axes)",
                radii.len(),
                modes.len()
            )));
        }
        if let Some(&m) = modes.iter().find(|&&m| m == PadMode::Zs) {
            return Err(Error::UnsupportedKernelMode(m));
        }
        if c_out == 0 || c_in == 0 {
            return Err(Error::Shape("kernel needs at least one channel".into()));
        }
        let expected = c_out * c_in * radii.iter().map(|r| 2 * r + 1).product::<usize>();
        if taps.len() != expected {
            return Err(Error::Shape(format!(
                "{c_out}x{c_in} kernel with radii {radii:?} needs {expected} taps, got {}",
                taps.len()
            )));
        }
        if let Some(index) = taps.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample { index });
        }
        Ok(Self {
            taps,
            c_out,
            c_in,
            radii,
            modes,
        })
    }

    /// Builds from odd tap extents (`2r+1` per axis), as stored in kernel files.
    pub fn from_extents(
        taps: Vec<f64>,
        c_out: usize,
        c_in: usize,
        extents: &[usize],
        modes: Vec<PadMode>,
    ) -> Result<Self> {
        if let Some(e) = extents.iter().find(|&&e| e % 2 == 0) {
            return Err(Error::Shape(format!("kernel extents must be odd, got {e}")));
        }
        Self::new(
            taps,
            c_out,
            c_in,
            extents.iter().map(|e| e / 2).collect(),
            modes,
        )
    }

    /// WS kernel whose embedding is the identity: centre tap `I / 2^ndim`.
    pub fn identity(channels: usize, ndim: usize) -> Result<Self> {
        let radii = vec![0; ndim];
        let mut taps = vec![0.0; channels * channels];
        let centre = 0.5f64.powi(ndim as i32);
        for c in 0..channels {
            taps[c * channels + c] = centre;
        }
        Self::new(taps, channels, channels, radii, vec![PadMode::Ws; ndim])
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn c_out(&self) -> usize {
        self.c_out
    }

    pub fn c_in(&self) -> usize {
        self.c_in
    }

    pub fn radii(&self) -> &[usize] {
        &self.radii
    }

    pub fn modes(&self) -> &[PadMode] {
        &self.modes
    }

    pub fn ndim(&self) -> usize {
        self.radii.len()
    }

    pub fn extents(&self) -> Vec<usize> {
        self.radii.iter().map(|r| 2 * r + 1).collect()
    }

    fn patch_len(&self) -> usize {
        self.extents().iter().product()
    }

    /// Taps of one `(out, in)` channel pair.
    pub fn patch(&self, out: usize, inp: usize) -> &[f64] {
        let len = self.patch_len();
        let b = out * self.c_in + inp;
        &self.taps[b * len..(b + 1) * len]
    }
}

fn wrap(offset: isize, m: usize) -> usize {
    offset.rem_euclid(m as isize) as usize
}

/// Full-period kernel, one real block per `(out, in)` channel pair.
pub fn embed_kernel<T: Real>(spec: &KernelSpec, periods: &[usize]) -> Result<Vec<T>> {
    if periods.len() != spec.ndim() {
        return Err(Error::Shape(format!(
            "{}D kernel cannot be embedded into periods {periods:?}",
            spec.ndim()
        )));
    }
    if let Some(&m) = spec
        .modes
        .iter()
        .find(|m| !matches!(m, PadMode::Ws | PadMode::Wa))
    {
        return Err(Error::UnsupportedKernelMode(m));
    }
    for (&r, &m) in spec.radii.iter().zip(periods) {
        if 2 * r + 1 > m {
            return Err(Error::Shape(format!(
                "kernel extent {} exceeds period {m}",
                2 * r + 1
            )));
        }
    }
    let plane: usize = periods.iter().product();
    let (mh, mw) = match *periods {
        [m] => (1, m),
        [h, w] => (h, w),
        _ => unreachable!(),
    };
    let (rh, rw) = match spec.radii[..] {
        [r] => (0, r),
        [a, b] => (a, b),
        _ => unreachable!(),
    };
    let (mode_h, mode_w) = match spec.modes[..] {
        [m] => (None, m),
        [a, b] => (Some(a), b),
        _ => unreachable!(),
    };
    let mut out = vec![T::zero(); spec.c_out * spec.c_in * plane];
    let mut scratch = vec![T::zero(); plane];
    for (b, block) in out.chunks_exact_mut(plane).enumerate() {
        let patch = &spec.taps[b * spec.patch_len()..(b + 1) * spec.patch_len()];
        let ew = 2 * rw + 1;
        for (i, row) in patch.chunks_exact(ew).enumerate() {
            let ih = wrap(i as isize - rh as isize, mh);
            for (j, &v) in row.iter().enumerate() {
                let iw = wrap(j as isize - rw as isize, mw);
                block[ih * mw + iw] = T::from_f(v);
            }
        }
        if let Some(mode) = mode_h {
            scratch.copy_from_slice(block);
            for i in 0..mh {
                let fi = (mh - i) % mh;
                for j in 0..mw {
                    let (a, f) = (scratch[i * mw + j], scratch[fi * mw + j]);
                    block[i * mw + j] = if mode == PadMode::Ws { a + f } else { a - f };
                }
            }
        }
        scratch.copy_from_slice(block);
        for i in 0..mh {
            for j in 0..mw {
                let fj = (mw - j) % mw;
                let (a, f) = (scratch[i * mw + j], scratch[i * mw + fj]);
                block[i * mw + j] = if mode_w == PadMode::Ws { a + f } else { a - f };
            }
        }
    }
    Ok(out)
}

/// Spectrum of the embedded kernel with its structural parity imposed: real
/// for an even number of WA axes, imaginary for an odd number, and exactly zero
/// on the DC and Nyquist lines of every WA axis.
pub fn kernel_spectrum<T: Real>(spec: &KernelSpec, periods: &[usize]) -> Result<Spectrum<T>> {
    let embedded = embed_kernel::<T>(spec, periods)?;
    let mut w = Spectrum::from_real_blocks(&embedded, spec.c_out, spec.c_in, periods)?;
    let anti_axes = spec.modes.iter().filter(|&&m| m == PadMode::Wa).count();
    let zero_lines = FrequencySet::new(
        periods.to_vec(),
        spec.modes
            .iter()
            .map(|&m| kernel_zero_flags(m))
            .collect::<Result<Vec<_>>>()?,
    );
    let f = w.freq_count();
    let on_line: Vec<bool> = (0..f).map(|k| zero_lines.contains(k)).collect();
    for block in w.coeffs_mut().chunks_exact_mut(f) {
        for (k, z) in block.iter_mut().enumerate() {
            if on_line[k] {
                *z = Complex::zero();
            } else if anti_axes % 2 == 0 {
                z.im = T::zero();
            } else {
                z.re = T::zero();
            }
        }
    }
    Ok(w)
}

/// Full-period output of a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardOutput<T> {
    /// Channel-major output periods.
    pub full: Vec<T>,
    pub periods: Vec<usize>,
    pub channels: usize,
    /// Transition row per axis.
    pub rows: Vec<TransitionRow>,
}

impl<T: Real> ForwardOutput<T> {
    pub fn y_modes(&self) -> Vec<PadMode> {
        self.rows.iter().map(|r| r.y_mode).collect()
    }

    /// The output period re-read as a padded signal in its output modes,
    /// rolled into canonical phase where the row needs it.
    pub fn as_padded(&self) -> Result<PaddedSignal<T>> {
        let base = self
            .rows
            .iter()
            .zip(&self.periods)
            .map(|(r, &m)| base_length(r.y_mode, m))
            .collect::<Result<Vec<_>>>()?;
        let back: Vec<usize> = self
            .rows
            .iter()
            .zip(&self.periods)
            .map(|(r, &m)| (m - output_offset(r)) % m)
            .collect();
        let data = roll(&self.full, self.channels, &self.periods, &back);
        PaddedSignal::from_periods(data, self.channels, base, self.y_modes())
    }

    /// The first `dims[axis]` samples of every axis.
    pub fn window(&self, dims: &[usize]) -> Result<ChannelSignal<T>> {
        crop(&self.full, self.channels, &self.periods, dims)
    }
}

/// Leading window of a stack of periods.
fn crop<T: Real>(
    data: &[T],
    channels: usize,
    periods: &[usize],
    dims: &[usize],
) -> Result<ChannelSignal<T>> {
    crop_at(data, channels, periods, &vec![0; dims.len()], dims)
}

/// Window of `dims` samples starting at `starts` on each axis.
fn crop_at<T: Real>(
    data: &[T],
    channels: usize,
    periods: &[usize],
    starts: &[usize],
    dims: &[usize],
) -> Result<ChannelSignal<T>> {
    let plane: usize = periods.iter().product();
    let mut out = Vec::with_capacity(channels * dims.iter().product::<usize>());
    for period in data.chunks_exact(plane) {
        match (periods, starts, dims) {
            ([_], [s], [n]) => out.extend_from_slice(&period[*s..s + n]),
            ([_, mw], [sh, sw], [nh, nw]) => {
                for row in period.chunks_exact(*mw).skip(*sh).take(*nh) {
                    out.extend_from_slice(&row[*sw..sw + nw]);
                }
            }
            _ => return Err(Error::Shape("window rank differs from period rank".into())),
        }
    }
    ChannelSignal::new(out, dims.to_vec(), channels)
}

/// `out[n] = data[(n - shift) mod M]` on every axis.
fn roll<T: Real>(data: &[T], channels: usize, periods: &[usize], shifts: &[usize]) -> Vec<T> {
    if shifts.iter().all(|&s| s == 0) {
        return data.to_vec();
    }
    let plane: usize = periods.iter().product();
    let (h, w, sh, sw) = match (periods, shifts) {
        ([m], [s]) => (1, *m, 0, *s),
        ([h, w], [sh, sw]) => (*h, *w, *sh, *sw),
        _ => unreachable!("periods and shifts share a rank of 1 or 2"),
    };
    let mut out = vec![T::zero(); channels * plane];
    for (src, dst) in data.chunks_exact(plane).zip(out.chunks_exact_mut(plane)) {
        for i in 0..h {
            for j in 0..w {
                dst[((i + sh) % h) * w + (j + sw) % w] = src[i * w + j];
            }
        }
    }
    out
}

/// Samples by which an axis' output sits ahead of canonical phase. Kernels
/// are embedded about index 0, so a whole-sample input under a WA kernel
/// (row 14) is anti-symmetric about 0 rather than about -1.
fn output_offset(row: &TransitionRow) -> usize {
    usize::from(row.x_mode == PadMode::Ws && row.w_mode == PadMode::Wa)
}

fn check_layer_shapes<T: Real>(
    x: &ChannelSignal<T>,
    spec: &KernelSpec,
    x_modes: &[PadMode],
) -> Result<()> {
    if x_modes.len() != x.ndim() || spec.ndim() != x.ndim() {
        return Err(Error::Shape(format!(
            "{}D signal with {} input mode(s) and a {}D kernel",
            x.ndim(),
            x_modes.len(),
            spec.ndim()
        )));
    }
    if spec.c_in != x.channels() {
        return Err(Error::Shape(format!(
            "kernel expects {} input channels, signal has {}",
            spec.c_in,
            x.channels()
        )));
    }
    Ok(())
}

/// Forward pass returning the whole output period.
pub fn forward_full<T: Real>(
    x: &ChannelSignal<T>,
    spec: &KernelSpec,
    x_modes: &[PadMode],
) -> Result<ForwardOutput<T>> {
    check_layer_shapes(x, spec, x_modes)?;
    let rows = x_modes
        .iter()
        .zip(&spec.modes)
        .map(|(&xm, &wm)| transition(xm, wm))
        .collect::<Result<Vec<_>>>()?;
    let padded = pad(x, x_modes)?;
    let w = kernel_spectrum::<T>(spec, padded.periods())?;
    let y = spectrum_multiply(&w, &Spectrum::from_padded(&padded))?;
    Ok(ForwardOutput {
        full: y.to_real_blocks(T::REAL_RESIDUE_TOL)?,
        periods: padded.periods().to_vec(),
        channels: spec.c_out,
        rows,
    })
}

/// Forward pass: pad, convolve circularly, keep the leading window. Returns the
/// output feature map (same spatial dims as `x`, `c_out` channels) and its
/// per-axis padding mode.
pub fn forward<T: Real>(
    x: &ChannelSignal<T>,
    spec: &KernelSpec,
    x_modes: &[PadMode],
) -> Result<(ChannelSignal<T>, Vec<PadMode>)> {
    let out = forward_full(x, spec, x_modes)?;
    Ok((out.window(x.dims())?, out.y_modes()))
}

/// Recovers the input of [`forward`] from its output feature map.
pub fn inverse<T: Real>(
    y: &ChannelSignal<T>,
    spec: &KernelSpec,
    x_modes: &[PadMode],
) -> Result<ChannelSignal<T>> {
    require_invertible(x_modes, &spec.modes)?;
    let skip = FrequencySet::new(
        periods_for(x_modes, y.dims())?,
        x_modes.iter().map(|m| m.prior_zeros()).collect(),
    );
    invert_with_skip(y, spec, x_modes, &skip)
}

/// Runs the inverse pass for any mode pair, zeroing the union of the input's
/// prior zeros and the kernel's structural zeros. For pairs the table marks as
/// not invertible this discards information the input actually carried.
pub fn forced_inverse<T: Real>(
    y: &ChannelSignal<T>,
    spec: &KernelSpec,
    x_modes: &[PadMode],
) -> Result<ChannelSignal<T>> {
    if x_modes.len() != spec.ndim() {
        return Err(Error::Shape("one input mode per kernel axis".into()));
    }
    let flags = x_modes
        .iter()
        .zip(&spec.modes)
        .map(|(&xm, &wm)| Ok(xm.prior_zeros().union(kernel_zero_flags(wm)?)))
        .collect::<Result<Vec<ZeroFlags>>>()?;
    let skip = FrequencySet::new(periods_for(x_modes, y.dims())?, flags);
    invert_with_skip(y, spec, x_modes, &skip)
}

/// Padded periods of an input of `dims` in `x_modes`.
pub fn periods_for(x_modes: &[PadMode], dims: &[usize]) -> Result<Vec<usize>> {
    if x_modes.len() != dims.len() {
        return Err(Error::Shape(format!(
            "{} mode(s) for {} axes",
            x_modes.len(),
            dims.len()
        )));
    }
    x_modes
        .iter()
        .zip(dims)
        .map(|(&m, &n)| padded_length(m, n))
        .collect()
}

fn invert_with_skip<T: Real>(
    y: &ChannelSignal<T>,
    spec: &KernelSpec,
    x_modes: &[PadMode],
    skip: &FrequencySet,
) -> Result<ChannelSignal<T>> {
    check_layer_shapes(y, spec, x_modes)?;
    if spec.c_out != spec.c_in {
        return Err(Error::Shape(format!(
            "inversion needs equal channels, kernel is {}x{}",
            spec.c_out, spec.c_in
        )));
    }
    let periods = periods_for(x_modes, y.dims())?;
    let mut y_modes = Vec::with_capacity(x_modes.len());
    let mut y_base = Vec::with_capacity(x_modes.len());
    let mut offsets = Vec::with_capacity(x_modes.len());
    for ((&xm, &wm), &m) in x_modes.iter().zip(&spec.modes).zip(&periods) {
        let row = transition(xm, wm)?;
        let base = base_length(row.y_mode, m).map_err(|e| match e {
            // both zero sums pin only e_even + e_odd when the base is odd
            Error::OddLength { len, .. } => Error::Shape(format!(
                "row {}: the zs-padded output needs an even length, got {len}",
                row.row
            )),
            other => other,
        })?;
        let offset = output_offset(&row);
        if base + offset > y.dims()[y_modes.len()] {
            return Err(Error::Shape(format!(
                "row {}: output window too short",
                row.row
            )));
        }
        y_modes.push(row.y_mode);
        y_base.push(base);
        offsets.push(offset);
    }
    // the output mode may need fewer than N samples to fill the period
    let y_window = crop_at(y.data(), y.channels(), y.dims(), &offsets, &y_base)?;
    let y_padded = pad(&y_window, &y_modes)?;
    let y_padded = PaddedSignal::from_periods(
        roll(y_padded.data(), y.channels(), &periods, &offsets),
        y.channels(),
        y_base,
        y_modes,
    )?;
    debug_assert_eq!(y_padded.periods(), &periods[..]);
    let w = kernel_spectrum::<T>(spec, &periods)?;
    let w_inv = spectrum_matrix_inverse(&w, skip, DEFAULT_TOL_SING)?;
    let x_spec = spectrum_multiply(&w_inv, &Spectrum::from_padded(&y_padded))?;
    crop(
        &x_spec.to_real_blocks(T::REAL_RESIDUE_TOL)?,
        spec.c_in,
        &periods,
        y.dims(),
    )
}

/// The four parity components of a 2D patch.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelComponents {
    pub sym_sym: Vec<f64>,
    pub sym_anti: Vec<f64>,
    pub anti_sym: Vec<f64>,
    pub anti_anti: Vec<f64>,
}

/// Splits a `h x w` patch (odd extents) into parts symmetric or
/// anti-symmetric about the centre along each axis. Each part has its parity
/// exactly; their sum equals the patch up to rounding of the four-term sums.
pub fn decompose_kernel_2d(taps: &[f64], h: usize, w: usize) -> Result<KernelComponents> {
    if h.is_multiple_of(2) || w.is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "patch extents must be odd, got {h}x{w}"
        )));
    }
    if taps.len() != h * w {
        return Err(Error::Shape(format!("{h}x{w} patch needs {} taps", h * w)));
    }
    let at = |i: usize, j: usize| taps[i * w + j];
    let n = h * w;
    let mut out = KernelComponents {
        sym_sym: vec![0.0; n],
        sym_anti: vec![0.0; n],
        anti_sym: vec![0.0; n],
        anti_anti: vec![0.0; n],
    };
    for i in 0..h {
        for j in 0..w {
            let (fi, fj) = (h - 1 - i, w - 1 - j);
            // pairs grouped by the h-mirror so every mirrored position
            // evaluates the same sums up to commutation or negation
            let (a, b, c, d) = (at(i, j), at(fi, j), at(i, fj), at(fi, fj));
            let k = i * w + j;
            out.sym_sym[k] = ((a + b) + (c + d)) / 4.0;
            out.sym_anti[k] = ((a + b) - (c + d)) / 4.0;
            out.anti_sym[k] = ((a - b) + (c - d)) / 4.0;
            out.anti_anti[k] = ((a - b) - (c - d)) / 4.0;
        }
    }
    Ok(out)
}

/// One layer of a stack: a kernel and the padding mode of its input.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub kernel: KernelSpec,
    pub x_modes: Vec<PadMode>,
}

impl Layer {
    pub fn y_modes(&self) -> Result<Vec<PadMode>> {
        self.x_modes
            .iter()
            .zip(self.kernel.modes())
            .map(|(&x, &w)| Ok(transition(x, w)?.y_mode))
            .collect()
    }
}

/// Invertible layers applied in sequence; each layer's input mode is the
/// previous layer's output mode.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    layers: Vec<Layer>,
}

impl LayerStack {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let Some(first) = layers.first() else {
            return Err(Error::Chain {
                layer: 0,
                reason: "empty stack".into(),
            });
        };
        let channels = first.kernel.c_in();
        let mut prev_y: Option<Vec<PadMode>> = None;
        for (index, layer) in layers.iter().enumerate() {
            let k = &layer.kernel;
            if k.c_in() != channels || k.c_out() != channels {
                return Err(Error::Chain {
                    layer: index,
                    reason: format!(
                        "kernel is {}x{}, stack carries {channels} channels",
                        k.c_out(),
                        k.c_in()
                    ),
                });
            }
            require_invertible(&layer.x_modes, k.modes()).map_err(|e| Error::Layer {
                index,
                source: Box::new(e),
            })?;
            if let Some(prev) = &prev_y {
                if prev != &layer.x_modes {
                    return Err(Error::Chain {
                        layer: index,
                        reason: format!(
                            "input modes {:?} do not match previous output {:?}",
                            layer.x_modes, prev
                        ),
                    });
                }
            }
            prev_y = Some(layer.y_modes()?);
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Runs every layer; returns the output and its final modes.
    pub fn forward<T: Real>(
        &self,
        x: &ChannelSignal<T>,
    ) -> Result<(ChannelSignal<T>, Vec<PadMode>)> {
        let mut cur = x.clone();
        let mut modes = self.layers[0].x_modes.clone();
        for (index, layer) in self.layers.iter().enumerate() {
            let (y, y_modes) =
                forward(&cur, &layer.kernel, &layer.x_modes).map_err(|e| Error::Layer {
                    index,
                    source: Box::new(e),
                })?;
            cur = y;
            modes = y_modes;
        }
        Ok((cur, modes))
    }

    pub fn inverse<T: Real>(&self, y: &ChannelSignal<T>) -> Result<ChannelSignal<T>> {
        let mut cur = y.clone();
        for (index, layer) in self.layers.iter().enumerate().rev() {
            cur = inverse(&cur, &layer.kernel, &layer.x_modes).map_err(|e| Error::Layer {
                index,
                source: Box::new(e),
            })?;
        }
        Ok(cur)
    }
}

pub fn stack_forward<T: Real>(
    x: &ChannelSignal<T>,
    stack: &LayerStack,
) -> Result<(ChannelSignal<T>, Vec<PadMode>)> {
    stack.forward(x)
}

pub fn stack_inverse<T: Real>(
    y: &ChannelSignal<T>,
    stack: &LayerStack,
) -> Result<ChannelSignal<T>> {
    stack.inverse(y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyCondition {
    pub frequency: Vec<usize>,
    pub ratio: f64,
    pub in_skip: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub periods: Vec<usize>,
    pub records: Vec<FrequencyCondition>,
    /// Smallest ratio outside the skip set, `None` if every frequency is skipped.
    pub min_ratio: Option<f64>,
    pub min_frequency: Option<Vec<usize>>,
}

/// Per-frequency condition ratios of the kernel spectrum at the given periods,
/// annotated with the input modes' prior-zero frequencies.
pub fn condition_report(
    spec: &KernelSpec,
    x_modes: &[PadMode],
    periods: &[usize],
) -> Result<ConditionReport> {
    if x_modes.len() != periods.len() {
        return Err(Error::Shape("one input mode per axis".into()));
    }
    let w = kernel_spectrum::<f64>(spec, periods)?;
    let ratios = condition_ratios(&w)?;
    let skip = FrequencySet::new(
        periods.to_vec(),
        x_modes.iter().map(|m| m.prior_zeros()).collect(),
    );
    let records: Vec<FrequencyCondition> = ratios
        .iter()
        .enumerate()
        .map(|(k, &ratio)| FrequencyCondition {
            frequency: w.freq_index(k),
            ratio,
            in_skip: skip.contains(k),
        })
        .collect();
    let min = records
        .iter()
        .filter(|r| !r.in_skip)
        .min_by(|a, b| a.ratio.total_cmp(&b.ratio));
    Ok(ConditionReport {
        periods: periods.to_vec(),
        min_ratio: min.map(|r| r.ratio),
        min_frequency: min.map(|r| r.frequency.clone()),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_1d(taps: Vec<f64>, mode: PadMode) -> KernelSpec {
        let r = taps.len() / 2;
        KernelSpec::new(taps, 1, 1, vec![r], vec![mode]).unwrap()
    }

    #[test]
    fn centre_tap_embedding() {
        let ws = embed_kernel::<f64>(&spec_1d(vec![1.5], PadMode::Ws), &[6]).unwrap();
        assert_eq!(ws, [3.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let wa = embed_kernel::<f64>(&spec_1d(vec![1.5], PadMode::Wa), &[6]).unwrap();
        assert!(wa.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn anti_symmetric_three_taps() {
        let (p, q, s) = (0.7, -1.1, 2.5);
        let w = embed_kernel::<f64>(&spec_1d(vec![p, q, s], PadMode::Wa), &[8]).unwrap();
        assert_eq!(w, [0.0, s - p, 0.0, 0.0, 0.0, 0.0, 0.0, p - s]);
    }

    #[test]
    fn kernel_larger_than_period() {
        let spec = spec_1d(vec![1.0; 7], PadMode::Ws);
        assert!(matches!(
            embed_kernel::<f64>(&spec, &[6]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn half_sample_kernels_cannot_be_embedded() {
        let spec = spec_1d(vec![1.0; 3], PadMode::Hs);
        assert!(matches!(
            embed_kernel::<f64>(&spec, &[8]),
            Err(Error::UnsupportedKernelMode(PadMode::Hs))
        ));
        assert!(KernelSpec::new(vec![1.0], 1, 1, vec![0], vec![PadMode::Zs]).is_err());
    }

    #[test]
    fn identity_forward_and_inverse() {
        let x = ChannelSignal::new(vec![0.5, -1.0, 2.0, 0.25, 1.0, 3.0, -2.0, 0.0], vec![4], 2)
            .unwrap();
        let id = KernelSpec::identity(2, 1).unwrap();
        for mode in [
            PadMode::Hs,
            PadMode::Ws,
            PadMode::Ha,
            PadMode::Wa,
            PadMode::Zs,
        ] {
            let (y, y_modes) = forward(&x, &id, &[mode]).unwrap();
            assert_eq!(y_modes, vec![mode]);
            assert!(y.max_abs_diff(&x).unwrap() < 1e-13);
            assert!(inverse(&y, &id, &[mode]).unwrap().max_abs_diff(&x).unwrap() < 1e-13);
        }
    }

    #[test]
    fn constant_signal_scales_by_kernel_sum() {
        let x = ChannelSignal::from_1d(vec![0.75; 6]).unwrap();
        let spec = spec_1d(vec![0.2, 1.0, 0.3], PadMode::Ws);
        let (y, _) = forward(&x, &spec, &[PadMode::Ws]).unwrap();
        // full-period kernel: 2.0 at 0, 0.5 at +-1
        let sum: f64 = 2.0 + 0.5 + 0.5;
        for v in y.data() {
            assert!((v - 0.75 * sum).abs() < 1e-14);
        }
    }

    #[test]
    fn row_14_output_phase() {
        // WS input with no DC or Nyquist content survives the forced inverse
        let x = ChannelSignal::from_1d(vec![1.0, 0.0, -1.0, 0.0, 1.0]).unwrap();
        let spec = spec_1d(vec![0.1, 0.5, 0.2], PadMode::Wa);
        let out = forward_full(&x, &spec, &[PadMode::Ws]).unwrap();
        assert_eq!(out.rows[0].row, 14);
        assert!(out.as_padded().unwrap().conforms(1e-12));
        let y = out.window(x.dims()).unwrap();
        let back = forced_inverse(&y, &spec, &[PadMode::Ws]).unwrap();
        assert!(back.max_abs_diff(&x).unwrap() < 1e-12);
    }

    #[test]
    fn non_invertible_pair_is_refused() {
        let x = ChannelSignal::from_1d(vec![1.0, 2.0, 0.5, -1.0]).unwrap();
        let spec = spec_1d(vec![0.1, 0.2, 0.3], PadMode::Wa);
        assert!(matches!(
            inverse(&x, &spec, &[PadMode::Ws]),
            Err(Error::NonInvertibleModePair { row: 14, .. })
        ));
        let hs = spec_1d(vec![0.1, 0.2, 0.3], PadMode::Hs);
        assert!(matches!(
            inverse(&x, &hs, &[PadMode::Ws]),
            Err(Error::NonInvertibleModePair { row: 9, .. })
        ));
    }

    #[test]
    fn decomposition_of_symmetric_patch() {
        let patch = [1.0, 2.0, 1.0, 3.0, 5.0, 3.0, 1.0, 2.0, 1.0];
        let c = decompose_kernel_2d(&patch, 3, 3).unwrap();
        assert_eq!(c.sym_sym, patch);
        assert!(c
            .sym_anti
            .iter()
            .chain(&c.anti_sym)
            .chain(&c.anti_anti)
            .all(|&v| v == 0.0));
    }

    #[test]
    fn decomposition_of_point_antisymmetric_patch() {
        // w(-i,-j) = -w(i,j)
        let patch = [1.0, 2.0, -4.0, 3.0, 0.0, -3.0, 4.0, -2.0, -1.0];
        let c = decompose_kernel_2d(&patch, 3, 3).unwrap();
        assert!(c.sym_sym.iter().chain(&c.anti_anti).all(|&v| v == 0.0));
        assert!(decompose_kernel_2d(&[0.0; 6], 2, 3).is_err());
    }

    #[test]
    fn stack_rejects_broken_chain() {
        let wa = KernelSpec::new(vec![0.1, 0.0, 0.6], 1, 1, vec![1], vec![PadMode::Wa]).unwrap();
        let ws = KernelSpec::identity(1, 1).unwrap();
        // WA x WA gives ZS, so the next layer must take ZS input
        let bad = LayerStack::new(vec![
            Layer {
                kernel: wa.clone(),
                x_modes: vec![PadMode::Wa],
            },
            Layer {
                kernel: ws.clone(),
                x_modes: vec![PadMode::Wa],
            },
        ]);
        assert!(matches!(bad, Err(Error::Chain { layer: 1, .. })));
        let good = LayerStack::new(vec![
            Layer {
                kernel: wa.clone(),
                x_modes: vec![PadMode::Wa],
            },
            Layer {
                kernel: wa,
                x_modes: vec![PadMode::Zs],
            },
        ])
        .unwrap();
        assert_eq!(good.depth(), 2);
        let not_inv = LayerStack::new(vec![Layer {
            kernel: KernelSpec::new(vec![0.1, 0.0, 0.6], 1, 1, vec![1], vec![PadMode::Wa]).unwrap(),
            x_modes: vec![PadMode::Ws],
        }]);
        assert!(matches!(not_inv, Err(Error::Layer { index: 0, .. })));
    }

    #[test]
    fn identity_condition_report() {
        let id = KernelSpec::identity(3, 1).unwrap();
        let rep = condition_report(&id, &[PadMode::Ws], &[10]).unwrap();
        assert!(rep
            .records
            .iter()
            .all(|r| (r.ratio - 1.0).abs() < 1e-15 && !r.in_skip));
        assert_eq!(rep.min_ratio.map(|r| (r - 1.0).abs() < 1e-15), Some(true));
    }

    #[test]
    fn wa_condition_report_flags_structural_zeros() {
        let spec = KernelSpec::new(vec![0.3, 0.0, 1.0], 1, 1, vec![1], vec![PadMode::Wa]).unwrap();
        let rep = condition_report(&spec, &[PadMode::Wa], &[10]).unwrap();
        for r in &rep.records {
            let structural = r.frequency[0] == 0 || r.frequency[0] == 5;
            assert_eq!(r.in_skip, structural);
            if structural {
                assert_eq!(r.ratio, 0.0);
            }
        }
    }
}
