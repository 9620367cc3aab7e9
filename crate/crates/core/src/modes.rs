//! Padding-mode transition table for circular convolution of padded signals.
//!
//! Convolving an input padded in `x_mode` with a kernel padded in `w_mode`
//! yields an output in `y_mode`. The table also records which of the DC and
//! Nyquist coefficients are zero for each of the three signals, and whether the
//! input can be recovered from an arbitrary output feature map.
//!
//! Rows are numbered 1..=20: kernels WS, HS, WA, HA in blocks of five, inputs
//! HA, WA, HS, WS, ZS within each block.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padding::{PadMode, ZeroFlags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransitionRow {
    pub row: usize,
    pub x_mode: PadMode,
    pub w_mode: PadMode,
    pub y_mode: PadMode,
    pub x_zeros: ZeroFlags,
    pub w_zeros: ZeroFlags,
    pub y_zeros: ZeroFlags,
    pub invertible: bool,
}

const fn row(
    row: usize,
    x_mode: PadMode,
    w_mode: PadMode,
    y_mode: PadMode,
    zeros: [(bool, bool); 3],
    invertible: bool,
) -> TransitionRow {
    TransitionRow {
        row,
        x_mode,
        w_mode,
        y_mode,
        x_zeros: ZeroFlags {
            dc: zeros[0].0,
            nyquist: zeros[0].1,
        },
        w_zeros: ZeroFlags {
            dc: zeros[1].0,
            nyquist: zeros[1].1,
        },
        y_zeros: ZeroFlags {
            dc: zeros[2].0,
            nyquist: zeros[2].1,
        },
        invertible,
    }
}

use PadMode::{Ha, Hs, Wa, Ws, Zs};

const Z: bool = true;
const A: bool = false;

/// The table as data. `(dc, nyquist)` flags per signal, `Z` = zero, `A` = any.
pub const TABLE: [TransitionRow; 20] = [
    row(1, Ha, Ws, Ha, [(Z, A), (A, A), (Z, A)], true),
    row(2, Wa, Ws, Wa, [(Z, Z), (A, A), (Z, Z)], true),
    row(3, Hs, Ws, Hs, [(A, Z), (A, A), (A, Z)], true),
    row(4, Ws, Ws, Ws, [(A, A), (A, A), (A, A)], true),
    row(5, Zs, Ws, Zs, [(Z, Z), (A, A), (Z, Z)], true),
    row(6, Ha, Hs, Wa, [(Z, A), (A, Z), (Z, Z)], false),
    row(7, Wa, Hs, Ha, [(Z, Z), (A, Z), (Z, Z)], false),
    row(8, Hs, Hs, Ws, [(A, Z), (A, Z), (A, Z)], false),
    row(9, Ws, Hs, Hs, [(A, A), (A, Z), (A, Z)], false),
    row(10, Zs, Hs, Hs, [(Z, Z), (A, Z), (Z, Z)], false),
    row(11, Ha, Wa, Hs, [(Z, A), (Z, Z), (Z, Z)], false),
    row(12, Wa, Wa, Zs, [(Z, Z), (Z, Z), (Z, Z)], true),
    row(13, Hs, Wa, Ha, [(A, Z), (Z, Z), (Z, Z)], false),
    row(14, Ws, Wa, Wa, [(A, A), (Z, Z), (Z, Z)], false),
    row(15, Zs, Wa, Wa, [(Z, Z), (Z, Z), (Z, Z)], true),
    row(16, Ha, Ha, Ws, [(Z, A), (Z, A), (Z, A)], false),
    row(17, Wa, Ha, Hs, [(Z, Z), (Z, A), (Z, Z)], false),
    row(18, Hs, Ha, Wa, [(A, Z), (Z, A), (Z, Z)], false),
    row(19, Ws, Ha, Ha, [(A, A), (Z, A), (Z, A)], false),
    row(20, Zs, Ha, Ha, [(Z, Z), (Z, A), (Z, Z)], false),
];

/// Kernel modes in table order.
pub const KERNEL_MODES: [PadMode; 4] = [Ws, Hs, Wa, Ha];

/// Input modes in table order.
pub const INPUT_MODES: [PadMode; 5] = [Ha, Wa, Hs, Ws, Zs];

pub fn row_by_id(id: usize) -> Result<&'static TransitionRow> {
    TABLE
        .get(id.wrapping_sub(1))
        .ok_or_else(|| Error::Shape(format!("transition rows are numbered 1..=20, got {id}")))
}

pub fn transition(x_mode: PadMode, w_mode: PadMode) -> Result<TransitionRow> {
    TABLE
        .iter()
        .find(|r| r.x_mode == x_mode && r.w_mode == w_mode)
        .copied()
        .ok_or(Error::UnsupportedKernelMode(w_mode))
}

/// Frequencies at which a kernel padded in `w_mode` vanishes identically.
pub fn kernel_zero_flags(w_mode: PadMode) -> Result<ZeroFlags> {
    match w_mode {
        Ws => Ok(ZeroFlags::NONE),
        Hs => Ok(ZeroFlags::NYQUIST),
        Ha => Ok(ZeroFlags::DC),
        Wa => Ok(ZeroFlags::BOTH),
        Zs => Err(Error::UnsupportedKernelMode(w_mode)),
    }
}

pub fn kernel_zero_frequencies(w_mode: PadMode, m: usize) -> Result<Vec<usize>> {
    Ok(kernel_zero_flags(w_mode)?.indices(m))
}

/// Closed-form invertibility: the kernel must be whole-sample (its symmetry
/// axis at index 0, so the output stays in canonical phase) and every frequency
/// it annihilates must already be zero in the input.
pub fn is_invertible(x_mode: PadMode, w_mode: PadMode) -> Result<bool> {
    let w_zeros = kernel_zero_flags(w_mode)?;
    Ok(matches!(w_mode, Ws | Wa) && x_mode.prior_zeros().contains(w_zeros))
}

/// Per-axis lookup for 2D signals.
pub fn transition_2d(
    x_modes: (PadMode, PadMode),
    w_modes: (PadMode, PadMode),
) -> Result<(TransitionRow, TransitionRow)> {
    Ok((
        transition(x_modes.0, w_modes.0)?,
        transition(x_modes.1, w_modes.1)?,
    ))
}

/// Looks up every axis; errors on the first non-invertible one.
pub fn require_invertible(x_modes: &[PadMode], w_modes: &[PadMode]) -> Result<Vec<TransitionRow>> {
    if x_modes.len() != w_modes.len() {
        return Err(Error::Shape("one kernel mode per input axis".into()));
    }
    let rows = x_modes
        .iter()
        .zip(w_modes)
        .map(|(&x, &w)| transition(x, w))
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = rows.iter().find(|r| !r.invertible) {
        return Err(Error::NonInvertibleModePair {
            x_mode: r.x_mode,
            w_mode: r.w_mode,
            row: r.row,
        });
    }
    Ok(rows)
}
