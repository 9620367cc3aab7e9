//! Analytically invertible convolution for symmetrically and anti-symmetrically
//! padded signals.
//!
//! A signal of base length `N` is extended to one full period with one of five
//! boundary modes ([`PadMode`]). Convolving that period circularly with a kernel
//! that is itself (anti-)symmetric about index 0 yields an output that again
//! carries one of the five modes, so the output feature map can be re-padded and
//! divided out in the frequency domain. Frequencies where the kernel spectrum
//! vanishes structurally are recovered from what the input mode already forces
//! to zero.
//!
//! Module map:
//!
//! - [`tensor`] and [`io`]: multi-channel sample grids, ICNV tensor files, PGM images.
//! - [`padding`]: the five boundary extensions and their spectral zeros.
//! - [`spectral`]: fast transforms and per-frequency channel algebra.
//! - [`modes`]: the 20-row padding-mode transition table.
//! - [`layer`]: kernel embedding, forward/inverse passes, stacks, diagnostics.
//! - [`oracle`]: brute-force references used to check all of the above.
//! - [`sampling`]: seeded random signals and well-conditioned kernels.

pub mod error;
pub mod io;
pub mod layer;
pub(crate) mod linalg;
pub mod modes;
pub mod oracle;
pub mod padding;
pub mod real;
pub mod sampling;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use layer::{
    condition_report, decompose_kernel_2d, embed_kernel, forced_inverse, forward, forward_full,
    inverse, kernel_spectrum, stack_forward, stack_inverse, ConditionReport, FrequencyCondition,
    KernelSpec, Layer, LayerStack,
};
pub use modes::{is_invertible, kernel_zero_frequencies, transition, transition_2d, TransitionRow};
pub use padding::{
    pad, pad_1d, pad_2d, padded_length, prior_zero_frequencies, unpad_1d, unpad_2d, verify_mode,
    PadMode, PaddedSignal, ZeroFlags,
};
pub use real::Real;
pub use spectral::{FrequencySet, Spectrum};
pub use tensor::{ChannelSignal, Precision};
