use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::Float;
use rustfft::FftNum;

use crate::tensor::Precision;

/// Floating-point sample type a pipeline runs in end to end.
pub trait Real: FftNum + Float + Default + Display + Debug + Sum {
    const PRECISION: Precision;

    /// Tolerance for mode and symmetry checks.
    const MODE_TOL: f64;

    /// Default bound on `max|inverse(forward(x)) - x|`.
    const ROUNDTRIP_TOL: f64;

    /// Largest tolerated imaginary residue of an inverse transform, relative to
    /// the magnitude of the real output.
    const REAL_RESIDUE_TOL: f64;

    fn from_f(v: f64) -> Self;
    fn to_f(self) -> f64;
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Double;
    const MODE_TOL: f64 = 1e-10;
    const ROUNDTRIP_TOL: f64 = 1e-8;
    const REAL_RESIDUE_TOL: f64 = 1e-6;

    fn from_f(v: f64) -> Self {
        v
    }
    fn to_f(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const PRECISION: Precision = Precision::Single;
    const MODE_TOL: f64 = 1e-4;
    const ROUNDTRIP_TOL: f64 = 1e-3;
    const REAL_RESIDUE_TOL: f64 = 1e-2;

    fn from_f(v: f64) -> Self {
        v as f32
    }
    fn to_f(self) -> f64 {
        self as f64
    }
}
