//! Multi-channel real sample grids.
//!
//! Samples are stored row-major with the channel as the slowest axis, so channel
//! `c` of a `h × w` grid occupies `data[c*h*w .. (c+1)*h*w]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Single,
    Double,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Single => "single",
            Precision::Double => "double",
        })
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" | "f32" => Ok(Precision::Single),
            "double" | "f64" => Ok(Precision::Double),
            other => Err(Error::Format(format!("unknown precision {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSignal<T = f64> {
    data: Vec<T>,
    dims: Vec<usize>,
    channels: usize,
}

impl<T: Real> ChannelSignal<T> {
    /// Builds a signal, checking the shape and that every sample is finite.
    pub fn new(data: Vec<T>, dims: Vec<usize>, channels: usize) -> Result<Self> {
        if dims.is_empty() || dims.len() > 2 {
            return Err(Error::Shape(format!(
                "signals have 1 or 2 spatial axes, got {}",
                dims.len()
            )));
        }
        if channels == 0 || dims.contains(&0) {
            return Err(Error::Shape(format!(
                "empty signal: dims {dims:?}, channels {channels}"
            )));
        }
        let expected = channels * dims.iter().product::<usize>();
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} samples for dims {dims:?} x {channels} channels, got {}",
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample { index });
        }
        Ok(Self {
            data,
            dims,
            channels,
        })
    }

    pub fn from_1d(data: Vec<T>) -> Result<Self> {
        let n = data.len();
        Self::new(data, vec![n], 1)
    }

    pub fn zeros(dims: Vec<usize>, channels: usize) -> Result<Self> {
        let len = channels * dims.iter().product::<usize>();
        Self::new(vec![T::zero(); len], dims, channels)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Samples per channel.
    pub fn plane_len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn channel(&self, c: usize) -> &[T] {
        let len = self.plane_len();
        &self.data[c * len..(c + 1) * len]
    }

    /// Converts every sample to another precision.
    pub fn cast<U: Real>(&self) -> ChannelSignal<U> {
        ChannelSignal {
            data: self.data.iter().map(|v| U::from_f(v.to_f())).collect(),
            dims: self.dims.clone(),
            channels: self.channels,
        }
    }

    /// Largest absolute sample difference; shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dims != other.dims || self.channels != other.channels {
            return Err(Error::Shape(format!(
                "cannot compare dims {:?}x{} with {:?}x{}",
                self.dims, self.channels, other.dims, other.channels
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.to_f() - b.to_f()).abs())
            .fold(0.0, f64::max))
    }
}
