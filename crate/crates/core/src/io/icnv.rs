//! ICNV tensor files.
//!
//! Byte layout, no padding between fields:
//!
//! ```text
//! "ICNV" | version u8 = 1 | dtype u8 (0 = f32, 1 = f64) | ndim u8 | channels-present u8 = 1
//!        | channels u32 LE | dims: ndim x u32 LE | payload, little-endian, channel-major
//! ```
//!
//! Signals use ndim 1 or 2. Kernels use ndim 3 or 4 with dims
//! `[c_out, c_in, taps_h(, taps_w)]` and a channel count of 1.

use std::path::Path;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::{ChannelSignal, Precision};

pub const ICNV_MAGIC: &[u8; 4] = b"ICNV";
const VERSION: u8 = 1;
const DTYPE_F32: u8 = 0;
const DTYPE_F64: u8 = 1;

/// Raw decoded contents of an ICNV file.
#[derive(Debug, Clone, PartialEq)]
pub struct IcnvTensor {
    pub precision: Precision,
    pub channels: usize,
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
}

impl IcnvTensor {
    pub fn into_signal(self) -> Result<ChannelSignal> {
        if self.dims.len() > 2 {
            return Err(Error::Format(format!(
                "expected a 1D or 2D signal, file has {} axes",
                self.dims.len()
            )));
        }
        ChannelSignal::new(self.data, self.dims, self.channels)
    }
}

pub fn encode_tensor(
    data: &[f64],
    dims: &[usize],
    channels: usize,
    precision: Precision,
) -> Result<Vec<u8>> {
    if dims.is_empty() || dims.len() > 4 {
        return Err(Error::Shape(format!("unsupported rank {}", dims.len())));
    }
    if channels * dims.iter().product::<usize>() != data.len() {
        return Err(Error::Shape("payload length does not match header".into()));
    }
    if let Some(index) = data.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidSample { index });
    }
    let width = match precision {
        Precision::Single => 4,
        Precision::Double => 8,
    };
    let mut out = Vec::with_capacity(12 + 4 * dims.len() + width * data.len());
    out.extend_from_slice(ICNV_MAGIC);
    out.push(VERSION);
    out.push(match precision {
        Precision::Single => DTYPE_F32,
        Precision::Double => DTYPE_F64,
    });
    out.push(dims.len() as u8);
    out.push(1);
    out.extend_from_slice(&u32_field(channels)?.to_le_bytes());
    for &d in dims {
        out.extend_from_slice(&u32_field(d)?.to_le_bytes());
    }
    match precision {
        Precision::Single => data
            .iter()
            .for_each(|&v| out.extend_from_slice(&(v as f32).to_le_bytes())),
        Precision::Double => data
            .iter()
            .for_each(|&v| out.extend_from_slice(&v.to_le_bytes())),
    }
    Ok(out)
}

fn u32_field(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Shape(format!("extent {v} does not fit in u32")))
}

pub fn decode_tensor(bytes: &[u8]) -> Result<IcnvTensor> {
    if bytes.len() < 4 || &bytes[..4] != ICNV_MAGIC {
        return Err(Error::Format("missing ICNV magic".into()));
    }
    if bytes.len() < 12 {
        return Err(Error::CorruptFile("truncated header".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", bytes[4])));
    }
    let (precision, width) = match bytes[5] {
        DTYPE_F32 => (Precision::Single, 4),
        DTYPE_F64 => (Precision::Double, 8),
        code => return Err(Error::UnsupportedDtype(code)),
    };
    let ndim = bytes[6] as usize;
    if ndim == 0 || ndim > 4 {
        return Err(Error::CorruptFile(format!("invalid rank {ndim}")));
    }
    if bytes[7] != 1 {
        return Err(Error::CorruptFile("channels-present flag must be 1".into()));
    }
    let header_len = 12 + 4 * ndim;
    if bytes.len() < header_len {
        return Err(Error::CorruptFile("truncated header".into()));
    }
    let read_u32 = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    let channels = read_u32(8);
    let dims: Vec<usize> = (0..ndim).map(|i| read_u32(12 + 4 * i)).collect();
    let count = dims
        .iter()
        .try_fold(channels, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::CorruptFile("header extents overflow".into()))?;
    let payload = &bytes[header_len..];
    if payload.len() != count * width {
        return Err(Error::CorruptFile(format!(
            "header declares {count} samples ({} bytes), payload has {} bytes",
            count * width,
            payload.len()
        )));
    }
    let data: Vec<f64> = match precision {
        Precision::Single => payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect(),
        Precision::Double => payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
    };
    Ok(IcnvTensor {
        precision,
        channels,
        dims,
        data,
    })
}

pub fn read_tensor_file(path: impl AsRef<Path>) -> Result<ChannelSignal> {
    decode_tensor(&std::fs::read(path)?)?.into_signal()
}

/// Writes `signal` in the requested precision. Non-finite samples are rejected
/// before anything is written.
pub fn write_tensor_file<T: Real>(
    signal: &ChannelSignal<T>,
    path: impl AsRef<Path>,
    precision: Precision,
) -> Result<()> {
    let data: Vec<f64> = signal.data().iter().map(|v| v.to_f()).collect();
    let bytes =
        encode_tensor(&data, signal.dims(), signal.channels(), precision).map_err(|e| match e {
            Error::InvalidSample { index } => Error::Io(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("invalid sample at index {index}"),
            )),
            other => other,
        })?;
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Reads a kernel tensor: returns `(taps, c_out, c_in, tap extents)`.
pub fn read_kernel_file(path: impl AsRef<Path>) -> Result<(Vec<f64>, usize, usize, Vec<usize>)> {
    let t = decode_tensor(&std::fs::read(path)?)?;
    if t.dims.len() < 3 || t.channels != 1 {
        return Err(Error::Format(format!(
            "kernel files have dims [c_out, c_in, taps..] and one channel, got dims {:?} x {}",
            t.dims, t.channels
        )));
    }
    Ok((t.data, t.dims[0], t.dims[1], t.dims[2..].to_vec()))
}

pub fn write_kernel_file(
    taps: &[f64],
    c_out: usize,
    c_in: usize,
    extents: &[usize],
    path: impl AsRef<Path>,
    precision: Precision,
) -> Result<()> {
    let mut dims = vec![c_out, c_in];
    dims.extend_from_slice(extents);
    std::fs::write(path, encode_tensor(taps, &dims, 1, precision)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_reference_layout() {
        let mut bytes = b"ICNV".to_vec();
        bytes.extend_from_slice(&[1, 1, 1, 1]);
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&4u32.to_le_bytes());
        for v in [1.0f64, 2.0, 3.0, 4.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        let s = decode_tensor(&bytes).unwrap().into_signal().unwrap();
        assert_eq!(s.data(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.dims(), &[4]);
        assert_eq!(s.channels(), 1);
    }

    #[test]
    fn header_size_follows_rank() {
        let bytes = encode_tensor(&[0.0], &[1, 1], 1, Precision::Double).unwrap();
        assert_eq!(bytes.len(), 28);
        let bytes = encode_tensor(&[0.0], &[1], 1, Precision::Double).unwrap();
        assert_eq!(bytes.len(), 24);
        let bytes = encode_tensor(&[0.0], &[1], 1, Precision::Single).unwrap();
        assert_eq!(bytes.len(), 20);
    }

    #[test]
    fn short_payload_is_corrupt() {
        let mut bytes = encode_tensor(&[1.0, 2.0, 3.0, 4.0], &[4], 1, Precision::Double).unwrap();
        bytes.truncate(bytes.len() - 8);
        assert!(matches!(decode_tensor(&bytes), Err(Error::CorruptFile(_))));
    }

    #[test]
    fn bad_magic_and_dtype() {
        assert!(matches!(
            decode_tensor(b"ICNX\x01\x01\x01\x01"),
            Err(Error::Format(_))
        ));
        let mut bytes = encode_tensor(&[1.0], &[1], 1, Precision::Double).unwrap();
        bytes[5] = 7;
        assert!(matches!(
            decode_tensor(&bytes),
            Err(Error::UnsupportedDtype(7))
        ));
    }

    #[test]
    fn non_finite_rejected_on_write() {
        let dir = tempfile::tempdir().unwrap();
        let mut data = vec![1.0f64, 2.0];
        let s = ChannelSignal::from_1d(data.clone()).unwrap();
        data[1] = f64::INFINITY;
        assert!(encode_tensor(&data, &[2], 1, Precision::Double).is_err());
        // a valid signal still writes fine
        write_tensor_file(&s, dir.path().join("ok.icnv"), Precision::Double).unwrap();
    }

    #[test]
    fn kernel_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.icnv");
        let taps: Vec<f64> = (0..2 * 2 * 3).map(|i| i as f64 * 0.5).collect();
        write_kernel_file(&taps, 2, 2, &[3], &path, Precision::Double).unwrap();
        let (read, c_out, c_in, ext) = read_kernel_file(&path).unwrap();
        assert_eq!((read, c_out, c_in, ext), (taps, 2, 2, vec![3]));
    }
}
