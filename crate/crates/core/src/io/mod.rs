//! File formats: ICNV tensors and binary PGM images.

mod icnv;
mod pgm;

pub use icnv::{
    decode_tensor, encode_tensor, read_kernel_file, read_tensor_file, write_kernel_file,
    write_tensor_file, IcnvTensor, ICNV_MAGIC,
};
pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_pgm, write_pgm_with_maxval};

use std::path::Path;

use crate::error::Result;
use crate::tensor::ChannelSignal;

/// Reads a signal from either format, chosen by the leading magic bytes.
pub fn read_signal(path: impl AsRef<Path>) -> Result<ChannelSignal> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(b"P5") {
        decode_pgm(&bytes)
    } else {
        decode_tensor(&bytes)?.into_signal()
    }
}
