//! Binary (P5) PGM images mapped to single-channel 2D signals in `[0, 1]`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::ChannelSignal;

struct Header {
    width: usize,
    height: usize,
    maxval: u32,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    if !bytes.starts_with(b"P5") {
        return Err(Error::Format("not a binary (P5) PGM".into()));
    }
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        // whitespace and comment lines
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::CorruptFile("truncated PGM header".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("malformed PGM header".into()));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("PGM header value out of range".into()))?;
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::CorruptFile("truncated PGM header".into())),
    }
    let [width, height, maxval] = fields;
    if maxval != 255 && maxval != 65535 {
        return Err(Error::Format(format!(
            "unsupported maxval {maxval} (expected 255 or 65535)"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::Format("empty PGM image".into()));
    }
    Ok(Header {
        width: width as usize,
        height: height as usize,
        maxval,
        data_start: pos,
    })
}

pub fn decode_pgm(bytes: &[u8]) -> Result<ChannelSignal> {
    let h = parse_header(bytes)?;
    let count = h.width * h.height;
    let raster = &bytes[h.data_start..];
    let maxval = h.maxval as f64;
    let data: Vec<f64> = if h.maxval == 255 {
        if raster.len() != count {
            return Err(Error::CorruptFile(format!(
                "expected {count} pixels, found {} bytes",
                raster.len()
            )));
        }
        raster.iter().map(|&v| v as f64 / maxval).collect()
    } else {
        if raster.len() != 2 * count {
            return Err(Error::CorruptFile(format!(
                "expected {count} 16-bit pixels, found {} bytes",
                raster.len()
            )));
        }
        raster
            .chunks_exact(2)
            .map(|p| u16::from_be_bytes([p[0], p[1]]) as f64 / maxval)
            .collect()
    };
    ChannelSignal::new(data, vec![h.height, h.width], 1)
}

pub fn encode_pgm<T: Real>(signal: &ChannelSignal<T>, maxval: u16) -> Result<Vec<u8>> {
    if signal.channels() != 1 || signal.ndim() != 2 {
        return Err(Error::Shape(format!(
            "PGM needs a 1-channel 2D signal, got dims {:?} x {} channels",
            signal.dims(),
            signal.channels()
        )));
    }
    if maxval != 255 && maxval != 65535 {
        return Err(Error::Format(format!("unsupported maxval {maxval}")));
    }
    let (height, width) = (signal.dims()[0], signal.dims()[1]);
    let mut out = format!("P5\n{width} {height}\n{maxval}\n").into_bytes();
    let m = maxval as f64;
    for v in signal.data() {
        let q = (v.to_f() * m).round().clamp(0.0, m) as u16;
        if maxval == 255 {
            out.push(q as u8);
        } else {
            out.extend_from_slice(&q.to_be_bytes());
        }
    }
    Ok(out)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<ChannelSignal> {
    decode_pgm(&std::fs::read(path)?)
}

/// Writes an 8-bit PGM; samples are scaled by 255, rounded and clamped.
pub fn write_pgm<T: Real>(signal: &ChannelSignal<T>, path: impl AsRef<Path>) -> Result<()> {
    write_pgm_with_maxval(signal, path, 255)
}

pub fn write_pgm_with_maxval<T: Real>(
    signal: &ChannelSignal<T>,
    path: impl AsRef<Path>,
    maxval: u16,
) -> Result<()> {
    let bytes = encode_pgm(signal, maxval)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_pixels_linearly() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 255, 128, 64]);
        let s = decode_pgm(&bytes).unwrap();
        assert_eq!(s.dims(), &[2, 2]);
        assert_eq!(s.data(), &[0.0, 1.0, 128.0 / 255.0, 64.0 / 255.0]);
    }

    #[test]
    fn accepts_comment_after_magic() {
        let mut bytes = b"P5\n# made by hand\n3 1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3]);
        let s = decode_pgm(&bytes).unwrap();
        assert_eq!(s.dims(), &[1, 3]);
    }

    #[test]
    fn sixteen_bit_is_big_endian() {
        let mut bytes = b"P5 1 1 65535\n".to_vec();
        bytes.extend_from_slice(&[0x80, 0x00]);
        let s = decode_pgm(&bytes).unwrap();
        assert_eq!(s.data(), &[32768.0 / 65535.0]);
        assert_eq!(
            encode_pgm(&s, 65535).unwrap()[bytes.len() - 2..],
            [0x80, 0x00]
        );
    }

    #[test]
    fn rejects_ascii_pgm() {
        assert!(matches!(
            decode_pgm(b"P2\n1 1\n255\n0\n"),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn truncated_raster_is_corrupt() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 1, 2]);
        assert!(matches!(decode_pgm(&bytes), Err(Error::CorruptFile(_))));
    }

    #[test]
    fn write_rejects_multichannel() {
        let s = ChannelSignal::new(vec![0.5f64; 12], vec![2, 2], 3).unwrap();
        assert!(matches!(encode_pgm(&s, 255), Err(Error::Shape(_))));
    }

    #[test]
    fn write_clamps_and_rounds() {
        let s = ChannelSignal::new(vec![-0.2f64, 0.5, 1.7, 0.999], vec![1, 4], 1).unwrap();
        let bytes = encode_pgm(&s, 255).unwrap();
        assert_eq!(&bytes[bytes.len() - 4..], &[0, 128, 255, 255]);
    }
}
