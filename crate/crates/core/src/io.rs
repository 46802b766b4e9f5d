//! `TNS1` tensor files and binary PGM/PPM images.
//!
//! `TNS1` layout (little-endian):
//! - magic: `b"TNS1"`
//! - n1, n2, n3: u32
//! - dtype: u8, 0 = f64 payload, 1 = u8 mask payload
//! - payload: n1*n2*n3 values, `i` fastest, then `j`, then `k`

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::{DenseTensor3, Dims, ObservationMask};

pub const MAGIC: &[u8; 4] = b"TNS1";
pub const HEADER_LEN: usize = 17;

const DTYPE_F64: u8 = 0;
const DTYPE_MASK: u8 = 1;

/// Contents of a `TNS1` file.
#[derive(Clone, Debug, PartialEq)]
pub enum TensorFile {
    Dense(DenseTensor3),
    Mask(ObservationMask),
}

impl TensorFile {
    pub fn dims(&self) -> Dims {
        match self {
            TensorFile::Dense(t) => t.dims(),
            TensorFile::Mask(m) => m.dims(),
        }
    }

    pub fn into_dense(self) -> Result<DenseTensor3> {
        match self {
            TensorFile::Dense(t) => Ok(t),
            TensorFile::Mask(_) => Err(Error::Format("expected a float64 tensor, found a mask".into())),
        }
    }

    pub fn into_mask(self) -> Result<ObservationMask> {
        match self {
            TensorFile::Mask(m) => Ok(m),
            TensorFile::Dense(_) => Err(Error::Format("expected a mask, found a float64 tensor".into())),
        }
    }
}

fn header(dims: Dims, dtype: u8) -> Result<Vec<u8>> {
    let (n1, n2, n3) = dims;
    let mut out = Vec::with_capacity(HEADER_LEN);
    out.extend_from_slice(MAGIC);
    for n in [n1, n2, n3] {
        let n = u32::try_from(n)
            .map_err(|_| Error::Format(format!("dimension {n} does not fit in u32")))?;
        out.extend_from_slice(&n.to_le_bytes());
    }
    out.push(dtype);
    Ok(out)
}

pub fn encode_tensor(a: &DenseTensor3) -> Result<Vec<u8>> {
    let mut out = header(a.dims(), DTYPE_F64)?;
    out.reserve(a.len() * 8);
    for v in a.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn encode_mask(mask: &ObservationMask) -> Result<Vec<u8>> {
    let mut out = header(mask.dims(), DTYPE_MASK)?;
    out.extend(mask.to_indicator());
    Ok(out)
}

pub fn decode(bytes: &[u8]) -> Result<TensorFile> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "file is {} bytes, shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &bytes[..4])));
    }
    let dim = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    let dims = (dim(4), dim(8), dim(12));
    if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
        return Err(Error::InvalidDims(dims));
    }
    let dtype = bytes[16];
    let width = match dtype {
        DTYPE_F64 => 8,
        DTYPE_MASK => 1,
        other => return Err(Error::Format(format!("unknown dtype tag {other}"))),
    };
    let payload_len = dims
        .0
        .checked_mul(dims.1)
        .and_then(|n| n.checked_mul(dims.2))
        .and_then(|n| n.checked_mul(width))
        .ok_or_else(|| Error::Format(format!("dimensions {dims:?} overflow the payload size")))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != payload_len {
        return Err(Error::Format(format!(
            "payload is {} bytes, expected {payload_len}",
            payload.len()
        )));
    }
    if dtype == DTYPE_MASK {
        return Ok(TensorFile::Mask(ObservationMask::from_indicator(dims, payload)?));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(TensorFile::Dense(DenseTensor3::from_vec(dims, data)?))
}

pub fn write_tensor(path: impl AsRef<Path>, a: &DenseTensor3) -> Result<()> {
    fs::write(path, encode_tensor(a)?)?;
    Ok(())
}

pub fn write_mask(path: impl AsRef<Path>, mask: &ObservationMask) -> Result<()> {
    fs::write(path, encode_mask(mask)?)?;
    Ok(())
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<TensorFile> {
    decode(&fs::read(path)?)
}

/// Splits a PNM header into tokens, skipping `#` comments. Returns the
/// tokens and the offset of the byte after the single whitespace that ends
/// the header.
fn pnm_header(bytes: &[u8], count: usize) -> Result<(Vec<String>, usize)> {
    let mut tokens = Vec::with_capacity(count);
    let mut pos = 0;
    while tokens.len() < count {
        match bytes.get(pos) {
            None => return Err(Error::Format("truncated PNM header".into())),
            Some(b'#') => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            Some(c) if c.is_ascii_whitespace() => pos += 1,
            Some(_) => {
                let start = pos;
                while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
                    pos += 1;
                }
                tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
            }
        }
    }
    match bytes.get(pos) {
        Some(c) if c.is_ascii_whitespace() => Ok((tokens, pos + 1)),
        _ => Err(Error::Format("PNM header must end with one whitespace byte".into())),
    }
}

/// Decodes binary PGM (`P5`, one slice) or PPM (`P6`, three slices).
/// Rows map to `i`, columns to `j`, channels to `k`; samples are divided
/// by maxval.
pub fn decode_pnm(bytes: &[u8]) -> Result<DenseTensor3> {
    let (tokens, start) = pnm_header(bytes, 4)?;
    let channels = match tokens[0].as_str() {
        "P5" => 1,
        "P6" => 3,
        other => return Err(Error::Format(format!("unsupported image format {other:?}"))),
    };
    let number = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Format(format!("bad PNM header field {s:?}")))
    };
    let width = number(&tokens[1])?;
    let height = number(&tokens[2])?;
    let maxval = number(&tokens[3])?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("maxval {maxval} outside 1..=65535")));
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidDims((height, width, channels)));
    }
    let sample_bytes = if maxval > 255 { 2 } else { 1 };
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels * sample_bytes))
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let data = &bytes[start..];
    if data.len() < expected {
        return Err(Error::Format(format!(
            "image payload is {} bytes, expected {expected}",
            data.len()
        )));
    }
    let scale = maxval as f64;
    let sample = |idx: usize| -> f64 {
        let raw = if sample_bytes == 2 {
            u16::from_be_bytes([data[2 * idx], data[2 * idx + 1]]) as f64
        } else {
            data[idx] as f64
        };
        raw / scale
    };
    DenseTensor3::from_fn((height, width, channels), |i, j, k| {
        sample((i * width + j) * channels + k)
    })
}

/// Encodes a tensor with one (`P5`) or three (`P6`) frontal slices as an
/// 8-bit image. Values are clamped to `[0, 1]` and rounded.
pub fn encode_pnm(a: &DenseTensor3) -> Result<Vec<u8>> {
    let (n1, n2, n3) = a.dims();
    let magic = match n3 {
        1 => "P5",
        3 => "P6",
        _ => {
            return Err(Error::Format(format!(
                "images need 1 or 3 frontal slices, got {n3}"
            )))
        }
    };
    let mut out = format!("{magic}\n{n2} {n1}\n255\n").into_bytes();
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                out.push((a.get(i, j, k).clamp(0.0, 1.0) * 255.0).round() as u8);
            }
        }
    }
    Ok(out)
}

pub fn image_to_tensor(path: impl AsRef<Path>) -> Result<DenseTensor3> {
    decode_pnm(&fs::read(path)?)
}

pub fn tensor_to_image(path: impl AsRef<Path>, a: &DenseTensor3) -> Result<()> {
    fs::write(path, encode_pnm(a)?)?;
    Ok(())
}
