use std::path::Path;

use super::{write_atomic, FlowField};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"PIEH";
const HEADER_LEN: usize = 12;

pub fn read_flo(path: impl AsRef<Path>) -> Result<FlowField> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_flo(&bytes)
}

/// Writes a Middlebury `.flo` file. Components are narrowed to `f32`.
pub fn write_flo(flow: &FlowField, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_flo(flow))
}

pub fn encode_flo(flow: &FlowField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + flow.data().len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(flow.width() as i32).to_le_bytes());
    out.extend_from_slice(&(flow.height() as i32).to_le_bytes());
    for f in flow.data() {
        out.extend_from_slice(&(f[0] as f32).to_le_bytes());
        out.extend_from_slice(&(f[1] as f32).to_le_bytes());
    }
    out
}

pub fn decode_flo(bytes: &[u8]) -> Result<FlowField> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::format(bytes.len() as u64, "truncated .flo header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::format(0, "bad magic, expected PIEH"));
    }
    let width = i32::from_le_bytes(bytes[4..8].try_into().unwrap());
    let height = i32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if width <= 0 {
        return Err(Error::format(4, format!("nonpositive width {width}")));
    }
    if height <= 0 {
        return Err(Error::format(8, format!("nonpositive height {height}")));
    }
    let (width, height) = (width as usize, height as usize);
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| Error::format(4, "dimensions overflow"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(Error::format(
            (HEADER_LEN + payload.len().min(expected)) as u64,
            format!(
                "payload is {} bytes, {width}x{height} needs {expected}",
                payload.len()
            ),
        ));
    }
    let mut data = Vec::with_capacity(width * height);
    for (i, pair) in payload.chunks_exact(8).enumerate() {
        let u = f32::from_le_bytes(pair[..4].try_into().unwrap());
        let v = f32::from_le_bytes(pair[4..].try_into().unwrap());
        if !(u.is_finite() && v.is_finite()) {
            return Err(Error::format(
                (HEADER_LEN + i * 8) as u64,
                "non-finite flow component",
            ));
        }
        data.push([u as f64, v as f64]);
    }
    Ok(FlowField::from_parts(width, height, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(width: i32, height: i32, values: &[f32]) -> Vec<u8> {
        let mut b = MAGIC.to_vec();
        b.extend_from_slice(&width.to_le_bytes());
        b.extend_from_slice(&height.to_le_bytes());
        for v in values {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b
    }

    #[test]
    fn one_pixel() {
        let flow = decode_flo(&file(1, 1, &[1.5, -2.0])).unwrap();
        assert_eq!(flow.data(), &[[1.5, -2.0]]);
    }

    #[test]
    fn bad_magic() {
        let mut bytes = file(1, 1, &[0.0, 0.0]);
        bytes[..4].copy_from_slice(b"HEIP");
        assert!(decode_flo(&bytes)
            .unwrap_err()
            .to_string()
            .contains("magic"));
    }

    #[test]
    fn rejects_malformed() {
        assert!(decode_flo(&file(0, 1, &[])).is_err());
        assert!(decode_flo(&file(1, -3, &[])).is_err());
        assert!(decode_flo(&file(2, 1, &[0.0, 0.0])).is_err());
        assert!(decode_flo(&file(1, 1, &[0.0, 0.0, 0.0])).is_err());
        assert!(decode_flo(&file(1, 1, &[f32::NAN, 0.0])).is_err());
        assert!(decode_flo(b"PIE").is_err());
    }

    #[test]
    fn re_encoding_is_byte_identical() {
        let bytes = file(2, 1, &[0.1, -7.25, 1e-30, 3.0e5]);
        assert_eq!(encode_flo(&decode_flo(&bytes).unwrap()), bytes);
    }
}
