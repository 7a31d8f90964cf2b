use std::path::Path;

use super::{write_atomic, HoleMask, Image};
use crate::error::{Error, Result};

/// Reads a binary `P5`/`P6` file with maxval 255.
pub fn read_image(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pnm(&bytes)
}

/// Writes `image` as `P5` (gray) or `P6` (RGB).
pub fn write_image(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_pnm(image))
}

pub fn encode_pnm(image: &Image) -> Vec<u8> {
    let magic = if image.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(image.data().iter().map(|&s| quantize(s)));
    out
}

#[inline]
fn quantize(sample: f64) -> u8 {
    (sample * 255.0).round().clamp(0.0, 255.0) as u8
}

pub fn decode_pnm(bytes: &[u8]) -> Result<Image> {
    let mut cursor = Header { bytes, pos: 0 };
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => return Err(Error::format(0, "expected magic P5 or P6")),
    };
    cursor.pos = 2;
    let (width, _) = cursor.token("width")?;
    let (height, _) = cursor.token("height")?;
    let (maxval, maxval_at) = cursor.token("maxval")?;
    if maxval != 255 {
        return Err(Error::format(
            maxval_at,
            format!("unsupported maxval {maxval}, only 255 is accepted"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::format(2, format!("empty image {width}x{height}")));
    }
    // exactly one whitespace byte separates maxval from the payload
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(Error::format(
                cursor.pos as u64,
                "missing whitespace after maxval",
            ))
        }
    }
    let len = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::format(2, "image dimensions overflow"))?;
    let payload = &bytes[cursor.pos..];
    if payload.len() < len {
        return Err(Error::format(
            bytes.len() as u64,
            format!("truncated payload: {} of {len} bytes", payload.len()),
        ));
    }
    let data = payload[..len].iter().map(|&b| b as f64 / 255.0).collect();
    Image::new(width, height, channels, data)
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    /// Skips whitespace and `#` comments, then parses a decimal token.
    /// Returns the value and the offset where it starts.
    fn token(&mut self, what: &str) -> Result<(usize, u64)> {
        let start = self.pos;
        loop {
            match self.bytes.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while !matches!(self.bytes.get(self.pos), None | Some(b'\n')) {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
        if self.pos == start {
            return Err(Error::format(
                self.pos as u64,
                format!("expected whitespace before {what}"),
            ));
        }
        let digits_at = self.pos;
        while matches!(self.bytes.get(self.pos), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_at {
            return Err(Error::format(
                digits_at as u64,
                format!("expected decimal {what}"),
            ));
        }
        std::str::from_utf8(&self.bytes[digits_at..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map(|v| (v, digits_at as u64))
            .ok_or_else(|| Error::format(digits_at as u64, format!("{what} out of range")))
    }
}

/// Writes a hole mask as `P5`, 255 for holes and 0 elsewhere.
pub fn write_holes(mask: &HoleMask, path: impl AsRef<Path>) -> Result<()> {
    let data = mask
        .data()
        .iter()
        .map(|&h| if h { 1.0 } else { 0.0 })
        .collect();
    let image = Image::new(mask.width(), mask.height(), 1, data)?;
    write_image(&image, path)
}

/// Reads a hole mask; gray values of 128 and above are holes.
pub fn read_holes(path: impl AsRef<Path>) -> Result<HoleMask> {
    let image = read_image(path)?;
    if image.channels() != 1 {
        return Err(Error::format(0, "hole mask must be a P5 image"));
    }
    let data = image.data().iter().map(|&v| v >= 0.5).collect();
    HoleMask::new(image.width(), image.height(), data)
}
