use crate::error::{Error, Result};

/// Row-major raster of `f64` samples in `[0, 1]`, interleaved by channel.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

/// Luma weights applied to RGB samples.
const LUMA: [f64; 3] = [0.299, 0.587, 0.114];

impl Image {
    /// Builds an image, clamping samples into `[0, 1]`.
    ///
    /// Fails on zero dimensions, a channel count other than 1 or 3, a data
    /// length that does not match, or any non-finite sample.
    pub fn new(width: usize, height: usize, channels: usize, mut data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::dims(format!("empty image {width}x{height}")));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::invalid(format!(
                "unsupported channel count {channels}"
            )));
        }
        let expected = width * height * channels;
        if data.len() != expected {
            return Err(Error::dims(format!(
                "image data has {} samples, expected {expected}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample at index {i}")));
        }
        for v in &mut data {
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    /// Constant image.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Image::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    /// Builds an image from `f(x, y, channel)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Image::new(width, height, channels, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// The pixel at `(x, y)` as a channel slice.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[f64] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    /// True when both images share width, height and channel count.
    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    /// Bilinear sample of channel `c` at a continuous position, with
    /// clamp-to-edge addressing.
    pub fn sample_bilinear(&self, x: f64, y: f64, c: usize) -> f64 {
        let (x0, x1, fx) = bilinear_taps(x, self.width);
        let (y0, y1, fy) = bilinear_taps(y, self.height);
        let top = self.get(x0, y0, c) * (1.0 - fx) + self.get(x1, y0, c) * fx;
        let bottom = self.get(x0, y1, c) * (1.0 - fx) + self.get(x1, y1, c) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Single-channel luma image (a clone for gray input).
    pub fn to_luma(&self) -> Image {
        if self.channels == 1 {
            return self.clone();
        }
        Image {
            width: self.width,
            height: self.height,
            channels: 1,
            data: luma(self),
        }
    }
}

/// Per-pixel luma (`0.299 R + 0.587 G + 0.114 B`) in `[0, 1]`.
pub fn luma(image: &Image) -> Vec<f64> {
    match image.channels {
        1 => image.data.clone(),
        _ => image
            .data
            .chunks_exact(3)
            .map(|p| LUMA[0] * p[0] + LUMA[1] * p[1] + LUMA[2] * p[2])
            .collect(),
    }
}

/// Integer taps and fractional weight for clamp-to-edge linear sampling.
#[inline]
pub(crate) fn bilinear_taps(pos: f64, len: usize) -> (usize, usize, f64) {
    let max = (len - 1) as f64;
    let p = pos.clamp(0.0, max);
    let i0 = p.floor();
    let frac = p - i0;
    let i0 = i0 as usize;
    let i1 = (i0 + 1).min(len - 1);
    (i0, i1, frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_out_of_range_samples() {
        let img = Image::new(2, 1, 1, vec![-0.5, 1.5]).unwrap();
        assert_eq!(img.data(), &[0.0, 1.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Image::new(2, 2, 1, vec![0.0; 3]).is_err());
        assert!(Image::new(2, 2, 2, vec![0.0; 8]).is_err());
        assert!(Image::new(0, 2, 1, vec![]).is_err());
        assert!(Image::new(1, 1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn luma_weights() {
        let img = Image::new(1, 1, 3, vec![1.0, 0.0, 0.0]).unwrap();
        assert!((img.to_luma().get(0, 0, 0) - 0.299).abs() < 1e-15);
        let white = Image::filled(1, 1, 3, 1.0).unwrap();
        assert!((luma(&white)[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bilinear_midpoint_and_clamp() {
        let img = Image::new(3, 1, 1, vec![0.0, 0.5, 1.0]).unwrap();
        assert!((img.sample_bilinear(0.5, 0.0, 0) - 0.25).abs() < 1e-15);
        assert_eq!(img.sample_bilinear(-3.0, 0.0, 0), 0.0);
        assert_eq!(img.sample_bilinear(7.0, 2.0, 0), 1.0);
    }
}
