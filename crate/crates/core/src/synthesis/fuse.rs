use crate::error::{Error, Result};
use crate::imgio::Image;

/// Per-pixel confidence in the frame-0 warp, in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionMask {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl FusionMask {
    /// Builds a mask, clamping values into `[0, 1]`.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::dims(format!(
                "mask has {} values, expected {}",
                data.len(),
                width * height
            )));
        }
        if data.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("mask contains NaN"));
        }
        let data = data.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(FusionMask {
            width,
            height,
            data,
        })
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        FusionMask::new(width, height, vec![value; width * height])
    }

    /// Rule-based mask from which side is usable at each pixel: 0.5 when both
    /// or neither side is usable, 0 when only side 1 is, 1 when only side 0 is.
    pub fn from_usability(
        width: usize,
        height: usize,
        usable0: &[bool],
        usable1: &[bool],
    ) -> Result<Self> {
        if usable0.len() != width * height || usable1.len() != width * height {
            return Err(Error::dims("usability flags do not match the mask size"));
        }
        let data = usable0
            .iter()
            .zip(usable1)
            .map(|(&a, &b)| match (a, b) {
                (false, true) => 0.0,
                (true, false) => 1.0,
                _ => 0.5,
            })
            .collect();
        Ok(FusionMask {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Fuses the two warped frames with temporal weights `1 - t` and `t`.
pub fn fuse(w0: &Image, w1: &Image, mask: &FusionMask, t: f64) -> Result<Image> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::invalid(format!("t must be in (0, 1), got {t}")));
    }
    if !w0.same_shape(w1) || mask.width != w0.width() || mask.height != w0.height() {
        return Err(Error::dims("warped frames and mask must share dimensions"));
    }
    let c = w0.channels();
    let mut data = Vec::with_capacity(w0.data().len());
    for (i, &m) in mask.data.iter().enumerate() {
        let a = &w0.data()[i * c..(i + 1) * c];
        let b = &w1.data()[i * c..(i + 1) * c];
        let k0 = (1.0 - t) * m;
        let k1 = t * (1.0 - m);
        let denom = k0 + k1;
        for ch in 0..c {
            data.push(if m == 1.0 {
                a[ch]
            } else if m == 0.0 {
                b[ch]
            } else if denom < 1e-9 {
                (1.0 - t) * a[ch] + t * b[ch]
            } else {
                (k0 * a[ch] + k1 * b[ch]) / denom
            });
        }
    }
    Image::new(w0.width(), w0.height(), c, data)
}
