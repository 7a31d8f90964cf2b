use crate::error::{Error, Result};
use crate::imgio::{FlowField, Image};

/// A backward-warped image with per-pixel validity.
#[derive(Clone, Debug, PartialEq)]
pub struct Warped {
    pub image: Image,
    /// False where the sample point left `[0, W-1] x [0, H-1]`. Those pixels
    /// still hold a clamp-to-edge sample.
    pub valid: Vec<bool>,
}

/// `out(u) = img(u + flow(u))` with bilinear sampling.
pub fn backward_warp(image: &Image, flow: &FlowField) -> Result<Warped> {
    let (w, h, c) = (image.width(), image.height(), image.channels());
    if !flow.same_size(w, h) {
        return Err(Error::dims(format!(
            "image is {w}x{h}, flow is {}x{}",
            flow.width(),
            flow.height()
        )));
    }
    let (max_x, max_y) = ((w - 1) as f64, (h - 1) as f64);
    let mut data = Vec::with_capacity(w * h * c);
    let mut valid = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let f = flow.get(x, y);
            let (sx, sy) = (x as f64 + f[0], y as f64 + f[1]);
            valid.push((0.0..=max_x).contains(&sx) && (0.0..=max_y).contains(&sy));
            for ch in 0..c {
                data.push(image.sample_bilinear(sx, sy, ch));
            }
        }
    }
    Ok(Warped {
        image: Image::new(w, h, c, data)?,
        valid,
    })
}
