use serde::Serialize;

use crate::error::{Error, Result};
use crate::imgio::{luma, Image};

/// PSNR reported for (numerically) identical images.
pub const PSNR_CAP: f64 = 99.0;

const SSIM_RADIUS: usize = 5;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quality {
    /// Decibels, over all channels on the 0..255 scale.
    pub psnr: f64,
    /// Mean SSIM of luma over all full 11x11 windows.
    pub ssim: f64,
    /// Interpolation error: RMS difference on the 0..255 scale.
    pub ie: f64,
}

pub fn compute_quality(reference: &Image, prediction: &Image) -> Result<Quality> {
    let mse = mse_255(reference, prediction)?;
    Ok(Quality {
        psnr: psnr_from_mse(mse),
        ssim: ssim(reference, prediction)?,
        ie: mse.sqrt(),
    })
}

pub fn psnr(reference: &Image, prediction: &Image) -> Result<f64> {
    Ok(psnr_from_mse(mse_255(reference, prediction)?))
}

fn psnr_from_mse(mse: f64) -> f64 {
    if mse < 1e-10 {
        PSNR_CAP
    } else {
        10.0 * (255.0 * 255.0 / mse).log10()
    }
}

fn check_shapes(reference: &Image, prediction: &Image) -> Result<()> {
    if reference.same_shape(prediction) {
        Ok(())
    } else {
        Err(Error::dims(format!(
            "reference is {}x{}x{}, prediction is {}x{}x{}",
            reference.width(),
            reference.height(),
            reference.channels(),
            prediction.width(),
            prediction.height(),
            prediction.channels()
        )))
    }
}

fn mse_255(reference: &Image, prediction: &Image) -> Result<f64> {
    check_shapes(reference, prediction)?;
    let sum: f64 = reference
        .data()
        .iter()
        .zip(prediction.data())
        .map(|(a, b)| {
            let d = (a - b) * 255.0;
            d * d
        })
        .sum();
    Ok(sum / reference.data().len() as f64)
}

fn gaussian_window() -> [f64; 2 * SSIM_RADIUS + 1] {
    let mut k = [0.0; 2 * SSIM_RADIUS + 1];
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - SSIM_RADIUS as f64;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let s: f64 = k.iter().sum();
    k.map(|v| v / s)
}

/// Mean SSIM of luma (0..255 scale) with an 11x11 Gaussian window
/// (sigma 1.5) evaluated at every position where the window fits.
pub fn ssim(reference: &Image, prediction: &Image) -> Result<f64> {
    check_shapes(reference, prediction)?;
    let (w, h) = (reference.width(), reference.height());
    let size = 2 * SSIM_RADIUS + 1;
    if w < size || h < size {
        return Err(Error::dims(format!(
            "SSIM needs at least {size}x{size}, got {w}x{h}"
        )));
    }
    let x: Vec<f64> = luma(reference).into_iter().map(|v| v * 255.0).collect();
    let y: Vec<f64> = luma(prediction).into_iter().map(|v| v * 255.0).collect();
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a * b).collect();

    let k = gaussian_window();
    let blur = |src: &[f64]| valid_convolve(src, w, h, &k);
    let (mx, my, sxx, syy, sxy) = (blur(&x), blur(&y), blur(&xx), blur(&yy), blur(&xy));

    let n = mx.len();
    let mut total = 0.0;
    for i in 0..n {
        total += ssim_term(mx[i], my[i], sxx[i], syy[i], sxy[i]);
    }
    Ok(total / n as f64)
}

/// SSIM of one window from its weighted first and second moments.
#[inline]
fn ssim_term(mx: f64, my: f64, exx: f64, eyy: f64, exy: f64) -> f64 {
    let vx = exx - mx * mx;
    let vy = eyy - my * my;
    let cov = exy - mx * my;
    ((2.0 * mx * my + SSIM_C1) * (2.0 * cov + SSIM_C2))
        / ((mx * mx + my * my + SSIM_C1) * (vx + vy + SSIM_C2))
}

/// Separable convolution keeping only positions where the kernel fits.
fn valid_convolve(src: &[f64], w: usize, h: usize, k: &[f64]) -> Vec<f64> {
    let r = k.len() / 2;
    let ow = w - 2 * r;
    let oh = h - 2 * r;
    let mut rows = Vec::with_capacity(ow * h);
    for y in 0..h {
        let line = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            rows.push(
                k.iter()
                    .zip(&line[x..x + k.len()])
                    .map(|(a, b)| a * b)
                    .sum::<f64>(),
            );
        }
    }
    let mut out = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        for x in 0..ow {
            let mut acc = 0.0;
            for (j, kv) in k.iter().enumerate() {
                acc += kv * rows[(y + j) * ow + x];
            }
            out.push(acc);
        }
    }
    out
}
