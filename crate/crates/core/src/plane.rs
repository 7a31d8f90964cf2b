//! Single-channel `f64` raster used by the estimators and metrics.

use crate::imgio::{image::bilinear_taps, luma, Image};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Plane {
            width,
            height,
            data,
        }
    }

    /// Luma of `image` multiplied by `scale`.
    pub fn luma_scaled(image: &Image, scale: f64) -> Self {
        let data = luma(image).into_iter().map(|v| v * scale).collect();
        Plane::new(image.width(), image.height(), data)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Clamp-to-edge read at signed coordinates.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.get(x, y)
    }

    pub fn sample(&self, x: f64, y: f64) -> f64 {
        let (x0, x1, fx) = bilinear_taps(x, self.width);
        let (y0, y1, fy) = bilinear_taps(y, self.height);
        let top = self.get(x0, y0) * (1.0 - fx) + self.get(x1, y0) * fx;
        let bottom = self.get(x0, y1) * (1.0 - fx) + self.get(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Half-resolution plane from a 2x2 box average. Odd trailing rows and
    /// columns are dropped.
    pub fn downsample_half(&self) -> Plane {
        let w = self.width / 2;
        let h = self.height / 2;
        let mut data = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                let (sx, sy) = (2 * x, 2 * y);
                let sum = self.get(sx, sy)
                    + self.get(sx + 1, sy)
                    + self.get(sx, sy + 1)
                    + self.get(sx + 1, sy + 1);
                data.push(0.25 * sum);
            }
        }
        Plane::new(w, h, data)
    }

    /// Central-difference gradients with clamp-to-edge borders.
    pub fn central_gradients(&self) -> (Vec<f64>, Vec<f64>) {
        let mut gx = Vec::with_capacity(self.data.len());
        let mut gy = Vec::with_capacity(self.data.len());
        for y in 0..self.height as isize {
            for x in 0..self.width as isize {
                gx.push(0.5 * (self.get_clamped(x + 1, y) - self.get_clamped(x - 1, y)));
                gy.push(0.5 * (self.get_clamped(x, y + 1) - self.get_clamped(x, y - 1)));
            }
        }
        (gx, gy)
    }

    /// 3x3 Sobel gradients with clamp-to-edge borders.
    pub fn sobel(&self) -> (Vec<f64>, Vec<f64>) {
        let mut gx = Vec::with_capacity(self.data.len());
        let mut gy = Vec::with_capacity(self.data.len());
        for y in 0..self.height as isize {
            for x in 0..self.width as isize {
                let p = |dx: isize, dy: isize| self.get_clamped(x + dx, y + dy);
                gx.push(
                    (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1)),
                );
                gy.push(
                    (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1)),
                );
            }
        }
        (gx, gy)
    }
}
