use crate::error::{Error, Result};

/// Dense displacement field in pixels, row-major `(u, v)` pairs.
///
/// Every component is finite. Pixels without a meaningful flow are marked in
/// a separate [`HoleMask`], never with a sentinel value.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowField {
    width: usize,
    height: usize,
    data: Vec<[f64; 2]>,
}

impl FlowField {
    pub fn new(width: usize, height: usize, data: Vec<[f64; 2]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::dims(format!("empty flow field {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::dims(format!(
                "flow data has {} vectors, expected {}",
                data.len(),
                width * height
            )));
        }
        if let Some(i) = data
            .iter()
            .position(|f| !(f[0].is_finite() && f[1].is_finite()))
        {
            return Err(Error::invalid(format!(
                "non-finite flow at ({}, {})",
                i % width,
                i / width
            )));
        }
        Ok(FlowField {
            width,
            height,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        FlowField::constant(width, height, [0.0, 0.0])
    }

    pub fn constant(width: usize, height: usize, value: [f64; 2]) -> Result<Self> {
        FlowField::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 2],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        FlowField::new(width, height, data)
    }

    /// Construction for values already known to be finite.
    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<[f64; 2]>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        debug_assert!(data.iter().all(|f| f[0].is_finite() && f[1].is_finite()));
        FlowField {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[[f64; 2]] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [f64; 2] {
        self.data[y * self.width + x]
    }

    pub fn same_size(&self, width: usize, height: usize) -> bool {
        self.width == width && self.height == height
    }

    /// Pixel-wise combination of two equally sized fields.
    pub(crate) fn zip_map(
        &self,
        other: &FlowField,
        f: impl Fn([f64; 2], [f64; 2]) -> [f64; 2],
    ) -> Result<FlowField> {
        if !other.same_size(self.width, self.height) {
            return Err(Error::dims(format!(
                "flow fields are {}x{} and {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        FlowField::new(self.width, self.height, data)
    }

    pub(crate) fn map(&self, f: impl Fn([f64; 2]) -> [f64; 2]) -> Result<FlowField> {
        FlowField::new(
            self.width,
            self.height,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Largest absolute component over the field.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|f| [f[0].abs(), f[1].abs()])
            .fold(0.0, f64::max)
    }
}

/// Per-pixel flag, `true` where a flow field has no support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl HoleMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::dims(format!(
                "hole mask has {} entries, expected {}",
                data.len(),
                width * height
            )));
        }
        Ok(HoleMask {
            width,
            height,
            data,
        })
    }

    /// A mask with no holes.
    pub fn empty(width: usize, height: usize) -> Self {
        HoleMask {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn is_hole(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&h| h).count()
    }

    pub fn matches(&self, flow: &FlowField) -> bool {
        flow.same_size(self.width, self.height)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_components() {
        let err = FlowField::new(2, 1, vec![[0.0, 0.0], [f64::INFINITY, 0.0]]).unwrap_err();
        assert!(err.to_string().contains("(1, 0)"));
        assert!(FlowField::new(1, 1, vec![[f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn zip_map_checks_dimensions() {
        let a = FlowField::zeros(2, 2).unwrap();
        let b = FlowField::zeros(3, 2).unwrap();
        assert!(a.zip_map(&b, |x, _| x).is_err());
    }

    #[test]
    fn hole_mask_length() {
        assert!(HoleMask::new(2, 2, vec![true; 3]).is_err());
        let m = HoleMask::new(2, 1, vec![true, false]).unwrap();
        assert!(m.is_hole(0, 0));
        assert_eq!(m.count(), 1);
    }
}
