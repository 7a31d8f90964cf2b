/// Seeded two-octave value noise in `[0.15, 0.95]`, defined on the plane.
pub(crate) fn value_noise(seed: u64, x: f64, y: f64) -> f64 {
    let coarse = octave(seed, 0, x / 6.0, y / 6.0);
    let fine = octave(seed, 1, x / 3.0, y / 3.0);
    0.15 + 0.8 * (0.65 * coarse + 0.35 * fine)
}

fn octave(seed: u64, octave: u64, x: f64, y: f64) -> f64 {
    let (x0, y0) = (x.floor(), y.floor());
    let (fx, fy) = (smooth(x - x0), smooth(y - y0));
    let (ix, iy) = (x0 as i64, y0 as i64);
    let v = |dx: i64, dy: i64| lattice(seed, octave, ix + dx, iy + dy);
    let top = v(0, 0) * (1.0 - fx) + v(1, 0) * fx;
    let bottom = v(0, 1) * (1.0 - fx) + v(1, 1) * fx;
    top * (1.0 - fy) + bottom * fy
}

#[inline]
fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

/// Uniform value in `[0, 1)` for a lattice node.
fn lattice(seed: u64, octave: u64, ix: i64, iy: i64) -> f64 {
    let mut z = seed
        ^ octave.wrapping_mul(0xA24B_AED4_963E_E407)
        ^ (ix as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (iy as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}
