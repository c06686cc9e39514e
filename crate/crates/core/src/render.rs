//! Escape-time rasters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::function::EntireMap;
use crate::ComplexVal;

pub const MAX_PIXELS: usize = 8192 * 8192;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn square(center: ComplexVal, half_width: f64) -> Self {
        Window { re_min: center.re - half_width, re_max: center.re + half_width, im_min: center.im - half_width, im_max: center.im + half_width }
    }

    /// Pixel centers; row 0 is the top (largest imaginary part).
    pub fn pixel(&self, x: usize, y: usize, width: usize, height: usize) -> ComplexVal {
        ComplexVal::new(
            self.re_min + (x as f64 + 0.5) * (self.re_max - self.re_min) / width as f64,
            self.im_max - (y as f64 + 0.5) * (self.im_max - self.im_min) / height as f64,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeRaster {
    pub width: usize,
    pub height: usize,
    pub iterations: u32,
    /// Row-major; `0` never escaped, `k ≥ 1` first exceeded the radius after `k` steps.
    pub counts: Vec<u32>,
}

impl EscapeRaster {
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.counts[y * self.width + x]
    }

    /// SHA-256 over dimensions, iteration count and little-endian counts.
    pub fn pixel_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.width as u64).to_le_bytes());
        h.update((self.height as u64).to_le_bytes());
        h.update(self.iterations.to_le_bytes());
        for c in &self.counts {
            h.update(c.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// 8-bit grey levels: never-escaped pixels black, fast escapes bright.
    pub fn to_gray(&self) -> Vec<u8> {
        self.counts
            .iter()
            .map(|&c| if c == 0 { 0 } else { (255 - ((c - 1) as u64 * 223 / self.iterations.max(1) as u64) as u32) as u8 })
            .collect()
    }
}

fn escape_time(f: &EntireMap, z0: ComplexVal, iterations: u32, radius: f64) -> u32 {
    if !(z0.norm() <= radius) {
        return 1;
    }
    let mut z = z0;
    for k in 1..=iterations {
        z = match f.eval(z) {
            Ok(w) => w,
            Err(_) => return k,
        };
        if !(z.norm() <= radius) {
            return k;
        }
    }
    0
}

/// Escape time of every pixel's orbit under `f`; rows are computed in
/// parallel and the result does not depend on the thread count.
///
/// # Panics
/// If the raster is empty or larger than 8192², or `iterations` is zero.
pub fn render_escape(f: &EntireMap, window: &Window, iterations: u32, escape_radius: f64, width: usize, height: usize) -> EscapeRaster {
    assert!(width > 0 && height > 0 && width * height <= MAX_PIXELS, "resolution {width}x{height} out of range");
    assert!(iterations >= 1, "need at least one iteration");
    let counts: Vec<u32> = (0..height)
        .into_par_iter()
        .flat_map_iter(|y| (0..width).map(move |x| escape_time(f, window.pixel(x, y, width, height), iterations, escape_radius)))
        .collect();
    EscapeRaster { width, height, iterations, counts }
}
