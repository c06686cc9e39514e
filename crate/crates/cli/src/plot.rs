//! PNG output for escape-time rasters and ladder bar charts.

use std::path::Path;

use hf_core::{EscapeRaster, LadderReport};
use image::{GrayImage, ImageFormat, Rgb, RgbImage};

pub fn save_raster(raster: &EscapeRaster, path: &Path) -> image::ImageResult<()> {
    let img = GrayImage::from_raw(raster.width as u32, raster.height as u32, raster.to_gray()).expect("buffer matches dimensions");
    img.save_with_format(path, ImageFormat::Png)
}

const W: u32 = 480;
const H: u32 = 320;
const MARGIN: u32 = 24;

/// One bar per rung: certified bounds in blue, failures as a red stub,
/// and a black tick at `log m` for each target.
pub fn ladder_chart(report: &LadderReport) -> RgbImage {
    let mut img = RgbImage::from_pixel(W, H, Rgb([255, 255, 255]));
    let n = report.rungs.len().max(1) as u32;
    let top = report.rungs.iter().map(|r| f64::from(r.target).ln()).fold(1.0, f64::max);
    let slot = (W - 2 * MARGIN) / n;
    let plot_h = (H - 2 * MARGIN) as f64;
    let y_of = |v: f64| H - MARGIN - (v / top * plot_h).round().clamp(0.0, plot_h) as u32;
    for x in MARGIN..W - MARGIN {
        img.put_pixel(x, H - MARGIN, Rgb([0, 0, 0]));
    }
    for (i, rung) in report.rungs.iter().enumerate() {
        let x0 = MARGIN + i as u32 * slot + slot / 4;
        let x1 = (x0 + slot / 2).max(x0 + 1);
        let (y, colour) = match &rung.result {
            Ok(c) => (y_of(c.bound), Rgb([40, 90, 200])),
            Err(_) => (H - MARGIN - 4, Rgb([200, 40, 40])),
        };
        for x in x0..x1 {
            for yy in y..H - MARGIN {
                img.put_pixel(x, yy, colour);
            }
            img.put_pixel(x, y_of(f64::from(rung.target).ln()), Rgb([0, 0, 0]));
        }
    }
    img
}

pub fn save_ladder(report: &LadderReport, path: &Path) -> image::ImageResult<()> {
    ladder_chart(report).save_with_format(path, ImageFormat::Png)
}
