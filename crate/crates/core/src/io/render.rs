use std::path::Path;

use image::{Rgb, RgbImage};

use crate::error::Result;
use crate::field::FlowField;

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let c = v * s;
    let hp = h.rem_euclid(360.0) / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    [r, g, b].map(|ch| ((ch + m) * 255.0).round().clamp(0.0, 255.0) as u8)
}

/// Color-wheel rendering: hue encodes direction, saturation encodes speed
/// relative to the fastest valid pixel, so zero flow is white. Invalid
/// pixels are black.
pub fn render_flow(field: &FlowField) -> RgbImage {
    let r = field.resolution();
    let max = field
        .cells()
        .flatten()
        .map(|[u, v]| u.hypot(v))
        .fold(0.0f64, f64::max);
    let mut img = RgbImage::new(r.width, r.height);
    for (i, cell) in field.cells().enumerate() {
        let px = match cell {
            None => [0, 0, 0],
            Some([u, v]) => {
                let mag = u.hypot(v);
                let sat = if max > 0.0 { mag / max } else { 0.0 };
                hsv_to_rgb(v.atan2(u).to_degrees(), sat, 1.0)
            }
        };
        img.put_pixel(i as u32 % r.width, i as u32 / r.width, Rgb(px));
    }
    img
}

pub fn write_png(path: &Path, field: &FlowField) -> Result<()> {
    render_flow(field).save(path)?;
    Ok(())
}
