#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::events::{Event, EventBatch, Resolution};
use crate::matcher::FlowRecord;

/// Accumulation image, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    pub resolution: Resolution,
    pub data: Vec<f64>,
}

impl Image {
    pub fn mass(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Population variance over all pixels.
    pub fn variance(&self) -> f64 {
        let n = self.data.len() as f64;
        if n == 0.0 {
            return 0.0;
        }
        let mean = self.mass() / n;
        self.data
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / n
    }
}

fn warp_one(e: &Event, rec: &FlowRecord, t_ref: u64) -> [f64; 2] {
    let (x, y) = (e.x as f64, e.y as f64);
    match rec.flow.vector() {
        Some([vx, vy]) => {
            let dt = (t_ref as f64 - e.t as f64) * 1e-6;
            [x + vx * dt, y + vy * dt]
        }
        None => [x, y],
    }
}

/// Moves each event along its flow to time `t_ref` (microseconds). Events
/// without a defined flow stay put.
pub fn warp_events(batch: &EventBatch, flows: &[FlowRecord], t_ref: u64) -> Result<Vec<[f64; 2]>> {
    if flows.len() != batch.len() {
        return Err(Error::Misaligned {
            flows: flows.len(),
            events: batch.len(),
        });
    }
    #[cfg(feature = "parallel")]
    let points = batch
        .events()
        .par_iter()
        .zip(flows.par_iter())
        .map(|(e, r)| warp_one(e, r, t_ref))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let points = batch
        .events()
        .iter()
        .zip(flows)
        .map(|(e, r)| warp_one(e, r, t_ref))
        .collect();
    Ok(points)
}

/// Image of warped events: unit mass per point, split bilinearly over the four
/// surrounding pixels. Points outside `[0, W-1] x [0, H-1]` are discarded.
pub fn iwe(points: &[[f64; 2]], resolution: Resolution) -> Image {
    let (w, h) = (resolution.width as usize, resolution.height as usize);
    let mut data = vec![0.0; w * h];
    for &[x, y] in points {
        if !(x >= 0.0 && y >= 0.0 && x <= (w - 1) as f64 && y <= (h - 1) as f64) {
            continue;
        }
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        let taps = [
            (x0, y0, (1.0 - fx) * (1.0 - fy)),
            (x0 + 1, y0, fx * (1.0 - fy)),
            (x0, y0 + 1, (1.0 - fx) * fy),
            (x0 + 1, y0 + 1, fx * fy),
        ];
        for (px, py, wt) in taps {
            if wt > 0.0 {
                data[py * w + px] += wt;
            }
        }
    }
    Image { resolution, data }
}

/// Midpoint of the batch's time span.
pub fn midpoint(batch: &EventBatch) -> u64 {
    batch.time_span().map_or(0, |(a, b)| a + (b - a) / 2)
}

/// Flow warp loss: IWE variance under the estimated flow divided by IWE
/// variance under zero flow. Above 1 means the flow sharpens the events.
pub fn fwl(batch: &EventBatch, flows: &[FlowRecord], t_ref: u64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyStream);
    }
    let warped = warp_events(batch, flows, t_ref)?;
    let still: Vec<[f64; 2]> = batch
        .events()
        .iter()
        .map(|e| [e.x as f64, e.y as f64])
        .collect();
    let base = iwe(&still, batch.resolution()).variance();
    if base <= 0.0 {
        return Err(Error::Degenerate);
    }
    Ok(iwe(&warped, batch.resolution()).variance() / base)
}
