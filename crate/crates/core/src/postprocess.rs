//! Voxelized flow for benchmarking.
//!
//! Per-event flows are averaged into (time bin, pixel) cells, then smoothed
//! spatially by averaging each cell's valid 3x3 neighbors. A cell is valid
//! when at least one defined flow landed in it; a valid `(0, 0)` is a real
//! estimate and is kept distinct from an empty cell.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::events::{EventBatch, Resolution};
use crate::field::FlowField;
use crate::matcher::FlowRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct VoxelFlow {
    /// `bins + 1` strictly increasing edges in microseconds. Bin `b` covers
    /// `[edges[b], edges[b + 1])`; the last bin also includes its upper edge.
    edges: Vec<u64>,
    resolution: Resolution,
    cells: Vec<Option<[f64; 2]>>,
}

impl VoxelFlow {
    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn get(&self, bin: usize, x: u32, y: u32) -> Option<[f64; 2]> {
        self.cells[self.offset(bin, x, y)]
    }

    pub fn valid_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    fn offset(&self, bin: usize, x: u32, y: u32) -> usize {
        (bin * self.resolution.height as usize + y as usize) * self.resolution.width as usize
            + x as usize
    }

    /// Bin holding timestamp `t`, if inside the covered span.
    pub fn bin_of(&self, t: u64) -> Option<usize> {
        let (&first, &last) = (self.edges.first()?, self.edges.last()?);
        if t < first || t > last {
            return None;
        }
        Some(
            self.edges[1..]
                .partition_point(|&e| e <= t)
                .min(self.bins() - 1),
        )
    }
}

fn bin_edges(t0: u64, t1: u64, bins: usize) -> Vec<u64> {
    let span = (t1.saturating_sub(t0)).max(bins as u64);
    (0..=bins as u64)
        .map(|b| t0 + ((span as u128 * b as u128) / bins as u128) as u64)
        .collect()
}

/// Averages defined flows into `bins` equal time bins spanning the batch.
pub fn voxelize(batch: &EventBatch, flows: &[FlowRecord], bins: usize) -> Result<VoxelFlow> {
    let (t0, t1) = batch.time_span().unwrap_or((0, 0));
    voxelize_span(batch, flows, bins, t0, t1)
}

/// Like [`voxelize`] over an explicit span `[t0, t1]` in microseconds. Events
/// outside the span are ignored.
pub fn voxelize_span(
    batch: &EventBatch,
    flows: &[FlowRecord],
    bins: usize,
    t0: u64,
    t1: u64,
) -> Result<VoxelFlow> {
    if bins == 0 {
        return Err(Error::InvalidBinCount);
    }
    if flows.len() != batch.len() {
        return Err(Error::Misaligned {
            flows: flows.len(),
            events: batch.len(),
        });
    }
    let resolution = batch.resolution();
    let mut voxels = VoxelFlow {
        edges: bin_edges(t0, t1, bins),
        resolution,
        cells: vec![None; bins * resolution.pixels()],
    };
    let mut sums = vec![([0.0f64; 2], 0u32); voxels.cells.len()];
    for (e, rec) in batch.events().iter().zip(flows) {
        let (Some(v), Some(b)) = (rec.flow.vector(), voxels.bin_of(e.t)) else {
            continue;
        };
        let cell = &mut sums[voxels.offset(b, e.x as u32, e.y as u32)];
        cell.0[0] += v[0];
        cell.0[1] += v[1];
        cell.1 += 1;
    }
    for (out, (s, n)) in voxels.cells.iter_mut().zip(sums) {
        if n > 0 {
            *out = Some([s[0] / n as f64, s[1] / n as f64]);
        }
    }
    Ok(voxels)
}

fn filter_bin(src: &[Option<[f64; 2]>], dst: &mut [Option<[f64; 2]>], width: usize, height: usize) {
    for y in 0..height {
        for x in 0..width {
            let mut sum = [0.0; 2];
            let mut n = 0u32;
            for ny in y.saturating_sub(1)..=(y + 1).min(height - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(width - 1) {
                    if let Some(v) = src[ny * width + nx] {
                        sum[0] += v[0];
                        sum[1] += v[1];
                        n += 1;
                    }
                }
            }
            dst[y * width + x] = (n > 0).then(|| [sum[0] / n as f64, sum[1] / n as f64]);
        }
    }
}

/// Replaces each cell by the mean of the valid cells in its 3x3 neighborhood
/// (itself included, truncated at the border). Cells with no valid neighbor
/// stay invalid.
pub fn nonzero_average_filter(v: &VoxelFlow) -> VoxelFlow {
    let (w, h) = (v.resolution.width as usize, v.resolution.height as usize);
    let plane = w * h;
    let mut out = v.clone();
    if plane == 0 {
        return out;
    }
    #[cfg(feature = "parallel")]
    out.cells
        .par_chunks_mut(plane)
        .zip(v.cells.par_chunks(plane))
        .for_each(|(dst, src)| filter_bin(src, dst, w, h));
    #[cfg(not(feature = "parallel"))]
    out.cells
        .chunks_mut(plane)
        .zip(v.cells.chunks(plane))
        .for_each(|(dst, src)| filter_bin(src, dst, w, h));
    out
}

/// One time slice as a dense field.
pub fn collapse_to_image(v: &VoxelFlow, bin: usize) -> Result<FlowField> {
    if bin >= v.bins() {
        return Err(Error::BinOutOfRange {
            bin,
            bins: v.bins(),
        });
    }
    let plane = v.resolution.pixels();
    let slice = &v.cells[bin * plane..(bin + 1) * plane];
    FlowField::from_parts(
        v.resolution,
        slice.iter().map(|c| c.unwrap_or([0.0; 2])).collect(),
        slice.iter().map(|c| c.is_some()).collect(),
    )
}

/// Voxelizes over the batch span, filters, and returns one dense field per bin.
pub fn dense_flow(batch: &EventBatch, flows: &[FlowRecord], bins: usize) -> Result<Vec<FlowField>> {
    let (t0, t1) = batch.time_span().unwrap_or((0, 0));
    dense_flow_span(batch, flows, bins, t0, t1)
}

/// Like [`dense_flow`] over an explicit span.
pub fn dense_flow_span(
    batch: &EventBatch,
    flows: &[FlowRecord],
    bins: usize,
    t0: u64,
    t1: u64,
) -> Result<Vec<FlowField>> {
    let v = nonzero_average_filter(&voxelize_span(batch, flows, bins, t0, t1)?);
    (0..bins).map(|b| collapse_to_image(&v, b)).collect()
}
