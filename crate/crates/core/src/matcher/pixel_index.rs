use std::collections::VecDeque;

use super::MatcherParams;
use crate::events::Resolution;

/// Per-pixel recency buffers for one polarity stream.
///
/// Each pixel keeps `(t, seq)` of its recent events in time order. Entries
/// older than `tau + dt` behind the newest insertion can never be a neighbor
/// again and are pruned on insertion at that pixel and by a periodic sweep.
pub(crate) struct PixelIndex {
    width: i32,
    height: i32,
    offsets: Vec<(i32, i32)>,
    cells: Vec<VecDeque<(u64, u64)>>,
    horizon: u64,
    since_sweep: usize,
    sweep_every: usize,
    floor: u64,
}

impl PixelIndex {
    pub(crate) fn new(params: &MatcherParams, resolution: Resolution) -> Self {
        Self {
            width: resolution.width as i32,
            height: resolution.height as i32,
            offsets: params.offsets(),
            cells: vec![VecDeque::new(); resolution.pixels()],
            horizon: params.tau_us + params.dt_us,
            since_sweep: 0,
            sweep_every: resolution.pixels().max(256),
            floor: 0,
        }
    }

    /// Every buffered entry has `t >= floor()`.
    pub(crate) fn floor(&self) -> u64 {
        self.floor
    }

    /// Appends the sequence numbers of events at pixels around `(x, y)` with
    /// timestamps in `[lower, upper]`, sorted ascending.
    pub(crate) fn neighbors(&self, x: i32, y: i32, lower: u64, upper: u64, out: &mut Vec<u64>) {
        let start = out.len();
        for &(ox, oy) in &self.offsets {
            let (nx, ny) = (x + ox, y + oy);
            if nx < 0 || ny < 0 || nx >= self.width || ny >= self.height {
                continue;
            }
            let cell = &self.cells[(ny * self.width + nx) as usize];
            let from = cell.partition_point(|&(t, _)| t < lower);
            out.extend(
                cell.range(from..)
                    .take_while(|&&(t, _)| t <= upper)
                    .map(|&(_, seq)| seq),
            );
        }
        out[start..].sort_unstable();
    }

    pub(crate) fn insert(&mut self, x: i32, y: i32, t: u64, seq: u64) {
        let cutoff = t.saturating_sub(self.horizon);
        let cell = &mut self.cells[(y * self.width + x) as usize];
        while cell.front().is_some_and(|&(ct, _)| ct < cutoff) {
            cell.pop_front();
        }
        cell.push_back((t, seq));

        self.since_sweep += 1;
        if self.since_sweep >= self.sweep_every {
            self.sweep(cutoff);
        }
    }

    fn sweep(&mut self, cutoff: u64) {
        for cell in &mut self.cells {
            while cell.front().is_some_and(|&(ct, _)| ct < cutoff) {
                cell.pop_front();
            }
        }
        self.floor = self.floor.max(cutoff);
        self.since_sweep = 0;
    }
}
