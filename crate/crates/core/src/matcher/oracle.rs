//! Reference implementation of the triplet matcher.
//!
//! Applies the neighborhood and collinearity predicates directly to every
//! candidate pair and triple of the batch, with no spatial index. Retention is
//! expressed through polarity ranks: while event `k` is processed, the map of
//! an earlier event `i` of the same polarity is available iff fewer than
//! `retention + 1` events of that polarity separate them. Quadratic in the
//! number of events, so only suitable for small batches.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{BatchOutput, Flow, FlowRecord, MatcherParams, TimeUnit, Triplet, Weighting};
use crate::error::Result;
use crate::events::{Event, EventBatch};

struct Oracle<'a> {
    events: &'a [Event],
    rank: Vec<u64>,
    params: &'a MatcherParams,
    max_sq: i64,
}

impl Oracle<'_> {
    /// `a` is a space-time neighbor of the later event `b`.
    fn is_neighbor(&self, b: usize, a: usize) -> bool {
        let (eb, ea) = (&self.events[b], &self.events[a]);
        if ea.p != eb.p {
            return false;
        }
        let (tb, ta) = (eb.t as i128, ea.t as i128);
        let tau = self.params.tau_us as i128;
        let dt = self.params.dt_us as i128;
        if !(tb - tau - dt <= ta && ta <= tb - tau) {
            return false;
        }
        let ddx = eb.x as i64 - ea.x as i64;
        let ddy = eb.y as i64 - ea.y as i64;
        if self.params.exclude_center && ddx == 0 && ddy == 0 {
            return false;
        }
        ddx * ddx + ddy * ddy <= self.max_sq
    }

    /// Index range of events with timestamps that could neighbor an event at `t`.
    fn candidates(&self, t: u64) -> std::ops::Range<usize> {
        let lo = t.saturating_sub(self.params.tau_us + self.params.dt_us);
        let hi = match t.checked_sub(self.params.tau_us) {
            Some(hi) => hi,
            None => return 0..0,
        };
        let start = self.events.partition_point(|e| e.t < lo);
        let end = self.events.partition_point(|e| e.t <= hi);
        start..end.max(start)
    }

    fn weight(&self, k: &Event, i: &Event, j: &Event) -> f64 {
        match self.params.weighting {
            Weighting::Uniform => 1.0,
            Weighting::Gaussian => {
                let unit = match self.params.weight_unit {
                    TimeUnit::Micros => 1.0,
                    TimeUnit::Millis => 1e-3,
                    TimeUnit::Seconds => 1e-6,
                };
                let tk = k.t as f64 * unit;
                let ti = i.t as f64 * unit;
                let tj = j.t as f64 * unit;
                let sigma = tk - ti;
                let mean = ti - sigma;
                let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
                norm * (-(tj - mean).powi(2) / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    fn event_triplets(&self, k: usize) -> Vec<Triplet> {
        let ek = &self.events[k];
        let mut out = Vec::new();
        for i in self.candidates(ek.t) {
            if !self.is_neighbor(k, i) {
                continue;
            }
            if self.rank[k] - self.rank[i] > self.params.retention as u64 {
                continue;
            }
            let ei = &self.events[i];
            for j in self.candidates(ei.t) {
                if !self.is_neighbor(i, j) {
                    continue;
                }
                let ej = &self.events[j];
                let collinear = ei.x as i64 - ej.x as i64 == ek.x as i64 - ei.x as i64
                    && ei.y as i64 - ej.y as i64 == ek.y as i64 - ei.y as i64;
                if !collinear {
                    continue;
                }
                let secs = (ej.t as f64 - ek.t as f64) / 1e6;
                out.push(Triplet {
                    k,
                    i,
                    j,
                    v: [
                        (ej.x as f64 - ek.x as f64) / secs,
                        (ej.y as f64 - ek.y as f64) / secs,
                    ],
                    w: self.weight(ek, ei, ej),
                    displacement: [ek.x as i32 - ej.x as i32, ek.y as i32 - ej.y as i32],
                });
            }
        }
        out
    }

    fn flow(k: usize, triplets: &[Triplet]) -> FlowRecord {
        let sw: f64 = triplets.iter().map(|t| t.w).sum();
        let flow = if triplets.is_empty() || sw <= 0.0 {
            Flow::Undefined
        } else {
            let sx: f64 = triplets.iter().map(|t| t.w * t.v[0]).sum();
            let sy: f64 = triplets.iter().map(|t| t.w * t.v[1]).sum();
            Flow::Defined {
                vx: sx / sw,
                vy: sy / sw,
            }
        };
        FlowRecord {
            k,
            flow,
            triplets: triplets.len(),
        }
    }
}

/// Per-event flow and triplets by exhaustive search.
pub fn brute_force_flow(batch: &EventBatch, params: &MatcherParams) -> Result<BatchOutput> {
    params.validate()?;
    let events = batch.events();
    let mut counters = [0u64; 2];
    let rank = events
        .iter()
        .map(|e| {
            let c = &mut counters[e.p.index()];
            *c += 1;
            *c - 1
        })
        .collect();
    let oracle = Oracle {
        events,
        rank,
        params,
        max_sq: params.max_sq_dist(),
    };

    #[cfg(feature = "parallel")]
    let per_event: Vec<Vec<Triplet>> = (0..events.len())
        .into_par_iter()
        .map(|k| oracle.event_triplets(k))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let per_event: Vec<Vec<Triplet>> = (0..events.len())
        .map(|k| oracle.event_triplets(k))
        .collect();

    let flows = per_event
        .iter()
        .enumerate()
        .map(|(k, ts)| Oracle::flow(k, ts))
        .collect();
    Ok(BatchOutput {
        flows,
        triplets: per_event.into_iter().flatten().collect(),
    })
}
