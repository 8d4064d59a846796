use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::events::EventBatch;
use crate::matcher::{Matcher, MatcherParams};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThroughputReport {
    pub events: usize,
    pub seconds: f64,
    pub events_per_sec: f64,
    pub mean_us: f64,
    pub p50_us: f64,
    pub p99_us: f64,
}

impl ThroughputReport {
    pub fn to_key_values(&self) -> String {
        format!(
            "events={}\nseconds={}\nevents_per_sec={}\nmean_us={}\np50_us={}\np99_us={}\n",
            self.events, self.seconds, self.events_per_sec, self.mean_us, self.p50_us, self.p99_us
        )
    }
}

/// Times the incremental matcher on one thread, state updates included, after
/// one untimed warm-up pass over the same batch.
pub fn bench_throughput(batch: &EventBatch, params: &MatcherParams) -> Result<ThroughputReport> {
    let mut warm = Matcher::new(*params, batch.resolution())?;
    for &e in batch.events() {
        std::hint::black_box(warm.push(e)?);
    }
    drop(warm);

    let mut m = Matcher::new(*params, batch.resolution())?;
    let mut lat = Vec::with_capacity(batch.len());
    let start = Instant::now();
    for &e in batch.events() {
        let t = Instant::now();
        std::hint::black_box(m.push(e)?);
        lat.push(t.elapsed().as_nanos() as u64);
    }
    let seconds = start.elapsed().as_secs_f64();

    lat.sort_unstable();
    let pct = |q: f64| {
        if lat.is_empty() {
            0.0
        } else {
            lat[((lat.len() - 1) as f64 * q).round() as usize] as f64 / 1e3
        }
    };
    let n = batch.len();
    Ok(ThroughputReport {
        events: n,
        seconds,
        events_per_sec: if seconds > 0.0 {
            n as f64 / seconds
        } else {
            0.0
        },
        mean_us: if n > 0 {
            lat.iter().sum::<u64>() as f64 / n as f64 / 1e3
        } else {
            0.0
        },
        p50_us: pct(0.5),
        p99_us: pct(0.99),
    })
}
