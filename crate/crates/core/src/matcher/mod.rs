//! Triplet matching.
//!
//! For each incoming event `e_k` the matcher looks up its space-time
//! neighborhood `H_k`: earlier events of the same polarity within `dx` pixels
//! whose timestamps fall in `[t_k - tau - dt, t_k - tau]`. For each neighbor
//! `e_i` whose own neighborhood `H_i` is still retained, every `e_j` in `H_i`
//! with `x_i - x_j == x_k - x_i` closes a triplet `(k, i, j)` moving at constant
//! velocity. The flow at `e_k` is the weighted mean of the triplet velocities,
//! with each triplet weighted by how close `t_j` falls to the timestamp a
//! perfectly periodic edge would produce.
//!
//! [`Matcher`] is the incremental (event-by-event) engine; [`process_batch`]
//! drives it over a whole batch and [`brute_force_flow`] is an independent
//! reference implementation used to check both.

mod batch;
mod oracle;
mod pixel_index;
mod stream;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::Event;

#[cfg(feature = "parallel")]
pub use batch::process_batch_parallel;
pub use batch::{process_batch, process_batch_sequential, process_batch_traced, BatchOutput};
pub use oracle::brute_force_flow;
pub use stream::Matcher;

/// Slack applied to `dx^2` before truncating to an integer squared distance.
/// Pixel offsets are integral, so this only absorbs decimal inputs such as
/// `1.4142` standing in for the square root of two.
const SQ_DIST_SLACK: f64 = 1e-4;

/// How triplet velocities are combined into a per-event flow.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Gaussian density of `t_j` around its expected periodic timestamp.
    #[default]
    Gaussian,
    /// Plain mean of the triplet velocities.
    Uniform,
}

/// Time unit in which Gaussian weights are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    #[default]
    Micros,
    Millis,
    Seconds,
}

impl TimeUnit {
    fn micros(self) -> f64 {
        match self {
            TimeUnit::Micros => 1.0,
            TimeUnit::Millis => 1e3,
            TimeUnit::Seconds => 1e6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatcherParams {
    /// Spatial radius in pixels (Euclidean).
    pub dx: f64,
    /// Temporal search window in microseconds.
    pub dt_us: u64,
    /// Refractory period in microseconds.
    pub tau_us: u64,
    /// Index maps kept per polarity.
    pub retention: usize,
    /// Drop neighbors at the event's own pixel.
    pub exclude_center: bool,
    pub weighting: Weighting,
    pub weight_unit: TimeUnit,
}

impl Default for MatcherParams {
    fn default() -> Self {
        Self {
            dx: std::f64::consts::SQRT_2,
            dt_us: 100_000,
            tau_us: 3_000,
            retention: 20_000,
            exclude_center: false,
            weighting: Weighting::Gaussian,
            weight_unit: TimeUnit::Micros,
        }
    }
}

impl MatcherParams {
    /// Builds parameters from millisecond windows, rounding to whole microseconds.
    pub fn from_millis(dx: f64, dt_ms: f64, tau_ms: f64, retention: usize) -> Result<Self> {
        let params = Self {
            dx,
            dt_us: (dt_ms * 1e3).round().max(0.0) as u64,
            tau_us: (tau_ms * 1e3).round().max(0.0) as u64,
            retention,
            ..Self::default()
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dx.is_finite() && self.dx > 0.0) {
            return Err(Error::InvalidParams(format!(
                "dx must be positive (got {})",
                self.dx
            )));
        }
        if self.dt_us == 0 {
            return Err(Error::InvalidParams("dt must be positive".into()));
        }
        if self.tau_us == 0 {
            return Err(Error::InvalidParams("tau must be positive".into()));
        }
        if self.retention == 0 {
            return Err(Error::InvalidParams("retention must be positive".into()));
        }
        Ok(())
    }

    /// Largest admissible squared pixel distance.
    pub fn max_sq_dist(&self) -> i64 {
        (self.dx * self.dx + SQ_DIST_SLACK).floor() as i64
    }

    /// Inclusive timestamp window `[t - tau - dt, t - tau]` for neighbors of an
    /// event at `t`, or `None` if no earlier timestamp can qualify.
    pub fn window(&self, t: u64) -> Option<(u64, u64)> {
        let upper = t.checked_sub(self.tau_us)?;
        Some((upper.saturating_sub(self.dt_us), upper))
    }

    /// Fastest speed a triplet can report, in px/s.
    pub fn max_speed(&self) -> f64 {
        (self.max_sq_dist() as f64).sqrt() / (self.tau_us as f64 * 1e-6)
    }

    /// Pixel offsets searched around each event, row-major.
    pub(crate) fn offsets(&self) -> Vec<(i32, i32)> {
        let max_sq = self.max_sq_dist();
        let r = (max_sq as f64).sqrt().floor() as i32;
        let mut out = Vec::new();
        for oy in -r..=r {
            for ox in -r..=r {
                if (ox * ox + oy * oy) as i64 > max_sq {
                    continue;
                }
                if self.exclude_center && ox == 0 && oy == 0 {
                    continue;
                }
                out.push((ox, oy));
            }
        }
        out
    }
}

/// Neighbor set `H_k` of one event, as global event indices in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexMap {
    pub owner: usize,
    pub neighbors: Vec<usize>,
}

/// Three events aligned at constant velocity: `e_j`, then `e_i`, then `e_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triplet {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    /// Velocity in px/s.
    pub v: [f64; 2],
    pub w: f64,
    /// Pixel displacement `x_k - x_j`.
    pub displacement: [i32; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Flow {
    Undefined,
    Defined { vx: f64, vy: f64 },
}

impl Flow {
    pub fn vector(&self) -> Option<[f64; 2]> {
        match *self {
            Flow::Defined { vx, vy } => Some([vx, vy]),
            Flow::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Flow::Defined { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    /// Index of the event in its batch.
    pub k: usize,
    pub flow: Flow,
    /// Number of triplets that contributed.
    pub triplets: usize,
}

/// Velocity of a triplet from its first (`e_j`) and last (`e_k`) events, in px/s.
pub fn triplet_velocity(k: &Event, j: &Event) -> [f64; 2] {
    let dt = j.t as f64 - k.t as f64;
    [
        (j.x as f64 - k.x as f64) * 1e6 / dt,
        (j.y as f64 - k.y as f64) * 1e6 / dt,
    ]
}

/// Weight of a triplet with timestamps `t_k > t_i > t_j` (microseconds).
///
/// Under constant velocity `t_j` is expected at `t_i - delta` with
/// `delta = t_k - t_i`; the Gaussian weight is the normal density of `t_j`
/// around that expectation with standard deviation `delta`.
pub fn triplet_weight(t_k: u64, t_i: u64, t_j: u64, weighting: Weighting, unit: TimeUnit) -> f64 {
    match weighting {
        Weighting::Uniform => 1.0,
        Weighting::Gaussian => {
            let scale = unit.micros();
            let delta = (t_k - t_i) as f64 / scale;
            // t_j - (t_i - delta)
            let dev = (t_j as i128 + t_k as i128 - 2 * t_i as i128) as f64 / scale;
            let z = dev / delta;
            (-0.5 * z * z).exp() / (delta * (2.0 * std::f64::consts::PI).sqrt())
        }
    }
}

/// Running weighted mean of triplet velocities.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct FlowAccumulator {
    sx: f64,
    sy: f64,
    sw: f64,
    n: usize,
}

impl FlowAccumulator {
    pub(crate) fn add(&mut self, t: &Triplet) {
        self.sx += t.w * t.v[0];
        self.sy += t.w * t.v[1];
        self.sw += t.w;
        self.n += 1;
    }

    pub(crate) fn finish(self, k: usize) -> FlowRecord {
        let flow = if self.n == 0 || self.sw <= 0.0 {
            Flow::Undefined
        } else {
            Flow::Defined {
                vx: self.sx / self.sw,
                vy: self.sy / self.sw,
            }
        };
        FlowRecord {
            k,
            flow,
            triplets: self.n,
        }
    }
}

/// An event as the matcher stores it: timestamp, signed pixel and its batch index.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stored {
    pub t: u64,
    pub x: i32,
    pub y: i32,
    pub global: usize,
}

impl Stored {
    pub(crate) fn from_event(e: &Event, global: usize) -> Self {
        Self {
            t: e.t,
            x: e.x as i32,
            y: e.y as i32,
            global,
        }
    }
}

/// Read access to a single polarity's events and index maps by local sequence number.
pub(crate) trait MapSource {
    fn event(&self, seq: u64) -> Stored;
    /// `H_seq`, if still retained when the event `k_seq` is processed.
    fn map(&self, seq: u64, k_seq: u64) -> Option<&[u64]>;
}

/// Enumerates the triplets closed by event `k` with neighborhood `h_k`, in
/// ascending `(i, j)` order.
pub(crate) fn for_each_triplet<S: MapSource>(
    src: &S,
    k: Stored,
    k_seq: u64,
    h_k: &[u64],
    params: &MatcherParams,
    mut f: impl FnMut(Triplet),
) {
    for &i_seq in h_k {
        let Some(h_i) = src.map(i_seq, k_seq) else {
            continue;
        };
        let i = src.event(i_seq);
        let step = (k.x - i.x, k.y - i.y);
        for &j_seq in h_i {
            let j = src.event(j_seq);
            if (i.x - j.x, i.y - j.y) != step {
                continue;
            }
            let dt = j.t as f64 - k.t as f64;
            let v = [(j.x - k.x) as f64 * 1e6 / dt, (j.y - k.y) as f64 * 1e6 / dt];
            let w = triplet_weight(k.t, i.t, j.t, params.weighting, params.weight_unit);
            debug_assert!(j.t + params.tau_us <= i.t && i.t + params.tau_us <= k.t);
            debug_assert!(w >= 0.0);
            f(Triplet {
                k: k.global,
                i: i.global,
                j: j.global,
                v,
                w,
                displacement: [k.x - j.x, k.y - j.y],
            });
        }
    }
}
