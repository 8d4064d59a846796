//! Synthetic event streams with analytic ground truth.
//!
//! Scenes are bright convex shapes translating at constant velocity over a
//! dark background. A pixel emits a positive event when its center enters a
//! shape and a negative event when it leaves. Shapes are intersections of
//! open half-planes, so the entry and exit times of a pixel center are the
//! ends of a single time interval.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::GroundTruthFlow;
use crate::events::{normalize_stream, EventBatch, PolarityEncoding, RawEvent, Resolution};
use crate::field::FlowField;
use crate::matcher::MatcherParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pattern {
    /// Thin bar whose long axis follows the motion. Only the pixels on its
    /// track fire, so every triplet sees the true velocity.
    Bar { length: f64, thickness: f64 },
    /// Full-height bar of the given width.
    VerticalBar { width: f64 },
    /// Full-width bar of the given height.
    HorizontalBar { height: f64 },
    /// Half-plane bounded by a line at 45 degrees (`x + y = c`).
    DiagonalEdge,
    /// Square dots of side `size` at random pixel centers.
    RandomDots { count: usize, size: f64 },
}

impl Pattern {
    pub fn bar() -> Self {
        Pattern::Bar {
            length: 4.0,
            thickness: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub pattern: Pattern,
    /// Velocity in px/s.
    pub velocity: [f64; 2],
    pub duration_us: u64,
    pub resolution: Resolution,
    /// Standard deviation of Gaussian timestamp jitter, microseconds.
    pub jitter_us: f64,
    /// Uniform background noise, events per second over the whole sensor.
    pub noise_rate: f64,
    /// Shape reference point at `t = 0`. Defaults to a position that centers
    /// the motion path in the frame.
    #[serde(default)]
    pub start: Option<[f64; 2]>,
}

impl SceneSpec {
    pub fn new(
        pattern: Pattern,
        velocity: [f64; 2],
        duration_us: u64,
        resolution: Resolution,
    ) -> Self {
        Self {
            pattern,
            velocity,
            duration_us,
            resolution,
            jitter_us: 0.0,
            noise_rate: 0.0,
            start: None,
        }
    }

    pub fn speed(&self) -> f64 {
        self.velocity[0].hypot(self.velocity[1])
    }

    /// Time between events on successive pixels along the track, in
    /// microseconds (one pixel step along the dominant axis).
    pub fn event_spacing_us(&self) -> f64 {
        1e6 / self.velocity[0].abs().max(self.velocity[1].abs())
    }

    /// Whether the matcher can recover this motion: speed within
    /// `dx / tau` and successive track events at least `tau` apart.
    pub fn within_range(&self, params: &MatcherParams) -> bool {
        self.speed() <= params.max_speed() && self.event_spacing_us() >= params.tau_us as f64
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidScene(m.into()));
        if self.resolution.pixels() == 0 {
            return bad("empty resolution");
        }
        if !(self.velocity[0].is_finite() && self.velocity[1].is_finite()) {
            return bad("velocity must be finite");
        }
        if !(self.jitter_us.is_finite() && self.jitter_us >= 0.0) {
            return bad("jitter must be non-negative");
        }
        if !(self.noise_rate.is_finite() && self.noise_rate >= 0.0) {
            return bad("noise rate must be non-negative");
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        match self.pattern {
            Pattern::Bar { length, thickness } if !(positive(length) && positive(thickness)) => {
                bad("bar dimensions must be positive")
            }
            Pattern::VerticalBar { width: s } | Pattern::HorizontalBar { height: s }
                if !positive(s) =>
            {
                bad("bar size must be positive")
            }
            Pattern::RandomDots { size, .. } if !positive(size) => bad("dot size must be positive"),
            _ => Ok(()),
        }
    }
}

/// Open half-plane `n . q < b`.
#[derive(Clone, Copy, Debug)]
struct HalfPlane {
    n: [f64; 2],
    b: f64,
}

type Shape = Vec<HalfPlane>;

fn slab(center: [f64; 2], axis: [f64; 2], half: f64) -> [HalfPlane; 2] {
    let c = axis[0] * center[0] + axis[1] * center[1];
    [
        HalfPlane {
            n: axis,
            b: c + half,
        },
        HalfPlane {
            n: [-axis[0], -axis[1]],
            b: -c + half,
        },
    ]
}

fn rect(center: [f64; 2], axis: [f64; 2], length: f64, thickness: f64) -> Shape {
    let perp = [-axis[1], axis[0]];
    let mut s = slab(center, axis, length / 2.0).to_vec();
    s.extend(slab(center, perp, thickness / 2.0));
    s
}

/// Open time interval during which point `c` lies inside `shape` moving at `v`.
fn inside_interval(shape: &Shape, c: [f64; 2], v: [f64; 2]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for h in shape {
        // n . (c - v t) < b  <=>  n . c - b < (n . v) t
        let a = h.n[0] * v[0] + h.n[1] * v[1];
        let r = h.n[0] * c[0] + h.n[1] * c[1] - h.b;
        if a > 0.0 {
            lo = lo.max(r / a);
        } else if a < 0.0 {
            hi = hi.min(r / a);
        } else if r >= 0.0 {
            return None;
        }
    }
    (lo < hi).then_some((lo, hi))
}

fn build_shapes(spec: &SceneSpec, rng: &mut ChaCha8Rng) -> Vec<Shape> {
    let (w, h) = (spec.resolution.width as f64, spec.resolution.height as f64);
    let secs = spec.duration_us as f64 * 1e-6;
    let v = spec.velocity;
    let mid = [((w - 1.0) / 2.0).round(), ((h - 1.0) / 2.0).round()];
    let centered = [
        (mid[0] - v[0] * secs / 2.0).round(),
        (mid[1] - v[1] * secs / 2.0).round(),
    ];
    let start = spec.start.unwrap_or(centered);
    match spec.pattern {
        Pattern::Bar { length, thickness } => {
            let speed = spec.speed();
            let axis = if speed > 0.0 {
                [v[0] / speed, v[1] / speed]
            } else {
                [1.0, 0.0]
            };
            vec![rect(start, axis, length, thickness)]
        }
        Pattern::VerticalBar { width } => vec![slab(start, [1.0, 0.0], width / 2.0).to_vec()],
        Pattern::HorizontalBar { height } => vec![slab(start, [0.0, 1.0], height / 2.0).to_vec()],
        Pattern::DiagonalEdge => {
            let n = [std::f64::consts::FRAC_1_SQRT_2; 2];
            vec![vec![HalfPlane {
                n,
                b: n[0] * start[0] + n[1] * start[1],
            }]]
        }
        Pattern::RandomDots { count, size } => (0..count)
            .map(|_| {
                let c = [
                    rng.random_range(0..spec.resolution.width) as f64,
                    rng.random_range(0..spec.resolution.height) as f64,
                ];
                rect(c, [1.0, 0.0], size, size)
            })
            .collect(),
    }
}

/// Renders a scene into events plus ground-truth displacement over
/// `[0, duration]`, valid on every pixel the shapes cross.
pub fn generate(spec: &SceneSpec, seed: u64) -> Result<(EventBatch, GroundTruthFlow)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = build_shapes(spec, &mut rng);
    let d = spec.duration_us as f64 * 1e-6;
    let (w, h) = (spec.resolution.width, spec.resolution.height);

    let mut raw = Vec::new();
    let mut touched = vec![false; spec.resolution.pixels()];
    for shape in &shapes {
        for y in 0..h {
            for x in 0..w {
                let Some((lo, hi)) = inside_interval(shape, [x as f64, y as f64], spec.velocity)
                else {
                    continue;
                };
                for (t, p) in [(lo, 1), (hi, -1)] {
                    if t > 0.0 && t <= d {
                        raw.push(RawEvent::new(
                            (t * 1e6).round() as u64,
                            x as i64,
                            y as i64,
                            p,
                        ));
                        touched[(y * w + x) as usize] = true;
                    }
                }
            }
        }
    }

    if spec.jitter_us > 0.0 {
        let normal = Normal::new(0.0, spec.jitter_us).expect("finite jitter");
        for e in &mut raw {
            e.t = (e.t as f64 + normal.sample(&mut rng)).round().max(0.0) as u64;
        }
    }
    let noise = (spec.noise_rate * d).round() as usize;
    for _ in 0..noise {
        raw.push(RawEvent::new(
            rng.random_range(0..=spec.duration_us),
            rng.random_range(0..w) as i64,
            rng.random_range(0..h) as i64,
            if rng.random_bool(0.5) { 1 } else { -1 },
        ));
    }
    if raw.is_empty() {
        return Err(Error::EmptyScene);
    }

    let batch = normalize_stream(&raw, spec.resolution, PolarityEncoding::Signed)?.batch;
    let disp = [spec.velocity[0] * d, spec.velocity[1] * d];
    let field = FlowField::from_parts(
        spec.resolution,
        touched
            .iter()
            .map(|&t| if t { disp } else { [0.0; 2] })
            .collect(),
        touched,
    )?;
    Ok((batch, GroundTruthFlow::new(field, 0, spec.duration_us)))
}

/// Adds Gaussian timestamp jitter (std-dev `jitter_us`), re-sorts, and drops
/// each event independently with probability `drop_prob`.
pub fn perturb(batch: &EventBatch, jitter_us: f64, drop_prob: f64, seed: u64) -> EventBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = (jitter_us > 0.0).then(|| Normal::new(0.0, jitter_us).expect("finite jitter"));
    let mut events = Vec::with_capacity(batch.len());
    for e in batch.events() {
        let mut e = *e;
        if let Some(n) = &normal {
            e.t = (e.t as f64 + n.sample(&mut rng)).round().max(0.0) as u64;
        }
        if drop_prob > 0.0 && rng.random::<f64>() < drop_prob {
            continue;
        }
        events.push(e);
    }
    events.sort_by_key(|e| e.t);
    EventBatch::new(events, batch.resolution()).expect("sorted and in bounds")
}

/// A long stream for throughput measurements: vertical bars sweeping back and
/// forth at random speeds over uniform noise, truncated to `n_events`.
pub fn throughput_stream(n_events: usize, resolution: Resolution, seed: u64) -> Result<EventBatch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = EventBatch::empty(resolution);
    let mut offset = 0u64;
    let mut sweep = 0u64;
    while out.len() < n_events {
        let speed: f64 = rng.random_range(100.0..400.0);
        let dir = if sweep.is_multiple_of(2) { 1.0 } else { -1.0 };
        let duration_us = ((resolution.width as f64 + 8.0) / speed * 1e6) as u64;
        let spec = SceneSpec {
            noise_rate: 2_000.0,
            ..SceneSpec::new(
                Pattern::VerticalBar { width: 6.0 },
                [dir * speed, 0.0],
                duration_us,
                resolution,
            )
        };
        let (batch, _) = generate(&spec, seed.wrapping_add(sweep))?;
        let shifted: Vec<_> = batch
            .events()
            .iter()
            .map(|e| crate::Event {
                t: e.t + offset,
                ..*e
            })
            .collect();
        out = out.merge(&EventBatch::new(shifted, resolution)?)?;
        offset += duration_us + 1;
        sweep += 1;
    }
    let mut events = out.into_events();
    events.truncate(n_events);
    EventBatch::new(events, resolution)
}
