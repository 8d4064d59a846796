//! Benchmark metrics.

mod histogram;
mod warp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FlowField;

pub use histogram::{velocity_histogram, DirectionBin, VelocityHistogram};
pub use warp::{fwl, iwe, midpoint, warp_events, Image};

/// Endpoint errors above this many pixels count as outliers.
pub const DEFAULT_OUTLIER_PX: f64 = 3.0;

/// Ground-truth displacement over `[t0_us, t1_us]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruthFlow {
    pub field: FlowField,
    pub t0_us: u64,
    pub t1_us: u64,
}

impl GroundTruthFlow {
    /// Marks non-finite vectors invalid.
    pub fn new(field: FlowField, t0_us: u64, t1_us: u64) -> Self {
        let valid: Vec<bool> = field
            .vectors()
            .iter()
            .zip(field.mask())
            .map(|(v, &ok)| ok && v[0].is_finite() && v[1].is_finite())
            .collect();
        let field = FlowField::from_parts(field.resolution(), field.vectors().to_vec(), valid)
            .expect("same resolution");
        Self {
            field,
            t0_us,
            t1_us,
        }
    }

    pub fn interval_secs(&self) -> f64 {
        (self.t1_us - self.t0_us) as f64 * 1e-6
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// Average endpoint error in pixels.
    pub aee: f64,
    /// Percentage of evaluated pixels with error above the threshold.
    pub outlier_pct: f64,
    pub fwl: Option<f64>,
    /// Pixels valid in both prediction and ground truth.
    pub evaluated: usize,
    pub gt_valid: usize,
    /// `evaluated / gt_valid`.
    pub coverage: f64,
}

impl MetricReport {
    pub fn with_fwl(mut self, fwl: f64) -> Self {
        self.fwl = Some(fwl);
        self
    }

    /// `key=value` lines.
    pub fn to_key_values(&self) -> String {
        let mut s = format!(
            "aee={}\noutlier_pct={}\nevaluated={}\ngt_valid={}\ncoverage={}\n",
            self.aee, self.outlier_pct, self.evaluated, self.gt_valid, self.coverage
        );
        if let Some(f) = self.fwl {
            s.push_str(&format!("fwl={f}\n"));
        }
        s
    }
}

/// Converts a velocity field (px/s) into displacement over `dt` seconds.
pub fn scale_flow_to_displacement(flow: &FlowField, dt: f64) -> Result<FlowField> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidInterval(dt));
    }
    Ok(flow.map_valid(|[u, v]| [u * dt, v * dt]))
}

/// AEE and outlier percentage over pixels valid in both fields.
pub fn aee(pred: &FlowField, gt: &GroundTruthFlow, threshold: f64) -> Result<MetricReport> {
    let (rp, rg) = (pred.resolution(), gt.field.resolution());
    if rp != rg {
        return Err(Error::ResolutionMismatch(
            rp.width, rp.height, rg.width, rg.height,
        ));
    }
    let mut sum = 0.0;
    let mut outliers = 0usize;
    let mut evaluated = 0usize;
    for (p, g) in pred.cells().zip(gt.field.cells()) {
        let (Some(p), Some(g)) = (p, g) else {
            continue;
        };
        let err = (p[0] - g[0]).hypot(p[1] - g[1]);
        sum += err;
        evaluated += 1;
        if err > threshold {
            outliers += 1;
        }
    }
    if evaluated == 0 {
        return Err(Error::NoOverlap);
    }
    let gt_valid = gt.field.valid_count();
    Ok(MetricReport {
        aee: sum / evaluated as f64,
        outlier_pct: 100.0 * outliers as f64 / evaluated as f64,
        fwl: None,
        evaluated,
        gt_valid,
        coverage: evaluated as f64 / gt_valid as f64,
    })
}

/// Scores a velocity field (px/s) against ground-truth displacement by first
/// scaling it to the ground-truth interval.
pub fn evaluate_velocity(
    velocity: &FlowField,
    gt: &GroundTruthFlow,
    threshold: f64,
) -> Result<MetricReport> {
    aee(
        &scale_flow_to_displacement(velocity, gt.interval_secs())?,
        gt,
        threshold,
    )
}
