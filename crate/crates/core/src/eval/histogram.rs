use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::matcher::Triplet;

/// Direction class of a triplet velocity. Angles are in image coordinates
/// (x right, y down), counter-clockwise from +x in steps of 45 degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DirectionBin {
    /// `Angle(n)` is `45 * n` degrees, `n` in `0..8`.
    Angle(u8),
    Zero,
    /// Anything not on a multiple of 45 degrees.
    OffAxis,
}

impl DirectionBin {
    /// Classifies the pixel displacement of a triplet.
    pub fn of_displacement(d: [i32; 2]) -> Self {
        let [dx, dy] = d;
        if dx == 0 && dy == 0 {
            return DirectionBin::Zero;
        }
        if dx != 0 && dy != 0 && dx.abs() != dy.abs() {
            return DirectionBin::OffAxis;
        }
        let deg = (dy as f64).atan2(dx as f64).to_degrees();
        DirectionBin::Angle(((deg / 45.0).round() as i32).rem_euclid(8) as u8)
    }

    pub fn label(&self) -> String {
        match self {
            DirectionBin::Angle(n) => format!("{}", *n as u32 * 45),
            DirectionBin::Zero => "zero".into(),
            DirectionBin::OffAxis => "off_axis".into(),
        }
    }
}

/// Triplet counts per direction class and per (direction, speed bin).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VelocityHistogram {
    /// Width of a speed bin in px/s.
    pub bin_width: f64,
    pub directions: BTreeMap<DirectionBin, u64>,
    /// Keyed by direction and speed bin index (`floor(|v| / bin_width)`).
    pub magnitudes: BTreeMap<(DirectionBin, u64), u64>,
}

impl VelocityHistogram {
    pub fn total(&self) -> u64 {
        self.directions.values().sum()
    }

    pub fn count(&self, dir: DirectionBin) -> u64 {
        self.directions.get(&dir).copied().unwrap_or(0)
    }

    /// Distinct speed bins holding mass, over all directions.
    pub fn occupied_magnitude_bins(&self) -> usize {
        let mut bins: Vec<u64> = self.magnitudes.keys().map(|&(_, m)| m).collect();
        bins.sort_unstable();
        bins.dedup();
        bins.len()
    }

    /// `direction_bin,magnitude_bin,count` rows; `magnitude_bin` is the lower
    /// edge of the speed bin in px/s.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("direction_bin,magnitude_bin,count\n");
        for (&(dir, m), &count) in &self.magnitudes {
            let _ = writeln!(s, "{},{},{}", dir.label(), m as f64 * self.bin_width, count);
        }
        s
    }
}

pub fn velocity_histogram(triplets: &[Triplet], bin_width: f64) -> VelocityHistogram {
    assert!(bin_width > 0.0, "speed bin width must be positive");
    let mut directions = BTreeMap::new();
    let mut magnitudes = BTreeMap::new();
    for t in triplets {
        let dir = DirectionBin::of_displacement(t.displacement);
        *directions.entry(dir).or_insert(0) += 1;
        let speed = t.v[0].hypot(t.v[1]);
        let bin = (speed / bin_width).floor() as u64;
        *magnitudes.entry((dir, bin)).or_insert(0) += 1;
    }
    VelocityHistogram {
        bin_width,
        directions,
        magnitudes,
    }
}
