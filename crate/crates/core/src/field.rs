use crate::error::{Error, Result};
use crate::events::Resolution;

/// Dense 2-vector field over the sensor with a validity mask.
///
/// Depending on context the vectors are velocities (px/s) or displacements
/// (px). Invalid pixels carry no value; their stored vector is ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowField {
    resolution: Resolution,
    uv: Vec<[f64; 2]>,
    valid: Vec<bool>,
}

impl FlowField {
    /// A field with every pixel invalid.
    pub fn invalid(resolution: Resolution) -> Self {
        Self {
            resolution,
            uv: vec![[0.0; 2]; resolution.pixels()],
            valid: vec![false; resolution.pixels()],
        }
    }

    /// A field with the same vector at every pixel.
    pub fn constant(resolution: Resolution, v: [f64; 2]) -> Self {
        Self {
            resolution,
            uv: vec![v; resolution.pixels()],
            valid: vec![true; resolution.pixels()],
        }
    }

    pub fn from_parts(resolution: Resolution, uv: Vec<[f64; 2]>, valid: Vec<bool>) -> Result<Self> {
        if uv.len() != resolution.pixels() || valid.len() != resolution.pixels() {
            return Err(Error::Format(format!(
                "expected {} pixels, got {} vectors and {} mask entries",
                resolution.pixels(),
                uv.len(),
                valid.len()
            )));
        }
        Ok(Self {
            resolution,
            uv,
            valid,
        })
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        y as usize * self.resolution.width as usize + x as usize
    }

    pub fn get(&self, x: u32, y: u32) -> Option<[f64; 2]> {
        let o = self.offset(x, y);
        self.valid[o].then_some(self.uv[o])
    }

    pub fn set(&mut self, x: u32, y: u32, v: Option<[f64; 2]>) {
        let o = self.offset(x, y);
        match v {
            Some(v) => {
                self.uv[o] = v;
                self.valid[o] = true;
            }
            None => {
                self.uv[o] = [0.0; 2];
                self.valid[o] = false;
            }
        }
    }

    /// Row-major vectors; entries at invalid pixels are meaningless.
    pub fn vectors(&self) -> &[[f64; 2]] {
        &self.uv
    }

    pub fn mask(&self) -> &[bool] {
        &self.valid
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Row-major cells, `None` where invalid.
    pub fn cells(&self) -> impl Iterator<Item = Option<[f64; 2]>> + '_ {
        self.uv
            .iter()
            .zip(&self.valid)
            .map(|(&v, &ok)| ok.then_some(v))
    }

    /// Applies `f` to every valid vector.
    pub fn map_valid(&self, f: impl Fn([f64; 2]) -> [f64; 2]) -> Self {
        Self {
            resolution: self.resolution,
            uv: self
                .uv
                .iter()
                .zip(&self.valid)
                .map(|(&v, &ok)| if ok { f(v) } else { [0.0; 2] })
                .collect(),
            valid: self.valid.clone(),
        }
    }
}
