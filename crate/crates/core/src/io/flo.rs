//! Middlebury `.flo` files: the tag `PIEH`, little-endian `i32` width and
//! height, then row-major interleaved `f32` `(u, v)`. Invalid pixels are
//! written as `(1e9, 1e9)` and any component at or beyond `1e9` (or NaN) reads
//! back as invalid.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::events::Resolution;
use crate::field::FlowField;

const TAG: &[u8; 4] = b"PIEH";
pub const UNKNOWN_FLOW: f32 = 1e9;

pub fn encode_flo(field: &FlowField) -> Vec<u8> {
    let r = field.resolution();
    let mut out = Vec::with_capacity(12 + 8 * r.pixels());
    out.extend_from_slice(TAG);
    out.extend_from_slice(&(r.width as i32).to_le_bytes());
    out.extend_from_slice(&(r.height as i32).to_le_bytes());
    for cell in field.cells() {
        let [u, v] = cell.map_or([UNKNOWN_FLOW; 2], |[u, v]| [u as f32, v as f32]);
        out.extend_from_slice(&u.to_le_bytes());
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_flo(bytes: &[u8]) -> Result<FlowField> {
    if bytes.len() < 12 || &bytes[..4] != TAG {
        return Err(Error::Format("missing PIEH tag".into()));
    }
    let int = |o: usize| i32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let (w, h) = (int(4), int(8));
    if w <= 0 || h <= 0 {
        return Err(Error::Format(format!("bad dimensions {w}x{h}")));
    }
    let resolution = Resolution::new(w as u32, h as u32);
    let n = resolution.pixels();
    if bytes.len() != 12 + 8 * n {
        return Err(Error::Format(format!(
            "expected {} bytes for {w}x{h}, got {}",
            12 + 8 * n,
            bytes.len()
        )));
    }
    let float = |o: usize| f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let mut uv = Vec::with_capacity(n);
    let mut valid = Vec::with_capacity(n);
    for p in 0..n {
        let (u, v) = (float(12 + 8 * p), float(16 + 8 * p));
        let ok = u.abs() < UNKNOWN_FLOW && v.abs() < UNKNOWN_FLOW;
        uv.push(if ok { [u as f64, v as f64] } else { [0.0; 2] });
        valid.push(ok);
    }
    FlowField::from_parts(resolution, uv, valid)
}

pub fn write_flo(path: &Path, field: &FlowField) -> Result<()> {
    fs::write(path, encode_flo(field))?;
    Ok(())
}

pub fn read_flo(path: &Path) -> Result<FlowField> {
    decode_flo(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let mut f = FlowField::invalid(Resolution::new(3, 2));
        f.set(1, 0, Some([1.5, -2.0]));
        let bytes = encode_flo(&f);
        assert_eq!(&bytes[..4], b"PIEH");
        assert_eq!(
            f32::from_le_bytes(bytes[..4].try_into().unwrap()),
            202021.25
        );
        assert_eq!(&bytes[4..12], &[3, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(bytes.len(), 12 + 6 * 8);
        assert_eq!(f32::from_le_bytes(bytes[12..16].try_into().unwrap()), 1e9);
        assert_eq!(f32::from_le_bytes(bytes[20..24].try_into().unwrap()), 1.5);
    }

    #[test]
    fn rejects_garbage() {
        assert!(decode_flo(b"nope").is_err());
        assert!(decode_flo(b"PIEH\x02\0\0\0\x02\0\0\0").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(cells in prop::collection::vec(prop::option::of((-1e4f32..1e4, -1e4f32..1e4)), 12)) {
            let r = Resolution::new(4, 3);
            let uv: Vec<[f64; 2]> = cells.iter().map(|c| c.map_or([0.0; 2], |(u, v)| [u as f64, v as f64])).collect();
            let valid: Vec<bool> = cells.iter().map(Option::is_some).collect();
            let f = FlowField::from_parts(r, uv, valid).unwrap();
            prop_assert_eq!(decode_flo(&encode_flo(&f)).unwrap(), f);
        }
    }
}
