//! Plain-text event files: one `t x y p` record per line, `t` in decimal
//! seconds and `p` in `{0, 1}`. Lines starting with `#` are comments. A
//! `# resolution <width> <height>` comment, when present, declares the sensor
//! size.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::events::{
    normalize_stream, EventBatch, Normalized, PolarityEncoding, RawEvent, Resolution,
};
use crate::matcher::FlowRecord;

/// Parses a decimal seconds string into microseconds, rounding to the nearest
/// microsecond without going through binary floating point.
fn parse_seconds(s: &str) -> Option<u64> {
    if s.contains(['e', 'E']) {
        let v: f64 = s.parse().ok()?;
        return (v.is_finite() && v >= 0.0).then(|| (v * 1e6).round() as u64);
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.starts_with('-') || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let whole: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let mut micros = 0u64;
    for i in 0..6 {
        micros = micros * 10 + frac.as_bytes().get(i).map_or(0, |b| (b - b'0') as u64);
    }
    let round_up = frac.as_bytes().get(6).is_some_and(|&b| b >= b'5');
    Some(whole * 1_000_000 + micros + round_up as u64)
}

fn parse_resolution_comment(line: &str) -> Option<Resolution> {
    let mut it = line.trim_start_matches('#').split_whitespace();
    if it.next()? != "resolution" {
        return None;
    }
    Some(Resolution::new(
        it.next()?.parse().ok()?,
        it.next()?.parse().ok()?,
    ))
}

/// Parses event text. The resolution comes from `resolution`, else from a
/// `# resolution` comment, else from the largest coordinates seen.
pub fn parse_events(text: &str, path: &Path, resolution: Option<Resolution>) -> Result<Normalized> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut declared = None;
    let mut raw = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            declared = declared.or_else(|| parse_resolution_comment(line));
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(err(
                n + 1,
                format!("expected `t x y p`, got {} fields", fields.len()),
            ));
        }
        let t = parse_seconds(fields[0])
            .ok_or_else(|| err(n + 1, format!("bad timestamp `{}`", fields[0])))?;
        let x: i64 = fields[1]
            .parse()
            .map_err(|_| err(n + 1, format!("bad x `{}`", fields[1])))?;
        let y: i64 = fields[2]
            .parse()
            .map_err(|_| err(n + 1, format!("bad y `{}`", fields[2])))?;
        let p: i64 = match fields[3] {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(err(n + 1, format!("polarity `{other}` is not in {{0, 1}}")));
            }
        };
        raw.push(RawEvent::new(t, x, y, p));
    }
    let resolution = match resolution.or(declared) {
        Some(r) => r,
        None => {
            let w = raw.iter().map(|e| e.x).max().unwrap_or(0) + 1;
            let h = raw.iter().map(|e| e.y).max().unwrap_or(0) + 1;
            Resolution::new(w.max(1) as u32, h.max(1) as u32)
        }
    };
    normalize_stream(&raw, resolution, PolarityEncoding::ZeroOne)
}

pub fn read_events(path: &Path, resolution: Option<Resolution>) -> Result<Normalized> {
    let text = fs::read_to_string(path)?;
    parse_events(&text, path, resolution)
}

fn seconds(t: u64) -> String {
    format!("{}.{:06}", t / 1_000_000, t % 1_000_000)
}

pub fn format_events(batch: &EventBatch) -> String {
    let r = batch.resolution();
    let mut s = format!("# resolution {} {}\n", r.width, r.height);
    for e in batch.events() {
        let p = (e.p == crate::Polarity::Positive) as u8;
        let _ = writeln!(s, "{} {} {} {}", seconds(e.t), e.x, e.y, p);
    }
    s
}

pub fn write_events(path: &Path, batch: &EventBatch) -> Result<()> {
    fs::write(path, format_events(batch))?;
    Ok(())
}

/// Per-event flow: `k t x y p fx fy defined`, `p` as `+1`/`-1`, flow in px/s.
/// Undefined flow is written as `0 0` with `defined = 0`.
pub fn format_flow_records(batch: &EventBatch, flows: &[FlowRecord]) -> Result<String> {
    if flows.len() != batch.len() {
        return Err(Error::Misaligned {
            flows: flows.len(),
            events: batch.len(),
        });
    }
    let mut s = String::from("# k t x y p fx fy defined\n");
    for (e, r) in batch.events().iter().zip(flows) {
        let (v, defined) = match r.flow.vector() {
            Some(v) => (v, 1),
            None => ([0.0, 0.0], 0),
        };
        let _ = writeln!(
            s,
            "{} {} {} {} {:+} {} {} {}",
            r.k,
            seconds(e.t),
            e.x,
            e.y,
            e.p.sign(),
            v[0],
            v[1],
            defined
        );
    }
    Ok(s)
}

pub fn write_flow_records(path: &Path, batch: &EventBatch, flows: &[FlowRecord]) -> Result<()> {
    fs::write(path, format_flow_records(batch, flows)?)?;
    Ok(())
}
