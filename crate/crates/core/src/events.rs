//! Event representation and stream normalization.
//!
//! An [`Event`] is one brightness-change sample from the sensor: an integer
//! microsecond timestamp, a pixel, and a polarity. Raw input of any origin goes
//! through [`normalize_stream`], which produces an [`EventBatch`]: sorted by
//! time (stable, so ties keep input order) and clipped to the sensor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of the brightness change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Negative,
    Positive,
}

impl Polarity {
    pub fn sign(self) -> i8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }

    /// Index into per-polarity arrays (negative = 0, positive = 1).
    pub fn index(self) -> usize {
        match self {
            Polarity::Negative => 0,
            Polarity::Positive => 1,
        }
    }
}

/// How polarity is encoded in raw input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarityEncoding {
    /// `0` is a decrease, `1` an increase.
    ZeroOne,
    /// `-1` / `+1`.
    Signed,
}

impl PolarityEncoding {
    pub fn decode(self, value: i64) -> Result<Polarity> {
        match (self, value) {
            (PolarityEncoding::ZeroOne, 0) | (PolarityEncoding::Signed, -1) => {
                Ok(Polarity::Negative)
            }
            (PolarityEncoding::ZeroOne, 1) | (PolarityEncoding::Signed, 1) => {
                Ok(Polarity::Positive)
            }
            (enc, value) => Err(Error::InvalidPolarity {
                value,
                encoding: match enc {
                    PolarityEncoding::ZeroOne => "{0,1}",
                    PolarityEncoding::Signed => "{-1,+1}",
                },
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Resolution {
    pub width: u32,
    pub height: u32,
}

impl Resolution {
    pub const fn new(width: u32, height: u32) -> Self {
        Self { width, height }
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64
    }

    pub fn pixels(&self) -> usize {
        self.width as usize * self.height as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    /// Timestamp in microseconds.
    pub t: u64,
    pub x: u16,
    pub y: u16,
    pub p: Polarity,
}

impl Event {
    pub fn new(t: u64, x: u16, y: u16, p: Polarity) -> Self {
        Self { t, x, y, p }
    }
}

/// An event as it arrives from a reader, before validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawEvent {
    pub t: u64,
    pub x: i64,
    pub y: i64,
    pub p: i64,
}

impl RawEvent {
    pub fn new(t: u64, x: i64, y: i64, p: i64) -> Self {
        Self { t, x, y, p }
    }
}

impl From<Event> for RawEvent {
    fn from(e: Event) -> Self {
        RawEvent::new(e.t, e.x as i64, e.y as i64, e.p.sign() as i64)
    }
}

/// Converts a timestamp in seconds to integer microseconds.
pub fn seconds_to_micros(seconds: f64) -> u64 {
    (seconds * 1e6).round().max(0.0) as u64
}

/// Time-sorted, in-bounds events at a declared sensor resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventBatch {
    events: Vec<Event>,
    resolution: Resolution,
}

impl EventBatch {
    /// Wraps already-normalized events, checking sortedness and bounds.
    pub fn new(events: Vec<Event>, resolution: Resolution) -> Result<Self> {
        for (index, e) in events.iter().enumerate() {
            if !resolution.contains(e.x as i64, e.y as i64) {
                return Err(Error::OutOfBounds {
                    index,
                    x: e.x as i64,
                    y: e.y as i64,
                    width: resolution.width,
                    height: resolution.height,
                });
            }
        }
        if let Some(index) = events.windows(2).position(|w| w[0].t > w[1].t) {
            return Err(Error::Unsorted { index: index + 1 });
        }
        Ok(Self { events, resolution })
    }

    pub fn empty(resolution: Resolution) -> Self {
        Self {
            events: Vec::new(),
            resolution,
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// First and last timestamp, if any.
    pub fn time_span(&self) -> Option<(u64, u64)> {
        Some((self.events.first()?.t, self.events.last()?.t))
    }

    /// Merges two batches of the same resolution, keeping `self` first on ties.
    pub fn merge(&self, other: &EventBatch) -> Result<EventBatch> {
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch(
                self.resolution.width,
                self.resolution.height,
                other.resolution.width,
                other.resolution.height,
            ));
        }
        let mut events = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (
            self.events.iter().peekable(),
            other.events.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x.t <= y.t {
                        events.push(*a.next().unwrap());
                    } else {
                        events.push(*b.next().unwrap());
                    }
                }
                (Some(_), None) => events.push(*a.next().unwrap()),
                (None, Some(_)) => events.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        Ok(EventBatch {
            events,
            resolution: self.resolution,
        })
    }
}

/// Result of [`normalize_stream`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub batch: EventBatch,
    /// Events dropped for lying outside the sensor.
    pub dropped: usize,
}

/// Sorts, decodes polarity and clips raw events to the sensor.
pub fn normalize_stream(
    raw: &[RawEvent],
    resolution: Resolution,
    encoding: PolarityEncoding,
) -> Result<Normalized> {
    if raw.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut dropped = 0;
    let mut events = Vec::with_capacity(raw.len());
    for r in raw {
        let p = encoding.decode(r.p)?;
        if !resolution.contains(r.x, r.y) {
            dropped += 1;
            continue;
        }
        events.push(Event::new(r.t, r.x as u16, r.y as u16, p));
    }
    // stable: equal timestamps keep input order
    events.sort_by_key(|e| e.t);
    Ok(Normalized {
        batch: EventBatch { events, resolution },
        dropped,
    })
}

/// Splits a batch into its positive and negative streams, preserving order.
pub fn split_by_polarity(batch: &EventBatch) -> (EventBatch, EventBatch) {
    let (pos, neg): (Vec<Event>, Vec<Event>) =
        batch.events.iter().partition(|e| e.p == Polarity::Positive);
    (
        EventBatch {
            events: pos,
            resolution: batch.resolution,
        },
        EventBatch {
            events: neg,
            resolution: batch.resolution,
        },
    )
}
