use std::collections::VecDeque;

use super::pixel_index::PixelIndex;
use super::{
    for_each_triplet, FlowAccumulator, FlowRecord, IndexMap, MapSource, MatcherParams, Stored,
    Triplet,
};
use crate::error::{Error, Result};
use crate::events::{Event, Resolution};

/// State of one polarity stream.
///
/// Events are addressed by a local sequence number. Index maps live in a flat
/// neighbor pool; only the newest `retention` maps are kept. An event record is
/// dropped once neither a retained map nor a pixel buffer can reach it.
struct PolarityStream {
    index: PixelIndex,
    events: VecDeque<Stored>,
    events_base: u64,
    pool: Vec<u64>,
    pool_head: usize,
    pool_base: u64,
    maps: VecDeque<(u64, u32)>,
    maps_base: u64,
    next_seq: u64,
    last_t: Option<u64>,
}

impl MapSource for PolarityStream {
    fn event(&self, seq: u64) -> Stored {
        self.events[(seq - self.events_base) as usize]
    }

    fn map(&self, seq: u64, _k_seq: u64) -> Option<&[u64]> {
        let slot = seq.checked_sub(self.maps_base)? as usize;
        let &(start, len) = self.maps.get(slot)?;
        let from = (start - self.pool_base) as usize + self.pool_head;
        Some(&self.pool[from..from + len as usize])
    }
}

impl PolarityStream {
    fn new(params: &MatcherParams, resolution: Resolution) -> Self {
        Self {
            index: PixelIndex::new(params, resolution),
            events: VecDeque::new(),
            events_base: 0,
            pool: Vec::new(),
            pool_head: 0,
            pool_base: 0,
            maps: VecDeque::new(),
            maps_base: 0,
            next_seq: 0,
            last_t: None,
        }
    }

    fn neighborhood(&self, e: &Event, params: &MatcherParams, out: &mut Vec<u64>) {
        if let Some((lower, upper)) = params.window(e.t) {
            self.index
                .neighbors(e.x as i32, e.y as i32, lower, upper, out);
        }
    }

    fn seq_of(&self, global: usize) -> Option<u64> {
        let pos = self.events.partition_point(|s| s.global < global);
        (self.events.get(pos)?.global == global).then(|| self.events_base + pos as u64)
    }

    fn commit(&mut self, stored: Stored, h_k: &[u64], params: &MatcherParams) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.last_t = Some(stored.t);

        let start = self.pool_base + (self.pool.len() - self.pool_head) as u64;
        self.pool.extend_from_slice(h_k);
        self.maps.push_back((start, h_k.len() as u32));
        if self.maps.len() > params.retention {
            let (_, len) = self.maps.pop_front().unwrap();
            self.maps_base += 1;
            self.pool_head += len as usize;
            self.pool_base += len as u64;
            if self.pool_head > 4096 && self.pool_head * 2 > self.pool.len() {
                self.pool.drain(..self.pool_head);
                self.pool_head = 0;
            }
        }

        self.events.push_back(stored);
        self.index.insert(stored.x, stored.y, stored.t, seq);

        // Retained maps only reach back tau + dt behind their owners.
        let oldest_owner = self.event(self.maps_base).t;
        let cutoff = oldest_owner
            .saturating_sub(params.tau_us + params.dt_us)
            .min(self.index.floor());
        while self.events.front().is_some_and(|s| s.t < cutoff) {
            self.events.pop_front();
            self.events_base += 1;
        }
    }
}

/// Incremental event-by-event flow estimator.
///
/// ```
/// use tripflow::{Event, Matcher, MatcherParams, Polarity, Resolution};
///
/// let mut m = Matcher::new(MatcherParams::default(), Resolution::new(32, 32)).unwrap();
/// m.push(Event::new(0, 10, 10, Polarity::Positive)).unwrap();
/// m.push(Event::new(5_000, 11, 10, Polarity::Positive)).unwrap();
/// let rec = m.push(Event::new(10_000, 12, 10, Polarity::Positive)).unwrap();
/// let [vx, vy] = rec.flow.vector().unwrap();
/// assert!((vx - 200.0).abs() < 1e-9 && vy == 0.0);
/// ```
pub struct Matcher {
    params: MatcherParams,
    resolution: Resolution,
    streams: [PolarityStream; 2],
    next_index: usize,
    scratch: Vec<u64>,
}

impl Matcher {
    pub fn new(params: MatcherParams, resolution: Resolution) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            resolution,
            streams: [
                PolarityStream::new(&params, resolution),
                PolarityStream::new(&params, resolution),
            ],
            next_index: 0,
            scratch: Vec::new(),
        })
    }

    pub fn params(&self) -> &MatcherParams {
        &self.params
    }

    /// Number of events consumed so far; the next event gets this index.
    pub fn processed(&self) -> usize {
        self.next_index
    }

    /// Index maps currently retained for the stream of polarity `p`.
    pub fn retained_maps(&self, p: crate::Polarity) -> usize {
        self.streams[p.index()].maps.len()
    }

    /// Event records currently stored for the stream of polarity `p`.
    pub fn stored_events(&self, p: crate::Polarity) -> usize {
        self.streams[p.index()].events.len()
    }

    fn check(&self, e: &Event) -> Result<()> {
        if !self.resolution.contains(e.x as i64, e.y as i64) {
            return Err(Error::OutOfBounds {
                index: self.next_index,
                x: e.x as i64,
                y: e.y as i64,
                width: self.resolution.width,
                height: self.resolution.height,
            });
        }
        match self.streams[e.p.index()].last_t {
            Some(last) if e.t < last => Err(Error::OutOfOrder { t: e.t, last }),
            _ => Ok(()),
        }
    }

    /// Neighborhood `H_k` the next event would get, without consuming it.
    pub fn find_neighborhood(&self, e: &Event) -> IndexMap {
        let stream = &self.streams[e.p.index()];
        let mut seqs = Vec::new();
        stream.neighborhood(e, &self.params, &mut seqs);
        IndexMap {
            owner: self.next_index,
            neighbors: seqs.iter().map(|&s| stream.event(s).global).collect(),
        }
    }

    /// Triplets the next event would close with the given neighborhood.
    /// Neighbors that are no longer stored contribute nothing.
    pub fn find_triplets(&self, e: &Event, h_k: &IndexMap) -> Vec<Triplet> {
        let stream = &self.streams[e.p.index()];
        let seqs: Vec<u64> = h_k
            .neighbors
            .iter()
            .filter_map(|&g| stream.seq_of(g))
            .collect();
        let mut out = Vec::new();
        let k = Stored::from_event(e, self.next_index);
        for_each_triplet(stream, k, stream.next_seq, &seqs, &self.params, |t| {
            out.push(t)
        });
        out
    }

    /// Estimates the flow of `e` and folds it into the state.
    pub fn push(&mut self, e: Event) -> Result<FlowRecord> {
        self.push_inner(e, None)
    }

    /// Like [`Matcher::push`], also appending the triplets found to `out`.
    pub fn push_traced(&mut self, e: Event, out: &mut Vec<Triplet>) -> Result<FlowRecord> {
        self.push_inner(e, Some(out))
    }

    fn push_inner(&mut self, e: Event, mut trace: Option<&mut Vec<Triplet>>) -> Result<FlowRecord> {
        self.check(&e)?;
        let k = self.next_index;
        let stored = Stored::from_event(&e, k);
        let stream = &mut self.streams[e.p.index()];

        let mut h_k = std::mem::take(&mut self.scratch);
        h_k.clear();
        stream.neighborhood(&e, &self.params, &mut h_k);

        let mut acc = FlowAccumulator::default();
        for_each_triplet(&*stream, stored, stream.next_seq, &h_k, &self.params, |t| {
            acc.add(&t);
            if let Some(out) = trace.as_deref_mut() {
                out.push(t);
            }
        });
        let record = acc.finish(k);

        stream.commit(stored, &h_k, &self.params);
        self.scratch = h_k;
        self.next_index += 1;
        Ok(record)
    }
}
