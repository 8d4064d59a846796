use super::{FlowRecord, Matcher, MatcherParams, Triplet};
use crate::error::Result;
use crate::events::EventBatch;

/// Flows for every event of a batch plus the triplets behind them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BatchOutput {
    pub flows: Vec<FlowRecord>,
    /// Ordered by `k`, then `i`, then `j`.
    pub triplets: Vec<Triplet>,
}

/// Per-event flow for a whole batch.
///
/// Uses the parallel driver when the `parallel` feature is enabled, otherwise
/// incremental replay. Both produce bit-identical output.
pub fn process_batch(batch: &EventBatch, params: &MatcherParams) -> Result<Vec<FlowRecord>> {
    #[cfg(feature = "parallel")]
    {
        process_batch_parallel(batch, params)
    }
    #[cfg(not(feature = "parallel"))]
    {
        process_batch_sequential(batch, params)
    }
}

/// Feeds the batch through a fresh [`Matcher`] one event at a time.
pub fn process_batch_sequential(
    batch: &EventBatch,
    params: &MatcherParams,
) -> Result<Vec<FlowRecord>> {
    let mut m = Matcher::new(*params, batch.resolution())?;
    batch.events().iter().map(|&e| m.push(e)).collect()
}

/// Like [`process_batch`], also returning every triplet found.
pub fn process_batch_traced(batch: &EventBatch, params: &MatcherParams) -> Result<BatchOutput> {
    #[cfg(feature = "parallel")]
    {
        parallel::run(batch, params, true)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut m = Matcher::new(*params, batch.resolution())?;
        let mut triplets = Vec::new();
        let flows = batch
            .events()
            .iter()
            .map(|&e| m.push_traced(e, &mut triplets))
            .collect::<Result<_>>()?;
        Ok(BatchOutput { flows, triplets })
    }
}

/// Two-phase batch driver: index maps for both polarity streams are built
/// first (the streams in parallel), then flows are computed per event in
/// parallel. Each event sees exactly the maps the incremental matcher would
/// have retained, so results match [`process_batch_sequential`] bit for bit.
#[cfg(feature = "parallel")]
pub fn process_batch_parallel(
    batch: &EventBatch,
    params: &MatcherParams,
) -> Result<Vec<FlowRecord>> {
    parallel::run(batch, params, false).map(|out| out.flows)
}

#[cfg(feature = "parallel")]
mod parallel {
    use rayon::prelude::*;

    use super::BatchOutput;
    use crate::error::Result;
    use crate::events::{EventBatch, Polarity};
    use crate::matcher::pixel_index::PixelIndex;
    use crate::matcher::{for_each_triplet, FlowAccumulator, MapSource, MatcherParams, Stored};

    /// All events and index maps of one polarity, in CSR layout.
    struct StreamMaps {
        events: Vec<Stored>,
        starts: Vec<usize>,
        neighbors: Vec<u64>,
        retention: u64,
    }

    impl MapSource for StreamMaps {
        fn event(&self, seq: u64) -> Stored {
            self.events[seq as usize]
        }

        fn map(&self, seq: u64, k_seq: u64) -> Option<&[u64]> {
            if k_seq - seq > self.retention {
                return None;
            }
            let s = seq as usize;
            Some(&self.neighbors[self.starts[s]..self.starts[s + 1]])
        }
    }

    impl StreamMaps {
        fn build(batch: &EventBatch, polarity: Polarity, params: &MatcherParams) -> Self {
            let mut index = PixelIndex::new(params, batch.resolution());
            let mut events = Vec::new();
            let mut starts = vec![0];
            let mut neighbors = Vec::new();
            for (global, e) in batch.events().iter().enumerate() {
                if e.p != polarity {
                    continue;
                }
                let seq = events.len() as u64;
                if let Some((lower, upper)) = params.window(e.t) {
                    index.neighbors(e.x as i32, e.y as i32, lower, upper, &mut neighbors);
                }
                starts.push(neighbors.len());
                index.insert(e.x as i32, e.y as i32, e.t, seq);
                events.push(Stored::from_event(e, global));
            }
            Self {
                events,
                starts,
                neighbors,
                retention: params.retention as u64,
            }
        }

        fn h(&self, seq: usize) -> &[u64] {
            &self.neighbors[self.starts[seq]..self.starts[seq + 1]]
        }
    }

    pub(super) fn run(
        batch: &EventBatch,
        params: &MatcherParams,
        trace: bool,
    ) -> Result<BatchOutput> {
        params.validate()?;
        let (neg, pos) = rayon::join(
            || StreamMaps::build(batch, Polarity::Negative, params),
            || StreamMaps::build(batch, Polarity::Positive, params),
        );
        let streams = [&neg, &pos];

        // local sequence number of every event within its polarity stream
        let mut seqs = Vec::with_capacity(batch.len());
        let mut counters = [0u64; 2];
        for e in batch.events() {
            let c = &mut counters[e.p.index()];
            seqs.push(*c);
            *c += 1;
        }

        let per_event = batch
            .events()
            .par_iter()
            .zip(seqs.par_iter())
            .enumerate()
            .map(|(k, (e, &seq))| {
                let src = streams[e.p.index()];
                let mut acc = FlowAccumulator::default();
                let mut found = Vec::new();
                for_each_triplet(src, src.event(seq), seq, src.h(seq as usize), params, |t| {
                    acc.add(&t);
                    if trace {
                        found.push(t);
                    }
                });
                (acc.finish(k), found)
            })
            .collect::<Vec<_>>();

        let mut out = BatchOutput {
            flows: Vec::with_capacity(per_event.len()),
            triplets: Vec::new(),
        };
        for (rec, found) in per_event {
            out.flows.push(rec);
            out.triplets.extend(found);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::{Event, Polarity, Resolution};
    use crate::matcher::Flow;

    fn batch(events: Vec<Event>) -> EventBatch {
        EventBatch::new(events, Resolution::new(32, 32)).unwrap()
    }

    #[test]
    fn three_event_example() {
        let p = Polarity::Positive;
        let b = batch(vec![
            Event::new(0, 10, 10, p),
            Event::new(5_000, 11, 10, p),
            Event::new(10_000, 12, 10, p),
        ]);
        let flows = process_batch(&b, &MatcherParams::default()).unwrap();
        assert_eq!(flows[0].flow, Flow::Undefined);
        assert_eq!(flows[1].flow, Flow::Undefined);
        let v = flows[2].flow.vector().unwrap();
        assert!((v[0] - 200.0).abs() < 1e-9 && v[1] == 0.0);
    }

    #[test]
    fn mixed_polarities_stay_separate() {
        let (pp, nn) = (Polarity::Positive, Polarity::Negative);
        let b = batch(vec![
            Event::new(0, 10, 10, pp),
            Event::new(0, 10, 20, nn),
            Event::new(5_000, 11, 10, nn),
            Event::new(5_000, 11, 10, pp),
            Event::new(5_000, 10, 21, nn),
            Event::new(10_000, 12, 10, pp),
            Event::new(10_000, 10, 22, nn),
        ]);
        let out = process_batch_traced(&b, &MatcherParams::default()).unwrap();
        let defined: Vec<usize> = out
            .flows
            .iter()
            .filter(|r| r.flow.is_defined())
            .map(|r| r.k)
            .collect();
        assert_eq!(defined, vec![5, 6]);
        for t in &out.triplets {
            let pol = |n: usize| b.events()[n].p;
            assert!(pol(t.k) == pol(t.i) && pol(t.i) == pol(t.j));
        }
        let v = out.flows[6].flow.vector().unwrap();
        assert!(v[0] == 0.0 && (v[1] - 200.0).abs() < 1e-9);
    }

    #[test]
    fn empty_batch() {
        let b = EventBatch::empty(Resolution::new(4, 4));
        assert!(process_batch(&b, &MatcherParams::default())
            .unwrap()
            .is_empty());
    }
}
