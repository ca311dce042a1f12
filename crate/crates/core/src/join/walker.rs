//! Depth-first traversal of one prefix subtree against the inverted index.

use crate::costmodel::{ClSummary, NodeAggregates, Strategy};
use crate::domain::SetObject;
use crate::error::Result;
use crate::index::{InvertedIndex, Subtree};
use crate::intersect::{intersect, CandidateList};
use crate::memory::{MemoryGauge, ENTRY_BYTES};
use crate::scalar::Scalar;

use super::{verify, Algorithm, DecisionRecord, JoinConfig};

/// Result pairs and counters shared by every traversal of one join.
#[derive(Debug, Default)]
pub(crate) struct Sink {
    pub pairs: Option<Vec<(u32, u32)>>,
    pub n_results: u64,
    pub n_direct: u64,
    pub n_verified: u64,
}

impl Sink {
    pub fn new(count_only: bool) -> Self {
        Self {
            pairs: (!count_only).then(Vec::new),
            ..Self::default()
        }
    }

    #[inline]
    fn emit(&mut self, l: u32, r: u32) {
        self.n_results += 1;
        if let Some(p) = self.pairs.as_mut() {
            p.push((l, r));
        }
    }

    #[inline]
    pub fn emit_direct(&mut self, l: u32, r: u32) {
        self.n_direct += 1;
        self.emit(l, r);
    }
}

/// Right-hand state a traversal reads: the index, the summary of the whole
/// indexed collection, and how index sequence numbers map to right oids.
pub(crate) struct RightView<'a> {
    pub objects: &'a [SetObject],
    pub index: &'a InvertedIndex,
    /// Summary of every indexed object at the walker's suffix depth.
    pub all: ClSummary,
    /// `None` when index ids are right oids.
    pub seq_to_oid: Option<&'a [u32]>,
}

impl RightView<'_> {
    #[inline]
    fn oid(&self, seq: u32) -> u32 {
        match self.seq_to_oid {
            Some(map) => map[seq as usize],
            None => seq,
        }
    }

    #[inline]
    fn object(&self, seq: u32) -> &SetObject {
        &self.objects[self.oid(seq) as usize]
    }
}

/// Adds one object of length `len` to a whole-collection summary.
pub(crate) fn summary_push(all: &mut ClSummary, len: u32, suffix_depth: u32) {
    all.len += 1;
    all.suffix_sum += len.saturating_sub(suffix_depth) as u64;
    all.suffix_sum_above += len.saturating_sub(suffix_depth.saturating_sub(1)) as u64;
}

#[derive(Clone, Copy)]
enum Cands<'c> {
    /// Every indexed object; the parent is the virtual root.
    All,
    List(&'c CandidateList),
}

pub(crate) struct Walker<'a, T> {
    cfg: &'a JoinConfig<T>,
    left: &'a [SetObject],
    /// Depth at which candidate list suffix sums are kept.
    suffix_depth: u32,
    pub sink: Sink,
    pub gauge: MemoryGauge,
    pub n_intersections: u64,
    pub decisions: Vec<DecisionRecord>,
}

impl<'a, T: Scalar> Walker<'a, T> {
    pub fn new(cfg: &'a JoinConfig<T>, left: &'a [SetObject], limit: Option<u32>) -> Self {
        Self {
            cfg,
            left,
            suffix_depth: limit.unwrap_or(1),
            sink: Sink::new(cfg.count_only),
            gauge: MemoryGauge::new(),
            n_intersections: 0,
            decisions: Vec::new(),
        }
    }

    pub fn suffix_depth(&self) -> u32 {
        self.suffix_depth
    }

    pub fn join_subtree(&mut self, st: &Subtree, right: &RightView<'_>) -> Result<()> {
        self.visit(st, Subtree::ROOT, Cands::All, right)
    }

    fn visit(&mut self, st: &Subtree, idx: u32, cands: Cands<'_>, right: &RightView<'_>) -> Result<()> {
        let node = st.node(idx);
        let index = right.index;
        let postings = index.postings(node.item);
        let root_level = matches!(cands, Cands::All);

        if self.cfg.algorithm == Algorithm::LimitPlus {
            if index.indexed_count() == 0 {
                return Ok(());
            }
            let summary = match cands {
                Cands::All => right.all,
                Cands::List(cl) => ClSummary::from(cl),
            };
            let decision = self.cfg.costs.continue_as_limit(
                &NodeAggregates::from(node),
                &summary,
                postings.len(),
                index.indexed_count() as usize,
                self.cfg.intersect,
                root_level && !self.cfg.faithful,
            )?;
            if self.cfg.trace_decisions {
                self.decisions.push(DecisionRecord {
                    path: st.path(idx),
                    strategy: decision.strategy,
                    cost_a: decision.cost_a.as_f64(),
                    cost_b: decision.cost_b.as_f64(),
                });
            }
            if decision.strategy == Strategy::Verify {
                self.verify_subtree(st, idx, cands, right);
                return Ok(());
            }
        }

        let lengths = index.object_lengths();
        let sd = self.suffix_depth;
        let cl = match cands {
            Cands::All if !self.cfg.faithful => CandidateList::from_oids(postings.to_vec(), sd, lengths),
            Cands::All => {
                let full = CandidateList::full(index.indexed_count(), sd, lengths);
                let bytes = ENTRY_BYTES * full.len() as u64;
                self.gauge.add(bytes);
                self.n_intersections += 1;
                let out = intersect(self.cfg.intersect, &full, postings, sd, lengths);
                self.gauge.sub(bytes);
                out
            }
            Cands::List(parent) => {
                self.n_intersections += 1;
                intersect(self.cfg.intersect, parent, postings, sd, lengths)
            }
        };
        if cl.is_empty() && !self.cfg.faithful {
            return Ok(());
        }
        let bytes = ENTRY_BYTES * cl.len() as u64;
        self.gauge.add(bytes);

        for &r in &node.rl_eq {
            for &s in &cl.oids {
                self.sink.emit_direct(r, right.oid(s));
            }
        }
        if !node.rl_super.is_empty() {
            self.verify_block(&node.rl_super, cl.oids.iter().copied(), node.depth as usize, right);
        }
        for &c in &node.children {
            self.visit(st, c, Cands::List(&cl), right)?;
        }

        self.gauge.sub(bytes);
        Ok(())
    }

    /// Strategy B: every object at or below `idx` against the parent's
    /// candidates. Those candidates contain the parent path, so checking
    /// resumes one level above the node.
    fn verify_subtree(&mut self, st: &Subtree, idx: u32, cands: Cands<'_>, right: &RightView<'_>) {
        let mut objs = Vec::new();
        st.objects_under(idx, &mut objs);
        let start = st.node(idx).depth as usize - 1;
        match cands {
            Cands::All => self.verify_block(&objs, 0..right.index.indexed_count(), start, right),
            Cands::List(cl) => self.verify_block(&objs, cl.oids.iter().copied(), start, right),
        }
    }

    fn verify_block<I>(&mut self, left: &[u32], seqs: I, start: usize, right: &RightView<'_>)
    where
        I: Iterator<Item = u32> + Clone,
    {
        for &l in left {
            let r = &self.left[l as usize];
            for seq in seqs.clone() {
                self.sink.n_verified += 1;
                if verify(r, right.object(seq), start) {
                    self.sink.emit(l, right.oid(seq));
                }
            }
        }
    }
}
