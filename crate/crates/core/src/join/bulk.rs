use std::time::Instant;

use crate::costmodel::ClSummary;
use crate::domain::Collection;
use crate::error::Result;
use crate::index::{build_inverted_index, build_prefix_tree};
use crate::scalar::Scalar;

use super::walker::{summary_push, RightView, Walker};
use super::{empty_left_pairs, finish_pairs, resolve_limit, JoinConfig, JoinOutput};

/// Builds the whole prefix tree over `left` and the whole inverted index over
/// `right`, then traverses every subtree.
pub fn join_bulk<T: Scalar>(left: &Collection, right: &Collection, cfg: &JoinConfig<T>) -> Result<JoinOutput> {
    let (limit, _) = resolve_limit(left, right, cfg)?;

    let t0 = Instant::now();
    let tree = build_prefix_tree(&left.objects, limit)?;
    let index = build_inverted_index(&right.objects)?;
    let build_time = t0.elapsed();

    let t1 = Instant::now();
    let mut walker = Walker::new(cfg, &left.objects, limit);
    walker.gauge.add(tree.logical_bytes() + index.logical_bytes());
    let mut all = ClSummary::default();
    for s in &right.objects {
        summary_push(&mut all, s.len() as u32, walker.suffix_depth());
    }
    let view = RightView {
        objects: &right.objects,
        index: &index,
        all,
        seq_to_oid: None,
    };
    for st in tree.subtrees() {
        walker.join_subtree(st, &view)?;
    }
    empty_left_pairs(left, right, cfg.keep_empty, &mut walker.sink);
    let join_time = t1.elapsed();

    Ok(JoinOutput {
        pairs: finish_pairs(walker.sink.pairs),
        n_results: walker.sink.n_results,
        n_intersections: walker.n_intersections,
        n_candidates_direct: walker.sink.n_direct,
        n_candidates_verified: walker.sink.n_verified,
        build_time,
        join_time,
        peak_logical_bytes: walker.gauge.peak(),
        limit,
        right_indexed: index.indexed_count() as u64,
        decisions: walker.decisions,
    })
}
