use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::costmodel::ClSummary;
use crate::domain::{partition_by_first_item, Collection};
use crate::error::Result;
use crate::index::{build_prefix_tree, InvertedIndex};
use crate::scalar::Scalar;

use super::walker::{summary_push, RightView, Walker};
use super::{empty_left_pairs, finish_pairs, resolve_limit, JoinConfig, JoinOutput};

/// Partitions both sides by first item and processes items in rank order:
/// append the right partition to the index, build the left partition's
/// subtree, join it, drop it.
///
/// A left object whose first item is `i` can only be contained in right
/// objects whose first item ranks at or before `i`, so the index holds exactly
/// the objects that can match when the subtree for `i` is joined. Right
/// objects are indexed under sequence numbers in processing order.
pub fn join_opj<T: Scalar>(left: &Collection, right: &Collection, cfg: &JoinConfig<T>) -> Result<JoinOutput> {
    let (limit, _) = resolve_limit(left, right, cfg)?;

    let start = Instant::now();
    let mut build_time = Duration::ZERO;
    let left_parts = partition_by_first_item(&left.objects);
    let right_parts = partition_by_first_item(&right.objects);
    let last_left = left_parts.partitions.keys().next_back().copied();
    let keys: BTreeSet<_> = left_parts
        .partitions
        .keys()
        .chain(right_parts.partitions.keys())
        .copied()
        .collect();

    let mut walker = Walker::new(cfg, &left.objects, limit);
    let sd = walker.suffix_depth();
    let mut index = InvertedIndex::new();
    let mut seq_to_oid: Vec<u32> = Vec::with_capacity(right.len());
    let mut all = ClSummary::default();

    for item in keys {
        if Some(item) > last_left {
            break;
        }
        let t = Instant::now();
        let part = right_parts.get(item);
        let first_seq = seq_to_oid.len() as u32;
        seq_to_oid.extend_from_slice(part);
        let added = index.extend_as(
            part.iter()
                .enumerate()
                .map(|(k, &oid)| (first_seq + k as u32, right.objects[oid as usize].items.as_slice())),
        )?;
        walker.gauge.add(added);
        for &oid in part {
            summary_push(&mut all, right.objects[oid as usize].len() as u32, sd);
        }

        let members = left_parts.get(item);
        if members.is_empty() {
            build_time += t.elapsed();
            continue;
        }
        let mut tree = build_prefix_tree(members.iter().map(|&oid| &left.objects[oid as usize]), limit)?;
        let tree_bytes = tree.logical_bytes();
        walker.gauge.add(tree_bytes);
        build_time += t.elapsed();

        let view = RightView {
            objects: &right.objects,
            index: &index,
            all,
            seq_to_oid: Some(&seq_to_oid),
        };
        for st in tree.subtrees() {
            walker.join_subtree(st, &view)?;
        }
        let freed = tree.delete_subtree(item);
        debug_assert_eq!(freed, tree_bytes);
        walker.gauge.sub(freed);
    }
    empty_left_pairs(left, right, cfg.keep_empty, &mut walker.sink);
    let join_time = start.elapsed().saturating_sub(build_time);

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
