//! Nested-loop reference join. Shares no code with the index or join layers.

use crate::domain::SetObject;

fn sorted<I: Ord + Clone>(items: &[I]) -> Vec<I> {
    let mut v = items.to_vec();
    v.sort();
    v.dedup();
    v
}

fn subset<I: Ord>(a: &[I], b: &[I]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// All `(i, j)` with `left[i] ⊆ right[j]`, by position, ascending. Empty left
/// sets are contained in every right set.
pub fn brute_force_sets<I: Ord + Clone>(left: &[Vec<I>], right: &[Vec<I>]) -> Vec<(u32, u32)> {
    let left: Vec<Vec<I>> = left.iter().map(|o| sorted(o)).collect();
    let right: Vec<Vec<I>> = right.iter().map(|o| sorted(o)).collect();
    let mut out = Vec::new();
    for (i, r) in left.iter().enumerate() {
        for (j, s) in right.iter().enumerate() {
            if r.len() <= s.len() && subset(r, s) {
                out.push((i as u32, j as u32));
            }
        }
    }
    out
}

/// [`brute_force_sets`] over objects, reporting their oids.
pub fn brute_force_join(left: &[SetObject], right: &[SetObject]) -> Vec<(u32, u32)> {
    let l: Vec<Vec<u32>> = left.iter().map(|o| o.items.iter().map(|i| i.0).collect()).collect();
    let r: Vec<Vec<u32>> = right.iter().map(|o| o.items.iter().map(|i| i.0).collect()).collect();
    let mut out: Vec<(u32, u32)> = brute_force_sets(&l, &r)
        .into_iter()
        .map(|(i, j)| (left[i as usize].oid, right[j as usize].oid))
        .collect();
    out.sort_unstable();
    out
}
