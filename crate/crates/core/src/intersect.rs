//! Candidate list ∩ postings list kernels.
//!
//! All kernels produce the same list and the same suffix bookkeeping; they only
//! differ in how they walk the inputs.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IntersectMethod {
    Merge,
    Binary,
    #[default]
    Hybrid,
}

/// Ascending right-hand oids plus suffix length aggregates at `depth`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CandidateList {
    pub oids: Vec<u32>,
    pub depth: u32,
    /// Σ max(0, |s| − depth) over the members.
    pub suffix_sum: u64,
    /// Members with |s| ≥ depth. Adding it to `suffix_sum` gives the suffix
    /// sum at `depth − 1`.
    pub reaching: u64,
}

impl CandidateList {
    pub fn from_oids(oids: Vec<u32>, depth: u32, lengths: &[u32]) -> Self {
        let mut acc = SuffixAcc::new(depth);
        for &o in &oids {
            acc.push(lengths[o as usize]);
        }
        debug_assert!(oids.windows(2).all(|w| w[0] < w[1]));
        Self {
            oids,
            depth,
            suffix_sum: acc.sum,
            reaching: acc.reaching,
        }
    }

    /// Every oid in `0..n`.
    pub fn full(n: u32, depth: u32, lengths: &[u32]) -> Self {
        Self::from_oids((0..n).collect(), depth, lengths)
    }

    pub fn len(&self) -> usize {
        self.oids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oids.is_empty()
    }

    /// Σ max(0, |s| − (depth − 1)).
    pub fn suffix_sum_above(&self) -> u64 {
        if self.depth == 0 {
            self.suffix_sum
        } else {
            self.suffix_sum + self.reaching
        }
    }
}

struct SuffixAcc {
    depth: u32,
    sum: u64,
    reaching: u64,
}

impl SuffixAcc {
    #[inline]
    fn new(depth: u32) -> Self {
        Self {
            depth,
            sum: 0,
            reaching: 0,
        }
    }

    #[inline]
    fn push(&mut self, len: u32) {
        if len >= self.depth {
            self.sum += (len - self.depth) as u64;
            self.reaching += 1;
        }
    }

    fn finish(self, oids: Vec<u32>) -> CandidateList {
        CandidateList {
            oids,
            depth: self.depth,
            suffix_sum: self.sum,
            reaching: self.reaching,
        }
    }
}

/// Two-finger merge, linear in `|cl| + |postings|`.
pub fn intersect_merge(
    cl: &CandidateList,
    postings: &[u32],
    depth: u32,
    lengths: &[u32],
) -> CandidateList {
    let (a, b) = (&cl.oids, postings);
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let mut acc = SuffixAcc::new(depth);
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                acc.push(lengths[a[i] as usize]);
                i += 1;
                j += 1;
            }
        }
    }
    acc.finish(out)
}

/// Probes every candidate into `postings` by binary search. The search window
/// only moves forward since both inputs are ascending.
pub fn intersect_binary(
    cl: &CandidateList,
    postings: &[u32],
    depth: u32,
    lengths: &[u32],
) -> CandidateList {
    let mut out = Vec::with_capacity(cl.len().min(postings.len()));
    let mut acc = SuffixAcc::new(depth);
    let mut lo = 0;
    for &o in &cl.oids {
        if lo >= postings.len() {
            break;
        }
        match postings[lo..].binary_search(&o) {
            Ok(k) => {
                out.push(o);
                acc.push(lengths[o as usize]);
                lo += k + 1;
            }
            Err(k) => lo += k,
        }
    }
    acc.finish(out)
}

/// True when probing is modeled cheaper than merging:
/// `|cl|·log2(|postings|+1) < |cl| + |postings|`.
pub fn hybrid_prefers_binary(n_cl: usize, n_postings: usize) -> bool {
    let probe = n_cl as f64 * ((n_postings + 1) as f64).log2();
    probe < (n_cl + n_postings) as f64
}

pub fn intersect_hybrid(
    cl: &CandidateList,
    postings: &[u32],
    depth: u32,
    lengths: &[u32],
) -> CandidateList {
    if hybrid_prefers_binary(cl.len(), postings.len()) {
        intersect_binary(cl, postings, depth, lengths)
    } else {
        intersect_merge(cl, postings, depth, lengths)
    }
}

pub fn intersect(
    method: IntersectMethod,
    cl: &CandidateList,
    postings: &[u32],
    depth: u32,
    lengths: &[u32],
) -> CandidateList {
    match method {
        IntersectMethod::Merge => intersect_merge(cl, postings, depth, lengths),
        IntersectMethod::Binary => intersect_binary(cl, postings, depth, lengths),
        IntersectMethod::Hybrid => intersect_hybrid(cl, postings, depth, lengths),
    }
}
