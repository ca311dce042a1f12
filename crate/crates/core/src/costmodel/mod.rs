//! Cost functions for the intersect-or-verify decision taken at every prefix
//! tree node, plus the independence-based size estimates they rely on.
//!
//! All quantities are in abstract cost units; calibrated constants are in
//! nanoseconds per unit of work.

mod calibrate;
mod fit;

pub use calibrate::{calibrate, fit_measurements, measure, Calibration, CalibrationGrid, Measurements};
pub use fit::{least_squares, LinearFit};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intersect::IntersectMethod;
use crate::scalar::Scalar;

/// Linear cost model constants, all finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostConstants<T> {
    /// Merge intersection, per candidate.
    pub merge_cl: T,
    /// Merge intersection, per postings entry.
    pub merge_postings: T,
    pub merge_fixed: T,
    /// Binary search intersection, per candidate and log2 of postings length.
    pub binary_probe: T,
    pub binary_fixed: T,
    /// Direct output, per reported pair.
    pub direct_pair: T,
    pub direct_fixed: T,
    /// Verification, per right object and unit of left suffix length.
    pub verify_left_suffix: T,
    /// Verification, per left object and unit of right suffix length.
    pub verify_right_suffix: T,
    pub verify_fixed: T,
}

impl<T: Scalar> Default for CostConstants<T> {
    /// Unit-cost model.
    fn default() -> Self {
        let (one, zero) = (T::one(), T::zero());
        Self {
            merge_cl: one,
            merge_postings: one,
            merge_fixed: zero,
            binary_probe: one,
            binary_fixed: zero,
            direct_pair: one,
            direct_fixed: zero,
            verify_left_suffix: one,
            verify_right_suffix: one,
            verify_fixed: zero,
        }
    }
}

const KEYS: [&str; 10] = [
    "merge_cl",
    "merge_postings",
    "merge_fixed",
    "binary_probe",
    "binary_fixed",
    "direct_pair",
    "direct_fixed",
    "verify_left_suffix",
    "verify_right_suffix",
    "verify_fixed",
];

impl<T: Scalar> CostConstants<T> {
    fn values(&self) -> [T; 10] {
        [
            self.merge_cl,
            self.merge_postings,
            self.merge_fixed,
            self.binary_probe,
            self.binary_fixed,
            self.direct_pair,
            self.direct_fixed,
            self.verify_left_suffix,
            self.verify_right_suffix,
            self.verify_fixed,
        ]
    }

    fn slot(&mut self, key: &str) -> Option<&mut T> {
        Some(match key {
            "merge_cl" => &mut self.merge_cl,
            "merge_postings" => &mut self.merge_postings,
            "merge_fixed" => &mut self.merge_fixed,
            "binary_probe" => &mut self.binary_probe,
            "binary_fixed" => &mut self.binary_fixed,
            "direct_pair" => &mut self.direct_pair,
            "direct_fixed" => &mut self.direct_fixed,
            "verify_left_suffix" => &mut self.verify_left_suffix,
            "verify_right_suffix" => &mut self.verify_right_suffix,
            "verify_fixed" => &mut self.verify_fixed,
            _ => return None,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.values()
            .iter()
            .all(|v| v.is_finite() && *v >= T::zero())
    }

    /// Multiplies every constant by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        let mut out = *self;
        for key in KEYS {
            let v = out.slot(key).expect("known key");
            *v = *v * factor;
        }
        out
    }

    /// Flat `name = value` document, one constant per line.
    pub fn to_kv_string(&self) -> String {
        KEYS.iter()
            .zip(self.values())
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Parses the format written by [`to_kv_string`](Self::to_kv_string).
    /// Missing keys keep their unit-cost default; `#` starts a comment.
    pub fn parse_kv(text: &str) -> std::result::Result<Self, String> {
        let mut out = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `name = value`", n + 1))?;
            let slot = out
                .slot(k.trim())
                .ok_or_else(|| format!("line {}: unknown constant {:?}", n + 1, k.trim()))?;
            let parsed: f64 = v
                .trim()
                .parse()
                .map_err(|e| format!("line {}: {e}", n + 1))?;
            *slot = T::of(parsed);
        }
        if !out.is_valid() {
            return Err("constants must be finite and >= 0".into());
        }
        Ok(out)
    }

    /// Modeled cost of `CL ∩ postings`.
    pub fn cost_intersection(&self, n_cl: T, n_postings: T, method: IntersectMethod) -> T {
        let merge = self.merge_cl * n_cl + self.merge_postings * n_postings + self.merge_fixed;
        let binary = self.binary_probe * n_cl * (n_postings + T::one()).log2() + self.binary_fixed;
        match method {
            IntersectMethod::Merge => merge,
            IntersectMethod::Binary => binary,
            IntersectMethod::Hybrid => merge.min(binary),
        }
    }

    /// Modeled cost of reporting `n_clp × n_rl_eq` pairs without checks.
    pub fn cost_direct(&self, n_clp: T, n_rl_eq: T) -> T {
        self.direct_pair * n_clp * n_rl_eq + self.direct_fixed
    }

    /// Modeled cost of suffix-verifying `n_left × n_right` pairs.
    pub fn cost_verification(&self, n_left: T, left_suffix_sum: T, n_right: T, right_suffix_sum: T) -> T {
        self.verify_left_suffix * n_right * left_suffix_sum
            + self.verify_right_suffix * n_left * right_suffix_sum
            + self.verify_fixed
    }

    /// Intersect-versus-verify decision at one node.
    ///
    /// Strategy A intersects at the node, reports `rl_eq` directly and then
    /// verifies the rest of the subtree against the estimated result. Strategy
    /// B verifies the whole subtree against the current candidates, one level
    /// shallower. `trivial_intersection` marks a candidate list that is the
    /// whole indexed collection, where the intersection is free. Ties go to A.
    pub fn continue_as_limit(
        &self,
        node: &NodeAggregates,
        cl: &ClSummary,
        postings_len: usize,
        n_s: usize,
        method: IntersectMethod,
        trivial_intersection: bool,
    ) -> Result<Decision<T>> {
        let n_cl = T::of(cl.len as f64);
        let n_post = T::of_usize(postings_len);
        let n_s = T::of_usize(n_s);
        let est_len = estimate_intersection_size(n_cl, n_post, n_s)?;
        let est_suffix = estimate_suffix_sum(T::of(cl.suffix_sum as f64), n_post, n_s)?;

        let intersection = if trivial_intersection {
            T::zero()
        } else {
            self.cost_intersection(n_cl, n_post, method)
        };
        let rl_eq = T::of(node.rl_eq as f64);
        let rest = T::of((node.count - node.rl_eq) as f64);
        let cost_a = intersection
            + self.cost_direct(est_len, rl_eq)
            + self.cost_verification(rest, T::of(node.suffix_sum as f64), est_len, est_suffix);
        let cost_b = self.cost_verification(
            T::of(node.count as f64),
            T::of(node.suffix_sum_above as f64),
            n_cl,
            T::of(cl.suffix_sum_above as f64),
        );
        let strategy = if cost_a <= cost_b {
            Strategy::Intersect
        } else {
            Strategy::Verify
        };
        Ok(Decision {
            strategy,
            cost_a,
            cost_b,
        })
    }
}

impl<T: Scalar> fmt::Display for CostConstants<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_kv_string())
    }
}

impl<T: Scalar> FromStr for CostConstants<T> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::parse_kv(s)
    }
}

/// |CL ∩ postings| under item independence: `n_cl · n_postings / n_s`.
pub fn estimate_intersection_size<T: Scalar>(n_cl: T, n_postings: T, n_s: T) -> Result<T> {
    if n_s <= T::zero() {
        return Err(Error::EmptyRight);
    }
    Ok(n_cl * n_postings / n_s)
}

/// Suffix sum of the intersection, shrunk by the same ratio as its length.
pub fn estimate_suffix_sum<T: Scalar>(cl_suffix_sum: T, n_postings: T, n_s: T) -> Result<T> {
    if n_s <= T::zero() {
        return Err(Error::EmptyRight);
    }
    Ok(cl_suffix_sum * n_postings / n_s)
}

/// Subtree statistics of a prefix tree node, at the tree's limit `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeAggregates {
    pub count: u64,
    pub rl_eq: u64,
    /// Σ max(0, |r| − ℓ).
    pub suffix_sum: u64,
    /// Σ max(0, |r| − (ℓ − 1)).
    pub suffix_sum_above: u64,
}

impl From<&crate::index::Node> for NodeAggregates {
    fn from(n: &crate::index::Node) -> Self {
        Self {
            count: n.agg_count,
            rl_eq: n.rl_eq.len() as u64,
            suffix_sum: n.agg_suffix_sum,
            suffix_sum_above: n.agg_suffix_sum_above,
        }
    }
}

/// Candidate list statistics at depth `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClSummary {
    pub len: u64,
    /// Σ max(0, |s| − ℓ).
    pub suffix_sum: u64,
    /// Σ max(0, |s| − (ℓ − 1)).
    pub suffix_sum_above: u64,
}

impl From<&crate::intersect::CandidateList> for ClSummary {
    fn from(cl: &crate::intersect::CandidateList) -> Self {
        Self {
            len: cl.len() as u64,
            suffix_sum: cl.suffix_sum,
            suffix_sum_above: cl.suffix_sum_above(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Intersect at the node and keep descending (strategy A).
    Intersect,
    /// Stop and verify the whole subtree (strategy B).
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision<T> {
    pub strategy: Strategy,
    pub cost_a: T,
    pub cost_b: T,
}
