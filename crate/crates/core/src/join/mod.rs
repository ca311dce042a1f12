//! Prefix tree traversal algorithms and the bulk / partitioned drivers.

mod bulk;
mod opj;
mod verify;
mod walker;

pub use bulk::join_bulk;
pub use opj::join_opj;
pub use verify::{verify, verify_sorted};

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::costmodel::{CostConstants, Strategy};
use crate::domain::{Collection, ItemId, ItemOrder, FreqSource};
use crate::error::{Error, Result};
use crate::estimate::{estimate_limit, FrequencyTable, LimitEstimate, LimitStrategy};
use crate::intersect::IntersectMethod;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Pretti,
    Limit,
    #[default]
    LimitPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Paradigm {
    Bulk,
    /// Order and partition: per first item, build that subtree, grow the
    /// index, join, drop the subtree.
    #[default]
    Opj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitSpec {
    Explicit(u32),
    Strategy(LimitStrategy),
    Unlimited,
}

impl Default for LimitSpec {
    fn default() -> Self {
        LimitSpec::Strategy(LimitStrategy::Frq)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JoinConfig<T = f64> {
    pub algorithm: Algorithm,
    pub paradigm: Paradigm,
    /// Used when the inputs are prepared; echoed in reports.
    pub ordering: ItemOrder,
    /// Used when the inputs are prepared; echoed in reports.
    pub freq_source: FreqSource,
    pub intersect: IntersectMethod,
    pub limit: LimitSpec,
    /// Count pairs without materializing them.
    pub count_only: bool,
    /// Intersect at every node exactly as written, including the trivial
    /// intersection against the full right collection at root children, and
    /// keep descending below empty candidate lists.
    pub faithful: bool,
    /// Join empty left objects with every right object instead of dropping them.
    pub keep_empty: bool,
    /// Record every intersect/verify decision taken by `LimitPlus`.
    pub trace_decisions: bool,
    pub costs: CostConstants<T>,
    /// Multiplies the verification side of the frequency-based limit test.
    pub frq_threshold_scale: T,
}

impl<T: Scalar> Default for JoinConfig<T> {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::default(),
            paradigm: Paradigm::default(),
            ordering: ItemOrder::default(),
            freq_source: FreqSource::default(),
            intersect: IntersectMethod::default(),
            limit: LimitSpec::default(),
            count_only: false,
            faithful: false,
            keep_empty: false,
            trace_decisions: false,
            costs: CostConstants::default(),
            frq_threshold_scale: T::one(),
        }
    }
}

impl<T: Scalar> JoinConfig<T> {
    pub fn new(algorithm: Algorithm, paradigm: Paradigm, limit: LimitSpec) -> Self {
        Self {
            algorithm,
            paradigm,
            limit,
            ..Self::default()
        }
    }

    /// Decreasing order, left-only frequencies, hybrid intersection, bulk.
    pub fn org_pretti() -> Self {
        Self {
            algorithm: Algorithm::Pretti,
            paradigm: Paradigm::Bulk,
            ordering: ItemOrder::Decreasing,
            freq_source: FreqSource::LeftOnly,
            intersect: IntersectMethod::Hybrid,
            limit: LimitSpec::Unlimited,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithm == Algorithm::Pretti && self.limit != LimitSpec::Unlimited {
            return Err(Error::ConfigConflict(
                "pretti builds the full prefix tree; a limit cannot be set".into(),
            ));
        }
        if self.limit == LimitSpec::Explicit(0) {
            return Err(Error::InvalidLimit);
        }
        if !self.costs.is_valid() {
            return Err(Error::ConfigConflict(
                "cost constants must be finite and >= 0".into(),
            ));
        }
        if !(self.frq_threshold_scale.is_finite() && self.frq_threshold_scale > T::zero()) {
            return Err(Error::ConfigConflict(
                "frq threshold scale must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One `LimitPlus` decision, identified by the item path of the node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub path: Vec<ItemId>,
    pub strategy: Strategy,
    pub cost_a: f64,
    pub cost_b: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct JoinOutput {
    /// `(left oid, right oid)` sorted ascending; `None` in count-only mode.
    pub pairs: Option<Vec<(u32, u32)>>,
    pub n_results: u64,
    pub n_intersections: u64,
    /// Pairs reported without suffix verification.
    pub n_candidates_direct: u64,
    /// Pairs that went through suffix verification.
    pub n_candidates_verified: u64,
    pub build_time: Duration,
    pub join_time: Duration,
    pub peak_logical_bytes: u64,
    /// Depth limit actually used; `None` for an unlimited tree.
    pub limit: Option<u32>,
    /// Right objects added to the inverted index.
    pub right_indexed: u64,
    pub decisions: Vec<DecisionRecord>,
}

/// Runs the configured paradigm on sorted collections.
pub fn join<T: Scalar>(left: &Collection, right: &Collection, cfg: &JoinConfig<T>) -> Result<JoinOutput> {
    match cfg.paradigm {
        Paradigm::Bulk => join_bulk(left, right, cfg),
        Paradigm::Opj => join_opj(left, right, cfg),
    }
}

/// The limit the tree is built with, estimating it when a strategy is given.
pub fn resolve_limit<T: Scalar>(
    left: &Collection,
    right: &Collection,
    cfg: &JoinConfig<T>,
) -> Result<(Option<u32>, Option<LimitEstimate<T>>)> {
    cfg.validate()?;
    match (cfg.algorithm, cfg.limit) {
        (Algorithm::Pretti, _) => Ok((None, None)),
        (_, LimitSpec::Explicit(l)) => Ok((Some(l), None)),
        (Algorithm::Limit, LimitSpec::Unlimited) => Ok((None, None)),
        (Algorithm::LimitPlus, LimitSpec::Unlimited) => {
            Ok((Some(left.stats.max_len.max(1) as u32), None))
        }
        // no non-empty left object, so no tree to limit
        (_, LimitSpec::Strategy(_)) if left.stats.max_len == 0 => Ok((Some(1), None)),
        (_, LimitSpec::Strategy(strategy)) => {
            let freq = FrequencyTable::from_collections(left, right);
            let est = estimate_limit(
                strategy,
                &left.stats,
                &freq,
                &right.stats,
                &cfg.costs,
                cfg.frq_threshold_scale,
            )?;
            Ok((Some(est.value), Some(est)))
        }
    }
}

/// Pairs are unique by construction; only the order needs fixing.
pub(crate) fn finish_pairs(pairs: Option<Vec<(u32, u32)>>) -> Option<Vec<(u32, u32)>> {
    pairs.map(|mut p| {
        p.sort_unstable();
        p
    })
}

pub(crate) fn empty_left_pairs(
    left: &Collection,
    right: &Collection,
    keep_empty: bool,
    out: &mut walker::Sink,
) {
    let empties = left.objects.iter().filter(|o| o.is_empty()).count();
    if empties == 0 {
        return;
    }
    if !keep_empty {
        log::warn!("dropping {empties} empty left object(s); pass keep_empty to join them");
        return;
    }
    for r in left.objects.iter().filter(|o| o.is_empty()) {
        for s in &right.objects {
            out.emit_direct(r.oid, s.oid);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretti_with_limit_conflicts() {
        let cfg = JoinConfig::<f64>::new(Algorithm::Pretti, Paradigm::Bulk, LimitSpec::Explicit(3));
        assert!(matches!(cfg.validate(), Err(Error::ConfigConflict(_))));
    }

    #[test]
    fn zero_limit_rejected() {
        let cfg = JoinConfig::<f64>::new(Algorithm::Limit, Paradigm::Bulk, LimitSpec::Explicit(0));
        assert!(matches!(cfg.validate(), Err(Error::InvalidLimit)));
    }

    #[test]
    fn org_pretti_preset() {
        let cfg = JoinConfig::<f64>::org_pretti();
        assert_eq!(cfg.ordering, ItemOrder::Decreasing);
        assert_eq!(cfg.freq_source, FreqSource::LeftOnly);
        assert_eq!(cfg.paradigm, Paradigm::Bulk);
        cfg.validate().unwrap();
    }
}
