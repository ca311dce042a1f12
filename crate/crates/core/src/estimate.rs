//! Choosing the prefix tree depth limit.

use serde::{Deserialize, Serialize};

use crate::costmodel::{estimate_intersection_size, CostConstants};
use crate::domain::{Collection, DatasetStats, ItemId};
use crate::error::{Error, Result};
use crate::intersect::IntersectMethod;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitStrategy {
    /// Rounded average left object length.
    Avg,
    /// Rounded Σ|r|² / Σ|r|.
    Wavg,
    /// Rounded median left object length.
    Mdn,
    /// Frequency-driven path growth, see [`estimate_limit`].
    Frq,
}

impl LimitStrategy {
    pub const ALL: [LimitStrategy; 4] = [Self::Avg, Self::Wavg, Self::Mdn, Self::Frq];

    pub fn name(self) -> &'static str {
        match self {
            Self::Avg => "avg",
            Self::Wavg => "wavg",
            Self::Mdn => "mdn",
            Self::Frq => "frq",
        }
    }
}

/// One step of the frequency-based path growth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrqStep<T> {
    /// Path length after adding `item`.
    pub k: u32,
    pub item: ItemId,
    /// Estimated fraction of left objects containing the path.
    pub probability: T,
    /// Estimated right candidates containing the path.
    pub candidates: T,
    pub cost_intersection: T,
    /// Already multiplied by the threshold scale.
    pub cost_verification: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate<T = f64> {
    pub strategy: LimitStrategy,
    pub value: u32,
    /// Empty except for [`LimitStrategy::Frq`].
    pub trace: Vec<FrqStep<T>>,
}

/// Object-level item frequencies of both sides, indexed by item id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
}

impl FrequencyTable {
    pub fn from_collections(left: &Collection, right: &Collection) -> Self {
        fn count(c: &Collection) -> Vec<u64> {
            let mut f = Vec::new();
            for o in &c.objects {
                for i in &o.items {
                    if f.len() <= i.index() {
                        f.resize(i.index() + 1, 0);
                    }
                    f[i.index()] += 1;
                }
            }
            f
        }
        Self {
            left: count(left),
            right: count(right),
        }
    }

    pub fn left_freq(&self, item: ItemId) -> u64 {
        self.left.get(item.index()).copied().unwrap_or(0)
    }

    pub fn right_freq(&self, item: ItemId) -> u64 {
        self.right.get(item.index()).copied().unwrap_or(0)
    }
}

fn round_half_up(x: f64) -> u32 {
    (x + 0.5).floor().max(0.0) as u32
}

fn clamp(value: u32, max_len: usize) -> u32 {
    value.min(max_len as u32).max(1)
}

/// Picks the depth limit for `strategy`.
///
/// The length strategies round half-up. `Frq` grows a path from the most
/// frequent left item downward, tracking the fraction of left objects that
/// contain it (independence assumed) and the estimated right candidates
/// surviving each intersection. It stops before the first step whose merge
/// intersection is modeled dearer than verifying the expected survivors by
/// their average remaining lengths; the path length so far is the limit.
/// Every strategy is clamped to `[1, max_len]`.
pub fn estimate_limit<T: Scalar>(
    strategy: LimitStrategy,
    left: &DatasetStats,
    freq: &FrequencyTable,
    right: &DatasetStats,
    model: &CostConstants<T>,
    threshold_scale: T,
) -> Result<LimitEstimate<T>> {
    if left.cardinality == 0 {
        return Err(Error::NoStatistics);
    }
    let (value, trace) = match strategy {
        LimitStrategy::Avg => (round_half_up(left.avg_len), Vec::new()),
        LimitStrategy::Wavg => (round_half_up(left.weighted_avg_len), Vec::new()),
        LimitStrategy::Mdn => (round_half_up(left.median_len), Vec::new()),
        LimitStrategy::Frq => frq(left, freq, right, model, threshold_scale)?,
    };
    Ok(LimitEstimate {
        strategy,
        value: clamp(value, left.max_len),
        trace,
    })
}

fn frq<T: Scalar>(
    left: &DatasetStats,
    freq: &FrequencyTable,
    right: &DatasetStats,
    model: &CostConstants<T>,
    scale: T,
) -> Result<(u32, Vec<FrqStep<T>>)> {
    if right.cardinality == 0 {
        // nothing can be contained in an empty collection
        return Ok((1, Vec::new()));
    }
    let mut items: Vec<ItemId> = (0..freq.left.len() as u32)
        .map(ItemId)
        .filter(|&i| freq.left_freq(i) > 0)
        .collect();
    items.sort_by(|&a, &b| freq.left_freq(b).cmp(&freq.left_freq(a)).then(a.cmp(&b)));

    let n_r = T::of_usize(left.cardinality);
    let n_s = T::of_usize(right.cardinality);
    let avg_r = T::of(left.avg_len);
    let avg_s = T::of(right.avg_len);
    let mut probability = T::one();
    let mut candidates = n_s;
    let mut trace = Vec::new();
    let mut value = left.max_len as u32;

    for (step, &item) in items.iter().take(left.max_len).enumerate() {
        let k = step as u32 + 1;
        let kt = T::of(k);
        let postings = T::of(freq.right_freq(item) as f64);
        let cost_intersection = model.cost_intersection(candidates, postings, IntersectMethod::Merge);

        probability = probability * T::of(freq.left_freq(item) as f64) / n_r;
        candidates = estimate_intersection_size(candidates, postings, n_s)?;
        let n_left = n_r * probability;
        let left_suffix = n_left * (avg_r - kt).max(T::zero());
        let right_suffix = candidates * (avg_s - kt).max(T::zero());
        let cost_verification =
            scale * model.cost_verification(n_left, left_suffix, candidates, right_suffix);

        trace.push(FrqStep {
            k,
            item,
            probability,
            candidates,
            cost_intersection,
            cost_verification,
        });
        if cost_intersection > cost_verification {
            value = k - 1;
            break;
        }
    }
    Ok((value, trace))
}
