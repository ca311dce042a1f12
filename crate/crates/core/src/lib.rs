//! In-memory set containment join.
//!
//! Given two collections of sets `R` and `S`, computes every pair `(r, s)` with
//! `r ⊆ s`. The left collection is indexed by a (possibly depth-limited) prefix
//! tree and the right one by an inverted index; the join walks the tree and
//! intersects postings lists along each path.
//!
//! Three traversal algorithms are provided:
//!
//! * [`Algorithm::Pretti`]: full prefix tree, pure list intersection.
//! * [`Algorithm::Limit`]: tree truncated at depth `ℓ`, longer objects are
//!   checked by a suffix merge scan.
//! * [`Algorithm::LimitPlus`]: as `Limit`, but every node decides through a
//!   cost model whether to keep intersecting or to verify its whole subtree.
//!
//! Each can run under the bulk paradigm (build everything, then join) or the
//! order-and-partition paradigm, which processes objects grouped by their
//! first item and grows the inverted index incrementally.
//!
//! The cost model and the limit estimators are generic over the floating point
//! type; [`CostConstantsF64`] and [`CostConstantsF32`] are the usual aliases.

pub mod costmodel;
pub mod domain;
pub mod error;
pub mod estimate;
pub mod index;
pub mod intersect;
pub mod io;
pub mod join;
pub mod memory;
pub mod oracle;
pub mod pipeline;
pub mod scalar;

pub use costmodel::{CostConstants, Decision, Strategy};
pub use domain::{
    Collection, DatasetStats, FreqSource, ItemDictionary, ItemId, ItemOrder, PartitionMap,
    SetObject, Side,
};
pub use error::{Error, Result};
pub use estimate::{LimitEstimate, LimitStrategy};
pub use intersect::{CandidateList, IntersectMethod};
pub use join::{Algorithm, JoinConfig, JoinOutput, LimitSpec, Paradigm};
pub use scalar::Scalar;

/// Cost constants in double precision, the default for joins.
pub type CostConstantsF64 = CostConstants<f64>;
/// Cost constants in single precision.
pub type CostConstantsF32 = CostConstants<f32>;
/// Join configuration with a double precision cost model.
pub type JoinConfigF64 = JoinConfig<f64>;
/// Limit estimate carrying a double precision probability trace.
pub type LimitEstimateF64 = LimitEstimate<f64>;
