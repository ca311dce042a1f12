//! Raw tokens to joined pairs: dictionary, ordering, encoding, join.

use crate::domain::{
    rank_encode, sort_objects, Collection, FreqSource, ItemDictionary, ItemId, ItemOrder,
    RawObject, Side,
};
use crate::error::Result;
use crate::join::{join, JoinConfig, JoinOutput};
use crate::scalar::Scalar;

/// Both sides encoded for the engine: item ids are rank positions under the
/// chosen global order.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub dict: ItemDictionary,
    pub left: Collection,
    pub right: Collection,
}

impl Prepared {
    /// Token of an engine item id.
    pub fn token(&self, item: ItemId) -> &str {
        self.dict.token(self.dict.at_rank(item.0))
    }

    pub fn tokens(&self, path: &[ItemId]) -> Vec<String> {
        path.iter().map(|&i| self.token(i).to_owned()).collect()
    }
}

/// `right = None` joins `left` with itself.
pub fn prepare(
    left: &[RawObject],
    right: Option<&[RawObject]>,
    order: ItemOrder,
    source: FreqSource,
) -> Result<Prepared> {
    let right_raw = right.unwrap_or(left);
    let dict = ItemDictionary::build(left, right_raw, order, source)?;
    let l = sort_objects(left, Side::Left, &dict)?;
    let r = match right {
        Some(raw) => sort_objects(raw, Side::Right, &dict)?,
        None => Collection {
            side: Side::Right,
            ..l.clone()
        },
    };
    Ok(Prepared {
        left: rank_encode(&l, &dict),
        right: rank_encode(&r, &dict),
        dict,
    })
}

/// Prepares with the ordering and frequency source of `cfg`, then joins.
pub fn join_raw<T: Scalar>(
    left: &[RawObject],
    right: Option<&[RawObject]>,
    cfg: &JoinConfig<T>,
) -> Result<(Prepared, JoinOutput)> {
    cfg.validate()?;
    let prepared = prepare(left, right, cfg.ordering, cfg.freq_source)?;
    let out = join(&prepared.left, &prepared.right, cfg)?;
    Ok((prepared, out))
}
