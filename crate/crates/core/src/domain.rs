//! Dictionary encoding, global item ordering, and collection level statistics.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense item identifier assigned by an [`ItemDictionary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ItemId(pub u32);

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Direction of the global item ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ItemOrder {
    /// Least frequent item first.
    #[default]
    Increasing,
    /// Most frequent item first.
    Decreasing,
}

/// Which collections contribute to the item frequencies used for ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FreqSource {
    LeftOnly,
    #[default]
    Union,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A raw object as read from input: arbitrary tokens, possibly repeated.
pub type RawObject = Vec<String>;

/// Token ↔ id mapping plus per-item object frequencies and the global rank.
#[derive(Debug, Clone)]
pub struct ItemDictionary {
    token_to_id: HashMap<String, ItemId>,
    id_to_token: Vec<String>,
    pub freq_left: Vec<u32>,
    pub freq_right: Vec<u32>,
    pub freq_union: Vec<u32>,
    /// `rank[k]` is the item at rank position `k`.
    rank: Vec<ItemId>,
    /// Inverse of `rank`.
    rank_of: Vec<u32>,
    order: ItemOrder,
    source: FreqSource,
}

impl ItemDictionary {
    /// Builds the dictionary over both collections.
    ///
    /// Ids are assigned in first-seen order (left collection first, tokens in
    /// line order). Frequencies count objects, not occurrences. Items with equal
    /// frequency are ranked by ascending id in both directions.
    pub fn build(
        left: &[RawObject],
        right: &[RawObject],
        order: ItemOrder,
        source: FreqSource,
    ) -> Result<Self> {
        let mut token_to_id: HashMap<String, ItemId> = HashMap::new();
        let mut id_to_token = Vec::new();
        let mut freq_left = Vec::new();
        let mut freq_right = Vec::new();
        // last object that bumped each item, to count objects rather than occurrences
        let mut last_seen: Vec<usize> = Vec::new();
        let mut stamp = 0usize;

        for (side, objects) in [(Side::Left, left), (Side::Right, right)] {
            for obj in objects {
                stamp += 1;
                for tok in obj {
                    let id = match token_to_id.get(tok.as_str()) {
                        Some(&id) => id,
                        None => {
                            let id = ItemId(id_to_token.len() as u32);
                            token_to_id.insert(tok.clone(), id);
                            id_to_token.push(tok.clone());
                            freq_left.push(0);
                            freq_right.push(0);
                            last_seen.push(0);
                            id
                        }
                    };
                    if last_seen[id.index()] == stamp {
                        continue;
                    }
                    last_seen[id.index()] = stamp;
                    match side {
                        Side::Left => freq_left[id.index()] += 1,
                        Side::Right => freq_right[id.index()] += 1,
                    }
                }
            }
        }

        if id_to_token.is_empty() {
            return Err(Error::EmptyDomain);
        }

        let freq_union: Vec<u32> = freq_left
            .iter()
            .zip(&freq_right)
            .map(|(l, r)| l + r)
            .collect();
        let key: &[u32] = match source {
            FreqSource::LeftOnly => &freq_left,
            FreqSource::Union => &freq_union,
        };
        let mut rank: Vec<ItemId> = (0..id_to_token.len() as u32).map(ItemId).collect();
        match order {
            ItemOrder::Increasing => rank.sort_by_key(|id| (key[id.index()], id.0)),
            ItemOrder::Decreasing => {
                rank.sort_by_key(|id| (std::cmp::Reverse(key[id.index()]), id.0))
            }
        }
        let mut rank_of = vec![0u32; rank.len()];
        for (pos, id) in rank.iter().enumerate() {
            rank_of[id.index()] = pos as u32;
        }

        Ok(Self {
            token_to_id,
            id_to_token,
            freq_left,
            freq_right,
            freq_union,
            rank,
            rank_of,
            order,
            source,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn id(&self, token: &str) -> Option<ItemId> {
        self.token_to_id.get(token).copied()
    }

    pub fn token(&self, id: ItemId) -> &str {
        &self.id_to_token[id.index()]
    }

    /// Items in rank order.
    pub fn rank(&self) -> &[ItemId] {
        &self.rank
    }

    pub fn rank_of(&self, id: ItemId) -> u32 {
        self.rank_of[id.index()]
    }

    /// Item at a given rank position.
    pub fn at_rank(&self, pos: u32) -> ItemId {
        self.rank[pos as usize]
    }

    pub fn order(&self) -> ItemOrder {
        self.order
    }

    pub fn source(&self) -> FreqSource {
        self.source
    }
}

/// An identified set, items strictly ascending in rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetObject {
    pub oid: u32,
    pub items: Vec<ItemId>,
}

impl SetObject {
    pub fn new(oid: u32, items: Vec<ItemId>) -> Self {
        Self { oid, items }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn first(&self) -> Option<ItemId> {
        self.items.first().copied()
    }
}

/// Length statistics of a collection.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DatasetStats {
    pub cardinality: usize,
    pub domain_size: usize,
    pub avg_len: f64,
    /// Σ|o|² / Σ|o|.
    pub weighted_avg_len: f64,
    pub median_len: f64,
    pub max_len: usize,
}

#[derive(Debug, Clone)]
pub struct Collection {
    pub side: Side,
    pub objects: Vec<SetObject>,
    pub stats: DatasetStats,
}

impl Collection {
    /// Wraps already sorted objects; oids must equal positions.
    pub fn from_objects(side: Side, objects: Vec<SetObject>) -> Self {
        debug_assert!(objects
            .iter()
            .enumerate()
            .all(|(i, o)| o.oid as usize == i));
        let stats = collection_stats(&objects);
        Self {
            side,
            objects,
            stats,
        }
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Decodes every object back into tokens.
    pub fn to_raw(&self, dict: &ItemDictionary) -> Vec<RawObject> {
        self.objects
            .iter()
            .map(|o| o.items.iter().map(|&i| dict.token(i).to_owned()).collect())
            .collect()
    }
}

/// Encodes, deduplicates and sorts every object by ascending rank.
pub fn sort_objects(raw: &[RawObject], side: Side, dict: &ItemDictionary) -> Result<Collection> {
    let mut objects = Vec::with_capacity(raw.len());
    for (pos, tokens) in raw.iter().enumerate() {
        let mut items = tokens
            .iter()
            .map(|t| dict.id(t).ok_or_else(|| Error::UnknownItem(t.clone())))
            .collect::<Result<Vec<_>>>()?;
        items.sort_unstable_by_key(|&id| dict.rank_of(id));
        items.dedup();
        objects.push(SetObject::new(pos as u32, items));
    }
    Ok(Collection::from_objects(side, objects))
}

/// Relabels every item by its rank position, so that ascending ids are
/// ascending ranks. The join and index layers operate on this form.
pub fn rank_encode(collection: &Collection, dict: &ItemDictionary) -> Collection {
    let objects = collection
        .objects
        .iter()
        .map(|o| {
            SetObject::new(
                o.oid,
                o.items.iter().map(|&i| ItemId(dict.rank_of(i))).collect(),
            )
        })
        .collect();
    Collection {
        side: collection.side,
        objects,
        stats: collection.stats,
    }
}

/// Objects grouped by their first item, in original order within a group.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionMap {
    pub partitions: BTreeMap<ItemId, Vec<u32>>,
    /// Oids of empty objects, which have no first item.
    pub empty: Vec<u32>,
}

impl PartitionMap {
    pub fn get(&self, item: ItemId) -> &[u32] {
        self.partitions.get(&item).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of objects across all partitions (empty objects excluded).
    pub fn covered(&self) -> usize {
        self.partitions.values().map(Vec::len).sum()
    }
}

pub fn partition_by_first_item(objects: &[SetObject]) -> PartitionMap {
    let mut map = PartitionMap::default();
    for o in objects {
        match o.first() {
            Some(first) => map.partitions.entry(first).or_default().push(o.oid),
            None => map.empty.push(o.oid),
        }
    }
    map
}

/// Cardinality, distinct items, and length statistics. All zero when empty.
pub fn collection_stats(objects: &[SetObject]) -> DatasetStats {
    if objects.is_empty() {
        return DatasetStats::default();
    }
    let mut lens: Vec<usize> = Vec::with_capacity(objects.len());
    let mut sum = 0u64;
    let mut sum_sq = 0u64;
    let mut max_len = 0usize;
    let mut max_item = 0usize;
    for o in objects {
        let n = o.len();
        lens.push(n);
        sum += n as u64;
        sum_sq += (n as u64) * (n as u64);
        max_len = max_len.max(n);
        if let Some(m) = o.items.iter().map(|i| i.index()).max() {
            max_item = max_item.max(m + 1);
        }
    }
    let mut seen = vec![false; max_item];
    for o in objects {
        for i in &o.items {
            seen[i.index()] = true;
        }
    }
    let domain_size = seen.iter().filter(|&&b| b).count();

    let n = lens.len();
    let mid = n / 2;
    let (_, &mut upper, _) = lens.select_nth_unstable(mid);
    let median_len = if n % 2 == 1 {
        upper as f64
    } else {
        let lower = *lens[..mid].iter().max().expect("n >= 2");
        (lower + upper) as f64 / 2.0
    };

    DatasetStats {
        cardinality: n,
        domain_size,
        avg_len: sum as f64 / n as f64,
        weighted_avg_len: if sum == 0 {
            0.0
        } else {
            sum_sq as f64 / sum as f64
        },
        median_len,
        max_len,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(lines: &[&str]) -> Vec<RawObject> {
        lines
            .iter()
            .map(|l| l.split_whitespace().map(str::to_owned).collect())
            .collect()
    }

    #[test]
    fn singleton_domain() {
        for order in [ItemOrder::Increasing, ItemOrder::Decreasing] {
            let d = ItemDictionary::build(&raw(&["X"]), &[], order, FreqSource::Union).unwrap();
            assert_eq!(d.rank(), &[d.id("X").unwrap()]);
        }
    }

    #[test]
    fn empty_domain_is_error() {
        let err = ItemDictionary::build(&raw(&[""]), &raw(&[]), ItemOrder::Increasing, FreqSource::Union);
        assert!(matches!(err, Err(Error::EmptyDomain)));
    }

    #[test]
    fn ties_break_by_ascending_id_both_directions() {
        let left = raw(&["p q"]);
        for order in [ItemOrder::Increasing, ItemOrder::Decreasing] {
            let d = ItemDictionary::build(&left, &[], order, FreqSource::Union).unwrap();
            assert_eq!(d.rank(), &[ItemId(0), ItemId(1)]);
        }
    }

    #[test]
    fn frequency_counts_objects_not_occurrences() {
        let d = ItemDictionary::build(&raw(&["a a a", "a"]), &raw(&["a"]), ItemOrder::Decreasing, FreqSource::Union)
            .unwrap();
        let a = d.id("a").unwrap();
        assert_eq!(d.freq_left[a.index()], 2);
        assert_eq!(d.freq_right[a.index()], 1);
        assert_eq!(d.freq_union[a.index()], 3);
    }

    #[test]
    fn left_only_source_ignores_right() {
        let d = ItemDictionary::build(
            &raw(&["a b", "b"]),
            &raw(&["a", "a", "a"]),
            ItemOrder::Decreasing,
            FreqSource::LeftOnly,
        )
        .unwrap();
        assert_eq!(d.token(d.rank()[0]), "b");
        let u = ItemDictionary::build(
            &raw(&["a b", "b"]),
            &raw(&["a", "a", "a"]),
            ItemOrder::Decreasing,
            FreqSource::Union,
        )
        .unwrap();
        assert_eq!(u.token(u.rank()[0]), "a");
    }

    #[test]
    fn unknown_item_rejected() {
        let d = ItemDictionary::build(&raw(&["a"]), &[], ItemOrder::Increasing, FreqSource::Union).unwrap();
        let err = sort_objects(&raw(&["a z"]), Side::Left, &d).unwrap_err();
        assert!(matches!(err, Error::UnknownItem(t) if t == "z"));
    }

    #[test]
    fn empty_collection_stats_are_zero() {
        assert_eq!(collection_stats(&[]), DatasetStats::default());
        assert!(partition_by_first_item(&[]).partitions.is_empty());
    }

    #[test]
    fn even_median_averages_middle_pair() {
        let objs: Vec<SetObject> = [1usize, 2, 4, 7]
            .iter()
            .enumerate()
            .map(|(i, &n)| SetObject::new(i as u32, (0..n as u32).map(ItemId).collect()))
            .collect();
        let s = collection_stats(&objs);
        assert_eq!(s.median_len, 3.0);
        assert_eq!(s.max_len, 7);
        assert_eq!(s.domain_size, 7);
    }

    #[test]
    fn empty_objects_reported_separately() {
        let objs = vec![
            SetObject::new(0, vec![]),
            SetObject::new(1, vec![ItemId(2), ItemId(5)]),
            SetObject::new(2, vec![ItemId(2)]),
        ];
        let p = partition_by_first_item(&objs);
        assert_eq!(p.empty, vec![0]);
        assert_eq!(p.get(ItemId(2)), &[1, 2]);
        assert_eq!(p.covered(), 2);
    }
}
