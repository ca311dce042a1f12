use crate::domain::{ItemId, SetObject};
use crate::error::{Error, Result};
use crate::memory::ENTRY_BYTES;

/// Per-item postings over right-hand oids, appended in ascending oid order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvertedIndex {
    postings: Vec<Vec<u32>>,
    object_lengths: Vec<u32>,
    indexed_count: u32,
    last_oid: Option<u32>,
    entries: u64,
}

impl InvertedIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pre-sizes the postings table for items `0..domain_size`.
    pub fn with_domain(domain_size: usize) -> Self {
        Self {
            postings: vec![Vec::new(); domain_size],
            ..Self::default()
        }
    }

    pub fn postings(&self, item: ItemId) -> &[u32] {
        self.postings
            .get(item.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// |s| per oid; oids never appended read as 0.
    pub fn object_lengths(&self) -> &[u32] {
        &self.object_lengths
    }

    pub fn indexed_count(&self) -> u32 {
        self.indexed_count
    }

    pub fn contains_oid(&self, oid: u32) -> bool {
        self.postings.iter().any(|p| p.binary_search(&oid).is_ok())
    }

    /// Total number of postings entries.
    pub fn entries(&self) -> u64 {
        self.entries
    }

    pub fn logical_bytes(&self) -> u64 {
        ENTRY_BYTES * (self.entries + self.object_lengths.len() as u64)
    }

    /// Appends a batch of objects. Every oid must exceed all oids already
    /// indexed (and the previous one in the batch); on error nothing is
    /// appended. Returns the logical bytes added.
    pub fn extend<'a, I>(&mut self, partition: I) -> Result<u64>
    where
        I: IntoIterator<Item = &'a SetObject>,
        I::IntoIter: Clone,
    {
        self.extend_as(partition.into_iter().map(|o| (o.oid, o.items.as_slice())))
    }

    /// As [`extend`](Self::extend), with the oid supplied separately from the
    /// items, so objects can be indexed under reassigned sequence numbers.
    pub fn extend_as<'a, I>(&mut self, batch: I) -> Result<u64>
    where
        I: IntoIterator<Item = (u32, &'a [ItemId])>,
        I::IntoIter: Clone,
    {
        let iter = batch.into_iter();
        let mut last = self.last_oid;
        for (oid, _) in iter.clone() {
            if let Some(prev) = last {
                if oid <= prev {
                    return Err(Error::OutOfOrderAppend { oid, last: prev });
                }
            }
            last = Some(oid);
        }

        let before = self.logical_bytes();
        for (oid, items) in iter {
            let pos = oid as usize;
            if self.object_lengths.len() <= pos {
                self.object_lengths.resize(pos + 1, 0);
            }
            self.object_lengths[pos] = items.len() as u32;
            for item in items {
                let i = item.index();
                if self.postings.len() <= i {
                    self.postings.resize(i + 1, Vec::new());
                }
                self.postings[i].push(oid);
            }
            self.entries += items.len() as u64;
            self.indexed_count += 1;
            self.last_oid = Some(oid);
        }
        Ok(self.logical_bytes() - before)
    }
}

pub fn build_inverted_index(objects: &[SetObject]) -> Result<InvertedIndex> {
    let domain = objects
        .iter()
        .flat_map(|o| o.items.iter())
        .map(|i| i.index() + 1)
        .max()
        .unwrap_or(0);
    let mut index = InvertedIndex::with_domain(domain);
    index.extend(objects)?;
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(oid: u32, items: &[u32]) -> SetObject {
        SetObject::new(oid, items.iter().copied().map(ItemId).collect())
    }

    #[test]
    fn empty_collection_has_empty_postings() {
        let idx = build_inverted_index(&[]).unwrap();
        assert_eq!(idx.entries(), 0);
        assert!(idx.postings(ItemId(3)).is_empty());
    }

    #[test]
    fn rejects_out_of_order_append_atomically() {
        let mut idx = build_inverted_index(&[obj(0, &[1]), obj(5, &[1, 2])]).unwrap();
        let snapshot = idx.clone();
        let err = idx.extend(&[obj(6, &[2]), obj(3, &[1])]).unwrap_err();
        assert!(matches!(err, Error::OutOfOrderAppend { oid: 3, last: 6 }));
        assert_eq!(idx, snapshot);
    }

    #[test]
    fn empty_append_is_noop() {
        let mut idx = build_inverted_index(&[obj(0, &[1])]).unwrap();
        let snapshot = idx.clone();
        assert_eq!(idx.extend(&[]).unwrap(), 0);
        assert_eq!(idx, snapshot);
    }

    #[test]
    fn entries_match_total_length() {
        let objs = [obj(0, &[0, 2]), obj(1, &[1]), obj(2, &[0, 1, 2])];
        let idx = build_inverted_index(&objs).unwrap();
        assert_eq!(idx.entries(), 6);
        assert_eq!(idx.postings(ItemId(0)), &[0, 2]);
        assert_eq!(idx.object_lengths(), &[2, 1, 3]);
    }
}
