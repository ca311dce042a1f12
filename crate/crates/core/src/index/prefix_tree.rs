use crate::domain::{ItemId, SetObject};
use crate::error::{Error, Result};
use crate::memory::{ENTRY_BYTES, NODE_BYTES};

pub const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub item: ItemId,
    /// 1 for children of the virtual root.
    pub depth: u32,
    pub parent: u32,
    /// Indices into the owning [`Subtree`], ascending by item.
    pub children: Vec<u32>,
    /// Objects equal to the node path.
    pub rl_eq: Vec<u32>,
    /// Objects strictly containing the node path; only at depth-limit leaves.
    pub rl_super: Vec<u32>,
    /// Objects stored in this node's subtree.
    pub agg_count: u64,
    /// Σ max(0, |r| − ℓ) over the subtree.
    pub agg_suffix_sum: u64,
    /// Σ max(0, |r| − (ℓ − 1)) over the subtree.
    pub agg_suffix_sum_above: u64,
}

impl Node {
    fn new(item: ItemId, depth: u32, parent: u32) -> Self {
        Self {
            item,
            depth,
            parent,
            children: Vec::new(),
            rl_eq: Vec::new(),
            rl_super: Vec::new(),
            agg_count: 0,
            agg_suffix_sum: 0,
            agg_suffix_sum_above: 0,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn logical_bytes(&self) -> u64 {
        NODE_BYTES
            + ENTRY_BYTES * (self.children.len() + self.rl_eq.len() + self.rl_super.len()) as u64
    }
}

/// The subtree under one child of the virtual root. `nodes[0]` is that child;
/// every node is stored after its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtree {
    nodes: Vec<Node>,
}

impl Subtree {
    pub const ROOT: u32 = 0;

    pub fn item(&self) -> ItemId {
        self.nodes[0].item
    }

    pub fn node(&self, idx: u32) -> &Node {
        &self.nodes[idx as usize]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn logical_bytes(&self) -> u64 {
        self.nodes.iter().map(Node::logical_bytes).sum()
    }

    /// Items on the path from the virtual root to `idx`.
    pub fn path(&self, idx: u32) -> Vec<ItemId> {
        let mut path = Vec::new();
        let mut cur = idx;
        while cur != NO_PARENT {
            let n = self.node(cur);
            path.push(n.item);
            cur = n.parent;
        }
        path.reverse();
        path
    }

    /// Every object stored at or below `idx`, depth first.
    pub fn objects_under(&self, idx: u32, out: &mut Vec<u32>) {
        let mut stack = vec![idx];
        while let Some(i) = stack.pop() {
            let n = self.node(i);
            out.extend_from_slice(&n.rl_eq);
            out.extend_from_slice(&n.rl_super);
            stack.extend(n.children.iter().rev());
        }
    }

    fn child(&self, idx: u32, item: ItemId) -> std::result::Result<u32, usize> {
        let children = &self.nodes[idx as usize].children;
        children
            .binary_search_by_key(&item, |&c| self.nodes[c as usize].item)
            .map(|k| children[k])
    }
}

/// Prefix tree, optionally limited to depth `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTree {
    /// Root children ascending by item.
    subtrees: Vec<Subtree>,
    limit: Option<u32>,
    object_count: usize,
}

impl PrefixTree {
    pub fn limit(&self) -> Option<u32> {
        self.limit
    }

    pub fn object_count(&self) -> usize {
        self.object_count
    }

    pub fn subtrees(&self) -> &[Subtree] {
        &self.subtrees
    }

    pub fn subtree(&self, item: ItemId) -> Option<&Subtree> {
        self.subtrees
            .binary_search_by_key(&item, Subtree::item)
            .ok()
            .map(|k| &self.subtrees[k])
    }

    pub fn node_count(&self) -> usize {
        self.subtrees.iter().map(Subtree::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.subtrees.is_empty()
    }

    pub fn logical_bytes(&self) -> u64 {
        // child links of the virtual root
        ENTRY_BYTES * self.subtrees.len() as u64
            + self.subtrees.iter().map(Subtree::logical_bytes).sum::<u64>()
    }

    /// Drops the subtree under root child `item`, returning the logical bytes
    /// released. Deleting a missing child does nothing.
    pub fn delete_subtree(&mut self, item: ItemId) -> u64 {
        match self.subtrees.binary_search_by_key(&item, Subtree::item) {
            Ok(k) => {
                let st = self.subtrees.remove(k);
                self.object_count -= st.nodes[0].agg_count as usize;
                st.logical_bytes() + ENTRY_BYTES
            }
            Err(_) => 0,
        }
    }
}

/// Inserts every non-empty object along its prefix of length `min(|r|, ℓ)`.
///
/// Objects must have strictly ascending items. An object lands in `rl_eq` of
/// the node whose path equals it, or in `rl_super` of the depth-`ℓ` node when
/// it is longer than the limit. Empty objects are skipped.
pub fn build_prefix_tree<'a, I>(objects: I, limit: Option<u32>) -> Result<PrefixTree>
where
    I: IntoIterator<Item = &'a SetObject>,
{
    if limit == Some(0) {
        return Err(Error::InvalidLimit);
    }
    let cap = limit.unwrap_or(u32::MAX);
    let mut subtrees: Vec<Subtree> = Vec::new();
    let mut object_count = 0usize;

    for r in objects {
        let Some(first) = r.first() else { continue };
        debug_assert!(r.items.windows(2).all(|w| w[0] < w[1]));
        object_count += 1;

        let st_pos = match subtrees.binary_search_by_key(&first, Subtree::item) {
            Ok(k) => k,
            Err(k) => {
                subtrees.insert(
                    k,
                    Subtree {
                        nodes: vec![Node::new(first, 1, NO_PARENT)],
                    },
                );
                k
            }
        };
        let st = &mut subtrees[st_pos];

        let stop = (r.len() as u32).min(cap);
        let mut cur = Subtree::ROOT;
        for d in 1..stop {
            let item = r.items[d as usize];
            cur = match st.child(cur, item) {
                Ok(c) => c,
                Err(k) => {
                    let idx = st.nodes.len() as u32;
                    st.nodes.push(Node::new(item, d + 1, cur));
                    st.nodes[cur as usize].children.insert(k, idx);
                    idx
                }
            };
        }

        let len = r.len() as u32;
        let node = &mut st.nodes[cur as usize];
        if len <= cap {
            node.rl_eq.push(r.oid);
        } else {
            node.rl_super.push(r.oid);
        }
        node.agg_count += 1;
        node.agg_suffix_sum += len.saturating_sub(cap) as u64;
        node.agg_suffix_sum_above += len.saturating_sub(cap.saturating_sub(1)) as u64;
    }

    for st in &mut subtrees {
        for i in (1..st.nodes.len()).rev() {
            let (count, sum, above, parent) = {
                let n = &st.nodes[i];
                (n.agg_count, n.agg_suffix_sum, n.agg_suffix_sum_above, n.parent)
            };
            let p = &mut st.nodes[parent as usize];
            p.agg_count += count;
            p.agg_suffix_sum += sum;
            p.agg_suffix_sum_above += above;
        }
    }

    Ok(PrefixTree {
        subtrees,
        limit,
        object_count,
    })
}
