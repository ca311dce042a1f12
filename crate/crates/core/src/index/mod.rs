//! Prefix tree over the left collection and inverted index over the right one.

mod inverted;
mod prefix_tree;

pub use inverted::{build_inverted_index, InvertedIndex};
pub use prefix_tree::{build_prefix_tree, Node, PrefixTree, Subtree, NO_PARENT};
