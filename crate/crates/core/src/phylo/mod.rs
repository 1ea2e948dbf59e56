//! Equidistant phylogenetic trees and their tropical consensus.

pub mod consensus;
pub mod newick;
pub mod tree;

pub use consensus::{check_pareto, consensus, consensus_with_anchor, Anchor, Consensus, ParetoReport};
pub use newick::{parse_newick, parse_trees, to_newick, LabelTable, RawNode};
pub use tree::{
    check_ultrametric, pair_count, pair_index, rooted_triples, tree_to_ultrametric, ultrametric_to_tree, Node,
    PhyloTree, RootedTriple, Ultrametric,
};
