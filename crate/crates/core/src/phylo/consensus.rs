//! Weighted tropical consensus of equidistant trees.
//!
//! Each tree becomes the point `-d_T` of the torus `R^N / R·1`, `N = C(n, 2)`.
//! The consensus is the classical average of the vertices of the weighted
//! Fermat-Weber set of those points, negated back into an ultrametric. The
//! Fermat-Weber set lies in the (tropically convex) space of trees and its
//! relative interior has a single topology, so the average is a tree.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fermat_weber::{solve_fw, FermatWeberResult};
use crate::point::{DataSet, WeightVector};
use crate::rational::Rational;

use super::tree::{rooted_triples, tree_to_ultrametric, ultrametric_to_tree, PhyloTree, RootedTriple, Ultrametric};

/// Which representative of `u + c·1` is reported. Adding `c` to the
/// ultrametric lengthens every leaf branch by `c / 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Anchor {
    /// Entries of the ultrametric sum to zero.
    ZeroSum,
    /// Entries sum to the weighted mean of the input sums. Consensus of
    /// copies of a tree is then that tree.
    #[default]
    WeightedInputMean,
    /// The shortest leaf branch has this length.
    MinLeafBranch(Rational),
}

#[derive(Clone, Debug)]
pub struct Consensus {
    pub tree: PhyloTree,
    pub ultrametric: Ultrametric,
    pub fermat_weber: FermatWeberResult,
}

pub fn consensus(trees: &[PhyloTree], weights: &WeightVector) -> Result<Consensus> {
    consensus_with_anchor(trees, weights, &Anchor::default())
}

pub fn consensus_with_anchor(trees: &[PhyloTree], weights: &WeightVector, anchor: &Anchor) -> Result<Consensus> {
    let first = trees.first().ok_or(Error::EmptyData)?;
    let n = first.n_leaves();
    if let Some(t) = trees.iter().find(|t| t.n_leaves() != n) {
        return Err(Error::LeafSetMismatch(format!("{} leaves versus {n}", t.n_leaves())));
    }
    if n < 3 {
        return Err(Error::InvalidTree("consensus needs at least 3 leaves".into()));
    }
    weights.check_len(trees.len())?;
    let metrics: Vec<Ultrametric> = trees.iter().map(tree_to_ultrametric).collect();
    let points = metrics.iter().map(Ultrametric::to_tree_point).collect::<Result<Vec<_>>>()?;
    let fermat_weber = solve_fw(&DataSet::new(points)?, weights)?;
    let base = Ultrametric::from_tree_point(fermat_weber.witness())?;
    let shift = match anchor {
        Anchor::ZeroSum => Rational::zero(),
        Anchor::WeightedInputMean => {
            let target: Rational = metrics.iter().zip(weights.as_slice()).map(|(u, w)| w * u.total()).sum();
            (target - base.total()) / Rational::from(base.as_slice().len())
        }
        Anchor::MinLeafBranch(r) => {
            let shortest = unanchored_tree(&base)?.leaf_branches().into_iter().min().expect("leaves");
            (r - shortest) * Rational::from(2)
        }
    };
    let ultrametric = base.shifted(&shift);
    let tree = unanchored_tree(&ultrametric)?;
    Ok(Consensus { tree, ultrametric, fermat_weber })
}

fn unanchored_tree(u: &Ultrametric) -> Result<PhyloTree> {
    ultrametric_to_tree(u).map_err(|e| Error::Solver(format!("consensus point is not a tree: {e}")))
}

/// Rooted-triple agreement between the inputs and a consensus tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ParetoReport {
    /// Triples shared by every input but missing from the consensus.
    pub pareto_violations: Vec<RootedTriple>,
    /// Triples of the consensus found in no input.
    pub co_pareto_violations: Vec<RootedTriple>,
}

impl ParetoReport {
    pub fn is_clean(&self) -> bool {
        self.pareto_violations.is_empty() && self.co_pareto_violations.is_empty()
    }
}

pub fn check_pareto(trees: &[PhyloTree], consensus_tree: &PhyloTree) -> ParetoReport {
    let sets: Vec<BTreeSet<RootedTriple>> = trees.iter().map(rooted_triples).collect();
    let common: BTreeSet<RootedTriple> = match sets.split_first() {
        Some((head, rest)) => head.iter().filter(|t| rest.iter().all(|s| s.contains(t))).copied().collect(),
        None => BTreeSet::new(),
    };
    let any: BTreeSet<RootedTriple> = sets.iter().flatten().copied().collect();
    let found = rooted_triples(consensus_tree);
    ParetoReport {
        pareto_violations: common.difference(&found).copied().collect(),
        co_pareto_violations: found.difference(&any).copied().collect(),
    }
}
