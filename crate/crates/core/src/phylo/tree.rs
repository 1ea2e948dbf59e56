//! Ultrametrics and rooted equidistant trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{normalize, TropicalPoint};
use crate::rational::Rational;

/// Number of unordered leaf pairs, `C(n, 2)`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{i, j}` (`i != j`, 0-based) in lexicographic order
/// `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(i != j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// A dissimilarity map on `n` leaves, stored as its `C(n, 2)` entries in
/// lexicographic pair order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ultrametric {
    n_leaves: usize,
    dissimilarities: Vec<Rational>,
}

impl Ultrametric {
    /// Wraps a dissimilarity vector; the three-point condition is not checked.
    pub fn new(n_leaves: usize, dissimilarities: Vec<Rational>) -> Result<Self> {
        if n_leaves < 2 {
            return Err(Error::InvalidTree(format!("need at least 2 leaves, got {n_leaves}")));
        }
        if dissimilarities.len() != pair_count(n_leaves) {
            return Err(Error::DimensionMismatch {
                expected: pair_count(n_leaves),
                found: dissimilarities.len(),
            });
        }
        Ok(Ultrametric { n_leaves, dissimilarities })
    }

    /// Wraps a dissimilarity vector and rejects it unless it is ultrametric.
    pub fn checked(n_leaves: usize, dissimilarities: Vec<Rational>) -> Result<Self> {
        let u = Ultrametric::new(n_leaves, dissimilarities)?;
        match u.violation() {
            Some((i, j, k)) => Err(Error::NotUltrametric(i + 1, j + 1, k + 1)),
            None => Ok(u),
        }
    }

    /// Recovers the leaf count from a vector of length `C(n, 2)`.
    pub fn from_vector(dissimilarities: Vec<Rational>) -> Result<Self> {
        let len = dissimilarities.len();
        let n = (2..=len + 1)
            .find(|&n| pair_count(n) >= len)
            .filter(|&n| pair_count(n) == len)
            .ok_or_else(|| Error::InvalidTree(format!("{len} is not a binomial coefficient C(n, 2)")))?;
        Ultrametric::new(n, dissimilarities)
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.dissimilarities[pair_index(self.n_leaves, i, j)]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.dissimilarities
    }

    /// First triple `i < j < k` whose maximum is attained only once.
    pub fn violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n_leaves;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (self.get(i, j), self.get(i, k), self.get(j, k));
                    let max = a.max(b).max(c);
                    let hits = [a, b, c].iter().filter(|x| **x == max).count();
                    if hits < 2 {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_ultrametric(&self) -> bool {
        self.violation().is_none()
    }

    /// The negated vector as a point of the torus, normalized to zero sum.
    pub fn to_tree_point(&self) -> Result<TropicalPoint> {
        normalize(&self.dissimilarities.iter().map(|d| -d).collect::<Vec<_>>())
    }

    /// Negation of a torus point, keeping its zero-sum representative.
    pub fn from_tree_point(point: &TropicalPoint) -> Result<Self> {
        Ultrametric::from_vector(point.coords().iter().map(|c| -c).collect())
    }

    /// Adds `c` to every entry; leaf branches grow by `c / 2`.
    pub fn shifted(&self, c: &Rational) -> Self {
        Ultrametric {
            n_leaves: self.n_leaves,
            dissimilarities: self.dissimilarities.iter().map(|d| d + c).collect(),
        }
    }

    /// Relabels leaf `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n_leaves)?;
        let n = self.n_leaves;
        let mut out = vec![Rational::zero(); pair_count(n)];
        for i in 0..n {
            for j in i + 1..n {
                out[pair_index(n, perm[i], perm[j])] = self.get(i, j).clone();
            }
        }
        Ultrametric::new(n, out)
    }

    pub fn total(&self) -> Rational {
        self.dissimilarities.iter().sum()
    }
}

/// Exact three-point test over all triples.
pub fn check_ultrametric(u: &Ultrametric) -> bool {
    u.is_ultrametric()
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let distinct: BTreeSet<usize> = perm.iter().copied().collect();
    if perm.len() != n || distinct.len() != n || distinct.iter().any(|&p| p >= n) {
        return Err(Error::InvalidTree(format!("{perm:?} is not a permutation of {n} leaves")));
    }
    Ok(())
}

/// A node of a rooted tree. `length` is the branch to the parent and is
/// ignored at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub leaf: Option<usize>,
    pub length: Rational,
    pub children: Vec<Node>,
}

impl Node {
    pub fn leaf(label: usize, length: Rational) -> Self {
        Node { leaf: Some(label), length, children: Vec::new() }
    }

    pub fn internal(length: Rational, children: Vec<Node>) -> Self {
        Node { leaf: None, length, children }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn min_leaf(&self) -> usize {
        match self.leaf {
            Some(l) => l,
            None => self.children.iter().map(Node::min_leaf).min().expect("internal node has children"),
        }
    }

    fn canonicalize(&mut self) {
        for c in &mut self.children {
            c.canonicalize();
        }
        self.children.sort_by_key(Node::min_leaf);
    }

    fn leaves_into(&self, out: &mut Vec<usize>) {
        match self.leaf {
            Some(l) => out.push(l),
            None => self.children.iter().for_each(|c| c.leaves_into(out)),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.leaves_into(&mut out);
        out.sort_unstable();
        out
    }
}

/// A rooted equidistant tree with leaves labelled `0..n`.
///
/// Internal branches are strictly positive; branches ending at leaves may be
/// zero or negative. The root has at least two children and every other
/// internal node at least two children as well. Children are kept ordered
/// by their smallest leaf, so structurally equal trees compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct PhyloTree {
    n_leaves: usize,
    root: Node,
    height: Rational,
}

impl PhyloTree {
    pub fn new(mut root: Node) -> Result<Self> {
        root.length = Rational::zero();
        if root.is_leaf() || root.children.len() < 2 {
            return Err(Error::InvalidTree("root needs at least two children".into()));
        }
        let mut depths = BTreeMap::new();
        validate(&root, &Rational::zero(), true, &mut depths)?;
        let n = depths.len();
        if depths.keys().copied().ne(0..n) {
            return Err(Error::InvalidTree(format!(
                "leaf labels must be 1..{n} without repeats, got {:?}",
                depths.keys().map(|l| l + 1).collect::<Vec<_>>()
            )));
        }
        let mut heights = depths.values();
        let height = heights.next().expect("at least two leaves").clone();
        if let Some(other) = heights.find(|h| **h != height) {
            return Err(Error::InvalidTree(format!(
                "not equidistant: root-to-leaf lengths {height} and {other}"
            )));
        }
        root.canonicalize();
        Ok(PhyloTree { n_leaves: n, root, height })
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Common root-to-leaf path length.
    pub fn height(&self) -> &Rational {
        &self.height
    }

    /// Leaf sets of all internal nodes, including the root.
    pub fn clusters(&self) -> BTreeSet<Vec<usize>> {
        fn walk(node: &Node, out: &mut BTreeSet<Vec<usize>>) {
            if !node.is_leaf() {
                out.insert(node.leaves());
                node.children.iter().for_each(|c| walk(c, out));
            }
        }
        let mut out = BTreeSet::new();
        walk(&self.root, &mut out);
        out
    }

    /// Branch lengths ending at each leaf, indexed by leaf.
    pub fn leaf_branches(&self) -> Vec<Rational> {
        fn walk(node: &Node, out: &mut Vec<Rational>) {
            match node.leaf {
                Some(l) => out[l] = node.length.clone(),
                None => node.children.iter().for_each(|c| walk(c, out)),
            }
        }
        let mut out = vec![Rational::zero(); self.n_leaves];
        walk(&self.root, &mut out);
        out
    }

    /// Relabels leaf `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<PhyloTree> {
        check_permutation(perm, self.n_leaves)?;
        fn walk(node: &Node, perm: &[usize]) -> Node {
            Node {
                leaf: node.leaf.map(|l| perm[l]),
                length: node.length.clone(),
                children: node.children.iter().map(|c| walk(c, perm)).collect(),
            }
        }
        PhyloTree::new(walk(&self.root, perm))
    }
}

fn validate(node: &Node, depth: &Rational, is_root: bool, depths: &mut BTreeMap<usize, Rational>) -> Result<()> {
    match (node.leaf, node.children.is_empty()) {
        (Some(l), true) => {
            if depths.insert(l, depth.clone()).is_some() {
                return Err(Error::InvalidTree(format!("leaf {} appears twice", l + 1)));
            }
            Ok(())
        }
        (Some(l), false) => Err(Error::InvalidTree(format!("leaf {} has children", l + 1))),
        (None, true) => Err(Error::InvalidTree("unlabelled leaf".into())),
        (None, false) => {
            if !is_root {
                if node.children.len() < 2 {
                    return Err(Error::InvalidTree("internal node with a single child".into()));
                }
                if !node.length.is_positive() {
                    return Err(Error::InvalidTree(format!(
                        "internal branch length {} is not positive",
                        node.length
                    )));
                }
            }
            for c in &node.children {
                validate(c, &(depth + &c.length), false, depths)?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::newick::to_newick(self, None))
    }
}

/// Path lengths between all leaf pairs.
pub fn tree_to_ultrametric(tree: &PhyloTree) -> Ultrametric {
    let n = tree.n_leaves;
    let mut d = vec![Rational::zero(); pair_count(n)];
    // every pair of leaves in different child subtrees of `node` meets there
    fn walk(node: &Node, depth: &Rational, height: &Rational, n: usize, d: &mut [Rational]) {
        if node.is_leaf() {
            return;
        }
        let span = (height - depth) * Rational::from(2);
        let groups: Vec<Vec<usize>> = node.children.iter().map(Node::leaves).collect();
        for (a, ga) in groups.iter().enumerate() {
            for gb in &groups[a + 1..] {
                for &i in ga {
                    for &j in gb {
                        d[pair_index(n, i, j)] = span.clone();
                    }
                }
            }
        }
        for c in &node.children {
            walk(c, &(depth + &c.length), height, n, d);
        }
    }
    walk(&tree.root, &Rational::zero(), &tree.height, n, &mut d);
    Ultrametric::new(n, d).expect("length C(n, 2)")
}

/// Rebuilds the unique equidistant tree with the given leaf distances.
///
/// Clusters are merged bottom-up; all clusters tied at the current minimum
/// distance `δ` are joined under one node at height `δ/2` above the leaves.
pub fn ultrametric_to_tree(u: &Ultrametric) -> Result<PhyloTree> {
    if let Some((i, j, k)) = u.violation() {
        return Err(Error::NotUltrametric(i + 1, j + 1, k + 1));
    }
    let half = Rational::new(1, 2);
    // (representative leaf, height, node)
    let mut clusters: Vec<(usize, Rational, Node)> =
        (0..u.n_leaves()).map(|l| (l, Rational::zero(), Node::leaf(l, Rational::zero()))).collect();
    while clusters.len() > 1 {
        let mut delta: Option<&Rational> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let d = u.get(clusters[a].0, clusters[b].0);
                if delta.is_none_or(|m| d < m) {
                    delta = Some(d);
                }
            }
        }
        let delta = delta.expect("two clusters").clone();
        let height = &delta * &half;
        // clusters at distance delta from the first cluster that has a partner at delta
        let seed = (0..clusters.len())
            .find(|&a| (0..clusters.len()).any(|b| b != a && *u.get(clusters[a].0, clusters[b].0) == delta))
            .expect("minimum attained");
        let mut group: Vec<usize> = vec![seed];
        group.extend((0..clusters.len()).filter(|&b| b != seed && *u.get(clusters[seed].0, clusters[b].0) == delta));
        group.sort_unstable();
        let mut children = Vec::with_capacity(group.len());
        let mut rep = usize::MAX;
        for &g in group.iter().rev() {
            let (r, h, mut node) = clusters.remove(g);
            node.length = &height - &h;
            rep = rep.min(r);
            children.push(node);
        }
        clusters.push((rep, height, Node::internal(Rational::zero(), children)));
    }
    let (_, _, root) = clusters.pop().expect("one cluster");
    PhyloTree::new(root)
}

/// A rooted triple `ij|k`: `i` and `j` are closer to each other than to `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RootedTriple {
    pub pair: (usize, usize),
    pub outgroup: usize,
}

impl fmt::Display for RootedTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}|{}", self.pair.0 + 1, self.pair.1 + 1, self.outgroup + 1)
    }
}

/// All triples `ij|k` with `d(i,j) < d(i,k) = d(j,k)`.
pub fn ultrametric_triples(u: &Ultrametric) -> BTreeSet<RootedTriple> {
    let n = u.n_leaves();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in (0..n).filter(|&k| k != i && k != j) {
                let (ij, ik, jk) = (u.get(i, j), u.get(i, k), u.get(j, k));
                if ij < ik && ik == jk {
                    out.insert(RootedTriple { pair: (i, j), outgroup: k });
                }
            }
        }
    }
    out
}

pub fn rooted_triples(tree: &PhyloTree) -> BTreeSet<RootedTriple> {
    ultrametric_triples(&tree_to_ultrametric(tree))
}
