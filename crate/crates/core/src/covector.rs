//! Covector graphs and covector cells of the tropical hyperplane arrangement
//! centred at a data set.
//!
//! The covector graph of `x` is the bipartite graph on data indices (left) and
//! coordinates (right) with an edge `(i, j)` whenever `j` attains
//! `max_k (x_k - v_ik)`. Points sharing a covector graph form a covector cell;
//! the bounded cells tile the min-tropical convex hull of the data.
//!
//! Indices are 0-based in the API and 1-based in the JSON edge-list format.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::DifferenceBounds;
use crate::error::{Error, Result};
use crate::point::{DataSet, TropicalPoint};
use crate::rational::Rational;
use crate::signomial::TropicalLinearForm;

/// A subgraph of the complete bipartite graph `K_{m,n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CovectorGraph {
    m: usize,
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CovectorGraph {
    pub fn new(m: usize, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= m || j >= n) {
            return Err(Error::InvalidGraph(format!(
                "edge ({}, {}) outside K_{{{m},{n}}}",
                i + 1,
                j + 1
            )));
        }
        Ok(CovectorGraph { m, n, edges })
    }

    /// Builds a graph from 1-based edge pairs.
    pub fn from_one_based(m: usize, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(Error::InvalidGraph("edge indices are 1-based".into()));
        }
        CovectorGraph::new(m, n, edges.iter().map(|&(i, j)| (i - 1, j - 1)))
    }

    pub fn complete(m: usize, n: usize) -> Self {
        CovectorGraph {
            m,
            n,
            edges: (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn right_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((i, 0)..(i + 1, 0)).map(|&(_, j)| j)
    }

    pub fn left_degree(&self, i: usize) -> usize {
        self.right_neighbors(i).count()
    }

    pub fn right_degree(&self, j: usize) -> usize {
        self.edges.iter().filter(|&&(_, k)| k == j).count()
    }

    pub fn is_subgraph_of(&self, other: &CovectorGraph) -> bool {
        self.m == other.m && self.n == other.n && self.edges.is_subset(&other.edges)
    }

    pub fn union(&self, other: &CovectorGraph) -> CovectorGraph {
        CovectorGraph {
            m: self.m,
            n: self.n,
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    /// Every node, left and right, has an incident edge.
    pub fn is_spanning(&self) -> bool {
        (0..self.m).all(|i| self.left_degree(i) > 0) && (0..self.n).all(|j| self.right_degree(j) > 0)
    }

    /// Component id per node; left node `i` is node `i`, right node `j` is `m + j`.
    pub fn components(&self) -> Vec<usize> {
        let total = self.m + self.n;
        let mut adj = vec![Vec::new(); total];
        for &(i, j) in &self.edges {
            adj[i].push(self.m + j);
            adj[self.m + j].push(i);
        }
        let mut comp = vec![usize::MAX; total];
        let mut next = 0;
        for start in 0..total {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    fn check_left_covered(&self) -> Result<()> {
        match (0..self.m).find(|&i| self.left_degree(i) == 0) {
            Some(i) => Err(Error::InvalidGraph(format!("left node {} has no edge", i + 1))),
            None => Ok(()),
        }
    }

    /// 1-based edge list.
    pub fn one_based_edges(&self) -> Vec<[usize; 2]> {
        self.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect()
    }
}

impl fmt::Debug for CovectorGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, j)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", i + 1, j + 1)?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    m: usize,
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for CovectorGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson { m: self.m, n: self.n, edges: self.one_based_edges() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CovectorGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let g = GraphJson::deserialize(deserializer)?;
        let pairs: Vec<(usize, usize)> = g.edges.iter().map(|e| (e[0], e[1])).collect();
        CovectorGraph::from_one_based(g.m, g.n, &pairs).map_err(serde::de::Error::custom)
    }
}

/// `x_plus - x_minus <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DifferenceConstraint {
    pub plus: usize,
    pub minus: usize,
    pub bound: Rational,
}

/// The closed polyhedron `{ x : covector(x) ⊇ graph }` inside the zero-sum hyperplane.
#[derive(Clone, Debug)]
pub struct CovectorCell {
    graph: CovectorGraph,
    relint_graph: CovectorGraph,
    inequalities: Vec<DifferenceConstraint>,
    equalities: Vec<DifferenceConstraint>,
    bounded: bool,
    dim: usize,
    bounds: DifferenceBounds,
}

impl CovectorCell {
    /// The graph the cell was built from.
    pub fn graph(&self) -> &CovectorGraph {
        &self.graph
    }

    /// Covector graph of the cell's relative interior.
    pub fn relint_graph(&self) -> &CovectorGraph {
        &self.relint_graph
    }

    /// True iff the defining graph is the covector graph of the cell itself.
    pub fn is_exact(&self) -> bool {
        self.graph == self.relint_graph
    }

    /// Constraints `x_k - x_j <= v_ik - v_ij` for edges `(i, j)` and `k != j`.
    pub fn inequalities(&self) -> &[DifferenceConstraint] {
        &self.inequalities
    }

    /// The inequalities that hold with equality on the whole cell.
    pub fn equalities(&self) -> &[DifferenceConstraint] {
        &self.equalities
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Supremum of `x_k - x_j` over the cell, `None` if unbounded.
    pub fn max_difference(&self, j: usize, k: usize) -> Option<&Rational> {
        self.bounds.sup(j, k)
    }

    pub fn contains(&self, x: &TropicalPoint) -> bool {
        let n = self.bounds.dim_ambient();
        x.dim() == n
            && (0..n).all(|j| {
                (0..n).all(|k| match self.bounds.sup(j, k) {
                    Some(s) => &x.coords()[k] - &x.coords()[j] <= *s,
                    None => true,
                })
            })
    }

    pub fn vertices(&self) -> Result<Vec<TropicalPoint>> {
        if !self.bounded {
            return Err(Error::UnboundedCell);
        }
        Ok(self.bounds.vertices())
    }

    /// Mean of the vertices; lies in the relative interior.
    pub fn barycenter(&self) -> Result<TropicalPoint> {
        TropicalPoint::mean(&self.vertices()?)
    }

    pub(crate) fn from_bounds(data: &DataSet, graph: CovectorGraph, bounds: DifferenceBounds) -> Self {
        let m = data.m();
        let n = data.n();
        let mut inequalities = Vec::new();
        for &(i, j) in graph.edges() {
            for k in (0..n).filter(|&k| k != j) {
                inequalities.push(DifferenceConstraint {
                    plus: k,
                    minus: j,
                    bound: data.coord(i, k) - data.coord(i, j),
                });
            }
        }
        let equalities = inequalities
            .iter()
            .filter(|c| bounds.sup(c.plus, c.minus).is_some_and(|s| (-s) == c.bound))
            .cloned()
            .collect();
        let relint_graph = exact_graph(data, &bounds);
        debug_assert!(graph.is_subgraph_of(&relint_graph) || graph.m() != m);
        CovectorCell {
            bounded: bounds.is_bounded(),
            dim: bounds.dim(),
            graph,
            relint_graph,
            inequalities,
            equalities,
            bounds,
        }
    }
}

/// Edges tight on the whole polyhedron described by `bounds`.
fn exact_graph(data: &DataSet, bounds: &DifferenceBounds) -> CovectorGraph {
    let (m, n) = (data.m(), data.n());
    let edges = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| {
        (0..n).all(|k| {
            k == j
                || bounds
                    .sup(j, k)
                    .is_some_and(|s| *s <= data.coord(i, k) - data.coord(i, j))
        })
    });
    CovectorGraph::new(m, n, edges).expect("indices in range")
}

fn graph_bounds(data: &DataSet, graph: &CovectorGraph) -> Option<DifferenceBounds> {
    let n = data.n();
    let mut bounds = DifferenceBounds::unconstrained(n);
    for &(i, j) in graph.edges() {
        for k in (0..n).filter(|&k| k != j) {
            bounds.tighten(j, k, data.coord(i, k) - data.coord(i, j));
        }
    }
    bounds.close().then_some(bounds)
}

fn check_graph_shape(data: &DataSet, graph: &CovectorGraph) -> Result<()> {
    if graph.m() != data.m() {
        return Err(Error::DimensionMismatch { expected: data.m(), found: graph.m() });
    }
    if graph.n() != data.n() {
        return Err(Error::DimensionMismatch { expected: data.n(), found: graph.n() });
    }
    Ok(())
}

/// Covector graph of `x` with respect to `data`.
pub fn covector_at(data: &DataSet, x: &TropicalPoint) -> Result<CovectorGraph> {
    x.check_dim(data.n())?;
    let mut edges = Vec::new();
    for (i, v) in data.points().iter().enumerate() {
        let form = TropicalLinearForm::centered_at(v.clone());
        edges.extend(form.argmax(x)?.into_iter().map(|j| (i, j)));
    }
    CovectorGraph::new(data.m(), data.n(), edges)
}

/// Materializes the closed cell of `graph`; `None` if no point realizes it.
pub fn cell_from_graph(data: &DataSet, graph: &CovectorGraph) -> Result<Option<CovectorCell>> {
    check_graph_shape(data, graph)?;
    graph.check_left_covered()?;
    Ok(graph_bounds(data, graph).map(|b| CovectorCell::from_bounds(data, graph.clone(), b)))
}

pub fn cell_vertices(cell: &CovectorCell) -> Result<Vec<TropicalPoint>> {
    cell.vertices()
}

/// Membership in the min-tropical convex hull, via boundedness of the cell of `x`.
pub fn in_tconv(data: &DataSet, x: &TropicalPoint) -> Result<bool> {
    let graph = covector_at(data, x)?;
    let cell = cell_from_graph(data, &graph)?.expect("x realizes its own covector");
    Ok(cell.is_bounded())
}

/// Min-tropical combination `min_i (lambda_i + v_ij)` with
/// `lambda_i = max_j (x_j - v_ij)`; equals `x` exactly iff `x` lies in the hull.
pub fn tconv_reconstruction(data: &DataSet, x: &TropicalPoint) -> Result<Vec<Rational>> {
    x.check_dim(data.n())?;
    let lambdas = data
        .points()
        .iter()
        .map(|v| TropicalLinearForm::centered_at(v.clone()).eval(x))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..data.n())
        .map(|j| {
            lambdas
                .iter()
                .enumerate()
                .map(|(i, l)| l + data.coord(i, j))
                .min()
                .expect("m >= 1")
        })
        .collect())
}

/// Largest `m · n` accepted by [`enumerate_bounded_cells`].
pub const ENUMERATION_LIMIT: usize = 20;

/// All bounded covector cells, ordered lexicographically by edge list.
///
/// Every cell of the arrangement is a face of a full-dimensional region, and
/// each region is the cell of a graph that assigns one coordinate to each data
/// point, so walking the face lattices of those regions visits every cell.
pub fn enumerate_bounded_cells(data: &DataSet) -> Result<Vec<CovectorCell>> {
    let (m, n) = (data.m(), data.n());
    if m * n > ENUMERATION_LIMIT {
        return Err(Error::ScaleGuard { product: m * n, limit: ENUMERATION_LIMIT });
    }
    let mut seen: HashSet<DifferenceBounds> = HashSet::new();
    let mut stack = Vec::new();
    let mut choice = vec![0usize; m];
    loop {
        let graph = CovectorGraph::new(m, n, choice.iter().copied().enumerate()).expect("in range");
        if let Some(b) = graph_bounds(data, &graph) {
            if seen.insert(b.clone()) {
                stack.push(b);
            }
        }
        // odometer over [n]^m
        let mut pos = 0;
        while pos < m {
            choice[pos] += 1;
            if choice[pos] < n {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }

    let mut cells: BTreeMap<CovectorGraph, CovectorCell> = BTreeMap::new();
    while let Some(face) = stack.pop() {
        for child in face.facets() {
            if seen.insert(child.clone()) {
                stack.push(child);
            }
        }
        if face.is_bounded() {
            let graph = exact_graph(data, &face);
            cells
                .entry(graph.clone())
                .or_insert_with(|| CovectorCell::from_bounds(data, graph, face));
        }
    }
    Ok(cells.into_values().collect())
}
