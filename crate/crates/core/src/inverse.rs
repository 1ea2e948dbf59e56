//! Weights that realize a prescribed bounded covector cell as the
//! Fermat-Weber set.
//!
//! For a spanning forest `F` of the cell's graph `G`, put
//! `λ(e) = 1 / (n · deg_F r(e))` on every edge and `w_i = sum_{ℓ(e) = i} λ(e)`.
//! The point `(w, (1/n)·1) = sum_e λ(e) (e_ℓ(e), e_r(e))` is then a strictly
//! positive combination of the vertices of a simplex that lies in the cell of
//! the subdivision dual to `G` and has the same dimension whenever `F` has
//! the components of `G`. Such a point is in the relative interior of that
//! cell, so every forest with the components of `G` works.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::covector::{cell_from_graph, CovectorGraph};
use crate::error::{Error, Result};
use crate::fermat_weber::{solve_fw, FermatWeberResult};
use crate::point::{DataSet, WeightVector};
use crate::rational::Rational;

/// An acyclic subgraph with the same connected components as its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningForest {
    graph: CovectorGraph,
    component_map: Vec<usize>,
}

impl SpanningForest {
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        self.graph.edges()
    }

    pub fn graph(&self) -> &CovectorGraph {
        &self.graph
    }

    /// Component id of each node: left nodes `0..m`, then right nodes.
    pub fn component_map(&self) -> &[usize] {
        &self.component_map
    }

    pub fn component_count(&self) -> usize {
        self.component_map.iter().max().map_or(0, |c| c + 1)
    }

    /// `λ(e) = 1 / (n · deg r(e))` for every edge.
    pub fn lambdas(&self) -> BTreeMap<(usize, usize), Rational> {
        let n = self.graph.n() as i64;
        self.edges()
            .iter()
            .map(|&(i, j)| ((i, j), Rational::new(1, n * self.graph.right_degree(j) as i64)))
            .collect()
    }
}

/// Breadth-first spanning forest: roots are taken in node order (left nodes
/// first), neighbours in increasing index order.
pub fn spanning_forest(graph: &CovectorGraph) -> Result<SpanningForest> {
    if graph.edge_count() == 0 {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    let (m, n) = (graph.m(), graph.n());
    let mut adj = vec![Vec::new(); m + n];
    for &(i, j) in graph.edges() {
        adj[i].push(m + j);
        adj[m + j].push(i);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut comp = vec![usize::MAX; m + n];
    let mut edges = Vec::new();
    let mut next = 0;
    for root in 0..m + n {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = next;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if comp[b] == usize::MAX {
                    comp[b] = next;
                    edges.push(if a < m { (a, b - m) } else { (b, a - m) });
                    queue.push_back(b);
                }
            }
        }
        next += 1;
    }
    Ok(SpanningForest {
        graph: CovectorGraph::new(m, n, edges)?,
        component_map: comp,
    })
}

/// Weights `w_i = sum_{ℓ(e) = i} λ(e)`.
pub fn weights_from_forest(forest: &SpanningForest, n: usize) -> Result<WeightVector> {
    let g = forest.graph();
    if g.n() != n {
        return Err(Error::DimensionMismatch { expected: g.n(), found: n });
    }
    if !g.is_spanning() {
        return Err(Error::InvalidGraph("forest does not cover every node".into()));
    }
    let mut w = vec![Rational::zero(); g.m()];
    for ((i, _), lambda) in forest.lambdas() {
        w[i] += lambda;
    }
    WeightVector::new(w)
}

/// A verified solution of the inverse problem.
#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub weights: WeightVector,
    #[serde(serialize_with = "ser_forest")]
    pub forest: SpanningForest,
    /// Number of forests tried before one verified.
    pub forests_tried: usize,
    pub result: FermatWeberResult,
}

fn ser_forest<S: serde::Serializer>(f: &SpanningForest, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.graph().serialize(s)
}

/// Finds weights whose Fermat-Weber set is the bounded cell with graph `graph`
/// and confirms them with the forward solver.
pub fn realize_cell(data: &DataSet, graph: &CovectorGraph) -> Result<Realization> {
    let cell = cell_from_graph(data, graph)?
        .ok_or_else(|| Error::NotBoundedCell(format!("no point has covector graph containing {graph:?}")))?;
    if !cell.is_bounded() {
        return Err(Error::NotBoundedCell(format!("the cell of {graph:?} is unbounded")));
    }
    if !cell.is_exact() {
        return Err(Error::NotBoundedCell(format!(
            "{graph:?} is not a covector graph; its cell has graph {:?}",
            cell.relint_graph()
        )));
    }

    let first = spanning_forest(graph)?;
    let attempt = |forest: SpanningForest, tried: usize| -> Result<std::result::Result<Realization, (SpanningForest, FermatWeberResult)>> {
        let weights = weights_from_forest(&forest, graph.n())?;
        let result = solve_fw(data, &weights)?;
        Ok(if result.graph() == graph {
            Ok(Realization { weights, forest, forests_tried: tried, result })
        } else {
            Err((forest, result))
        })
    };
    let mut last = match attempt(first.clone(), 1)? {
        Ok(r) => return Ok(r),
        Err(miss) => miss,
    };
    let mut tried = 1;
    for forest in ForestIter::new(graph, &first) {
        tried += 1;
        match attempt(forest, tried)? {
            Ok(r) => return Ok(r),
            Err(miss) => last = miss,
        }
    }
    let (forest, result) = last;
    Err(Error::Unrealizable(format!(
        "{tried} spanning forests tried; last forest {:?} gave cell {:?}",
        forest.graph(),
        result.graph()
    )))
}

/// All spanning forests of a graph with its components, in lexicographic
/// order of edge subsets, skipping `skip`.
struct ForestIter {
    forests: std::vec::IntoIter<SpanningForest>,
}

impl ForestIter {
    fn new(graph: &CovectorGraph, skip: &SpanningForest) -> Self {
        let (m, n) = (graph.m(), graph.n());
        let edges: Vec<(usize, usize)> = graph.edges().iter().copied().collect();
        let target = m + n - graph.component_count();
        let comp = graph.components();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        collect_forests(&edges, 0, target, m, &mut chosen, &mut out);
        let forests: Vec<SpanningForest> = out
            .into_iter()
            .map(|es| SpanningForest {
                graph: CovectorGraph::new(m, n, es).expect("subgraph"),
                component_map: comp.clone(),
            })
            .filter(|f| f.edges() != skip.edges())
            .collect();
        ForestIter { forests: forests.into_iter() }
    }
}

impl Iterator for ForestIter {
    type Item = SpanningForest;
    fn next(&mut self) -> Option<SpanningForest> {
        self.forests.next()
    }
}

fn collect_forests(
    edges: &[(usize, usize)],
    from: usize,
    target: usize,
    m: usize,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if chosen.len() == target {
        out.push(chosen.clone());
        return;
    }
    if edges.len() - from < target - chosen.len() {
        return;
    }
    for k in from..edges.len() {
        let (i, j) = edges[k];
        if joins(chosen, m, i, m + j) {
            continue;
        }
        chosen.push((i, j));
        collect_forests(edges, k + 1, target, m, chosen, out);
        chosen.pop();
    }
}

/// True iff nodes `a` and `b` are already connected by `edges`.
fn joins(edges: &[(usize, usize)], m: usize, a: usize, b: usize) -> bool {
    let mut seen = BTreeSet::from([a]);
    let mut stack = vec![a];
    while let Some(u) = stack.pop() {
        if u == b {
            return true;
        }
        for &(i, j) in edges {
            let (p, q) = (i, m + j);
            let other = if p == u { q } else if q == u { p } else { continue };
            if seen.insert(other) {
                stack.push(other);
            }
        }
    }
    false
}
