//! Brute-force oracles shared by the integration tests. None of them use the
//! closure, face-walk or simplex code under test.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use tropfw::lp::{LinearProgram, LpOutcome, Relation, Sense, VarDomain};
use tropfw::{normalize, DataSet, Rational, TropicalPoint, WeightVector, WeightedObjective};

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn pt(c: &[&str]) -> TropicalPoint {
    TropicalPoint::parse(c).unwrap()
}

pub fn running() -> DataSet {
    DataSet::new(vec![pt(&["0", "0", "0"]), pt(&["1", "-1", "0"])]).unwrap()
}

/// Minimum of the objective over the grid `{(a, b, -a-b)}` with `a, b` in
/// `[-radius, radius]` at spacing `1/den`, for `n = 3`. Returns the minimum
/// and every grid point attaining it.
pub fn grid_minimum(data: &DataSet, w: &WeightVector, den: i64, radius: i64) -> (Rational, Vec<TropicalPoint>) {
    assert_eq!(data.n(), 3);
    let obj = WeightedObjective::new(data.clone(), w.clone()).unwrap();
    let mut best: Option<Rational> = None;
    let mut at = Vec::new();
    for a in -radius * den..=radius * den {
        for b in -radius * den..=radius * den {
            let x = Rational::new(a, den);
            let y = Rational::new(b, den);
            let z = -(&x + &y);
            let p = TropicalPoint::new(vec![x, y, z]).unwrap();
            let v = obj.eval(&p).unwrap();
            match &best {
                Some(b) if v > *b => {}
                Some(b) if v == *b => at.push(p),
                _ => {
                    best = Some(v);
                    at = vec![p];
                }
            }
        }
    }
    (best.unwrap(), at)
}

/// Solves a square linear system by Gauss-Jordan elimination; `None` if singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..n {
                    let delta = &f * &a[col][k];
                    a[r][k] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

fn subsets(len: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in from..len {
        if len - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(len, k, i + 1, cur, out);
        cur.pop();
    }
}

pub fn k_subsets(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    subsets(len, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Vertices of `{x : sum x = 0, x_plus - x_minus <= bound}` by trying every
/// choice of `n - 1` tight constraints.
pub fn basic_solution_vertices(n: usize, cons: &[(usize, usize, Rational)]) -> Vec<TropicalPoint> {
    let mut found = BTreeSet::new();
    for pick in k_subsets(cons.len(), n - 1) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &k in &pick {
            let (p, m, c) = &cons[k];
            let mut row = vec![Rational::zero(); n];
            row[*p] += Rational::one();
            row[*m] -= Rational::one();
            a.push(row);
            b.push(c.clone());
        }
        a.push(vec![Rational::one(); n]);
        b.push(Rational::zero());
        let Some(x) = solve_square(a, b) else { continue };
        if cons.iter().all(|(p, m, c)| &x[*p] - &x[*m] <= *c) {
            found.insert(TropicalPoint::new(x).unwrap());
        }
    }
    found.into_iter().collect()
}

/// Inequalities `x_k - x_j <= v_ik - v_ij` of the closed cell of an edge set.
pub fn cell_constraints(data: &DataSet, edges: &BTreeSet<(usize, usize)>) -> Vec<(usize, usize, Rational)> {
    let mut out = Vec::new();
    for &(i, j) in edges {
        for k in (0..data.n()).filter(|&k| k != j) {
            out.push((k, j, data.coord(i, k) - data.coord(i, j)));
        }
    }
    out
}

/// All vertices of the transportation polytope as spanning-tree basic
/// solutions, each with its value.
pub fn transport_vertices(supplies: &[Rational], demands: &[Rational], payoff: &[Vec<Rational>]) -> Vec<(Vec<Vec<Rational>>, Rational)> {
    let (m, n) = (supplies.len(), demands.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for pick in k_subsets(cells.len(), m + n - 1) {
        let tree: Vec<(usize, usize)> = pick.iter().map(|&k| cells[k]).collect();
        let Some(x) = tree_flow(m, n, &tree, supplies, demands) else { continue };
        if x.iter().flatten().any(Rational::is_negative) {
            continue;
        }
        let value = x
            .iter()
            .zip(payoff)
            .flat_map(|(r, p)| r.iter().zip(p).map(|(a, b)| a * b))
            .sum();
        if !out.iter().any(|(y, _)| *y == x) {
            out.push((x, value));
        }
    }
    out
}

// peel leaves of a spanning tree; None if the edge set is not a spanning tree
fn tree_flow(m: usize, n: usize, tree: &[(usize, usize)], s: &[Rational], d: &[Rational]) -> Option<Vec<Vec<Rational>>> {
    let mut rest_s = s.to_vec();
    let mut rest_d = d.to_vec();
    let mut left: Vec<(usize, usize)> = tree.to_vec();
    let mut x = vec![vec![Rational::zero(); n]; m];
    while !left.is_empty() {
        let mut progressed = false;
        for idx in 0..left.len() {
            let (i, j) = left[idx];
            let row_deg = left.iter().filter(|e| e.0 == i).count();
            let col_deg = left.iter().filter(|e| e.1 == j).count();
            if row_deg == 1 {
                x[i][j] = rest_s[i].clone();
            } else if col_deg == 1 {
                x[i][j] = rest_d[j].clone();
            } else {
                continue;
            }
            rest_s[i] -= &x[i][j];
            rest_d[j] -= &x[i][j];
            left.remove(idx);
            progressed = true;
            break;
        }
        if !progressed {
            return None;
        }
    }
    (rest_s.iter().chain(&rest_d).all(Rational::is_zero)).then_some(x)
}

/// Exact covector graphs of bounded cells, found by testing every candidate
/// graph with a strict-feasibility LP. Feasible only for tiny `n^m`.
pub fn bounded_graphs_by_lp(data: &DataSet) -> BTreeSet<Vec<(usize, usize)>> {
    let (m, n) = (data.m(), data.n());
    let rows: Vec<Vec<usize>> = (1..(1usize << n))
        .map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect())
        .collect();
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; m];
    loop {
        let edges: Vec<(usize, usize)> = (0..m).flat_map(|i| rows[choice[i]].iter().map(move |&j| (i, j))).collect();
        let covered: BTreeSet<usize> = edges.iter().map(|e| e.1).collect();
        if covered.len() == n && realizable(data, &edges) {
            out.insert(edges);
        }
        let mut pos = 0;
        while pos < m {
            choice[pos] += 1;
            if choice[pos] < rows.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    out
}

fn realizable(data: &DataSet, edges: &[(usize, usize)]) -> bool {
    let (m, n) = (data.m(), data.n());
    let mut lp = LinearProgram::new(Sense::Maximize);
    for _ in 0..n {
        lp.add_variable(VarDomain::Free, Rational::zero());
    }
    let eps = lp.add_variable(VarDomain::Free, Rational::one());
    lp.add_constraint(vec![(eps, Rational::one())], Relation::Le, Rational::one());
    lp.add_constraint((0..n).map(|j| (j, Rational::one())).collect(), Relation::Eq, Rational::zero());
    let set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    for i in 0..m {
        let j0 = edges.iter().find(|e| e.0 == i).unwrap().1;
        for k in 0..n {
            // x_k - v_ik versus x_j0 - v_ij0
            let rhs = data.coord(i, k) - data.coord(i, j0);
            if k == j0 {
                continue;
            }
            if set.contains(&(i, k)) {
                lp.add_constraint(vec![(k, Rational::one()), (j0, -Rational::one())], Relation::Eq, rhs);
            } else {
                lp.add_constraint(
                    vec![(k, Rational::one()), (j0, -Rational::one()), (eps, Rational::one())],
                    Relation::Le,
                    rhs,
                );
            }
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        _ => false,
    }
}

/// Min-tropical combination `min_i (l_i + v_ij)`.
pub fn min_combination(data: &DataSet, lambdas: &[Rational]) -> TropicalPoint {
    let raw: Vec<Rational> = (0..data.n())
        .map(|j| (0..data.m()).map(|i| &lambdas[i] + data.coord(i, j)).min().unwrap())
        .collect();
    normalize(&raw).unwrap()
}

/// Leaf-to-leaf path lengths by walking the tree as an undirected graph.
pub fn path_lengths(tree: &tropfw::phylo::PhyloTree) -> BTreeMap<(usize, usize), Rational> {
    use tropfw::phylo::Node;
    let mut adj: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut leaf_at = BTreeMap::new();
    fn build(node: &Node, parent: Option<usize>, adj: &mut Vec<Vec<(usize, Rational)>>, leaf_at: &mut BTreeMap<usize, usize>) {
        let id = adj.len();
        adj.push(Vec::new());
        if let Some(p) = parent {
            adj[p].push((id, node.length.clone()));
            adj[id].push((p, node.length.clone()));
        }
        if let Some(l) = node.leaf {
            leaf_at.insert(l, id);
        }
        for c in &node.children {
            build(c, Some(id), adj, leaf_at);
        }
    }
    build(tree.root(), None, &mut adj, &mut leaf_at);
    let mut out = BTreeMap::new();
    for (&a, &start) in &leaf_at {
        let mut dist: Vec<Option<Rational>> = vec![None; adj.len()];
        dist[start] = Some(Rational::zero());
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let du = dist[u].clone().unwrap();
            for (v, len) in &adj[u] {
                if dist[*v].is_none() {
                    dist[*v] = Some(&du + len);
                    stack.push(*v);
                }
            }
        }
        for (&b, &end) in &leaf_at {
            if a < b {
                out.insert((a, b), dist[end].clone().unwrap());
            }
        }
    }
    out
}
