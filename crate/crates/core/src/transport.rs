//! The Fermat-Weber set through the transportation problem.
//!
//! The weight vector `w` selects one cell of the regular subdivision of
//! `Δ^{m-1} × Δ^{n-1}` induced by lifting `(e_i, e_j)` to `v_ij`: the cell
//! containing `(w, (1/n)·1)`. Points of that cell are the optimal plans of the
//! transportation problem with supplies `w`, demands `1/n` and payoff `-v_ij`,
//! and the union of their supports is the covector graph of the Fermat-Weber
//! set. The optimal column duals give a Fermat-Weber point.

use std::collections::VecDeque;

use crate::covector::CovectorGraph;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense, VarDomain};
use crate::point::{normalize, DataSet, TropicalPoint, WeightVector};
use crate::rational::Rational;

/// Maximize `sum x_ij payoff_ij` over nonnegative plans with the given margins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportationInstance {
    supplies: Vec<Rational>,
    demands: Vec<Rational>,
    payoff: Vec<Vec<Rational>>,
}

impl TransportationInstance {
    pub fn new(supplies: Vec<Rational>, demands: Vec<Rational>, payoff: Vec<Vec<Rational>>) -> Result<Self> {
        if supplies.is_empty() || demands.is_empty() {
            return Err(Error::InvalidInstance("no rows or no columns".into()));
        }
        if payoff.len() != supplies.len() {
            return Err(Error::DimensionMismatch { expected: supplies.len(), found: payoff.len() });
        }
        if let Some(row) = payoff.iter().find(|r| r.len() != demands.len()) {
            return Err(Error::DimensionMismatch { expected: demands.len(), found: row.len() });
        }
        if let Some(x) = supplies.iter().chain(&demands).find(|x| !x.is_positive()) {
            return Err(Error::InvalidInstance(format!("margin {x} is not strictly positive")));
        }
        let supply: Rational = supplies.iter().sum();
        let demand: Rational = demands.iter().sum();
        if supply != demand {
            return Err(Error::Unbalanced { supply: supply.to_string(), demand: demand.to_string() });
        }
        Ok(TransportationInstance { supplies, demands, payoff })
    }

    /// Supplies `w`, demands `1/n`, payoff `-v_ij`.
    pub fn from_data(data: &DataSet, weights: &WeightVector) -> Result<Self> {
        weights.check_len(data.m())?;
        let n = data.n();
        let payoff = data.points().iter().map(|v| v.coords().iter().map(|c| -c).collect()).collect();
        TransportationInstance::new(
            weights.as_slice().to_vec(),
            vec![Rational::new(1, n as i64); n],
            payoff,
        )
    }

    pub fn rows(&self) -> usize {
        self.supplies.len()
    }

    pub fn cols(&self) -> usize {
        self.demands.len()
    }

    pub fn supplies(&self) -> &[Rational] {
        &self.supplies
    }

    pub fn demands(&self) -> &[Rational] {
        &self.demands
    }

    pub fn payoff(&self, i: usize, j: usize) -> &Rational {
        &self.payoff[i][j]
    }

    pub fn value_of(&self, plan: &[Vec<Rational>]) -> Rational {
        plan.iter()
            .zip(&self.payoff)
            .flat_map(|(xr, pr)| xr.iter().zip(pr).map(|(x, p)| x * p))
            .sum()
    }

    pub fn is_feasible(&self, plan: &[Vec<Rational>]) -> bool {
        plan.len() == self.rows()
            && plan.iter().all(|r| r.len() == self.cols() && r.iter().all(|x| !x.is_negative()))
            && plan.iter().zip(&self.supplies).all(|(r, s)| &r.iter().sum::<Rational>() == s)
            && (0..self.cols()).all(|j| plan.iter().map(|r| &r[j]).sum::<Rational>() == self.demands[j])
    }
}

/// An optimal plan with optimal dual prices.
#[derive(Clone, Debug)]
pub struct TransportSolution {
    pub plan: Vec<Vec<Rational>>,
    pub value: Rational,
    /// Prices `a_i`, `b_j` with `a_i + b_j >= payoff_ij`, equality on the plan's support,
    /// and `sum s_i a_i + sum d_j b_j = value`.
    pub row_duals: Vec<Rational>,
    pub col_duals: Vec<Rational>,
}

/// Transportation simplex: staircase initial basis, dual potentials, Bland's rule.
pub fn solve_transport(inst: &TransportationInstance) -> Result<TransportSolution> {
    let (m, n) = (inst.rows(), inst.cols());
    // minimize cost = -payoff
    let cost: Vec<Vec<Rational>> = inst.payoff.iter().map(|r| r.iter().map(|p| -p).collect()).collect();
    let mut x = vec![vec![Rational::zero(); n]; m];
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(m + n - 1);
    {
        let mut s = inst.supplies.clone();
        let mut d = inst.demands.clone();
        let (mut i, mut j) = (0, 0);
        loop {
            let a = s[i].clone().min(d[j].clone());
            s[i] -= &a;
            d[j] -= &a;
            x[i][j] = a;
            basis.push((i, j));
            if i == m - 1 && j == n - 1 {
                break;
            }
            if (s[i].is_zero() && i < m - 1) || j == n - 1 {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    debug_assert_eq!(basis.len(), m + n - 1);

    loop {
        let (u, v) = potentials(&cost, &basis, m, n);
        let entering = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| (&cost[i][j] - &u[i] - &v[j]).is_negative());
        let Some((ei, ej)) = entering else {
            let value = inst.value_of(&x);
            return Ok(TransportSolution {
                plan: x,
                value,
                row_duals: u.iter().map(|a| -a).collect(),
                col_duals: v.iter().map(|b| -b).collect(),
            });
        };
        let path = basis_path(&basis, m, n, ei, ej);
        // path cells alternate -, +, -, ... starting next to row ei
        let theta = path
            .iter()
            .step_by(2)
            .map(|&k| x[basis[k].0][basis[k].1].clone())
            .min()
            .expect("cycle has a decreasing cell");
        let leave = path
            .iter()
            .step_by(2)
            .copied()
            .filter(|&k| x[basis[k].0][basis[k].1] == theta)
            .min_by_key(|&k| basis[k].0 * n + basis[k].1)
            .expect("minimum attained");
        for (pos, &k) in path.iter().enumerate() {
            let (i, j) = basis[k];
            if pos % 2 == 0 {
                x[i][j] -= &theta;
            } else {
                x[i][j] += &theta;
            }
        }
        x[ei][ej] = theta;
        basis[leave] = (ei, ej);
    }
}

fn potentials(cost: &[Vec<Rational>], basis: &[(usize, usize)], m: usize, n: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut u: Vec<Option<Rational>> = vec![None; m];
    let mut v: Vec<Option<Rational>> = vec![None; n];
    u[0] = Some(Rational::zero());
    let mut assigned = 1;
    while assigned < m + n {
        let before = assigned;
        for &(i, j) in basis {
            match (&u[i], &v[j]) {
                (Some(a), None) => {
                    v[j] = Some(&cost[i][j] - a);
                    assigned += 1;
                }
                (None, Some(b)) => {
                    u[i] = Some(&cost[i][j] - b);
                    assigned += 1;
                }
                _ => {}
            }
        }
        assert!(assigned > before, "transportation basis is not a spanning tree");
    }
    (
        u.into_iter().map(|a| a.expect("assigned")).collect(),
        v.into_iter().map(|b| b.expect("assigned")).collect(),
    )
}

/// Basis positions on the tree path from row `r` to column `c`.
fn basis_path(basis: &[(usize, usize)], m: usize, n: usize, r: usize, c: usize) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m + n];
    for (k, &(i, j)) in basis.iter().enumerate() {
        adj[i].push((m + j, k));
        adj[m + j].push((i, k));
    }
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[r] = true;
    let mut queue = VecDeque::from([r]);
    while let Some(a) = queue.pop_front() {
        if a == m + c {
            break;
        }
        for &(b, k) in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                prev[b] = Some((a, k));
                queue.push_back(b);
            }
        }
    }
    let mut path = Vec::new();
    let mut at = m + c;
    while at != r {
        let (p, k) = prev[at].expect("basis spans all nodes");
        path.push(k);
        at = p;
    }
    path.reverse();
    path
}

/// The cell of the regular subdivision selected by the weights, described by
/// the support of its optimal plans.
#[derive(Clone, Debug)]
pub struct CentralCell {
    pub support: CovectorGraph,
    pub optimal_value: Rational,
    /// One optimal plan whose support is the whole of `support`.
    pub plan: Vec<Vec<Rational>>,
    pub row_duals: Vec<Rational>,
    pub col_duals: Vec<Rational>,
}

impl CentralCell {
    /// The coordinate sets `A_i` of the mixed cell `w_1 A_1 + ... + w_m A_m`.
    pub fn row_supports(&self) -> Vec<Vec<usize>> {
        (0..self.support.m()).map(|i| self.support.right_neighbors(i).collect()).collect()
    }

    /// A Fermat-Weber point read off the column prices: `x = -b`.
    pub fn dual_point(&self) -> TropicalPoint {
        normalize(&self.col_duals.iter().map(|b| -b).collect::<Vec<_>>()).expect("n >= 2")
    }
}

/// Support of the optimal face of the transportation problem for `(V, w)`.
pub fn central_cayley_cell(data: &DataSet, weights: &WeightVector) -> Result<CentralCell> {
    let inst = TransportationInstance::from_data(data, weights)?;
    let sol = solve_transport(&inst)?;
    let (m, n) = (inst.rows(), inst.cols());

    // By complementary slackness every feasible plan supported on the
    // zero-reduced-cost edges of an optimal dual is optimal, and no optimal
    // plan uses any other edge.
    let usable: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| &sol.row_duals[i] + &sol.col_duals[j] == *inst.payoff(i, j))
        .collect();
    let mut lp = LinearProgram::new(Sense::Maximize);
    for _ in &usable {
        lp.add_variable(VarDomain::NonNegative, Rational::zero());
    }
    for i in 0..m {
        let row = usable.iter().enumerate().filter(|(_, e)| e.0 == i).map(|(k, _)| (k, Rational::one()));
        lp.add_constraint(row.collect(), Relation::Eq, inst.supplies[i].clone());
    }
    for j in 0..n {
        let col = usable.iter().enumerate().filter(|(_, e)| e.1 == j).map(|(k, _)| (k, Rational::one()));
        lp.add_constraint(col.collect(), Relation::Eq, inst.demands[j].clone());
    }

    let mut in_support: Vec<bool> = usable.iter().map(|&(i, j)| sol.plan[i][j].is_positive()).collect();
    let mut plans = vec![sol.plan.clone()];
    loop {
        let open: Vec<usize> = (0..usable.len()).filter(|&k| !in_support[k]).collect();
        if open.is_empty() {
            break;
        }
        let mut probe = lp.clone();
        for &k in &open {
            probe.set_cost(k, Rational::one());
        }
        let point = match probe.solve() {
            LpOutcome::Optimal { point, .. } => point,
            other => return Err(Error::Solver(format!("optimal-face program returned {other:?}"))),
        };
        let grown = open.iter().filter(|&&k| point[k].is_positive()).count();
        if grown == 0 {
            break;
        }
        for &k in &open {
            if point[k].is_positive() {
                in_support[k] = true;
            }
        }
        let mut plan = vec![vec![Rational::zero(); n]; m];
        for (k, &(i, j)) in usable.iter().enumerate() {
            plan[i][j] = point[k].clone();
        }
        plans.push(plan);
    }

    // the average of optimal plans is optimal and has the union support
    let count = Rational::from(plans.len());
    let plan: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..n).map(|j| plans.iter().map(|p| &p[i][j]).sum::<Rational>() / &count).collect())
        .collect();
    let support = CovectorGraph::new(
        m,
        n,
        usable.iter().zip(&in_support).filter(|(_, &s)| s).map(|(&e, _)| e),
    )?;
    Ok(CentralCell {
        support,
        optimal_value: sol.value,
        plan,
        row_duals: sol.row_duals,
        col_duals: sol.col_duals,
    })
}
