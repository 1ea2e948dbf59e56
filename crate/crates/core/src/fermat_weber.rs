//! Exact weighted Fermat-Weber sets.
//!
//! The objective `f(x) = sum_i w_i max_j (x_j - v_ij)` is minimized over the
//! zero-sum hyperplane by the linear program
//!
//! ```text
//! minimize    sum_i w_i t_i
//! subject to  x_j - t_i <= v_ij     for all i, j
//!             sum_j x_j  = 0
//! ```
//!
//! A single optimum may be a vertex of the optimal set, so the full set is
//! recovered afterwards: an edge `(i, j)` belongs to its covector graph iff
//! the constraint for `(i, j)` is tight on the whole optimal face.

use serde::Serialize;

use crate::covector::{cell_from_graph, covector_at, CovectorCell, CovectorGraph};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense, VarDomain};
use crate::point::{DataSet, TropicalPoint, WeightVector};
use crate::rational::Rational;
use crate::signomial::WeightedObjective;

/// The Fermat-Weber set of weighted data together with its optimal value.
#[derive(Clone, Debug)]
pub struct FermatWeberResult {
    optimal_value: Rational,
    n: usize,
    m: usize,
    cell: CovectorCell,
    vertices: Vec<TropicalPoint>,
    witness: TropicalPoint,
}

impl FermatWeberResult {
    /// Minimum of `sum_i w_i max_j (x_j - v_ij)`.
    pub fn optimal_value(&self) -> &Rational {
        &self.optimal_value
    }

    /// Minimum of `sum_i w_i d(x, v_i)`, which is `n` times the optimal value.
    pub fn distance_sum(&self) -> Rational {
        &self.optimal_value * Rational::from(self.n)
    }

    /// Minimum of `(1/m) sum_i w_i d(x, v_i)`.
    pub fn mean_distance(&self) -> Rational {
        self.distance_sum() / Rational::from(self.m)
    }

    pub fn cell(&self) -> &CovectorCell {
        &self.cell
    }

    pub fn graph(&self) -> &CovectorGraph {
        self.cell.graph()
    }

    pub fn dim(&self) -> usize {
        self.cell.dim()
    }

    /// Vertices of the Fermat-Weber set in lexicographic order.
    pub fn vertices(&self) -> &[TropicalPoint] {
        &self.vertices
    }

    /// Average of the vertices; a point of the relative interior.
    pub fn witness(&self) -> &TropicalPoint {
        &self.witness
    }

    pub fn contains(&self, x: &TropicalPoint) -> bool {
        self.cell.contains(x)
    }
}

#[derive(Serialize)]
struct ResultJson<'a> {
    value: &'a Rational,
    distance_sum: Rational,
    dim: usize,
    graph: &'a CovectorGraph,
    vertices: &'a [TropicalPoint],
    witness: &'a TropicalPoint,
}

impl Serialize for FermatWeberResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ResultJson {
            value: &self.optimal_value,
            distance_sum: self.distance_sum(),
            dim: self.dim(),
            graph: self.graph(),
            vertices: &self.vertices,
            witness: &self.witness,
        }
        .serialize(serializer)
    }
}

struct FwProgram {
    lp: LinearProgram,
    m: usize,
    n: usize,
}

impl FwProgram {
    fn new(data: &DataSet, weights: &WeightVector) -> Self {
        let (m, n) = (data.m(), data.n());
        let mut lp = LinearProgram::new(Sense::Minimize);
        for _ in 0..n {
            lp.add_variable(VarDomain::Free, Rational::zero());
        }
        for w in weights.as_slice() {
            lp.add_variable(VarDomain::Free, w.clone());
        }
        for i in 0..m {
            for j in 0..n {
                lp.add_constraint(
                    vec![(j, Rational::one()), (n + i, -Rational::one())],
                    Relation::Le,
                    data.coord(i, j).clone(),
                );
            }
        }
        lp.add_constraint((0..n).map(|j| (j, Rational::one())).collect(), Relation::Eq, Rational::zero());
        FwProgram { lp, m, n }
    }

    fn slack(&self, data: &DataSet, point: &[Rational], i: usize, j: usize) -> Rational {
        data.coord(i, j) - &point[j] + &point[self.n + i]
    }

    fn optimum(&self) -> Result<(Vec<Rational>, Rational)> {
        match self.lp.solve() {
            LpOutcome::Optimal { point, value } => Ok((point, value)),
            other => Err(Error::Solver(format!("Fermat-Weber program returned {other:?}"))),
        }
    }

    /// Edges tight on the entire optimal face, found by repeatedly maximizing
    /// the total slack of the surviving candidates and discarding every
    /// candidate the maximizer loosens.
    fn tight_everywhere(&self, data: &DataSet, weights: &WeightVector, first: &[Rational], opt: &Rational) -> Result<CovectorGraph> {
        let mut candidates: Vec<(usize, usize)> = (0..self.m)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.slack(data, first, i, j).is_zero())
            .collect();
        loop {
            let mut face = self.lp.clone();
            face.add_constraint(
                weights.as_slice().iter().enumerate().map(|(i, w)| (self.n + i, w.clone())).collect(),
                Relation::Eq,
                opt.clone(),
            );
            // minimize minus the total slack v_ij - x_j + t_i, constants dropped
            let mut cost = vec![Rational::zero(); self.n + self.m];
            for &(i, j) in &candidates {
                cost[j] += Rational::one();
                cost[self.n + i] -= Rational::one();
            }
            for (var, c) in cost.into_iter().enumerate() {
                face.set_cost(var, c);
            }
            let point = match face.solve() {
                LpOutcome::Optimal { point, .. } => point,
                other => return Err(Error::Solver(format!("optimal-face program returned {other:?}"))),
            };
            let before = candidates.len();
            candidates.retain(|&(i, j)| self.slack(data, &point, i, j).is_zero());
            if candidates.len() == before {
                return CovectorGraph::new(self.m, self.n, candidates);
            }
        }
    }
}

/// Solves the weighted Fermat-Weber problem and returns the whole optimal set.
pub fn solve_fw(data: &DataSet, weights: &WeightVector) -> Result<FermatWeberResult> {
    weights.check_len(data.m())?;
    let program = FwProgram::new(data, weights);
    let (point, value) = program.optimum()?;
    let graph = program.tight_everywhere(data, weights, &point, &value)?;
    let cell = cell_from_graph(data, &graph)?.ok_or(Error::EmptyCell)?;
    if !cell.is_bounded() {
        return Err(Error::Solver(format!("optimal cell {graph:?} is unbounded")));
    }
    let vertices = cell.vertices()?;
    let witness = TropicalPoint::mean(&vertices)?;
    let at_witness = covector_at(data, &witness)?;
    if at_witness != graph {
        return Err(Error::Solver(format!(
            "barycenter has covector {at_witness:?}, optimal face has {graph:?}"
        )));
    }
    debug_assert_eq!(
        WeightedObjective::new(data.clone(), weights.clone())?.eval(&witness)?,
        value
    );
    Ok(FermatWeberResult {
        optimal_value: value,
        n: data.n(),
        m: data.m(),
        cell,
        vertices,
        witness,
    })
}

/// Optimal value only; cheaper than [`solve_fw`].
pub fn fw_value(data: &DataSet, weights: &WeightVector) -> Result<Rational> {
    weights.check_len(data.m())?;
    Ok(FwProgram::new(data, weights).optimum()?.1)
}

/// True iff `x` attains the minimum of the objective.
pub fn is_fw_point(data: &DataSet, weights: &WeightVector, x: &TropicalPoint) -> Result<bool> {
    x.check_dim(data.n())?;
    let value = WeightedObjective::new(data.clone(), weights.clone())?.eval(x)?;
    Ok(value == fw_value(data, weights)?)
}
