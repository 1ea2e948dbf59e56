//! Exact linear programming over [`Rational`].
//!
//! A dense two-phase tableau simplex with Bland's rule. No tolerances exist:
//! feasibility, unboundedness and optimality are decided exactly, and Bland's
//! rule guarantees termination on degenerate problems.

use crate::rational::Rational;

type Row = (Vec<(usize, Rational)>, Relation, Rational);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarDomain {
    Free,
    NonNegative,
}

/// `sum_k coeffs[k].1 · x[coeffs[k].0]  (relation)  rhs`
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<Rational>,
    domains: Vec<VarDomain>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            objective: Vec::new(),
            domains: Vec::new(),
            constraints: Vec::new(),
        }
    }

    /// Adds a variable with objective coefficient `cost`; returns its index.
    pub fn add_variable(&mut self, domain: VarDomain, cost: Rational) -> usize {
        self.domains.push(domain);
        self.objective.push(cost);
        self.domains.len() - 1
    }

    pub fn set_cost(&mut self, var: usize, cost: Rational) {
        self.objective[var] = cost;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        debug_assert!(coeffs.iter().all(|(v, _)| *v < self.domains.len()));
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn num_variables(&self) -> usize {
        self.domains.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_at(&self, point: &[Rational]) -> Rational {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    /// Exact check that `point` satisfies every constraint and domain.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        if point.len() != self.domains.len() {
            return false;
        }
        let domains_ok = self
            .domains
            .iter()
            .zip(point)
            .all(|(d, x)| *d == VarDomain::Free || !x.is_negative());
        domains_ok
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().map(|(v, a)| a * &point[*v]).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    lp.solve()
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// Column of the positive and (for free variables) negative part of each variable.
    var_cols: Vec<(usize, Option<usize>)>,
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.domains.len());
        let mut ncols = 0;
        for d in &lp.domains {
            match d {
                VarDomain::NonNegative => {
                    var_cols.push((ncols, None));
                    ncols += 1;
                }
                VarDomain::Free => {
                    var_cols.push((ncols, Some(ncols + 1)));
                    ncols += 2;
                }
            }
        }
        let structural = ncols;

        // orient each row so that rhs >= 0
        let oriented: Vec<Row> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|(v, a)| (*v, -a)).collect(), rel, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();

        let slack_count = oriented.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let artificial_count = oriented.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let first_artificial = structural + slack_count;
        let total = first_artificial + artificial_count;
        let width = total + 1;

        let mut rows = Vec::with_capacity(oriented.len());
        let mut basis = Vec::with_capacity(oriented.len());
        let mut next_slack = structural;
        let mut next_art = first_artificial;
        for (coeffs, rel, rhs) in oriented {
            let mut row = vec![Rational::zero(); width];
            for (v, a) in coeffs {
                let (pos, neg) = var_cols[v];
                row[pos] += &a;
                if let Some(neg) = neg {
                    row[neg] -= &a;
                }
            }
            row[total] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = Rational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }

        // phase-one reduced costs: minimise the sum of artificials
        let mut cost = vec![Rational::zero(); width];
        for c in cost.iter_mut().take(total).skip(first_artificial) {
            *c = Rational::one();
        }
        for (r, &b) in basis.iter().enumerate() {
            if b >= first_artificial {
                for (c, a) in cost.iter_mut().zip(&rows[r]) {
                    if !a.is_zero() {
                        *c -= a;
                    }
                }
            }
        }

        Tableau { rows, cost, basis, var_cols, first_artificial, width }
    }

    fn rhs(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let piv = self.rows[p][q].clone();
        if piv != Rational::one() {
            let inv = piv.recip();
            for a in self.rows[p].iter_mut() {
                if !a.is_zero() {
                    *a *= &inv;
                }
            }
        }
        let support: Vec<usize> = (0..self.width).filter(|&c| !self.rows[p][c].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.rows[p]);
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == p || row[q].is_zero() {
                continue;
            }
            let factor = row[q].clone();
            for &c in &support {
                row[c] -= &factor * &pivot_row[c];
            }
        }
        if !self.cost[q].is_zero() {
            let factor = self.cost[q].clone();
            for &c in &support {
                self.cost[c] -= &factor * &pivot_row[c];
            }
        }
        self.rows[p] = pivot_row;
        self.basis[p] = q;
    }

    /// Bland's rule on columns `< limit`. Returns false if unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(q) = (0..limit).find(|&c| self.cost[c].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[q].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[q];
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((p, _)) => self.pivot(p, q),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let rhs = self.rhs();
        let art = self.first_artificial;
        self.optimize(rhs);
        if !self.cost[rhs].is_zero() {
            return LpOutcome::Infeasible;
        }

        // drive zero-valued artificials out of the basis, dropping redundant rows
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= art {
                match (0..art).find(|&c| !self.rows[r][c].is_zero()) {
                    Some(q) => {
                        self.pivot(r, q);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }

        // phase two
        let mut cost = vec![Rational::zero(); self.width];
        for (v, c) in lp.objective.iter().enumerate() {
            let c = match lp.sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => -c,
            };
            let (pos, neg) = self.var_cols[v];
            if let Some(neg) = neg {
                cost[neg] = -&c;
            }
            cost[pos] = c;
        }
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let factor = cost[b].clone();
            for (c, a) in cost.iter_mut().zip(&self.rows[r]) {
                if !a.is_zero() {
                    *c -= &factor * a;
                }
            }
        }
        self.cost = cost;
        if !self.optimize(art) {
            return LpOutcome::Unbounded;
        }

        let mut columns = vec![Rational::zero(); self.width];
        for (r, &b) in self.basis.iter().enumerate() {
            columns[b] = self.rows[r][rhs].clone();
        }
        let point: Vec<Rational> = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &columns[pos] - &columns[neg],
                None => columns[pos].clone(),
            })
            .collect();
        let value = lp.objective_at(&point);
        LpOutcome::Optimal { point, value }
    }
}
