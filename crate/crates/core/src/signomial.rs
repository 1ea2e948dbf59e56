//! Tropical linear forms and the weighted Fermat-Weber objective.
//!
//! The objective `f(x) = sum_i w_i · max_j (x_j - v_ij)` is the weighted
//! tropical product of the linear forms centred at the data points. It is
//! always evaluated in this factored form; the expanded signomial has up to
//! `n^m` monomials.
//!
//! For the data `v1 = (0,0,0)`, `v2 = (1,-1,0)` with weights `(1/3, 2/3)` the
//! expansion is
//!
//! ```text
//! (x1 ⊕ x2 ⊕ x3)^(1/3) ⊙ (-1 ⊙ x1 ⊕ 1 ⊙ x2 ⊕ x3)^(2/3)
//! ```
//!
//! of which six of the nine monomials ever attain the maximum.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::point::{DataSet, TropicalPoint, WeightVector};
use crate::rational::Rational;

/// `x ↦ max_j (x_j - v_j)`, the tropical linear form with coefficients `-v_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalLinearForm {
    center: TropicalPoint,
}

impl TropicalLinearForm {
    pub fn centered_at(center: TropicalPoint) -> Self {
        TropicalLinearForm { center }
    }

    pub fn center(&self) -> &TropicalPoint {
        &self.center
    }

    /// Evaluates at an arbitrary representative `x`.
    pub fn eval_raw(&self, x: &[Rational]) -> Result<Rational> {
        check_len(x, self.center.dim())?;
        Ok(x.iter()
            .zip(self.center.coords())
            .map(|(a, v)| a - v)
            .max()
            .expect("dimension >= 2"))
    }

    pub fn eval(&self, x: &TropicalPoint) -> Result<Rational> {
        self.eval_raw(x.coords())
    }

    /// Indices attaining the maximum, decided by exact comparison.
    pub fn argmax_raw(&self, x: &[Rational]) -> Result<BTreeSet<usize>> {
        let best = self.eval_raw(x)?;
        Ok(x.iter()
            .zip(self.center.coords())
            .enumerate()
            .filter(|(_, (a, v))| *a - *v == best)
            .map(|(j, _)| j)
            .collect())
    }

    pub fn argmax(&self, x: &TropicalPoint) -> Result<BTreeSet<usize>> {
        self.argmax_raw(x.coords())
    }
}

fn check_len(x: &[Rational], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    Ok(())
}

pub fn eval_form(form: &TropicalLinearForm, x: &TropicalPoint) -> Result<Rational> {
    form.eval(x)
}

pub fn argmax_set(form: &TropicalLinearForm, x: &TropicalPoint) -> Result<BTreeSet<usize>> {
    form.argmax(x)
}

/// The data together with its weights.
#[derive(Clone, Debug)]
pub struct WeightedObjective {
    data: DataSet,
    weights: WeightVector,
}

impl WeightedObjective {
    pub fn new(data: DataSet, weights: WeightVector) -> Result<Self> {
        weights.check_len(data.m())?;
        Ok(WeightedObjective { data, weights })
    }

    pub fn data(&self) -> &DataSet {
        &self.data
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn forms(&self) -> impl Iterator<Item = TropicalLinearForm> + '_ {
        self.data
            .points()
            .iter()
            .map(|v| TropicalLinearForm::centered_at(v.clone()))
    }

    /// Objective at a representative that need not be zero-sum. Shifting `x` by
    /// `c·1` shifts the value by `c`.
    pub fn eval_raw(&self, x: &[Rational]) -> Result<Rational> {
        let mut total = Rational::zero();
        for (form, w) in self.forms().zip(self.weights.as_slice()) {
            total += w * form.eval_raw(x)?;
        }
        Ok(total)
    }

    pub fn eval(&self, x: &TropicalPoint) -> Result<Rational> {
        self.eval_raw(x.coords())
    }

    /// True iff some factor attains its maximum at least twice at `x`.
    pub fn on_hypersurface(&self, x: &TropicalPoint) -> Result<bool> {
        for form in self.forms() {
            if form.argmax(x)?.len() >= 2 {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

pub fn eval_objective(obj: &WeightedObjective, x: &TropicalPoint) -> Result<Rational> {
    obj.eval(x)
}

pub fn on_hypersurface(obj: &WeightedObjective, x: &TropicalPoint) -> Result<bool> {
    obj.on_hypersurface(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::asym_distance;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pt(c: &[&str]) -> TropicalPoint {
        TropicalPoint::parse(c).unwrap()
    }

    fn running(w: &[&str]) -> WeightedObjective {
        let data = DataSet::new(vec![pt(&["0", "0", "0"]), pt(&["1", "-1", "0"])]).unwrap();
        let w = WeightVector::new(w.iter().map(|s| q(s)).collect()).unwrap();
        WeightedObjective::new(data, w).unwrap()
    }

    #[test]
    fn form_evaluation() {
        let f = TropicalLinearForm::centered_at(pt(&["1", "-1", "0"]));
        assert_eq!(eval_form(&f, &pt(&["0", "0", "0"])).unwrap(), q("1"));
        assert_eq!(eval_form(&f, &pt(&["1", "-1", "0"])).unwrap(), q("0"));
        let g = TropicalLinearForm::centered_at(pt(&["0", "0", "0"]));
        assert_eq!(eval_form(&g, &pt(&["1/3", "-2/3", "1/3"])).unwrap(), q("1/3"));
    }

    #[test]
    fn argmax_examples() {
        let f = TropicalLinearForm::centered_at(pt(&["1", "-1", "0"]));
        let g = TropicalLinearForm::centered_at(pt(&["0", "0", "0"]));
        let x = pt(&["0", "-1", "0"]);
        assert_eq!(argmax_set(&f, &x).unwrap(), BTreeSet::from([1, 2]));
        assert_eq!(argmax_set(&g, &pt(&["0", "0", "0"])).unwrap(), BTreeSet::from([0, 1, 2]));
        assert_eq!(argmax_set(&g, &x).unwrap(), BTreeSet::from([0, 2]));
        assert!(argmax_set(&g, &pt(&["0", "0"])).is_err());
    }

    #[test]
    fn objective_examples() {
        assert_eq!(eval_objective(&running(&["1/3", "2/3"]), &pt(&["1", "-1", "0"])).unwrap(), q("1/3"));
        assert_eq!(
            eval_objective(&running(&["1/2", "1/2"]), &pt(&["1/3", "-2/3", "1/3"])).unwrap(),
            q("1/3")
        );
        let single = WeightedObjective::new(
            DataSet::new(vec![pt(&["2", "-5", "3"])]).unwrap(),
            WeightVector::uniform(1).unwrap(),
        )
        .unwrap();
        assert_eq!(eval_objective(&single, &pt(&["2", "-5", "3"])).unwrap(), q("0"));
        assert!(WeightedObjective::new(running(&["1/2", "1/2"]).data().clone(), WeightVector::uniform(3).unwrap()).is_err());
    }

    #[test]
    fn hypersurface_examples() {
        let obj = running(&["1/3", "2/3"]);
        assert!(on_hypersurface(&obj, &pt(&["0", "-1", "0"])).unwrap());
        let origin_only = WeightedObjective::new(
            DataSet::new(vec![pt(&["0", "0", "0"])]).unwrap(),
            WeightVector::uniform(1).unwrap(),
        )
        .unwrap();
        assert!(!on_hypersurface(&origin_only, &pt(&["1", "0", "-1"])).unwrap());
        assert!(on_hypersurface(&obj, &pt(&["1", "-1", "0"])).unwrap());
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..7).prop_map(|(a, b)| Rational::new(a, b))
    }

    type Instance = (Vec<Vec<Rational>>, Vec<Rational>, Vec<Rational>, Vec<Rational>, Vec<Rational>);

    fn instance() -> impl Strategy<Value = Instance> {
        (1usize..5, 2usize..5).prop_flat_map(|(m, n)| {
            (
                proptest::collection::vec(proptest::collection::vec(small(), n), m),
                proptest::collection::vec((1i64..20, 1i64..20).prop_map(|(a, b)| Rational::new(a, b)), m),
                proptest::collection::vec((1i64..20, 1i64..20).prop_map(|(a, b)| Rational::new(a, b)), m),
                proptest::collection::vec(small(), n),
                proptest::collection::vec(small(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn objective_properties((rows, w1, w2, x, y) in instance(), c in small()) {
            let data = DataSet::from_rows(&rows).unwrap();
            let w = WeightVector::normalized(w1).unwrap();
            let w_alt = WeightVector::normalized(w2).unwrap();
            let obj = WeightedObjective::new(data.clone(), w.clone()).unwrap();
            let obj_alt = WeightedObjective::new(data.clone(), w_alt).unwrap();
            let xp = crate::point::normalize(&x).unwrap();
            let yp = crate::point::normalize(&y).unwrap();

            // n · f(x) is the weighted sum of distances
            let n = Rational::from(data.n());
            let dist_sum: Rational = data.points().iter().zip(w.as_slice())
                .map(|(v, wi)| wi * asym_distance(&xp, v).unwrap())
                .sum();
            prop_assert_eq!(obj.eval(&xp).unwrap() * &n, dist_sum);

            // shifting the representative by c·1 adds c
            let shifted: Vec<_> = xp.coords().iter().map(|a| a + &c).collect();
            prop_assert_eq!(obj.eval_raw(&shifted).unwrap(), obj.eval(&xp).unwrap() + &c);

            // convexity along segments
            for t in [Rational::new(1, 4), Rational::new(1, 2), Rational::new(3, 4)] {
                let s = Rational::one() - &t;
                let mid: Vec<_> = xp.coords().iter().zip(yp.coords()).map(|(a, b)| &t * a + &s * b).collect();
                let mid = crate::point::normalize(&mid).unwrap();
                prop_assert!(obj.eval(&mid).unwrap() <= &t * obj.eval(&xp).unwrap() + &s * obj.eval(&yp).unwrap());
            }

            // ties do not depend on the weights
            prop_assert_eq!(obj.on_hypersurface(&xp).unwrap(), obj_alt.on_hypersurface(&xp).unwrap());
        }
    }
}
