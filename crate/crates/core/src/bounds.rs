//! Closed systems of difference constraints `x_k - x_j <= c` on the torus.
//!
//! After closure, entry `(j, k)` is the exact supremum of `x_k - x_j` over the
//! polyhedron (all-pairs shortest paths are the LP optimum for difference
//! constraints), or `None` when that difference is unbounded above.

use std::collections::HashSet;

use crate::point::{normalize, TropicalPoint};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct DifferenceBounds {
    n: usize,
    sup: Vec<Option<Rational>>,
}

impl DifferenceBounds {
    pub fn unconstrained(n: usize) -> Self {
        let mut sup = vec![None; n * n];
        for j in 0..n {
            sup[j * n + j] = Some(Rational::zero());
        }
        DifferenceBounds { n, sup }
    }

    pub fn dim_ambient(&self) -> usize {
        self.n
    }

    pub fn sup(&self, j: usize, k: usize) -> Option<&Rational> {
        self.sup[j * self.n + k].as_ref()
    }

    /// Records `x_k - x_j <= c` without re-closing.
    pub fn tighten(&mut self, j: usize, k: usize, c: Rational) {
        let slot = &mut self.sup[j * self.n + k];
        match slot {
            Some(old) if *old <= c => {}
            _ => *slot = Some(c),
        }
    }

    /// Floyd-Warshall closure. Returns false if the system is infeasible.
    pub fn close(&mut self) -> bool {
        let n = self.n;
        for via in 0..n {
            for j in 0..n {
                let Some(a) = self.sup[j * n + via].clone() else { continue };
                for k in 0..n {
                    let Some(b) = &self.sup[via * n + k] else { continue };
                    let cand = &a + b;
                    let slot = &mut self.sup[j * n + k];
                    if slot.as_ref().is_none_or(|old| cand < *old) {
                        *slot = Some(cand);
                    }
                }
            }
        }
        (0..n).all(|j| !self.sup[j * n + j].as_ref().expect("diagonal").is_negative())
    }

    /// Adds `x_k - x_j <= c` to a closed system and re-closes incrementally.
    /// Returns false if the result is infeasible.
    pub fn add_closed(&mut self, j: usize, k: usize, c: &Rational) -> bool {
        let n = self.n;
        if let Some(back) = self.sup(k, j) {
            if (back + c).is_negative() {
                return false;
            }
        }
        let from_j: Vec<Option<Rational>> = (0..n).map(|p| self.sup[p * n + j].clone()).collect();
        let to_k: Vec<Option<Rational>> = (0..n).map(|q| self.sup[k * n + q].clone()).collect();
        for (p, a) in from_j.iter().enumerate() {
            let Some(a) = a else { continue };
            let head = a + c;
            for (q, b) in to_k.iter().enumerate() {
                let Some(b) = b else { continue };
                let cand = &head + b;
                let slot = &mut self.sup[p * n + q];
                if slot.as_ref().is_none_or(|old| cand < *old) {
                    *slot = Some(cand);
                }
            }
        }
        true
    }

    pub fn is_bounded(&self) -> bool {
        self.sup.iter().all(Option::is_some)
    }

    /// True iff `x_k - x_j` is constant on the polyhedron.
    pub fn is_fixed(&self, j: usize, k: usize) -> bool {
        match (self.sup(j, k), self.sup(k, j)) {
            (Some(a), Some(b)) => (a + b).is_zero(),
            _ => false,
        }
    }

    /// Coordinates grouped by fixed differences; one representative (the
    /// smallest index) per class, in increasing order.
    pub fn class_representatives(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&k| (0..k).all(|j| !self.is_fixed(j, k)))
            .collect()
    }

    /// Dimension of the (nonempty) polyhedron inside the torus.
    pub fn dim(&self) -> usize {
        self.class_representatives().len() - 1
    }

    /// The unique point when every difference is fixed.
    pub fn fixed_point(&self) -> Option<TropicalPoint> {
        let raw = (0..self.n)
            .map(|k| self.sup(0, k).cloned())
            .collect::<Option<Vec<_>>>()?;
        if (0..self.n).any(|k| !self.is_fixed(0, k)) {
            return None;
        }
        Some(normalize(&raw).expect("n >= 2"))
    }

    #[cfg(test)]
    /// All faces obtained by repeatedly pinning a difference at its supremum,
    /// including `self`. Each face is reported once.
    pub fn faces(&self) -> Vec<DifferenceBounds> {
        let mut seen: HashSet<DifferenceBounds> = HashSet::new();
        let mut stack = vec![self.clone()];
        seen.insert(self.clone());
        let mut out = Vec::new();
        while let Some(face) = stack.pop() {
            for child in face.facets() {
                if !seen.contains(&child) {
                    seen.insert(child.clone());
                    stack.push(child);
                }
            }
            out.push(face);
        }
        out
    }

    /// Faces one step down: `x_k - x_j` pinned at its finite supremum for
    /// class representatives `j != k`.
    pub fn facets(&self) -> Vec<DifferenceBounds> {
        let reps = self.class_representatives();
        let mut out = Vec::new();
        for &j in &reps {
            for &k in &reps {
                if j == k {
                    continue;
                }
                let Some(top) = self.sup(j, k) else { continue };
                let mut child = self.clone();
                let ok = child.add_closed(k, j, &-top);
                debug_assert!(ok, "pinning at the supremum keeps the face nonempty");
                if ok {
                    out.push(child);
                }
            }
        }
        out
    }

    /// Vertices of a bounded nonempty polyhedron, sorted lexicographically.
    pub fn vertices(&self) -> Vec<TropicalPoint> {
        debug_assert!(self.is_bounded());
        let mut seen: HashSet<DifferenceBounds> = HashSet::new();
        let mut stack = vec![self.clone()];
        let mut out = Vec::new();
        while let Some(face) = stack.pop() {
            if face.class_representatives().len() == 1 {
                out.push(face.fixed_point().expect("single class"));
                continue;
            }
            for child in face.facets() {
                if seen.insert(child.clone()) {
                    stack.push(child);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}
