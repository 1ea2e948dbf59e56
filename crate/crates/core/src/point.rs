//! Points of the tropical projective torus `R^n / R·1`, data sets, weight
//! vectors and the asymmetric tropical distance.
//!
//! Every point is stored by its representative in the zero-sum hyperplane
//! `H0 = { x : x_1 + ... + x_n = 0 }`; constructors project onto it.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of the tropical projective torus, held as its zero-sum representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropicalPoint {
    coords: Vec<Rational>,
}

/// Projects `raw` onto the zero-sum hyperplane: `raw - mean(raw)·1`.
pub fn normalize(raw: &[Rational]) -> Result<TropicalPoint> {
    if raw.len() < 2 {
        return Err(Error::DimensionTooSmall(raw.len()));
    }
    let mean = raw.iter().sum::<Rational>() / Rational::from(raw.len());
    Ok(TropicalPoint {
        coords: raw.iter().map(|c| c - &mean).collect(),
    })
}

impl TropicalPoint {
    pub fn new(raw: Vec<Rational>) -> Result<Self> {
        normalize(&raw)
    }

    /// Parses each coordinate with [`Rational::parse`], then normalizes.
    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        let raw = coords
            .iter()
            .map(|s| Rational::parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        normalize(&raw)
    }

    pub fn from_integers(coords: &[i64]) -> Result<Self> {
        normalize(&coords.iter().map(|&c| Rational::from_integer(c)).collect::<Vec<_>>())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        Ok(())
    }

    /// Classical coordinate-wise mean of a nonempty list of points.
    pub fn mean(points: &[TropicalPoint]) -> Result<TropicalPoint> {
        let first = points.first().ok_or(Error::EmptyData)?;
        let n = first.dim();
        let mut acc = vec![Rational::zero(); n];
        for p in points {
            p.check_dim(n)?;
            for (a, c) in acc.iter_mut().zip(&p.coords) {
                *a += c;
            }
        }
        let count = Rational::from(points.len());
        normalize(&acc.into_iter().map(|a| a / &count).collect::<Vec<_>>())
    }
}

impl fmt::Debug for TropicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for TropicalPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TropicalPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Rational>::deserialize(deserializer)?;
        normalize(&raw).map_err(serde::de::Error::custom)
    }
}

/// `d(x, y) = n · max_j (x_j - y_j)` on zero-sum representatives.
pub fn asym_distance(x: &TropicalPoint, y: &TropicalPoint) -> Result<Rational> {
    y.check_dim(x.dim())?;
    let max = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| a - b)
        .max()
        .expect("dimension >= 2");
    Ok(max * Rational::from(x.dim()))
}

/// `d(x, y) = n · max_j (x_j - y_j) + sum_j (y_j - x_j)` for arbitrary representatives.
pub fn asym_distance_general(x: &[Rational], y: &[Rational]) -> Result<Rational> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::DimensionTooSmall(x.len()));
    }
    let diffs: Vec<Rational> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let max = diffs.iter().max().expect("nonempty").clone();
    let total: Rational = diffs.iter().sum();
    Ok(max * Rational::from(x.len()) - total)
}

/// A finite multiset of points of a common dimension, optionally labelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataSet {
    points: Vec<TropicalPoint>,
    labels: Option<Vec<String>>,
}

impl DataSet {
    pub fn new(points: Vec<TropicalPoint>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyData)?;
        let n = first.dim();
        for p in &points {
            p.check_dim(n)?;
        }
        Ok(DataSet { points, labels: None })
    }

    pub fn with_labels(points: Vec<TropicalPoint>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::Parse(format!(
                "{} labels given for {} points",
                labels.len(),
                points.len()
            )));
        }
        let mut data = DataSet::new(points)?;
        data.labels = Some(labels);
        Ok(data)
    }

    /// Builds a data set from raw rows, normalizing each.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        DataSet::new(rows.iter().map(|r| normalize(r)).collect::<Result<Vec<_>>>()?)
    }

    pub fn from_integer_rows(rows: &[&[i64]]) -> Result<Self> {
        DataSet::new(
            rows.iter()
                .map(|r| TropicalPoint::from_integers(r))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn points(&self) -> &[TropicalPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &TropicalPoint {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of data points.
    pub fn m(&self) -> usize {
        self.points.len()
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.points[0].dim()
    }

    /// Coordinate `v_ij`.
    pub fn coord(&self, i: usize, j: usize) -> &Rational {
        &self.points[i].coords[j]
    }

    /// Reorders the coordinates of every point: new coordinate `k` is old `perm[k]`.
    pub fn permute_coords(&self, perm: &[usize]) -> Result<DataSet> {
        let points = self
            .points
            .iter()
            .map(|p| normalize(&perm.iter().map(|&k| p.coords[k].clone()).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        Ok(DataSet { points, labels: self.labels.clone() })
    }
}

/// Strictly positive weights summing to exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<Rational>,
}

impl WeightVector {
    /// Accepts weights that are already positive and sum to one.
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        Self::check_positive(&weights)?;
        let total: Rational = weights.iter().sum();
        if total != Rational::one() {
            return Err(Error::WeightSum(total.to_string()));
        }
        Ok(WeightVector { weights })
    }

    /// Rescales positive weights to sum to one; the Fermat-Weber set is unchanged.
    pub fn normalized(weights: Vec<Rational>) -> Result<Self> {
        Self::check_positive(&weights)?;
        let total: Rational = weights.iter().sum();
        Ok(WeightVector {
            weights: weights.into_iter().map(|w| w / &total).collect(),
        })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyData);
        }
        let w = Rational::new(1, m as i64);
        Ok(WeightVector { weights: vec![w; m] })
    }

    pub fn parse_list(s: &str) -> Result<Self> {
        let weights = s
            .split(',')
            .map(Rational::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::normalized(weights)
    }

    fn check_positive(weights: &[Rational]) -> Result<()> {
        if weights.is_empty() {
            return Err(Error::EmptyData);
        }
        if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(Error::NonPositiveWeight { index, value: w.to_string() });
        }
        Ok(())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn check_len(&self, m: usize) -> Result<()> {
        if self.len() != m {
            return Err(Error::WeightCount { expected: m, found: self.len() });
        }
        Ok(())
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.weights.serialize(serializer)
    }
}
