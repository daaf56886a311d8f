//! Objective vectors and Pareto dominance (maximize convention).

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use crate::error::{check_dim, Error, Result};

/// A point in objective space. All objectives are maximized.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("objective vector must have at least one entry"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "objective {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(ObjectiveVector(values))
    }

    /// Wraps values already known to be finite and non-empty.
    pub(crate) fn from_trusted(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty() && values.iter().all(|v| v.is_finite()));
        ObjectiveVector(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ObjectiveVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        ObjectiveVector::new(values)
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Outcome of comparing `a` against `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DominanceRelation {
    Dominates,
    DominatedBy,
    Incomparable,
    Equal,
}

impl DominanceRelation {
    pub fn flip(self) -> Self {
        match self {
            DominanceRelation::Dominates => DominanceRelation::DominatedBy,
            DominanceRelation::DominatedBy => DominanceRelation::Dominates,
            other => other,
        }
    }
}

/// Relation of `a` to `b` on raw slices of equal length. Stops as soon as the
/// pair is known to be incomparable; `examined` receives the number of
/// objectives looked at.
#[inline]
pub(crate) fn relation_counted(a: &[f64], b: &[f64], examined: &mut u64) -> DominanceRelation {
    debug_assert_eq!(a.len(), b.len());
    let mut better = false;
    let mut worse = false;
    let mut seen = 0u64;
    for (x, y) in a.iter().zip(b) {
        seen += 1;
        if x > y {
            better = true;
            if worse {
                break;
            }
        } else if x < y {
            worse = true;
            if better {
                break;
            }
        }
    }
    *examined += seen;
    match (better, worse) {
        (true, true) => DominanceRelation::Incomparable,
        (true, false) => DominanceRelation::Dominates,
        (false, true) => DominanceRelation::DominatedBy,
        (false, false) => DominanceRelation::Equal,
    }
}

#[inline]
pub(crate) fn relation(a: &[f64], b: &[f64]) -> DominanceRelation {
    let mut sink = 0;
    relation_counted(a, b, &mut sink)
}

/// `a >= b` componentwise.
#[inline]
pub(crate) fn covers(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Counted variant of [`covers`]; also reports whether `a == b`.
#[inline]
pub(crate) fn covers_counted(a: &[f64], b: &[f64], examined: &mut u64) -> (bool, bool) {
    let mut equal = true;
    for (x, y) in a.iter().zip(b) {
        *examined += 1;
        if x < y {
            return (false, false);
        }
        if x != y {
            equal = false;
        }
    }
    (true, equal)
}

pub fn compare(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<DominanceRelation> {
    check_dim(a.dim(), b.dim())?;
    Ok(relation(a, b))
}

/// `a` weakly dominates `b`: no worse in every objective.
pub fn weakly_dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    check_dim(a.dim(), b.dim())?;
    Ok(covers(a, b))
}

/// Probability that two random vectors with independent, continuous
/// objectives are mutually non-dominated: `1 - 1/2^(m-1)`.
pub fn nd_pair_probability(m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("objective count must be at least 1"));
    }
    Ok(1.0 - 0.5f64.powi((m - 1) as i32))
}

/// Probability that `mu` independent random pairs are all mutually
/// non-dominated.
pub fn all_pairs_nd_probability(m: usize, mu: u64) -> Result<f64> {
    let p = nd_pair_probability(m)?;
    let mu = i32::try_from(mu).map_err(|_| Error::domain("pair count too large"))?;
    Ok(p.powi(mu))
}

/// Ordering used to make the non-dominated filter single-pass: any vector that
/// dominates another sorts before it.
fn dominance_first(a: &[f64], b: &[f64]) -> Ordering {
    let sa: f64 = a.iter().sum();
    let sb: f64 = b.iter().sum();
    sb.total_cmp(&sa).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            match y.total_cmp(x) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Indices of the vectors not dominated by any other vector in `points`, in
/// input order. Duplicates of a surviving vector all survive.
pub fn nondominated_indices<V: AsRef<[f64]>>(points: &[V]) -> Result<Vec<usize>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let m = first.as_ref().len();
    for p in points {
        check_dim(m, p.as_ref().len())?;
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| dominance_first(points[i].as_ref(), points[j].as_ref()));

    let mut kept: Vec<usize> = Vec::new();
    'outer: for &i in &order {
        let p = points[i].as_ref();
        for &j in &kept {
            if relation(points[j].as_ref(), p) == DominanceRelation::Dominates {
                continue 'outer;
            }
        }
        kept.push(i);
    }
    kept.sort_unstable();
    Ok(kept)
}

pub fn filter_nondominated(points: &[ObjectiveVector]) -> Result<Vec<ObjectiveVector>> {
    Ok(nondominated_indices(points)?
        .into_iter()
        .map(|i| points[i].clone())
        .collect())
}
