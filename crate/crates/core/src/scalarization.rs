//! Scalarizing functionals.
//!
//! Everything here uses the minimization convention. The general functional
//! is the polyhedral one,
//! `phi(y) = max_i (<a_i, y> - <a_i, w> - alpha_i) / <a_i, k>`,
//! i.e. the smallest `t` with `y` in `w + t k + A` where
//! `A = { y : <a_i, y> <= alpha_i }`. The named methods are special cases;
//! [`Functional::encode`] builds the matching general form where one exists.
//! [`scalarize_landscape`] bridges to the maximizing landscapes by negation.

use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::landscape::{NkInstance, Solution, MAX_ENUMERATION_N};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_finite(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite")))
    }
}

/// One halfspace `<a, y> <= alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub a: Vec<f64>,
    pub alpha: f64,
}

/// Intersection of halfspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralSet {
    rows: Vec<Halfspace>,
    dim: usize,
}

impl PolyhedralSet {
    pub fn new(rows: Vec<Halfspace>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::domain("a polyhedral set needs at least one row"));
        };
        let dim = first.a.len();
        if dim == 0 {
            return Err(Error::domain("rows must have at least one coefficient"));
        }
        for row in &rows {
            check_dim(dim, row.a.len())?;
            check_finite("row coefficients", &row.a)?;
            if !row.alpha.is_finite() {
                return Err(Error::domain("row offsets must be finite"));
            }
            if row.a.iter().all(|&v| v == 0.0) {
                return Err(Error::domain("rows must be nonzero"));
            }
        }
        Ok(PolyhedralSet { rows, dim })
    }

    pub fn rows(&self) -> &[Halfspace] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.rows.iter().all(|r| dot(&r.a, y) <= r.alpha)
    }
}

/// The polyhedral functional with shift `w` and direction `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralScalarizer {
    set: PolyhedralSet,
    w: Vec<f64>,
    k: Vec<f64>,
    /// `<a_i, k>` per row, all positive.
    denominators: Vec<f64>,
}

impl GeneralScalarizer {
    pub fn new(set: PolyhedralSet, w: Vec<f64>, k: Vec<f64>) -> Result<Self> {
        check_dim(set.dim(), w.len())?;
        check_dim(set.dim(), k.len())?;
        check_finite("reference", &w)?;
        check_finite("direction", &k)?;
        let denominators: Vec<f64> = set.rows.iter().map(|r| dot(&r.a, &k)).collect();
        if let Some(i) = denominators.iter().position(|&d| !(d > 0.0)) {
            return Err(Error::domain(format!(
                "row {i} has <a, k> = {}; every row needs <a, k> > 0",
                denominators[i]
            )));
        }
        Ok(GeneralScalarizer { set, w, k, denominators })
    }

    pub fn set(&self) -> &PolyhedralSet {
        &self.set
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        check_dim(self.dim(), y.len())?;
        Ok(self
            .set
            .rows
            .iter()
            .zip(&self.denominators)
            .map(|(r, d)| (dot(&r.a, y) - dot(&r.a, &self.w) - r.alpha) / d)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Whether `y` lies in `w + A`.
    pub fn in_shifted_set(&self, y: &[f64]) -> Result<bool> {
        check_dim(self.dim(), y.len())?;
        let shifted: Vec<f64> = y.iter().zip(&self.w).map(|(a, b)| a - b).collect();
        Ok(self.set.contains(&shifted))
    }
}

pub fn phi_general(s: &GeneralScalarizer, y: &[f64]) -> Result<f64> {
    s.eval(y)
}

/// `max_i lambda_i (y_i - w_i)`.
pub fn chebyshev(y: &[f64], lambda: &[f64], w: &[f64]) -> Result<f64> {
    check_dim(lambda.len(), y.len())?;
    check_dim(lambda.len(), w.len())?;
    if lambda.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::domain("Chebyshev weights must be positive"));
    }
    Ok(lambda
        .iter()
        .zip(y.iter().zip(w))
        .map(|(l, (a, b))| l * (a - b))
        .fold(f64::NEG_INFINITY, f64::max))
}

fn check_sum_weights(a: &[f64]) -> Result<()> {
    if a.is_empty() || a.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) || a.iter().all(|&v| v == 0.0) {
        return Err(Error::domain("weighted-sum weights must be nonnegative and not all zero"));
    }
    Ok(())
}

/// `<a, y>`.
pub fn weighted_sum(y: &[f64], a: &[f64]) -> Result<f64> {
    check_dim(a.len(), y.len())?;
    check_sum_weights(a)?;
    Ok(dot(a, y))
}

/// Value of an ε-constraint problem at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarValue {
    Value(f64),
    Infeasible,
}

impl ScalarValue {
    pub fn value(self) -> Option<f64> {
        match self {
            ScalarValue::Value(v) => Some(v),
            ScalarValue::Infeasible => None,
        }
    }

    /// Total order with infeasible above every value.
    fn key(self) -> (bool, f64) {
        match self {
            ScalarValue::Value(v) => (false, v),
            ScalarValue::Infeasible => (true, 0.0),
        }
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Value(v) => write!(f, "{v}"),
            ScalarValue::Infeasible => f.write_str("infeasible"),
        }
    }
}

/// `inf { t : y in t k + b - R^m_+ }` for `k >= 0` with at least one positive
/// component. Components with `k_i = 0` act as hard bounds `y_i <= b_i`.
fn orthant_infimum(y: &[f64], b: &[f64], k: &[f64]) -> ScalarValue {
    let mut t = f64::NEG_INFINITY;
    for ((yi, bi), ki) in y.iter().zip(b).zip(k) {
        if *ki > 0.0 {
            t = t.max((yi - bi) / ki);
        } else if yi > bi {
            return ScalarValue::Infeasible;
        }
    }
    ScalarValue::Value(t)
}

/// Minimizes `y_j` subject to `y_i <= eps_i` for `i != j`. `eps` lists the
/// bounds of the other objectives in order, so it has `m - 1` entries.
pub fn epsilon_constraint(y: &[f64], j: usize, eps: &[f64]) -> Result<ScalarValue> {
    let m = y.len();
    if j >= m {
        return Err(Error::Index { index: j, len: m });
    }
    check_dim(m - 1, eps.len())?;
    let mut b = Vec::with_capacity(m);
    b.extend_from_slice(&eps[..j]);
    b.push(0.0);
    b.extend_from_slice(&eps[j..]);
    let mut k = vec![0.0; m];
    k[j] = 1.0;
    Ok(orthant_infimum(y, &b, &k))
}

/// `min t` with `y in t k + a - R^m_+`, i.e. `max_i (y_i - a_i) / k_i`.
pub fn pascoletti_serafini(y: &[f64], a: &[f64], k: &[f64]) -> Result<f64> {
    check_dim(a.len(), y.len())?;
    check_dim(a.len(), k.len())?;
    if k.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::domain("Pascoletti-Serafini direction must be strictly positive"));
    }
    Ok(y.iter()
        .zip(a)
        .zip(k)
        .map(|((yi, ai), ki)| (yi - ai) / ki)
        .fold(f64::NEG_INFINITY, f64::max))
}

fn unit_rows(m: usize, scale: impl Fn(usize) -> f64) -> Vec<Halfspace> {
    (0..m)
        .map(|i| {
            let mut a = vec![0.0; m];
            a[i] = scale(i);
            Halfspace { a, alpha: 0.0 }
        })
        .collect()
}

/// A scalarizing functional with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    Chebyshev { lambda: Vec<f64>, w: Vec<f64> },
    WeightedSum { a: Vec<f64> },
    EpsilonConstraint { j: usize, eps: Vec<f64> },
    PascolettiSerafini { a: Vec<f64>, k: Vec<f64> },
    General(GeneralScalarizer),
}

impl Functional {
    pub fn name(&self) -> &'static str {
        match self {
            Functional::Chebyshev { .. } => "chebyshev",
            Functional::WeightedSum { .. } => "wsum",
            Functional::EpsilonConstraint { .. } => "eps",
            Functional::PascolettiSerafini { .. } => "ps",
            Functional::General(_) => "general",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Functional::Chebyshev { lambda, .. } => lambda.len(),
            Functional::WeightedSum { a } => a.len(),
            Functional::EpsilonConstraint { eps, .. } => eps.len() + 1,
            Functional::PascolettiSerafini { a, .. } => a.len(),
            Functional::General(s) => s.dim(),
        }
    }

    pub fn evaluate(&self, y: &[f64]) -> Result<ScalarValue> {
        match self {
            Functional::Chebyshev { lambda, w } => chebyshev(y, lambda, w).map(ScalarValue::Value),
            Functional::WeightedSum { a } => weighted_sum(y, a).map(ScalarValue::Value),
            Functional::EpsilonConstraint { j, eps } => epsilon_constraint(y, *j, eps),
            Functional::PascolettiSerafini { a, k } => pascoletti_serafini(y, a, k).map(ScalarValue::Value),
            Functional::General(s) => s.eval(y).map(ScalarValue::Value),
        }
    }

    /// The equivalent polyhedral form. The ε-constraint has none with
    /// `<a_i, k> > 0` on every row, so it is reported as a domain error.
    pub fn encode(&self) -> Result<GeneralScalarizer> {
        match self {
            Functional::Chebyshev { lambda, w } => {
                if lambda.iter().any(|&l| !(l > 0.0)) {
                    return Err(Error::domain("Chebyshev weights must be positive"));
                }
                let set = PolyhedralSet::new(unit_rows(lambda.len(), |i| lambda[i]))?;
                let k = lambda.iter().map(|l| 1.0 / l).collect();
                GeneralScalarizer::new(set, w.clone(), k)
            }
            Functional::WeightedSum { a } => {
                check_sum_weights(a)?;
                let norm2 = dot(a, a);
                let set = PolyhedralSet::new(vec![Halfspace { a: a.clone(), alpha: 0.0 }])?;
                let k = a.iter().map(|v| v / norm2).collect();
                GeneralScalarizer::new(set, vec![0.0; a.len()], k)
            }
            Functional::PascolettiSerafini { a, k } => {
                let set = PolyhedralSet::new(unit_rows(a.len(), |_| 1.0))?;
                GeneralScalarizer::new(set, a.clone(), k.clone())
            }
            Functional::General(s) => Ok(s.clone()),
            Functional::EpsilonConstraint { .. } => Err(Error::domain(
                "the epsilon-constraint functional has no polyhedral form with <a, k> > 0 on every row",
            )),
        }
    }
}

/// Which way the landscape objectives are optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sense {
    /// Objectives are maximized; the functional is applied to `-f(x)`.
    #[default]
    Maximize,
    /// Objectives are minimized; the functional is applied to `f(x)`.
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarOptimum {
    pub solution: Solution,
    pub objectives: Vec<f64>,
    pub value: ScalarValue,
}

/// Exhaustive minimization of `functional` over every solution of `inst`.
/// Ties go to the lexicographically smallest bit string.
pub fn scalarize_landscape(inst: &NkInstance, functional: &Functional, sense: Sense) -> Result<ScalarOptimum> {
    if inst.n() > MAX_ENUMERATION_N {
        return Err(Error::capacity(format!(
            "exhaustive scan needs n <= {MAX_ENUMERATION_N}, got {}",
            inst.n()
        )));
    }
    check_dim(inst.m(), functional.dim())?;
    let all = inst.evaluate_all()?;
    let mut best: Option<(usize, ScalarValue)> = None;
    let mut y = vec![0.0; inst.m()];
    for (idx, f) in all.iter().enumerate() {
        for (yi, fi) in y.iter_mut().zip(f) {
            *yi = match sense {
                Sense::Maximize => -fi,
                Sense::Minimize => *fi,
            };
        }
        let v = functional.evaluate(&y)?;
        let better = match best {
            None => true,
            Some((_, b)) => v.key() < b.key(),
        };
        if better {
            best = Some((idx, v));
        }
    }
    let (idx, value) = best.expect("at least one solution");
    if value == ScalarValue::Infeasible {
        return Err(Error::domain("no solution satisfies the epsilon bounds"));
    }
    Ok(ScalarOptimum {
        solution: Solution::from_index(idx as u64, inst.n()),
        objectives: all[idx].clone(),
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::{relation, DominanceRelation};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    fn random_vec(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..m).map(|_| rng.random_range(lo..hi)).collect()
    }

    fn general_example(rng: &mut ChaCha8Rng, m: usize) -> GeneralScalarizer {
        // rows with positive coefficients guarantee <a, k> > 0 for positive k
        let rows = (0..rng.random_range(1..=m + 2))
            .map(|_| Halfspace {
                a: random_vec(rng, m, 0.05, 2.0),
                alpha: rng.random_range(-1.0..1.0),
            })
            .collect();
        let set = PolyhedralSet::new(rows).unwrap();
        GeneralScalarizer::new(set, random_vec(rng, m, -1.0, 1.0), random_vec(rng, m, 0.1, 2.0)).unwrap()
    }

    #[test]
    fn general_examples() {
        let set = PolyhedralSet::new(vec![Halfspace { a: vec![1.0, 0.0, 0.0], alpha: 0.0 }]).unwrap();
        let s = GeneralScalarizer::new(set, vec![0.0; 3], vec![1.0, 5.0, -2.0]).unwrap();
        assert_eq!(phi_general(&s, &[0.4, 9.0, -3.0]).unwrap(), 0.4);

        let set = PolyhedralSet::new(unit_rows(4, |_| 1.0)).unwrap();
        let s = GeneralScalarizer::new(set, vec![0.0; 4], vec![1.0; 4]).unwrap();
        assert_eq!(phi_general(&s, &[0.1, 0.9, -2.0, 0.3]).unwrap(), 0.9);
    }

    #[test]
    fn invariant_violations() {
        assert!(PolyhedralSet::new(vec![]).is_err());
        assert!(PolyhedralSet::new(vec![Halfspace { a: vec![0.0, 0.0], alpha: 1.0 }]).is_err());
        let set = PolyhedralSet::new(vec![Halfspace { a: vec![1.0, -1.0], alpha: 0.0 }]).unwrap();
        assert!(matches!(
            GeneralScalarizer::new(set.clone(), vec![0.0; 2], vec![1.0, 1.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            GeneralScalarizer::new(set, vec![0.0; 3], vec![1.0, 0.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn named_examples() {
        assert_eq!(chebyshev(&[0.3, 0.7], &[1.0, 1.0], &[0.0, 0.0]).unwrap(), 0.7);
        assert_eq!(chebyshev(&[0.3, 0.7], &[2.0, 0.5], &[0.3, 0.7]).unwrap(), 0.0);
        assert!(chebyshev(&[0.3, 0.7], &[0.0, 1.0], &[0.0, 0.0]).is_err());

        assert_eq!(weighted_sum(&[0.3, 0.7], &[1.0, 0.0]).unwrap(), 0.3);
        assert_eq!(weighted_sum(&[1.0, 1.0], &[0.5, 0.5]).unwrap(), 1.0);
        assert!(weighted_sum(&[1.0, 1.0], &[0.0, 0.0]).is_err());
        assert!(weighted_sum(&[1.0, 1.0], &[-1.0, 2.0]).is_err());

        assert_eq!(epsilon_constraint(&[0.3, 0.4], 0, &[0.5]).unwrap(), ScalarValue::Value(0.3));
        assert_eq!(epsilon_constraint(&[0.3, 0.6], 0, &[0.5]).unwrap(), ScalarValue::Infeasible);
        assert_eq!(epsilon_constraint(&[0.3, 0.5], 0, &[0.5]).unwrap(), ScalarValue::Value(0.3));
        assert_eq!(
            epsilon_constraint(&[0.9, 0.2, 0.4], 1, &[1.0, 0.4]).unwrap(),
            ScalarValue::Value(0.2)
        );
        assert!(matches!(epsilon_constraint(&[0.3, 0.4], 2, &[0.5]), Err(Error::Index { .. })));
        assert!(matches!(epsilon_constraint(&[0.3, 0.4], 0, &[0.5, 0.5]), Err(Error::Dimension { .. })));

        let y = [0.2, -0.4, 0.9];
        assert_eq!(pascoletti_serafini(&y, &y, &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(pascoletti_serafini(&y, &[0.0; 3], &[1.0; 3]).unwrap(), 0.9);
        assert!(pascoletti_serafini(&y, &y, &[1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn specializations_match_general_encodings() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for m in [1usize, 2, 3, 5, 10] {
            for _ in 0..5 {
                let mut sum_w = random_vec(&mut rng, m, 0.0, 1.0);
                if m > 1 {
                    sum_w[0] = 0.0;
                }
                if sum_w.iter().all(|&v| v == 0.0) {
                    sum_w[m - 1] = 1.0;
                }
                let functionals = [
                    Functional::Chebyshev { lambda: random_vec(&mut rng, m, 0.05, 3.0), w: random_vec(&mut rng, m, -1.0, 1.0) },
                    Functional::WeightedSum { a: sum_w },
                    Functional::PascolettiSerafini { a: random_vec(&mut rng, m, -1.0, 1.0), k: random_vec(&mut rng, m, 0.05, 3.0) },
                ];
                for f in &functionals {
                    let g = f.encode().unwrap();
                    for _ in 0..1000 {
                        let y = random_vec(&mut rng, m, -5.0, 5.0);
                        let direct = f.evaluate(&y).unwrap().value().unwrap();
                        let general = phi_general(&g, &y).unwrap();
                        assert!(close(direct, general), "{} m={m}: {direct} vs {general}", f.name());
                    }
                }
            }
        }
    }

    #[test]
    fn epsilon_has_no_general_form() {
        let f = Functional::EpsilonConstraint { j: 0, eps: vec![0.5] };
        assert!(f.encode().is_err());
    }

    #[test]
    fn level_set_is_shifted_polyhedron() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let m = rng.random_range(1..6);
            let s = general_example(&mut rng, m);
            for _ in 0..50 {
                let y = random_vec(&mut rng, m, -3.0, 3.0);
                let phi = s.eval(&y).unwrap();
                if phi.abs() > 1e-12 {
                    assert_eq!(phi <= 0.0, s.in_shifted_set(&y).unwrap());
                }
            }
        }
    }

    fn scalarizers() -> impl Strategy<Value = (GeneralScalarizer, usize)> {
        (1usize..6, any::<u64>()).prop_map(|(m, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (general_example(&mut rng, m), m)
        })
    }

    proptest! {
        #[test]
        fn monotone((s, m) in scalarizers(), y in prop::collection::vec(-3.0f64..3.0, 6), bump in prop::collection::vec(0.0f64..2.0, 6)) {
            let y2 = &y[..m];
            let y1: Vec<f64> = y2.iter().zip(&bump).map(|(a, b)| a + b).collect();
            prop_assert!(s.eval(&y1).unwrap() >= s.eval(y2).unwrap() - 1e-12);
        }

        #[test]
        fn convex((s, m) in scalarizers(), a in prop::collection::vec(-3.0f64..3.0, 6), b in prop::collection::vec(-3.0f64..3.0, 6), theta in 0.0f64..=1.0) {
            let (a, b) = (&a[..m], &b[..m]);
            let mix: Vec<f64> = a.iter().zip(b).map(|(x, y)| theta * x + (1.0 - theta) * y).collect();
            let lhs = s.eval(&mix).unwrap();
            let rhs = theta * s.eval(a).unwrap() + (1.0 - theta) * s.eval(b).unwrap();
            prop_assert!(lhs <= rhs + 1e-12);
        }

        #[test]
        fn translation_along_k((s, m) in scalarizers(), y in prop::collection::vec(-3.0f64..3.0, 6), t in -5.0f64..5.0) {
            let y = &y[..m];
            let moved: Vec<f64> = y.iter().zip(s.k()).map(|(a, k)| a + t * k).collect();
            let lhs = s.eval(&moved).unwrap();
            let rhs = s.eval(y).unwrap() + t;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0) * 10.0);
        }
    }

    #[test]
    fn landscape_single_objective_weighted_sum_finds_maximizer() {
        let inst = NkInstance::generate(10, 2, 1, 3).unwrap();
        let best = scalarize_landscape(&inst, &Functional::WeightedSum { a: vec![1.0] }, Sense::Maximize).unwrap();
        let all = inst.evaluate_all().unwrap();
        let max = all.iter().map(|f| f[0]).fold(f64::NEG_INFINITY, f64::max);
        let first = all.iter().position(|f| f[0] == max).unwrap();
        assert_eq!(best.solution.to_index(), first as u64);
        assert_eq!(best.value, ScalarValue::Value(-max));
    }

    #[test]
    fn chebyshev_optimum_is_weakly_pareto_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for seed in 0..20 {
            let m = 2 + seed as usize % 3;
            let inst = NkInstance::generate(10, 1 + seed as usize % 3, m, seed).unwrap();
            let lambda = random_vec(&mut rng, m, 0.05, 1.0);
            let w = vec![-1.0; m];
            let best = scalarize_landscape(&inst, &Functional::Chebyshev { lambda, w }, Sense::Maximize).unwrap();
            let all = inst.evaluate_all().unwrap();
            assert!(!all
                .iter()
                .any(|f| f.iter().zip(&best.objectives).all(|(a, b)| a > b)));
            let on_front = inst
                .enumerate_pareto_set()
                .unwrap()
                .iter()
                .any(|(_, v)| matches!(relation(v, &best.objectives), DominanceRelation::Equal | DominanceRelation::Dominates) );
            assert!(on_front);
        }
    }

    #[test]
    fn equal_functionals_share_argmin() {
        for seed in 0..10 {
            let inst = NkInstance::generate(9, 2, 3, seed).unwrap();
            let f = Functional::WeightedSum { a: vec![0.2, 0.5, 0.3] };
            let g = Functional::General(f.encode().unwrap());
            let a = scalarize_landscape(&inst, &f, Sense::Maximize).unwrap();
            let b = scalarize_landscape(&inst, &g, Sense::Maximize).unwrap();
            assert_eq!(a.solution, b.solution);
        }
    }

    #[test]
    fn epsilon_on_landscape() {
        let inst = NkInstance::generate(8, 1, 2, 5).unwrap();
        let all = inst.evaluate_all().unwrap();
        // maximize f_1 subject to f_2 >= 0.5, written as -f_2 <= -0.5
        let f = Functional::EpsilonConstraint { j: 0, eps: vec![-0.5] };
        match scalarize_landscape(&inst, &f, Sense::Maximize) {
            Ok(best) => {
                let want = all
                    .iter()
                    .filter(|v| v[1] >= 0.5)
                    .map(|v| v[0])
                    .fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(best.objectives[0], want);
                assert!(best.objectives[1] >= 0.5);
            }
            Err(e) => assert!(all.iter().all(|v| v[1] < 0.5), "{e}"),
        }
        let impossible = Functional::EpsilonConstraint { j: 0, eps: vec![-2.0] };
        assert!(scalarize_landscape(&inst, &impossible, Sense::Maximize).is_err());
    }

    #[test]
    fn minimize_sense_uses_objectives_directly() {
        let inst = NkInstance::generate(8, 2, 1, 1).unwrap();
        let best = scalarize_landscape(&inst, &Functional::WeightedSum { a: vec![1.0] }, Sense::Minimize).unwrap();
        let min = inst.evaluate_all().unwrap().iter().map(|f| f[0]).fold(f64::INFINITY, f64::min);
        assert_eq!(best.objectives[0], min);
    }
}
