//! Synthetic non-dominated fronts in `[0,1]^m`.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::dominance::{covers, ObjectiveVector};
use crate::error::{Error, Result};
use crate::rng::{SeedPath, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrontKind {
    /// Uniform on the simplex, `sum y = 1`.
    Linear,
    /// Uniform direction on the unit sphere, `sum y^2 = 1`.
    Concave,
    /// Squared simplex point, `sum sqrt(y) = 1`; bulges toward the origin.
    Convex,
}

impl FrontKind {
    pub const ALL: [FrontKind; 3] = [FrontKind::Linear, FrontKind::Concave, FrontKind::Convex];

    pub fn name(self) -> &'static str {
        match self {
            FrontKind::Linear => "linear",
            FrontKind::Concave => "concave",
            FrontKind::Convex => "convex",
        }
    }
}

impl fmt::Display for FrontKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrontKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(FrontKind::Linear),
            "concave" => Ok(FrontKind::Concave),
            "convex" => Ok(FrontKind::Convex),
            other => Err(Error::domain(format!("unknown front kind `{other}`"))),
        }
    }
}

fn simplex_point(rng: &mut StreamRng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

fn sphere_point(rng: &mut StreamRng, m: usize) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..m).map(|_| StandardNormal.sample(rng)).map(|v: f64| v.abs()).collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return raw.into_iter().map(|v| v / norm).collect();
        }
    }
}

/// Draws `count` mutually non-dominated points of the given shape.
pub fn generate_front(kind: FrontKind, m: usize, count: usize, seed: u64) -> Result<Vec<ObjectiveVector>> {
    if m < 2 {
        return Err(Error::domain("a front needs at least 2 objectives"));
    }
    if count == 0 {
        return Err(Error::domain("front size must be at least 1"));
    }
    let mut rng = SeedPath::root(seed).label("front").label(kind.name()).rng();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 100 * count + 1000 {
            return Err(Error::domain("could not draw enough distinct front points"));
        }
        let p = match kind {
            FrontKind::Linear => simplex_point(&mut rng, m),
            FrontKind::Concave => sphere_point(&mut rng, m),
            FrontKind::Convex => simplex_point(&mut rng, m).into_iter().map(|v| v * v).collect(),
        };
        // rounding can make near-identical draws comparable; redraw those
        if p.iter().any(|v| !v.is_finite())
            || out.iter().any(|q| covers(q, &p) || covers(&p, q))
        {
            continue;
        }
        out.push(p);
    }
    out.into_iter().map(ObjectiveVector::new).collect()
}
