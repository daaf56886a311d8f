//! Unbounded Pareto archives behind interchangeable backends.
//!
//! Every backend keeps a set of mutually non-dominated vectors and counts
//! per-objective comparisons, the elementary operation of the dominance test.
//! Offering a vector equal to a member is rejected as a duplicate.

mod list;
mod nd_tree;
mod quad_tree;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub use nd_tree::NdTreeConfig;

use crate::dominance::ObjectiveVector;
use crate::error::{check_dim, Error, Result};

use list::ListArchive;
use nd_tree::NdTree;
use quad_tree::QuadTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    List,
    NdTree,
    QuadTree,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::List, Backend::NdTree, Backend::QuadTree];

    pub fn name(self) -> &'static str {
        match self {
            Backend::List => "list",
            Backend::NdTree => "nd-tree",
            Backend::QuadTree => "quad-tree",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "list" => Ok(Backend::List),
            "nd-tree" | "ndtree" | "nd_tree" => Ok(Backend::NdTree),
            "quad-tree" | "quadtree" | "quad_tree" => Ok(Backend::QuadTree),
            other => Err(Error::domain(format!("unknown archive backend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOutcome {
    /// The vector was added; the count is how many members it displaced.
    Inserted(usize),
    RejectedDominated,
    RejectedDuplicate,
}

impl UpdateOutcome {
    pub fn is_inserted(self) -> bool {
        matches!(self, UpdateOutcome::Inserted(_))
    }
}

/// Why an offered vector was turned away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Verdict {
    Dominated,
    Duplicate,
}

#[derive(Debug)]
pub(crate) struct Entry<P> {
    pub point: Vec<f64>,
    pub payload: P,
}

enum Store<P> {
    List(ListArchive<P>),
    NdTree(NdTree<P>),
    QuadTree(QuadTree<P>),
}

pub struct ParetoArchive<P = ()> {
    backend: Backend,
    dim: usize,
    comparisons: u64,
    store: Store<P>,
}

impl<P> fmt::Debug for ParetoArchive<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParetoArchive")
            .field("backend", &self.backend)
            .field("dim", &self.dim)
            .field("len", &self.len())
            .field("comparisons", &self.comparisons)
            .finish()
    }
}

impl<P> ParetoArchive<P> {
    pub fn new(backend: Backend, dim: usize) -> Result<Self> {
        Self::with_nd_tree_config(backend, dim, NdTreeConfig::default())
    }

    pub fn with_nd_tree_config(backend: Backend, dim: usize, config: NdTreeConfig) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("archive dimension must be at least 1"));
        }
        let store = match backend {
            Backend::List => Store::List(ListArchive::new()),
            Backend::NdTree => Store::NdTree(NdTree::new(dim, config)?),
            Backend::QuadTree => Store::QuadTree(QuadTree::new(dim)?),
        };
        Ok(ParetoArchive {
            backend,
            dim,
            comparisons: 0,
            store,
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::List(s) => s.len(),
            Store::NdTree(s) => s.len(),
            Store::QuadTree(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-objective comparisons performed since creation.
    pub fn comparison_count(&self) -> u64 {
        self.comparisons
    }

    pub fn update_with(&mut self, y: &ObjectiveVector, payload: P) -> Result<UpdateOutcome> {
        check_dim(self.dim, y.dim())?;
        Ok(self.update_raw(y.values().to_vec(), payload))
    }

    pub(crate) fn update_raw(&mut self, y: Vec<f64>, payload: P) -> UpdateOutcome {
        let counter = &mut self.comparisons;
        let entry = Entry { point: y, payload };
        match &mut self.store {
            Store::List(s) => s.update(entry, counter),
            Store::NdTree(s) => s.update(entry, counter),
            Store::QuadTree(s) => s.update(entry, counter),
        }
    }

    /// True iff some member weakly dominates `y`.
    pub fn is_dominated(&mut self, y: &ObjectiveVector) -> Result<bool> {
        check_dim(self.dim, y.dim())?;
        Ok(self.is_dominated_raw(y))
    }

    pub(crate) fn is_dominated_raw(&mut self, y: &[f64]) -> bool {
        let counter = &mut self.comparisons;
        match &self.store {
            Store::List(s) => s.is_dominated(y, counter),
            Store::NdTree(s) => s.is_dominated(y, counter),
            Store::QuadTree(s) => s.is_dominated(y, counter),
        }
    }

    /// Members with their payloads, in lexicographic order of the vectors.
    pub fn entries<'a>(&'a self) -> Vec<(ObjectiveVector, &'a P)> {
        let mut out: Vec<(&'a [f64], &'a P)> = Vec::with_capacity(self.len());
        let mut push = |e: &'a Entry<P>| out.push((e.point.as_slice(), &e.payload));
        match &self.store {
            Store::List(s) => s.for_each(&mut push),
            Store::NdTree(s) => s.for_each(&mut push),
            Store::QuadTree(s) => s.for_each(&mut push),
        }
        out.sort_by(|a, b| lexicographic(a.0, b.0));
        out.into_iter()
            .map(|(p, payload)| (ObjectiveVector::from_trusted(p.to_vec()), payload))
            .collect()
    }

    /// Members in lexicographic order.
    pub fn snapshot(&self) -> Vec<ObjectiveVector> {
        self.entries().into_iter().map(|(v, _)| v).collect()
    }
}

impl ParetoArchive<()> {
    pub fn update(&mut self, y: &ObjectiveVector) -> Result<UpdateOutcome> {
        self.update_with(y, ())
    }
}

pub fn new_archive(backend: Backend, m: usize) -> Result<ParetoArchive> {
    ParetoArchive::new(backend, m)
}

pub(crate) fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}
