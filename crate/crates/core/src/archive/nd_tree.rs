//! ND-Tree: a tree of approximate bounding boxes over the archive.
//!
//! Each node keeps an approximate ideal (componentwise max) and nadir
//! (componentwise min) of the points below it. Bounds are widened on insert
//! and never tightened on removal, so the stored ideal is always >= the true
//! ideal and the stored nadir <= the true nadir; both shortcut tests stay
//! sound.

use super::{Entry, UpdateOutcome, Verdict};
use crate::dominance::{covers_counted, relation_counted, DominanceRelation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NdTreeConfig {
    /// A leaf holding more points than this is split.
    pub leaf_capacity: usize,
    /// Children created by a split; `None` means `m + 1`.
    pub max_children: Option<usize>,
}

impl Default for NdTreeConfig {
    fn default() -> Self {
        NdTreeConfig {
            leaf_capacity: 20,
            max_children: None,
        }
    }
}

struct Node<P> {
    ideal: Vec<f64>,
    nadir: Vec<f64>,
    kind: Kind<P>,
}

enum Kind<P> {
    Leaf(Vec<Entry<P>>),
    Internal(Vec<Node<P>>),
}

enum Visit {
    Keep,
    /// Node holds no points any more.
    Emptied,
    Reject(Verdict),
}

pub(crate) struct NdTree<P> {
    root: Node<P>,
    len: usize,
    leaf_capacity: usize,
    children: usize,
}

impl<P> Node<P> {
    fn empty_leaf() -> Self {
        Node {
            ideal: Vec::new(),
            nadir: Vec::new(),
            kind: Kind::Leaf(Vec::new()),
        }
    }

    fn is_empty(&self) -> bool {
        match &self.kind {
            Kind::Leaf(v) => v.is_empty(),
            Kind::Internal(c) => c.is_empty(),
        }
    }

    fn count(&self) -> usize {
        match &self.kind {
            Kind::Leaf(v) => v.len(),
            Kind::Internal(c) => c.iter().map(Node::count).sum(),
        }
    }

    fn widen(&mut self, y: &[f64]) {
        if self.ideal.is_empty() {
            self.ideal = y.to_vec();
            self.nadir = y.to_vec();
            return;
        }
        for ((hi, lo), &v) in self.ideal.iter_mut().zip(self.nadir.iter_mut()).zip(y) {
            if v > *hi {
                *hi = v;
            }
            if v < *lo {
                *lo = v;
            }
        }
    }

    fn midpoint_distance2(&self, y: &[f64]) -> f64 {
        self.ideal
            .iter()
            .zip(&self.nadir)
            .zip(y)
            .map(|((hi, lo), v)| {
                let d = 0.5 * (hi + lo) - v;
                d * d
            })
            .sum()
    }

    fn contains_equal(&self, y: &[f64]) -> bool {
        match &self.kind {
            Kind::Leaf(v) => v.iter().any(|e| e.point == y),
            Kind::Internal(c) => c.iter().any(|n| n.contains_equal(y)),
        }
    }

    fn for_each<'a>(&'a self, f: &mut impl FnMut(&'a Entry<P>)) {
        match &self.kind {
            Kind::Leaf(v) => v.iter().for_each(f),
            Kind::Internal(c) => c.iter().for_each(|n| n.for_each(f)),
        }
    }

    /// Removes members dominated by `y` and reports whether `y` itself is
    /// weakly dominated. `removed` accumulates the number of deleted points.
    fn update(&mut self, y: &[f64], counter: &mut u64, removed: &mut usize) -> Visit {
        if self.is_empty() {
            return Visit::Emptied;
        }
        // every point >= nadir >= y
        let (nadir_covers, nadir_equal) = covers_counted(&self.nadir, y, counter);
        if nadir_covers {
            if !nadir_equal {
                return Visit::Reject(Verdict::Dominated);
            }
            // only a member equal to y can sit at the nadir
            return Visit::Reject(if self.contains_equal(y) {
                Verdict::Duplicate
            } else {
                Verdict::Dominated
            });
        }
        let (covers_ideal, ideal_equal) = covers_counted(y, &self.ideal, counter);
        if covers_ideal && !ideal_equal {
            *removed += self.count();
            return Visit::Emptied;
        }
        let may_be_dominated = covers_ideal || covers_counted(&self.ideal, y, counter).0;
        let may_dominate = covers_ideal || covers_counted(y, &self.nadir, counter).0;
        if !may_be_dominated && !may_dominate {
            return Visit::Keep;
        }
        match &mut self.kind {
            Kind::Leaf(entries) => {
                let mut i = 0;
                while i < entries.len() {
                    match relation_counted(&entries[i].point, y, counter) {
                        DominanceRelation::Equal => return Visit::Reject(Verdict::Duplicate),
                        DominanceRelation::Dominates => return Visit::Reject(Verdict::Dominated),
                        DominanceRelation::DominatedBy => {
                            entries.swap_remove(i);
                            *removed += 1;
                        }
                        DominanceRelation::Incomparable => i += 1,
                    }
                }
                if entries.is_empty() {
                    return Visit::Emptied;
                }
            }
            Kind::Internal(children) => {
                let mut i = 0;
                while i < children.len() {
                    match children[i].update(y, counter, removed) {
                        Visit::Reject(v) => return Visit::Reject(v),
                        Visit::Emptied => {
                            children.swap_remove(i);
                        }
                        Visit::Keep => i += 1,
                    }
                }
                match children.len() {
                    0 => return Visit::Emptied,
                    1 => {
                        let only = children.pop().expect("one child");
                        *self = only;
                    }
                    _ => {}
                }
            }
        }
        Visit::Keep
    }

    fn is_dominated(&self, y: &[f64], counter: &mut u64) -> bool {
        if self.is_empty() {
            return false;
        }
        if covers_counted(&self.nadir, y, counter).0 {
            return true;
        }
        if !covers_counted(&self.ideal, y, counter).0 {
            return false;
        }
        match &self.kind {
            Kind::Leaf(entries) => entries.iter().any(|e| {
                matches!(
                    relation_counted(&e.point, y, counter),
                    DominanceRelation::Equal | DominanceRelation::Dominates
                )
            }),
            Kind::Internal(children) => children.iter().any(|c| c.is_dominated(y, counter)),
        }
    }

    fn insert(&mut self, entry: Entry<P>, leaf_capacity: usize, children: usize) {
        self.widen(&entry.point);
        match &mut self.kind {
            Kind::Leaf(entries) => {
                entries.push(entry);
                if entries.len() > leaf_capacity {
                    self.split(children);
                }
            }
            Kind::Internal(nodes) => {
                let best = nodes
                    .iter()
                    .enumerate()
                    .map(|(i, n)| (i, n.midpoint_distance2(&entry.point)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(i, _)| i)
                    .expect("internal node has children");
                nodes[best].insert(entry, leaf_capacity, children);
            }
        }
    }

    /// Turns an overfull leaf into an internal node. Seeds start from the two
    /// most distant points and grow by farthest-point selection; the rest go
    /// to the child whose box midpoint is closest.
    fn split(&mut self, children: usize) {
        let Kind::Leaf(entries) = std::mem::replace(&mut self.kind, Kind::Internal(Vec::new())) else {
            unreachable!("split called on internal node");
        };
        let count = entries.len();
        let target = children.clamp(2, count);
        let dist2 = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum() };

        let mut far = (0, 1, f64::NEG_INFINITY);
        for i in 0..count {
            for j in i + 1..count {
                let d = dist2(&entries[i].point, &entries[j].point);
                if d > far.2 {
                    far = (i, j, d);
                }
            }
        }
        let mut seeds = vec![far.0, far.1];
        let mut nearest: Vec<f64> = (0..count)
            .map(|i| dist2(&entries[i].point, &entries[far.0].point).min(dist2(&entries[i].point, &entries[far.1].point)))
            .collect();
        while seeds.len() < target {
            let next = (0..count)
                .filter(|i| !seeds.contains(i))
                .max_by(|&a, &b| nearest[a].total_cmp(&nearest[b]))
                .expect("enough points for seeds");
            for i in 0..count {
                nearest[i] = nearest[i].min(dist2(&entries[i].point, &entries[next].point));
            }
            seeds.push(next);
        }

        let mut slots: Vec<Option<Entry<P>>> = entries.into_iter().map(Some).collect();
        let mut nodes: Vec<Node<P>> = seeds
            .iter()
            .map(|&s| {
                let e = slots[s].take().expect("seed present");
                let mut n = Node::empty_leaf();
                n.widen(&e.point);
                n.kind = Kind::Leaf(vec![e]);
                n
            })
            .collect();
        for e in slots.into_iter().flatten() {
            let best = nodes
                .iter()
                .enumerate()
                .map(|(i, n)| (i, n.midpoint_distance2(&e.point)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(i, _)| i)
                .expect("at least two children");
            let node = &mut nodes[best];
            node.widen(&e.point);
            if let Kind::Leaf(v) = &mut node.kind {
                v.push(e);
            }
        }
        self.kind = Kind::Internal(nodes);
    }
}

impl<P> NdTree<P> {
    pub fn new(dim: usize, config: NdTreeConfig) -> Result<Self> {
        if config.leaf_capacity < 2 {
            return Err(Error::domain("ND-Tree leaf capacity must be at least 2"));
        }
        let children = config.max_children.unwrap_or(dim + 1);
        if children < 2 {
            return Err(Error::domain("ND-Tree needs at least 2 children per split"));
        }
        Ok(NdTree {
            root: Node::empty_leaf(),
            len: 0,
            leaf_capacity: config.leaf_capacity,
            children,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn update(&mut self, entry: Entry<P>, counter: &mut u64) -> UpdateOutcome {
        let mut removed = 0;
        match self.root.update(&entry.point, counter, &mut removed) {
            Visit::Reject(Verdict::Duplicate) => return UpdateOutcome::RejectedDuplicate,
            Visit::Reject(_) => return UpdateOutcome::RejectedDominated,
            Visit::Emptied => self.root = Node::empty_leaf(),
            Visit::Keep => {}
        }
        self.len -= removed;
        self.root.insert(entry, self.leaf_capacity, self.children);
        self.len += 1;
        UpdateOutcome::Inserted(removed)
    }

    pub fn is_dominated(&self, y: &[f64], counter: &mut u64) -> bool {
        self.root.is_dominated(y, counter)
    }

    pub fn for_each<'a>(&'a self, f: &mut impl FnMut(&'a Entry<P>)) {
        self.root.for_each(f);
    }
}
