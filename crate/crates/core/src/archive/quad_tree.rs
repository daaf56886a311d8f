//! Quad tree over the archive.
//!
//! Every node holds one point. A descendant is filed under the branch keyed
//! by its successorship bit-vector relative to the node: bit `i` is set iff
//! the descendant is strictly better in objective `i`. Keys with all bits
//! clear or all bits set would mean dominance, so only `2^m - 2` branches are
//! possible; they are stored sparsely.
//!
//! Deleting a node detaches its subtree, drops any other dominated nodes in
//! it, and reinserts the survivors below the deleted node's parent in
//! breadth-first order, so the first surviving child takes the vacated slot.

use super::{Entry, UpdateOutcome};
use crate::error::{Error, Result};

struct QNode<P> {
    entry: Entry<P>,
    parent: Option<usize>,
    /// Sorted by key.
    children: Vec<(u64, usize)>,
}

pub(crate) struct QuadTree<P> {
    nodes: Vec<Option<QNode<P>>>,
    free: Vec<usize>,
    root: Option<usize>,
    len: usize,
}

/// Successorship key of `y` relative to `x` plus whether `y` is strictly
/// worse somewhere.
#[inline]
fn classify(y: &[f64], x: &[f64], counter: &mut u64) -> (u64, bool) {
    let mut key = 0u64;
    let mut worse = false;
    for (i, (a, b)) in y.iter().zip(x).enumerate() {
        if a > b {
            key |= 1 << i;
        } else if a < b {
            worse = true;
        }
    }
    *counter += y.len() as u64;
    (key, worse)
}

impl<P> QuadTree<P> {
    pub fn new(dim: usize) -> Result<Self> {
        if dim > 64 {
            return Err(Error::capacity("quad tree supports at most 64 objectives"));
        }
        Ok(QuadTree {
            nodes: Vec::new(),
            free: Vec::new(),
            root: None,
            len: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    fn node(&self, id: usize) -> &QNode<P> {
        self.nodes[id].as_ref().expect("live node")
    }

    fn node_mut(&mut self, id: usize) -> &mut QNode<P> {
        self.nodes[id].as_mut().expect("live node")
    }

    fn alloc(&mut self, entry: Entry<P>) -> usize {
        let node = QNode {
            entry,
            parent: None,
            children: Vec::new(),
        };
        if let Some(id) = self.free.pop() {
            self.nodes[id] = Some(node);
            id
        } else {
            self.nodes.push(Some(node));
            self.nodes.len() - 1
        }
    }

    fn release(&mut self, id: usize) {
        self.nodes[id] = None;
        self.free.push(id);
    }

    /// Files the detached node `id` somewhere below `start`.
    fn attach_below(&mut self, start: usize, id: usize, counter: &mut u64) {
        let mut cur = start;
        loop {
            let (key, _) = classify(&self.node(id).entry.point, &self.node(cur).entry.point, counter);
            let children = &self.node(cur).children;
            match children.binary_search_by_key(&key, |c| c.0) {
                Ok(pos) => cur = children[pos].1,
                Err(pos) => {
                    self.node_mut(cur).children.insert(pos, (key, id));
                    self.node_mut(id).parent = Some(cur);
                    return;
                }
            }
        }
    }

    fn depth(&self, mut id: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.node(id).parent {
            id = p;
            d += 1;
        }
        d
    }

    pub fn update(&mut self, entry: Entry<P>, counter: &mut u64) -> UpdateOutcome {
        let Some(root) = self.root else {
            let id = self.alloc(entry);
            self.root = Some(id);
            self.len = 1;
            return UpdateOutcome::Inserted(0);
        };

        let y = &entry.point;
        let mut doomed = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            let node = self.node(id);
            let (key, worse) = classify(y, &node.entry.point, counter);
            if key == 0 {
                return if worse {
                    UpdateOutcome::RejectedDominated
                } else {
                    UpdateOutcome::RejectedDuplicate
                };
            }
            if !worse {
                doomed.push(id);
            }
            // Once y dominates a member, no member can dominate y.
            let look_up = doomed.is_empty();
            for &(k, c) in &node.children {
                let may_dominate_y = look_up && k & key == key;
                let may_be_dominated = k & !key == 0;
                if may_dominate_y || may_be_dominated {
                    stack.push(c);
                }
            }
        }

        let removed = doomed.len();
        if removed > 0 {
            self.delete(doomed, counter);
        }
        let id = self.alloc(entry);
        match self.root {
            Some(r) => self.attach_below(r, id, counter),
            None => self.root = Some(id),
        }
        self.len = self.len - removed + 1;
        UpdateOutcome::Inserted(removed)
    }

    fn delete(&mut self, doomed: Vec<usize>, counter: &mut u64) {
        let mut marked = vec![false; self.nodes.len()];
        for &d in &doomed {
            marked[d] = true;
        }
        let mut order: Vec<(usize, usize)> = doomed.iter().map(|&d| (self.depth(d), d)).collect();
        order.sort_unstable();

        for (_, d) in order {
            if !marked[d] {
                // already dropped as part of an ancestor's subtree
                continue;
            }
            marked[d] = false;
            let parent = self.node(d).parent;
            match parent {
                Some(p) => self.node_mut(p).children.retain(|&(_, c)| c != d),
                None => self.root = None,
            }

            let mut subtree = Vec::new();
            let mut head = 0;
            subtree.extend(self.node(d).children.iter().map(|&(_, c)| c));
            while head < subtree.len() {
                let id = subtree[head];
                head += 1;
                let kids: Vec<usize> = self.node(id).children.iter().map(|&(_, c)| c).collect();
                subtree.extend(kids);
            }
            self.release(d);

            for id in subtree {
                if marked[id] {
                    marked[id] = false;
                    self.release(id);
                    continue;
                }
                let node = self.node_mut(id);
                node.children.clear();
                node.parent = None;
                match (parent, self.root) {
                    (Some(p), _) => self.attach_below(p, id, counter),
                    (None, Some(r)) => self.attach_below(r, id, counter),
                    (None, None) => self.root = Some(id),
                }
            }
        }
    }

    pub fn is_dominated(&self, y: &[f64], counter: &mut u64) -> bool {
        let Some(root) = self.root else {
            return false;
        };
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            let node = self.node(id);
            let (key, _) = classify(y, &node.entry.point, counter);
            if key == 0 {
                return true;
            }
            stack.extend(
                node.children
                    .iter()
                    .filter(|&&(k, _)| k & key == key)
                    .map(|&(_, c)| c),
            );
        }
        false
    }

    pub fn for_each<'a>(&'a self, f: &mut impl FnMut(&'a Entry<P>)) {
        self.nodes.iter().flatten().for_each(|n| f(&n.entry));
    }
}
