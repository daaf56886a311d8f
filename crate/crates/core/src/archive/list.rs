use super::{Entry, UpdateOutcome};
use crate::dominance::{relation_counted, DominanceRelation};

/// Unordered list; every update scans all members.
pub(crate) struct ListArchive<P> {
    entries: Vec<Entry<P>>,
}

impl<P> ListArchive<P> {
    pub fn new() -> Self {
        ListArchive {
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn update(&mut self, entry: Entry<P>, counter: &mut u64) -> UpdateOutcome {
        let y = &entry.point;
        let mut doomed = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            match relation_counted(&e.point, y, counter) {
                DominanceRelation::Equal => return UpdateOutcome::RejectedDuplicate,
                DominanceRelation::Dominates => return UpdateOutcome::RejectedDominated,
                DominanceRelation::DominatedBy => doomed.push(i),
                DominanceRelation::Incomparable => {}
            }
        }
        let removed = doomed.len();
        for &i in doomed.iter().rev() {
            self.entries.swap_remove(i);
        }
        self.entries.push(entry);
        UpdateOutcome::Inserted(removed)
    }

    pub fn is_dominated(&self, y: &[f64], counter: &mut u64) -> bool {
        self.entries.iter().any(|e| {
            matches!(
                relation_counted(&e.point, y, counter),
                DominanceRelation::Equal | DominanceRelation::Dominates
            )
        })
    }

    pub fn for_each<'a>(&'a self, f: &mut impl FnMut(&'a Entry<P>)) {
        self.entries.iter().for_each(f);
    }
}
