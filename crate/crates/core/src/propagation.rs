//! Reversible domain store with forward-checking propagation.
//!
//! Every assignment opens a decision level. Removals made while a level is
//! open (by the assignment itself or by a site filter) go on the trail and
//! are restored verbatim when the level is popped. Levels are strictly
//! chronological.

use thiserror::Error;

use crate::model::{FreqSet, Frequency, Instance, PathId, SiteId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PropagationError {
    #[error("path {0} out of range")]
    PathOutOfRange(PathId),
    #[error("path {0} is already assigned")]
    AlreadyAssigned(PathId),
    #[error("frequency {frequency} is not in the surviving domain of path {path}")]
    NotInDomain { path: PathId, frequency: Frequency },
    #[error("path {path} is not the most recent assignment (top is {top:?})")]
    NotTopOfStack { path: PathId, top: Option<PathId> },
}

/// What a trail entry removed values from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Path(PathId),
    /// Site-level transmit availability set.
    SiteTx(SiteId),
    /// Site-level receive availability set.
    SiteRx(SiteId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cause {
    /// Fixing a path to its assigned value, or forward checking from it.
    Assignment(PathId),
    /// Availability filtering at a site.
    Filter(SiteId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrailEntry {
    pub target: Target,
    /// Values removed by this entry; none of them survive while it is on the trail.
    pub removed: FreqSet,
    pub cause: Cause,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Level {
    path: PathId,
    trail_len: usize,
}

#[derive(Debug, Clone)]
pub struct DomainStore<'a> {
    instance: &'a Instance,
    domains: Vec<FreqSet>,
    assigned: Vec<Option<usize>>,
    site_tx: Vec<FreqSet>,
    site_rx: Vec<FreqSet>,
    trail: Vec<TrailEntry>,
    levels: Vec<Level>,
}

impl PartialEq for DomainStore<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.instance, other.instance)
            && self.domains == other.domains
            && self.assigned == other.assigned
            && self.site_tx == other.site_tx
            && self.site_rx == other.site_rx
            && self.trail == other.trail
            && self.levels == other.levels
    }
}

impl<'a> DomainStore<'a> {
    /// Fresh store: instance domains, nothing assigned, every site able to
    /// use the whole spectrum in both directions.
    pub fn new(instance: &'a Instance) -> Self {
        let full = instance.spectrum().full();
        DomainStore {
            instance,
            domains: instance.domains().to_vec(),
            assigned: vec![None; instance.path_count()],
            site_tx: vec![full; instance.site_count()],
            site_rx: vec![full; instance.site_count()],
            trail: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    /// Surviving values of a path, as a set over the instance spectrum.
    #[inline]
    pub fn domain(&self, path: PathId) -> FreqSet {
        self.domains[path]
    }

    pub fn domain_values(&self, path: PathId) -> Vec<Frequency> {
        self.instance.spectrum().to_vec(self.domains[path])
    }

    #[inline]
    pub fn assigned_index(&self, path: PathId) -> Option<usize> {
        self.assigned[path]
    }

    pub fn assigned(&self, path: PathId) -> Option<Frequency> {
        self.assigned[path].map(|i| self.instance.spectrum().get(i))
    }

    #[inline]
    pub fn is_assigned(&self, path: PathId) -> bool {
        self.assigned[path].is_some()
    }

    pub fn assignment(&self) -> Vec<Option<Frequency>> {
        (0..self.assigned.len()).map(|p| self.assigned(p)).collect()
    }

    /// Number of assigned paths.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Most recently assigned path.
    pub fn top(&self) -> Option<PathId> {
        self.levels.last().map(|l| l.path)
    }

    pub fn trail(&self) -> &[TrailEntry] {
        &self.trail
    }

    #[inline]
    pub fn site_tx(&self, site: SiteId) -> FreqSet {
        self.site_tx[site]
    }

    #[inline]
    pub fn site_rx(&self, site: SiteId) -> FreqSet {
        self.site_rx[site]
    }

    pub fn is_consistent(&self, path: PathId, frequency: Frequency) -> bool {
        match (self.domains.get(path), self.instance.spectrum().index_of(frequency)) {
            (Some(d), Some(i)) => d.contains(i),
            _ => false,
        }
    }

    /// Removes `values` from a target, trailing what actually disappeared.
    /// Returns the removed subset.
    pub fn remove(&mut self, target: Target, values: FreqSet, cause: Cause) -> FreqSet {
        let slot = match target {
            Target::Path(p) => &mut self.domains[p],
            Target::SiteTx(s) => &mut self.site_tx[s],
            Target::SiteRx(s) => &mut self.site_rx[s],
        };
        let removed = slot.intersection(values);
        if !removed.is_empty() {
            *slot = slot.difference(removed);
            self.trail.push(TrailEntry { target, removed, cause });
        }
        removed
    }

    /// Assigns `frequency` to `path` and forward-checks every constrained
    /// neighbor. Returns `Ok(false)` when some unassigned neighbor's domain is
    /// emptied; the level stays open either way and must be closed with
    /// [`DomainStore::propagate_unassign`].
    pub fn propagate_assign(
        &mut self,
        path: PathId,
        frequency: Frequency,
    ) -> Result<bool, PropagationError> {
        if path >= self.domains.len() {
            return Err(PropagationError::PathOutOfRange(path));
        }
        if self.assigned[path].is_some() {
            return Err(PropagationError::AlreadyAssigned(path));
        }
        let index = self
            .instance
            .spectrum()
            .index_of(frequency)
            .filter(|&i| self.domains[path].contains(i))
            .ok_or(PropagationError::NotInDomain { path, frequency })?;
        Ok(self.assign_index(path, index))
    }

    /// Index-based variant of [`DomainStore::propagate_assign`]; the value must
    /// be in the surviving domain.
    pub fn assign_index(&mut self, path: PathId, index: usize) -> bool {
        debug_assert!(self.domains[path].contains(index));
        debug_assert!(self.assigned[path].is_none());
        self.levels.push(Level {
            path,
            trail_len: self.trail.len(),
        });
        self.assigned[path] = Some(index);
        let cause = Cause::Assignment(path);
        let keep = FreqSet::singleton(index);
        self.remove(Target::Path(path), self.domains[path].difference(keep), cause);

        let instance = self.instance;
        let spectrum = instance.spectrum();
        let f = spectrum.get(index);
        for n in instance.neighbors(path) {
            if self.assigned[n.path].is_some() {
                debug_assert!(spectrum.get(self.assigned[n.path].unwrap()).distance(f) >= n.gap);
                continue;
            }
            let conflicts = spectrum.conflicts(f, n.gap);
            self.remove(Target::Path(n.path), conflicts, cause);
            if self.domains[n.path].is_empty() {
                return false;
            }
        }
        true
    }

    /// Undoes the most recent assignment, which must be `path`.
    pub fn propagate_unassign(&mut self, path: PathId) -> Result<(), PropagationError> {
        match self.levels.last() {
            Some(l) if l.path == path => {
                self.pop_level();
                Ok(())
            }
            other => Err(PropagationError::NotTopOfStack {
                path,
                top: other.map(|l| l.path),
            }),
        }
    }

    /// Undoes the most recent assignment, returning its path.
    pub fn pop_level(&mut self) -> Option<PathId> {
        let level = self.levels.pop()?;
        while self.trail.len() > level.trail_len {
            let e = self.trail.pop().expect("trail shorter than level mark");
            let slot = match e.target {
                Target::Path(p) => &mut self.domains[p],
                Target::SiteTx(s) => &mut self.site_tx[s],
                Target::SiteRx(s) => &mut self.site_rx[s],
            };
            *slot = slot.union(e.removed);
        }
        self.assigned[level.path] = None;
        Some(level.path)
    }
}
