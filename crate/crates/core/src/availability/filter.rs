//! Availability used as a constraint on the domains around a site.

use crate::model::{FreqSet, Frequency, PathId, SiteId};
use crate::propagation::{Cause, DomainStore, Target};

use super::{Availability, AvailabilityConfig, SiteDomains, SiteState, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Tx,
    Rx,
}

/// When filtering is worth running at a site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterActivation {
    pub min_links: usize,
    /// Fraction of the site's paths that must be assigned.
    pub assigned_fraction: f64,
}

impl Default for FilterActivation {
    fn default() -> Self {
        FilterActivation {
            min_links: 4,
            assigned_fraction: 0.5,
        }
    }
}

impl FilterActivation {
    pub fn is_active(&self, store: &DomainStore<'_>, site: SiteId) -> bool {
        let s = store.instance().site(site);
        if s.degree() >= self.min_links {
            return true;
        }
        let total = s.tx_paths.len() + s.rx_paths.len();
        let assigned = s
            .tx_paths
            .iter()
            .chain(&s.rx_paths)
            .filter(|&&p| store.is_assigned(p))
            .count();
        total > 0 && assigned as f64 >= self.assigned_fraction * total as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterOutcome {
    /// Values removed from path domains.
    pub removed: Vec<(PathId, Frequency)>,
    /// Values removed from the site's availability set for the direction.
    pub site_removed: Vec<Frequency>,
    /// Some pending path of the site was left with an empty domain.
    pub wiped_out: bool,
}

impl FilterOutcome {
    pub fn merge(&mut self, other: FilterOutcome) {
        self.removed.extend(other.removed);
        self.site_removed.extend(other.site_removed);
        self.wiped_out |= other.wiped_out;
    }
}

/// Filters the pending paths of one direction at `site`.
///
/// A candidate value is taken away from a pending path when giving it to
/// that path would empty the domain of one of the path's unassigned
/// neighbors, or would leave the site unable to host its other pending
/// paths. A value no pending path can take any more leaves the site's
/// availability set. Removals go on the current decision level.
pub fn availability_filter(
    store: &mut DomainStore<'_>,
    avail: &Availability,
    config: &AvailabilityConfig,
    site: SiteId,
    direction: Direction,
    strategy: Strategy,
) -> FilterOutcome {
    let instance = store.instance();
    let spectrum = instance.spectrum();
    let s = instance.site(site);
    let incident = match direction {
        Direction::Tx => &s.tx_paths,
        Direction::Rx => &s.rx_paths,
    };
    let pending: Vec<PathId> = incident.iter().copied().filter(|&p| !store.is_assigned(p)).collect();
    let mut outcome = FilterOutcome::default();
    if pending.is_empty() {
        return outcome;
    }

    let gaps = config.site_gaps(instance, site);
    let base = SiteState::from_store(store, site, gaps);
    let site_target = match direction {
        Direction::Tx => Target::SiteTx(site),
        Direction::Rx => Target::SiteRx(site),
    };
    let site_set = match direction {
        Direction::Tx => store.site_tx(site),
        Direction::Rx => store.site_rx(site),
    };
    let cause = Cause::Filter(site);

    for f in site_set.iter() {
        let freq = spectrum.get(f);
        for &q in &pending {
            if !store.domain(q).contains(f) {
                continue;
            }
            let empties_neighbor = instance.neighbors(q).iter().any(|n| {
                !store.is_assigned(n.path)
                    && store
                        .domain(n.path)
                        .difference(spectrum.conflicts(freq, n.gap))
                        .is_empty()
            });
            let rejects = empties_neighbor || {
                let opens_pair = !store.is_assigned(instance.path(q).sibling());
                let tentative = match direction {
                    Direction::Tx => base.with_tx(f, opens_pair),
                    Direction::Rx => base.with_rx(f, opens_pair),
                };
                !avail.can_host_pending(&tentative, SiteDomains::of_site(store, site), strategy)
            };
            if rejects {
                store.remove(Target::Path(q), FreqSet::singleton(f), cause);
                outcome.removed.push((q, freq));
            }
        }
        if pending.iter().all(|&q| !store.domain(q).contains(f)) {
            store.remove(site_target, FreqSet::singleton(f), cause);
            outcome.site_removed.push(freq);
        }
    }
    outcome.wiped_out = pending.iter().any(|&q| store.domain(q).is_empty());
    outcome
}
