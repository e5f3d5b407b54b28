//! Variable and value ordering.

use std::cmp::Reverse;

use crate::availability::{Availability, AvailabilityConfig, SiteDomains, SiteGaps, SiteState, Strategy};
use crate::model::{Frequency, Instance, PathId};
use crate::propagation::DomainStore;

/// Static path order. Links at eight-link sites come first, then links with
/// more constraint records, then links whose endpoints carry more links.
/// Both paths of a link are adjacent, `a -> b` first.
pub fn order_variables(instance: &Instance) -> Vec<PathId> {
    let cart8: Vec<bool> = instance.sites().iter().map(|s| s.is_cart8()).collect();
    let mut links: Vec<_> = instance
        .links()
        .iter()
        .map(|l| {
            let [p, q] = l.paths();
            // the duplex record is shared by both paths
            let records = instance.neighbors(p).len() + instance.neighbors(q).len() - 1;
            let degree = instance.site(l.a).degree() + instance.site(l.b).degree();
            let key = (Reverse(cart8[l.a] || cart8[l.b]), Reverse(records), Reverse(degree), l.id);
            (key, l.paths())
        })
        .collect();
    links.sort_unstable_by_key(|(key, _)| *key);
    links.into_iter().flat_map(|(_, paths)| paths).collect()
}

/// Ranks the values of a path by the availability left at both of its
/// endpoints once the value is taken.
#[derive(Debug, Clone)]
pub struct ValueOrdering {
    avail: Availability,
    gaps: Vec<SiteGaps>,
    strategy: Strategy,
}

impl ValueOrdering {
    pub fn new(instance: &Instance, config: &AvailabilityConfig, strategy: Strategy) -> Self {
        let gaps = (0..instance.site_count())
            .map(|s| config.site_gaps(instance, s))
            .collect();
        ValueOrdering {
            avail: Availability::new(instance.spectrum()),
            gaps,
            strategy,
        }
    }

    pub fn availability(&self) -> &Availability {
        &self.avail
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn site_gaps(&self, site: usize) -> SiteGaps {
        self.gaps[site]
    }

    pub fn site_state(&self, store: &DomainStore<'_>, site: usize) -> SiteState {
        SiteState::from_store(store, site, self.gaps[site])
    }

    /// Surviving values of `path` with their scores, best first and ties by
    /// ascending frequency. Values after which either endpoint could no
    /// longer host its pending paths are left out.
    pub fn ranked(&self, store: &DomainStore<'_>, path: PathId) -> Vec<(usize, u32)> {
        let instance = store.instance();
        let p = instance.path(path);
        let opens_pair = !store.is_assigned(p.sibling());
        let tx_base = self.site_state(store, p.tx);
        let rx_base = self.site_state(store, p.rx);
        let tx_doms = SiteDomains::of_site(store, p.tx);
        let rx_doms = SiteDomains::of_site(store, p.rx);
        let mut out: Vec<(usize, u32)> = store
            .domain(path)
            .iter()
            .filter_map(|f| {
                let at_tx = self.avail.assess(&tx_base.with_tx(f, opens_pair), tx_doms, self.strategy);
                if !at_tx.hosts_pending {
                    return None;
                }
                let at_rx = self.avail.assess(&rx_base.with_rx(f, opens_pair), rx_doms, self.strategy);
                at_rx.hosts_pending.then_some((f, at_tx.score + at_rx.score))
            })
            .collect();
        out.sort_by_key(|&(f, score)| (Reverse(score), f));
        out
    }

    pub fn order(&self, store: &DomainStore<'_>, path: PathId) -> Vec<Frequency> {
        let spectrum = store.instance().spectrum();
        self.ranked(store, path).into_iter().map(|(f, _)| spectrum.get(f)).collect()
    }
}
