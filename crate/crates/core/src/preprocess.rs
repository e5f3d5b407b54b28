//! Domain reduction around sites carrying eight links.
//!
//! A site with eight links needs eight transmit and eight receive
//! frequencies. On the RITA layout an inter-plane can never host both
//! directions, holds at most two transmitters, and holds three (small) or
//! four (large) receivers when the receive gap is at most 70. Eight
//! transmitters therefore take the four small inter-planes, two each at
//! their outer members, and the eight receivers fill the two large ones.

use crate::availability::SiteGaps;
use crate::model::{rita_inter_planes, FreqSet, Frequency, Instance, InterPlane, PathId, SiteId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterPlaneCheck {
    pub index: usize,
    pub large: bool,
    pub spread: u32,
    /// Some member pair is far enough apart for a transmitter and a receiver.
    pub mixes_directions: bool,
    pub max_tx: usize,
    pub max_rx: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub planes: Vec<InterPlaneCheck>,
    /// No inter-plane can hold a transmitter and a receiver together.
    pub single_direction: bool,
    /// Every inter-plane holds at most two transmitters.
    pub two_transmitters: bool,
    /// Small inter-planes hold three receivers, large ones four.
    pub full_receivers: bool,
}

fn largest_spaced_subset(members: &[Frequency], gap: u32) -> usize {
    let n = members.len();
    (0u32..1 << n)
        .filter(|mask| {
            let picked: Vec<Frequency> = (0..n).filter(|k| mask & (1 << k) != 0).map(|k| members[k]).collect();
            picked
                .iter()
                .enumerate()
                .all(|(a, f)| picked[a + 1..].iter().all(|g| f.distance(*g) >= gap))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Checks the three inter-plane properties by enumerating member subsets.
pub fn check_ipe_properties(layout: &[InterPlane], gaps: &SiteGaps) -> PropertyReport {
    let planes: Vec<InterPlaneCheck> = layout
        .iter()
        .map(|ipe| {
            let m = &ipe.members;
            let mixes_directions = m
                .iter()
                .enumerate()
                .any(|(a, f)| m[a + 1..].iter().any(|g| f.distance(*g) >= gaps.tx_rx));
            InterPlaneCheck {
                index: ipe.index,
                large: ipe.is_large(),
                spread: ipe.spread(),
                mixes_directions,
                max_tx: largest_spaced_subset(m, gaps.tx_tx),
                max_rx: largest_spaced_subset(m, gaps.rx_rx),
            }
        })
        .collect();
    PropertyReport {
        single_direction: planes.iter().all(|p| !p.mixes_directions),
        two_transmitters: planes.iter().all(|p| p.max_tx == 2),
        full_receivers: planes
            .iter()
            .all(|p| p.max_rx == if p.large { 4 } else { 3 }),
        planes,
    }
}

/// Frequencies left to a transmit path of an eight-link site.
pub fn cart8_tx_domain() -> Vec<Frequency> {
    rita_inter_planes()
        .into_iter()
        .filter(|ipe| !ipe.is_large())
        .flat_map(|ipe| [ipe.members[0], *ipe.members.last().unwrap()])
        .collect()
}

/// Frequencies left to a receive path of an eight-link site.
pub fn cart8_rx_domain() -> Vec<Frequency> {
    rita_inter_planes()
        .into_iter()
        .filter(InterPlane::is_large)
        .flat_map(|ipe| ipe.members)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionWarning {
    pub path: PathId,
    pub tx_site: SiteId,
    pub rx_site: SiteId,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub domains: Vec<FreqSet>,
    pub warnings: Vec<ReductionWarning>,
    /// Paths whose domain actually shrank.
    pub reduced_paths: usize,
}

impl ReductionOutcome {
    pub fn apply(&self, instance: &Instance) -> Instance {
        instance.with_domains(self.domains.clone())
    }
}

/// Restricts the paths of eight-link sites to their direction's set.
/// A path whose restriction would be empty keeps its domain and is reported.
pub fn cart8_reduce(instance: &Instance) -> ReductionOutcome {
    let spectrum = instance.spectrum();
    let tx_set = spectrum.set_of(cart8_tx_domain());
    let rx_set = spectrum.set_of(cart8_rx_domain());
    let mut domains = instance.domains().to_vec();
    let mut warnings = Vec::new();
    let mut reduced_paths = 0;
    for p in instance.paths() {
        let tx_cart8 = instance.site(p.tx).is_cart8();
        let rx_cart8 = instance.site(p.rx).is_cart8();
        if !tx_cart8 && !rx_cart8 {
            continue;
        }
        let mut keep = spectrum.full();
        if tx_cart8 {
            keep = keep.intersection(tx_set);
        }
        if rx_cart8 {
            keep = keep.intersection(rx_set);
        }
        let reduced = domains[p.id].intersection(keep);
        if reduced.is_empty() {
            let message = if tx_cart8 && rx_cart8 {
                "path joins two eight-link sites; transmit and receive reductions are disjoint".to_string()
            } else {
                "reduced domain would be empty".to_string()
            };
            warnings.push(ReductionWarning {
                path: p.id,
                tx_site: p.tx,
                rx_site: p.rx,
                message,
            });
            continue;
        }
        if reduced != domains[p.id] {
            reduced_paths += 1;
            domains[p.id] = reduced;
        }
    }
    ReductionOutcome {
        domains,
        warnings,
        reduced_paths,
    }
}
