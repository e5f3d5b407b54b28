//! Site availability.
//!
//! For a site, the transmit (receive) availability of a frequency says
//! whether a new transmit (receive) path could still use it given the paths
//! already assigned there. The exact counts go further:
//!
//! * asynchronous: the largest number of additional transmitters, and
//!   independently of receivers, that fit at the site together;
//! * synchronous: the largest number of additional (transmitter, receiver)
//!   pairs, each pair being the two directions of one future link.
//!
//! Far-field constraints are ignored here; everything else that acts on a
//! site is a co-site or duplex gap.

mod filter;
pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::model::{FreqSet, Instance, SiteId, Spectrum, DUPLEX_GAP, TX_RX_GAP, TX_TX_GAP};
use crate::propagation::DomainStore;

pub use filter::{availability_filter, Direction, FilterActivation, FilterOutcome};

/// How availability is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Async,
    Sync,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Async, Strategy::Sync];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Async => "async",
            Strategy::Sync => "sync",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "async" => Ok(Strategy::Async),
            "sync" => Ok(Strategy::Sync),
            _ => Err(format!("unknown strategy `{s}` (expected async or sync)")),
        }
    }
}

/// Gaps that govern paths meeting at one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteGaps {
    pub tx_tx: u32,
    pub tx_rx: u32,
    pub rx_rx: u32,
    /// Separation between the two directions of one new link.
    pub duplex: u32,
}

impl SiteGaps {
    pub fn with_rx_rx(rx_rx: u32) -> Self {
        SiteGaps {
            tx_tx: TX_TX_GAP,
            tx_rx: TX_RX_GAP,
            rx_rx,
            duplex: DUPLEX_GAP,
        }
    }
}

impl Default for SiteGaps {
    fn default() -> Self {
        SiteGaps::with_rx_rx(60)
    }
}

/// Availability parameters shared by every site of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvailabilityConfig {
    /// Receiver-receiver gap assumed for future paths.
    pub rx_rx: u32,
}

impl Default for AvailabilityConfig {
    fn default() -> Self {
        AvailabilityConfig { rx_rx: 60 }
    }
}

impl AvailabilityConfig {
    /// Gaps for one site. The receiver gap never exceeds the smallest one the
    /// instance stores at that site, so counts stay upper bounds on what the
    /// real constraints allow.
    pub fn site_gaps(&self, instance: &Instance, site: SiteId) -> SiteGaps {
        let rr = instance
            .min_rx_gap(site)
            .map_or(self.rx_rx, |g| g.min(self.rx_rx));
        SiteGaps::with_rx_rx(rr)
    }
}

/// Snapshot of one site: what is assigned there and what is still open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteState {
    pub site: SiteId,
    /// Frequencies of assigned paths transmitting from the site.
    pub tx: FreqSet,
    /// Frequencies of assigned paths received at the site.
    pub rx: FreqSet,
    pub unassigned_tx: usize,
    pub unassigned_rx: usize,
    /// Incident links with neither direction assigned.
    pub open_links: usize,
    pub gaps: SiteGaps,
}

impl SiteState {
    /// A site with nothing assigned and nothing pending.
    pub fn empty(site: SiteId, gaps: SiteGaps) -> Self {
        SiteState {
            site,
            tx: FreqSet::EMPTY,
            rx: FreqSet::EMPTY,
            unassigned_tx: 0,
            unassigned_rx: 0,
            open_links: 0,
            gaps,
        }
    }

    pub fn from_store(store: &DomainStore<'_>, site: SiteId, gaps: SiteGaps) -> Self {
        let instance = store.instance();
        let s = instance.site(site);
        let mut state = SiteState::empty(site, gaps);
        for &p in &s.tx_paths {
            match store.assigned_index(p) {
                Some(i) => state.tx.insert(i),
                None => state.unassigned_tx += 1,
            }
        }
        for &p in &s.rx_paths {
            match store.assigned_index(p) {
                Some(i) => state.rx.insert(i),
                None => state.unassigned_rx += 1,
            }
        }
        state.open_links = s
            .links
            .iter()
            .filter(|&&l| {
                let [a, b] = instance.link(l).paths();
                !store.is_assigned(a) && !store.is_assigned(b)
            })
            .count();
        state
    }

    /// Paths of the site not assigned yet, both directions.
    pub fn unassigned(&self) -> usize {
        self.unassigned_tx + self.unassigned_rx
    }

    /// The state after one pending transmit path takes `index`.
    /// `opens_pair` is true when that path's sibling is still unassigned.
    pub fn with_tx(mut self, index: usize, opens_pair: bool) -> Self {
        self.tx.insert(index);
        self.unassigned_tx = self.unassigned_tx.saturating_sub(1);
        if opens_pair {
            self.open_links = self.open_links.saturating_sub(1);
        }
        self
    }

    /// The state after one pending receive path takes `index`.
    pub fn with_rx(mut self, index: usize, opens_pair: bool) -> Self {
        self.rx.insert(index);
        self.unassigned_rx = self.unassigned_rx.saturating_sub(1);
        if opens_pair {
            self.open_links = self.open_links.saturating_sub(1);
        }
        self
    }
}

/// Candidate frequencies per direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteDomains {
    pub tx: FreqSet,
    pub rx: FreqSet,
}

impl SiteDomains {
    pub fn uniform(set: FreqSet) -> Self {
        SiteDomains { tx: set, rx: set }
    }

    pub fn of_site(store: &DomainStore<'_>, site: SiteId) -> Self {
        SiteDomains {
            tx: store.site_tx(site),
            rx: store.site_rx(site),
        }
    }
}

impl From<FreqSet> for SiteDomains {
    fn from(set: FreqSet) -> Self {
        SiteDomains::uniform(set)
    }
}

/// Per-frequency transmit / receive availability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AvailabilityFlags {
    pub tx: FreqSet,
    pub rx: FreqSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AvailabilityReport {
    pub flags: AvailabilityFlags,
    /// Asynchronous transmit availability.
    pub tx_count: u32,
    /// Asynchronous receive availability.
    pub rx_count: u32,
    /// Synchronous pair availability.
    pub pair_count: u32,
}

impl AvailabilityReport {
    /// Exact asynchronous availability: transmit plus receive.
    pub fn total(&self) -> u32 {
        self.tx_count + self.rx_count
    }
}

/// Partition of the spectrum into blocks that never mix directions.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BlockPlan {
    tx_rx: u32,
    blocks: Vec<FreqSet>,
    max_spread: u32,
    min_separation: u32,
}

impl BlockPlan {
    fn new(spectrum: &Spectrum, tx_rx: u32) -> Self {
        let freqs = spectrum.frequencies();
        let mut blocks = Vec::new();
        let mut max_spread = 0;
        let mut min_separation = u32::MAX;
        let mut start = 0;
        for k in 1..=freqs.len() {
            let split = k == freqs.len() || freqs[k].distance(freqs[k - 1]) >= tx_rx;
            if split {
                blocks.push(FreqSet::range(start, k));
                max_spread = max_spread.max(freqs[k - 1].distance(freqs[start]));
                if k < freqs.len() {
                    min_separation = min_separation.min(freqs[k].distance(freqs[k - 1]));
                }
                start = k;
            }
        }
        BlockPlan {
            tx_rx,
            blocks,
            max_spread,
            min_separation,
        }
    }

    /// Blocks are independent for these gaps: one direction per block, and
    /// any two frequencies from different blocks satisfy every gap.
    fn separable(&self, gaps: &SiteGaps) -> bool {
        gaps.tx_rx == self.tx_rx
            && self.max_spread < gaps.tx_rx
            && self.min_separation >= gaps.tx_tx.max(gaps.rx_rx).max(gaps.duplex)
    }
}

/// Availability calculator bound to one spectrum.
#[derive(Debug, Clone)]
pub struct Availability {
    spectrum: Spectrum,
    plan: BlockPlan,
}

impl Availability {
    pub fn new(spectrum: &Spectrum) -> Self {
        Availability {
            spectrum: spectrum.clone(),
            plan: BlockPlan::new(spectrum, TX_RX_GAP),
        }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Frequencies conflicting with any member of `assigned` under `gap`.
    fn blocked(&self, assigned: FreqSet, gap: u32) -> FreqSet {
        assigned
            .iter()
            .fold(FreqSet::EMPTY, |acc, i| {
                acc.union(self.spectrum.conflicts(self.spectrum.get(i), gap))
            })
    }

    pub fn flags(&self, state: &SiteState, domains: impl Into<SiteDomains>) -> AvailabilityFlags {
        let domains = domains.into();
        let g = &state.gaps;
        let near_tx_tr = self.blocked(state.tx, g.tx_rx);
        let tx = domains
            .tx
            .difference(self.blocked(state.tx, g.tx_tx))
            .difference(self.blocked(state.rx, g.tx_rx));
        let rx = domains
            .rx
            .difference(near_tx_tr)
            .difference(self.blocked(state.rx, g.rx_rx));
        AvailabilityFlags { tx, rx }
    }

    /// Largest subset of `candidates` whose members are pairwise at least
    /// `gap` apart. Greedy from the bottom is optimal for one uniform gap.
    pub fn max_spaced(&self, candidates: FreqSet, gap: u32) -> FreqSet {
        let mut chosen = FreqSet::EMPTY;
        let mut last: Option<u32> = None;
        for i in candidates.iter() {
            let f = self.spectrum.get(i).0;
            if last.is_none_or(|l| f - l >= gap) {
                chosen.insert(i);
                last = Some(f);
            }
        }
        chosen
    }

    /// A maximum set of additional transmit frequencies.
    pub fn max_tx_set(&self, state: &SiteState, domains: impl Into<SiteDomains>) -> FreqSet {
        let flags = self.flags(state, domains);
        self.max_spaced(flags.tx, state.gaps.tx_tx)
    }

    /// A maximum set of additional receive frequencies.
    pub fn max_rx_set(&self, state: &SiteState, domains: impl Into<SiteDomains>) -> FreqSet {
        let flags = self.flags(state, domains);
        self.max_spaced(flags.rx, state.gaps.rx_rx)
    }

    /// Asynchronous (transmit, receive) availability.
    pub fn disp_async(&self, state: &SiteState, domains: impl Into<SiteDomains>) -> (u32, u32) {
        let flags = self.flags(state, domains);
        self.async_from_flags(state, &flags)
    }

    fn async_from_flags(&self, state: &SiteState, flags: &AvailabilityFlags) -> (u32, u32) {
        (
            self.max_spaced(flags.tx, state.gaps.tx_tx).len() as u32,
            self.max_spaced(flags.rx, state.gaps.rx_rx).len() as u32,
        )
    }

    /// Synchronous availability: additional (transmit, receive) pairs.
    pub fn disp_sync(&self, state: &SiteState, domains: impl Into<SiteDomains>) -> u32 {
        let flags = self.flags(state, domains);
        self.sync_from_flags(state, &flags)
    }

    fn sync_from_flags(&self, state: &SiteState, flags: &AvailabilityFlags) -> u32 {
        if flags.tx.is_empty() || flags.rx.is_empty() {
            return 0;
        }
        if self.plan.separable(&state.gaps) {
            self.sync_by_blocks(state, flags)
        } else {
            self.sync_exhaustive(state, flags)
        }
    }

    /// Each block goes to one direction; pick the split that balances the
    /// totals best.
    fn sync_by_blocks(&self, state: &SiteState, flags: &AvailabilityFlags) -> u32 {
        let caps: Vec<(u32, u32)> = self
            .plan
            .blocks
            .iter()
            .map(|&b| {
                (
                    self.max_spaced(flags.tx.intersection(b), state.gaps.tx_tx).len() as u32,
                    self.max_spaced(flags.rx.intersection(b), state.gaps.rx_rx).len() as u32,
                )
            })
            .filter(|&(t, r)| t > 0 || r > 0)
            .collect();
        assert!(caps.len() < 32, "too many populated blocks for split enumeration");
        let mut best = 0;
        for split in 0u32..(1 << caps.len()) {
            let (mut t, mut r) = (0, 0);
            for (k, &(ct, cr)) in caps.iter().enumerate() {
                if split & (1 << k) != 0 {
                    t += ct;
                } else {
                    r += cr;
                }
            }
            best = best.max(t.min(r));
        }
        best
    }

    /// General exact search for spectra whose blocks interact.
    fn sync_exhaustive(&self, state: &SiteState, flags: &AvailabilityFlags) -> u32 {
        let cands: Vec<(u32, bool, bool)> = flags
            .tx
            .union(flags.rx)
            .iter()
            .map(|i| (self.spectrum.get(i).0, flags.tx.contains(i), flags.rx.contains(i)))
            .collect();
        let mut search = PairSearch {
            cands: &cands,
            gaps: state.gaps,
            tx: Vec::new(),
            rx: Vec::new(),
            best: 0,
        };
        search.run(0);
        search.best
    }

    pub fn report(&self, state: &SiteState, domains: impl Into<SiteDomains>) -> AvailabilityReport {
        let flags = self.flags(state, domains);
        let (tx_count, rx_count) = self.async_from_flags(state, &flags);
        AvailabilityReport {
            flags,
            tx_count,
            rx_count,
            pair_count: self.sync_from_flags(state, &flags),
        }
    }

    /// Score, hosting check and completion bound from one flag computation.
    pub fn assess(&self, state: &SiteState, domains: impl Into<SiteDomains>, strategy: Strategy) -> SiteAssessment {
        let flags = self.flags(state, domains);
        match strategy {
            Strategy::Async => {
                let (t, r) = self.async_from_flags(state, &flags);
                SiteAssessment {
                    score: t + r,
                    hosts_pending: t as usize >= state.unassigned_tx && r as usize >= state.unassigned_rx,
                    bound: t.saturating_sub(state.unassigned_tx as u32)
                        + r.saturating_sub(state.unassigned_rx as u32),
                }
            }
            Strategy::Sync => {
                let c = self.sync_from_flags(state, &flags);
                SiteAssessment {
                    score: c,
                    hosts_pending: c as usize >= state.open_links,
                    bound: c.saturating_sub(state.open_links as u32),
                }
            }
        }
    }

    /// Site score under a strategy: transmit plus receive availability for
    /// asynchronous, pair availability for synchronous.
    pub fn score(&self, state: &SiteState, domains: impl Into<SiteDomains>, strategy: Strategy) -> u32 {
        let flags = self.flags(state, domains);
        match strategy {
            Strategy::Async => {
                let (t, r) = self.async_from_flags(state, &flags);
                t + r
            }
            Strategy::Sync => self.sync_from_flags(state, &flags),
        }
    }

    /// Whether the site can still host its pending paths. Asynchronous
    /// checks each direction against its availability; synchronous checks
    /// the links with both directions open against pair availability.
    pub fn can_host_pending(
        &self,
        state: &SiteState,
        domains: impl Into<SiteDomains>,
        strategy: Strategy,
    ) -> bool {
        let flags = self.flags(state, domains);
        match strategy {
            Strategy::Async => {
                let (t, r) = self.async_from_flags(state, &flags);
                t as usize >= state.unassigned_tx && r as usize >= state.unassigned_rx
            }
            Strategy::Sync => self.sync_from_flags(state, &flags) as usize >= state.open_links,
        }
    }

    /// Upper bound on the site score of any completion: every pending path
    /// (asynchronous) or every open link (synchronous) consumes at least one
    /// unit of availability.
    pub fn completion_bound(
        &self,
        state: &SiteState,
        domains: impl Into<SiteDomains>,
        strategy: Strategy,
    ) -> u32 {
        let flags = self.flags(state, domains);
        match strategy {
            Strategy::Async => {
                let (t, r) = self.async_from_flags(state, &flags);
                t.saturating_sub(state.unassigned_tx as u32)
                    + r.saturating_sub(state.unassigned_rx as u32)
            }
            Strategy::Sync => self
                .sync_from_flags(state, &flags)
                .saturating_sub(state.open_links as u32),
        }
    }
}

/// See [`Availability::assess`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteAssessment {
    pub score: u32,
    pub hosts_pending: bool,
    pub bound: u32,
}

struct PairSearch<'c> {
    cands: &'c [(u32, bool, bool)],
    gaps: SiteGaps,
    tx: Vec<u32>,
    rx: Vec<u32>,
    best: u32,
}

impl PairSearch<'_> {
    fn run(&mut self, k: usize) {
        let rest = (self.cands.len() - k) as u32;
        let bound = (self.tx.len() as u32 + rest).min(self.rx.len() as u32 + rest);
        if bound <= self.best {
            return;
        }
        if k == self.cands.len() {
            self.best = self.best.max(max_matching(&self.tx, &self.rx, self.gaps.duplex));
            return;
        }
        let (f, can_tx, can_rx) = self.cands[k];
        let g = self.gaps;
        if can_tx
            && self.tx.last().is_none_or(|&x| f - x >= g.tx_tx)
            && self.rx.last().is_none_or(|&y| f - y >= g.tx_rx)
        {
            self.tx.push(f);
            self.run(k + 1);
            self.tx.pop();
        }
        if can_rx
            && self.rx.last().is_none_or(|&y| f - y >= g.rx_rx)
            && self.tx.last().is_none_or(|&x| f - x >= g.tx_rx)
        {
            self.rx.push(f);
            self.run(k + 1);
            self.rx.pop();
        }
        self.run(k + 1);
    }
}

/// Maximum matching between `tx` and `rx` where a pair needs separation `gap`.
fn max_matching(tx: &[u32], rx: &[u32], gap: u32) -> u32 {
    fn augment(x: usize, tx: &[u32], rx: &[u32], gap: u32, seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
        for y in 0..rx.len() {
            if seen[y] || tx[x].abs_diff(rx[y]) < gap {
                continue;
            }
            seen[y] = true;
            if mate[y].is_none_or(|other| augment(other, tx, rx, gap, seen, mate)) {
                mate[y] = Some(x);
                return true;
            }
        }
        false
    }
    let mut mate = vec![None; rx.len()];
    let mut size = 0;
    for x in 0..tx.len() {
        let mut seen = vec![false; rx.len()];
        if augment(x, tx, rx, gap, &mut seen, &mut mate) {
            size += 1;
        }
    }
    size
}

/// Total availability of the current store over all sites.
pub fn solution_disp(store: &DomainStore<'_>, config: &AvailabilityConfig, strategy: Strategy) -> u32 {
    let instance = store.instance();
    let avail = Availability::new(instance.spectrum());
    solution_disp_with(&avail, store, config, strategy)
}

pub fn solution_disp_with(
    avail: &Availability,
    store: &DomainStore<'_>,
    config: &AvailabilityConfig,
    strategy: Strategy,
) -> u32 {
    let instance = store.instance();
    (0..instance.site_count())
        .map(|s| {
            let state = SiteState::from_store(store, s, config.site_gaps(instance, s));
            avail.score(&state, SiteDomains::of_site(store, s), strategy)
        })
        .sum()
}
