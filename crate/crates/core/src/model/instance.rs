use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::frequency::{rita_domain, FreqSet, Frequency, Spectrum};
use super::{ModelError, RecordRef};

pub type SiteId = usize;
pub type LinkId = usize;
pub type PathId = usize;

/// Most links a single site may carry.
pub const MAX_SITE_LINKS: usize = 8;

pub const DUPLEX_GAP: u32 = 600;
pub const TX_RX_GAP: u32 = 220;
pub const TX_TX_GAP: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstraintKind {
    Duplex,
    TxTx,
    TxRx,
    RxRx,
    FarField,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 5] = [
        ConstraintKind::Duplex,
        ConstraintKind::TxTx,
        ConstraintKind::TxRx,
        ConstraintKind::RxRx,
        ConstraintKind::FarField,
    ];

    /// Token used in the text format.
    pub fn token(self) -> &'static str {
        match self {
            ConstraintKind::Duplex => "duplex",
            ConstraintKind::TxTx => "txtx",
            ConstraintKind::TxRx => "txrx",
            ConstraintKind::RxRx => "rxrx",
            ConstraintKind::FarField => "far",
        }
    }

    pub fn from_token(s: &str) -> Option<ConstraintKind> {
        ConstraintKind::ALL.into_iter().find(|k| k.token() == s)
    }

    pub fn is_co_site(self) -> bool {
        matches!(self, ConstraintKind::TxTx | ConstraintKind::TxRx | ConstraintKind::RxRx)
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Gap values used where an instance carries no per-pair data: the
/// generator and the availability calculus. Duplex, tx-rx and tx-tx gaps
/// are fixed by the channel plan; receiver-receiver and far-field gaps
/// vary per pair in real instances, so only their defaults live here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapDefaults {
    pub rx_rx: u32,
    pub far_field: u32,
}

impl Default for GapDefaults {
    fn default() -> Self {
        GapDefaults {
            rx_rx: 60,
            far_field: 30,
        }
    }
}

impl GapDefaults {
    pub fn default_gap(&self, kind: ConstraintKind) -> u32 {
        match kind {
            ConstraintKind::Duplex => DUPLEX_GAP,
            ConstraintKind::TxRx => TX_RX_GAP,
            ConstraintKind::TxTx => TX_TX_GAP,
            ConstraintKind::RxRx => self.rx_rx,
            ConstraintKind::FarField => self.far_field,
        }
    }
}

/// Upper bounds enforced on the variable gap kinds when validating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelLimits {
    pub rx_rx_cap: u32,
    pub far_field_cap: u32,
}

impl Default for ModelLimits {
    fn default() -> Self {
        ModelLimits {
            rx_rx_cap: 80,
            far_field_cap: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub id: SiteId,
    pub links: Vec<LinkId>,
    /// Paths transmitting from this site.
    pub tx_paths: Vec<PathId>,
    /// Paths received at this site.
    pub rx_paths: Vec<PathId>,
}

impl Site {
    pub fn degree(&self) -> usize {
        self.links.len()
    }

    pub fn is_cart8(&self) -> bool {
        self.links.len() == MAX_SITE_LINKS
    }
}

/// A bidirectional link. Path `2 * id` runs `a -> b`, path `2 * id + 1` runs `b -> a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub id: LinkId,
    pub a: SiteId,
    pub b: SiteId,
}

impl Link {
    pub fn paths(&self) -> [PathId; 2] {
        [2 * self.id, 2 * self.id + 1]
    }

    pub fn touches(&self, site: SiteId) -> bool {
        self.a == site || self.b == site
    }
}

/// One direction of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Path {
    pub id: PathId,
    pub link: LinkId,
    /// Transmitting site.
    pub tx: SiteId,
    /// Receiving site.
    pub rx: SiteId,
}

impl Path {
    pub fn sibling(&self) -> PathId {
        self.id ^ 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapConstraint {
    pub i: PathId,
    pub j: PathId,
    pub gap: u32,
    pub kind: ConstraintKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub path: PathId,
    pub gap: u32,
}

/// Relation implied by the topology alone (far-field needs an explicit record).
fn topology_kind(p: &Path, q: &Path) -> Option<ConstraintKind> {
    if p.link == q.link {
        Some(ConstraintKind::Duplex)
    } else if p.tx == q.tx {
        Some(ConstraintKind::TxTx)
    } else if p.tx == q.rx || p.rx == q.tx {
        Some(ConstraintKind::TxRx)
    } else if p.rx == q.rx {
        Some(ConstraintKind::RxRx)
    } else {
        None
    }
}

/// Raw material for an [`Instance`], before validation.
#[derive(Debug, Clone, Default)]
pub struct InstanceParts {
    pub site_count: usize,
    pub links: Vec<(SiteId, SiteId)>,
    pub constraints: Vec<GapConstraint>,
    pub domains: Vec<(PathId, Vec<Frequency>)>,
}

/// A validated, immutable problem instance with its derived indexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    spectrum: Spectrum,
    default_domain: FreqSet,
    sites: Vec<Site>,
    links: Vec<Link>,
    paths: Vec<Path>,
    constraints: Vec<GapConstraint>,
    domains: Vec<FreqSet>,
    neighbors: Vec<Vec<Neighbor>>,
    gap_index: BTreeMap<(PathId, PathId), usize>,
    min_rx_gap: Vec<Option<u32>>,
}

impl Instance {
    pub fn from_parts(parts: InstanceParts, limits: &ModelLimits) -> Result<Instance, ModelError> {
        let InstanceParts {
            site_count,
            links: raw_links,
            constraints: raw_constraints,
            domains: raw_domains,
        } = parts;

        let invalid = |record: RecordRef, reason: String| ModelError::Invalid {
            record,
            reason,
            line: None,
        };

        // links and sites
        let mut seen_pairs = HashSet::new();
        let mut links = Vec::with_capacity(raw_links.len());
        let mut sites: Vec<Site> = (0..site_count)
            .map(|id| Site {
                id,
                links: Vec::new(),
                tx_paths: Vec::new(),
                rx_paths: Vec::new(),
            })
            .collect();
        let mut paths = Vec::with_capacity(2 * raw_links.len());
        for (id, &(a, b)) in raw_links.iter().enumerate() {
            if a >= site_count || b >= site_count {
                return Err(invalid(
                    RecordRef::Link(id),
                    format!("site id out of range (sites = {site_count})"),
                ));
            }
            if a == b {
                return Err(invalid(RecordRef::Link(id), "link connects a site to itself".into()));
            }
            if !seen_pairs.insert((a.min(b), a.max(b))) {
                return Err(invalid(
                    RecordRef::Link(id),
                    format!("sites {a} and {b} are already connected"),
                ));
            }
            links.push(Link { id, a, b });
            paths.push(Path {
                id: 2 * id,
                link: id,
                tx: a,
                rx: b,
            });
            paths.push(Path {
                id: 2 * id + 1,
                link: id,
                tx: b,
                rx: a,
            });
            sites[a].links.push(id);
            sites[b].links.push(id);
        }
        for p in &paths {
            sites[p.tx].tx_paths.push(p.id);
            sites[p.rx].rx_paths.push(p.id);
        }
        for s in &sites {
            if s.links.is_empty() || s.links.len() > MAX_SITE_LINKS {
                return Err(invalid(
                    RecordRef::Site(s.id),
                    format!(
                        "site has {} links, expected between 1 and {}",
                        s.links.len(),
                        MAX_SITE_LINKS
                    ),
                ));
            }
        }

        // constraints
        let path_count = paths.len();
        let mut constraints = Vec::with_capacity(raw_constraints.len());
        let mut gap_index = BTreeMap::new();
        for (idx, c) in raw_constraints.iter().enumerate() {
            let record = RecordRef::Constraint(idx);
            if c.i >= path_count || c.j >= path_count {
                return Err(invalid(record, format!("path id out of range (paths = {path_count})")));
            }
            if c.i == c.j {
                return Err(invalid(record, "constraint between a path and itself".into()));
            }
            let (i, j) = (c.i.min(c.j), c.i.max(c.j));
            let topo = topology_kind(&paths[i], &paths[j]);
            let expected = topo.unwrap_or(ConstraintKind::FarField);
            if c.kind != expected {
                return Err(invalid(
                    record,
                    format!("kind {} does not match path topology ({})", c.kind, expected),
                ));
            }
            let gap_ok = match c.kind {
                ConstraintKind::Duplex => c.gap == DUPLEX_GAP,
                ConstraintKind::TxRx => c.gap == TX_RX_GAP,
                ConstraintKind::TxTx => c.gap == TX_TX_GAP,
                ConstraintKind::RxRx => (1..=limits.rx_rx_cap).contains(&c.gap),
                ConstraintKind::FarField => (1..=limits.far_field_cap).contains(&c.gap),
            };
            if !gap_ok {
                let rule = match c.kind {
                    ConstraintKind::Duplex => format!("must be {DUPLEX_GAP}"),
                    ConstraintKind::TxRx => format!("must be {TX_RX_GAP}"),
                    ConstraintKind::TxTx => format!("must be {TX_TX_GAP}"),
                    ConstraintKind::RxRx => format!("must be in 1..={}", limits.rx_rx_cap),
                    ConstraintKind::FarField => format!("must be in 1..={}", limits.far_field_cap),
                };
                return Err(invalid(record, format!("{} gap {} {}", c.kind, c.gap, rule)));
            }
            if gap_index.insert((i, j), constraints.len()).is_some() {
                return Err(invalid(record, format!("duplicate constraint for paths {i} and {j}")));
            }
            constraints.push(GapConstraint {
                i,
                j,
                gap: c.gap,
                kind: c.kind,
            });
        }
        // every topology-implied pair needs its record
        for s in &sites {
            let incident: Vec<PathId> = s.tx_paths.iter().chain(&s.rx_paths).copied().collect();
            for (x, &p) in incident.iter().enumerate() {
                for &q in &incident[x + 1..] {
                    let key = (p.min(q), p.max(q));
                    if !gap_index.contains_key(&key) {
                        let kind = topology_kind(&paths[p], &paths[q]).expect("co-site pair");
                        return Err(invalid(
                            RecordRef::Site(s.id),
                            format!("missing {} constraint between paths {} and {}", kind, key.0, key.1),
                        ));
                    }
                }
            }
        }

        // domains
        let mut extra: Vec<Frequency> = rita_domain();
        extra.extend(raw_domains.iter().flat_map(|(_, fs)| fs.iter().copied()));
        let spectrum = Spectrum::new(extra).ok_or_else(|| {
            invalid(
                RecordRef::Header,
                format!("more than {} distinct frequencies", super::frequency::MAX_SPECTRUM),
            )
        })?;
        let default_domain = spectrum.set_of(rita_domain());
        let mut domains = vec![default_domain; path_count];
        let mut overridden = vec![false; path_count];
        for (idx, (p, fs)) in raw_domains.iter().enumerate() {
            if *p >= path_count {
                return Err(invalid(
                    RecordRef::Domain(idx),
                    format!("path id out of range (paths = {path_count})"),
                ));
            }
            if std::mem::replace(&mut overridden[*p], true) {
                return Err(invalid(RecordRef::Domain(idx), format!("second domain for path {p}")));
            }
            domains[*p] = spectrum.set_of(fs.iter().copied());
        }

        constraints.sort_unstable_by_key(|c| (c.i, c.j));
        let gap_index: BTreeMap<_, _> = constraints
            .iter()
            .enumerate()
            .map(|(k, c)| ((c.i, c.j), k))
            .collect();
        let mut neighbors = vec![Vec::new(); path_count];
        for c in &constraints {
            neighbors[c.i].push(Neighbor { path: c.j, gap: c.gap });
            neighbors[c.j].push(Neighbor { path: c.i, gap: c.gap });
        }
        let mut min_rx_gap: Vec<Option<u32>> = vec![None; site_count];
        for c in constraints.iter().filter(|c| c.kind == ConstraintKind::RxRx) {
            let s = paths[c.i].rx;
            min_rx_gap[s] = Some(min_rx_gap[s].map_or(c.gap, |g| g.min(c.gap)));
        }

        Ok(Instance {
            spectrum,
            default_domain,
            sites,
            links,
            paths,
            constraints,
            domains,
            neighbors,
            gap_index,
            min_rx_gap,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// The RITA domain as a set over this instance's spectrum.
    pub fn default_domain(&self) -> FreqSet {
        self.default_domain
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site(&self, id: SiteId) -> &Site {
        &self.sites[id]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id]
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, id: PathId) -> &Path {
        &self.paths[id]
    }

    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// Constraint records, sorted by `(i, j)` with `i < j`.
    pub fn constraints(&self) -> &[GapConstraint] {
        &self.constraints
    }

    pub fn neighbors(&self, path: PathId) -> &[Neighbor] {
        &self.neighbors[path]
    }

    pub fn domain(&self, path: PathId) -> FreqSet {
        self.domains[path]
    }

    pub fn domains(&self) -> &[FreqSet] {
        &self.domains
    }

    /// Minimum gap between the two paths; zero when no constraint applies.
    pub fn gap(&self, i: PathId, j: PathId) -> u32 {
        self.constraint_between(i, j).map_or(0, |c| c.gap)
    }

    pub fn constraint_between(&self, i: PathId, j: PathId) -> Option<&GapConstraint> {
        self.gap_index
            .get(&(i.min(j), i.max(j)))
            .map(|&k| &self.constraints[k])
    }

    /// Relation between two paths, or `None` when unconstrained.
    pub fn classify_pair(&self, i: PathId, j: PathId) -> Result<Option<ConstraintKind>, ModelError> {
        let n = self.paths.len();
        if i >= n || j >= n {
            return Err(ModelError::PathOutOfRange { path: i.max(j), paths: n });
        }
        if i == j {
            return Err(ModelError::SamePath(i));
        }
        Ok(topology_kind(&self.paths[i], &self.paths[j])
            .or_else(|| self.constraint_between(i, j).map(|c| c.kind)))
    }

    /// Sites carrying the maximum number of links.
    pub fn cart8_sites(&self) -> Vec<SiteId> {
        self.sites.iter().filter(|s| s.is_cart8()).map(|s| s.id).collect()
    }

    /// Smallest receiver-receiver gap stored at a site.
    pub fn min_rx_gap(&self, site: SiteId) -> Option<u32> {
        self.min_rx_gap[site]
    }

    /// Same topology and constraints with replaced per-path domains.
    pub fn with_domains(&self, domains: Vec<FreqSet>) -> Instance {
        assert_eq!(domains.len(), self.paths.len());
        Instance {
            domains,
            ..self.clone()
        }
    }

    /// Decomposes back into parts; the inverse of [`Instance::from_parts`].
    pub fn to_parts(&self) -> InstanceParts {
        InstanceParts {
            site_count: self.sites.len(),
            links: self.links.iter().map(|l| (l.a, l.b)).collect(),
            constraints: self.constraints.clone(),
            domains: self
                .domains
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != self.default_domain)
                .map(|(p, &d)| (p, self.spectrum.to_vec(d)))
                .collect(),
        }
    }
}

/// Builds an instance from a link list, deriving every duplex and co-site
/// record from the topology.
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    site_count: usize,
    links: Vec<(SiteId, SiteId)>,
    rx_rx_gap: u32,
    rx_overrides: BTreeMap<(PathId, PathId), u32>,
    far_field: BTreeMap<(PathId, PathId), u32>,
    domains: BTreeMap<PathId, Vec<Frequency>>,
    limits: ModelLimits,
}

impl InstanceBuilder {
    pub fn new(site_count: usize) -> Self {
        InstanceBuilder {
            site_count,
            links: Vec::new(),
            rx_rx_gap: GapDefaults::default().rx_rx,
            rx_overrides: BTreeMap::new(),
            far_field: BTreeMap::new(),
            domains: BTreeMap::new(),
            limits: ModelLimits::default(),
        }
    }

    pub fn link(mut self, a: SiteId, b: SiteId) -> Self {
        self.links.push((a, b));
        self
    }

    pub fn links<I: IntoIterator<Item = (SiteId, SiteId)>>(mut self, links: I) -> Self {
        self.links.extend(links);
        self
    }

    /// Receiver-receiver gap used for every pair without an override.
    pub fn rx_rx_gap(mut self, gap: u32) -> Self {
        self.rx_rx_gap = gap;
        self
    }

    pub fn rx_rx_override(mut self, i: PathId, j: PathId, gap: u32) -> Self {
        self.rx_overrides.insert((i.min(j), i.max(j)), gap);
        self
    }

    pub fn far_field(mut self, i: PathId, j: PathId, gap: u32) -> Self {
        self.far_field.insert((i.min(j), i.max(j)), gap);
        self
    }

    pub fn domain(mut self, path: PathId, freqs: Vec<Frequency>) -> Self {
        self.domains.insert(path, freqs);
        self
    }

    pub fn limits(mut self, limits: ModelLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn link_list(&self) -> &[(SiteId, SiteId)] {
        &self.links
    }

    pub fn build(self) -> Result<Instance, ModelError> {
        let mut paths = Vec::with_capacity(self.links.len() * 2);
        for (id, &(a, b)) in self.links.iter().enumerate() {
            paths.push(Path { id: 2 * id, link: id, tx: a, rx: b });
            paths.push(Path { id: 2 * id + 1, link: id, tx: b, rx: a });
        }
        let mut by_site: Vec<Vec<PathId>> = vec![Vec::new(); self.site_count];
        for p in &paths {
            if p.tx < self.site_count {
                by_site[p.tx].push(p.id);
            }
            if p.rx < self.site_count {
                by_site[p.rx].push(p.id);
            }
        }
        let mut pairs: BTreeMap<(PathId, PathId), (u32, ConstraintKind)> = BTreeMap::new();
        for incident in &by_site {
            for (x, &p) in incident.iter().enumerate() {
                for &q in &incident[x + 1..] {
                    let key = (p.min(q), p.max(q));
                    let Some(kind) = topology_kind(&paths[key.0], &paths[key.1]) else {
                        continue;
                    };
                    let gap = match kind {
                        ConstraintKind::RxRx => {
                            *self.rx_overrides.get(&key).unwrap_or(&self.rx_rx_gap)
                        }
                        other => GapDefaults::default().default_gap(other),
                    };
                    pairs.insert(key, (gap, kind));
                }
            }
        }
        for (&key, &gap) in &self.far_field {
            pairs.insert(key, (gap, ConstraintKind::FarField));
        }
        let constraints = pairs
            .into_iter()
            .map(|((i, j), (gap, kind))| GapConstraint { i, j, gap, kind })
            .collect();
        Instance::from_parts(
            InstanceParts {
                site_count: self.site_count,
                links: self.links,
                constraints,
                domains: self.domains.into_iter().collect(),
            },
            &self.limits,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Instance {
        InstanceBuilder::new(4)
            .link(0, 1)
            .link(0, 2)
            .link(1, 2)
            .link(2, 3)
            .build()
            .unwrap()
    }

    #[test]
    fn paths_follow_link_ids() {
        let inst = triangle();
        for l in inst.links() {
            let [p, q] = l.paths();
            assert_eq!((p, q), (2 * l.id, 2 * l.id + 1));
            let (p, q) = (inst.path(p), inst.path(q));
            assert_eq!((p.tx, p.rx), (q.rx, q.tx));
            assert_ne!(p.tx, p.rx);
            assert_eq!(p.sibling(), q.id);
        }
    }

    #[test]
    fn classify_pairs() {
        let inst = triangle();
        // link 0: t0 = 0->1, t1 = 1->0; link 1: t2 = 0->2, t3 = 2->0
        assert_eq!(inst.classify_pair(0, 1).unwrap(), Some(ConstraintKind::Duplex));
        assert_eq!(inst.gap(0, 1), 600);
        assert_eq!(inst.classify_pair(0, 2).unwrap(), Some(ConstraintKind::TxTx));
        assert_eq!(inst.gap(0, 2), 100);
        assert_eq!(inst.classify_pair(0, 3).unwrap(), Some(ConstraintKind::TxRx));
        assert_eq!(inst.classify_pair(1, 3).unwrap(), Some(ConstraintKind::RxRx));
        assert_eq!(inst.gap(1, 3), 60);
        // t0 = 0->1 and t7 = 3->2 share no site
        assert_eq!(inst.classify_pair(0, 7).unwrap(), None);
        assert_eq!(inst.gap(0, 7), 0);
        assert!(inst.classify_pair(0, 0).is_err());
        assert!(inst.classify_pair(0, 99).is_err());
    }

    #[test]
    fn far_field_records_classify() {
        let inst = InstanceBuilder::new(4)
            .link(0, 1)
            .link(2, 3)
            .far_field(0, 2, 30)
            .build()
            .unwrap();
        assert_eq!(inst.classify_pair(0, 2).unwrap(), Some(ConstraintKind::FarField));
        assert_eq!(inst.gap(2, 0), 30);
        assert_eq!(inst.classify_pair(0, 3).unwrap(), None);
    }

    #[test]
    fn default_gaps() {
        let d = GapDefaults::default();
        assert_eq!(d.default_gap(ConstraintKind::Duplex), 600);
        assert_eq!(d.default_gap(ConstraintKind::TxRx), 220);
        assert_eq!(d.default_gap(ConstraintKind::TxTx), 100);
        assert_eq!(d.default_gap(ConstraintKind::RxRx), 60);
        assert_eq!(d.default_gap(ConstraintKind::FarField), 30);
    }

    #[test]
    fn every_co_site_pair_has_one_record() {
        let inst = triangle();
        for s in inst.sites() {
            let inc: Vec<_> = s.tx_paths.iter().chain(&s.rx_paths).copied().collect();
            for (x, &p) in inc.iter().enumerate() {
                for &q in &inc[x + 1..] {
                    let c = inst.constraint_between(p, q).unwrap();
                    assert_eq!(inst.gap(p, q), inst.gap(q, p));
                    match c.kind {
                        ConstraintKind::Duplex => assert_eq!(c.gap, 600),
                        ConstraintKind::TxRx => assert_eq!(c.gap, 220),
                        ConstraintKind::TxTx => assert_eq!(c.gap, 100),
                        ConstraintKind::RxRx => assert!(c.gap <= 80),
                        ConstraintKind::FarField => unreachable!(),
                    }
                }
            }
        }
        for l in inst.links() {
            assert_eq!(inst.gap(2 * l.id, 2 * l.id + 1), 600);
        }
    }

    #[test]
    fn cart8_detection() {
        let star = InstanceBuilder::new(9).links((1..9).map(|k| (0, k))).build().unwrap();
        assert_eq!(star.cart8_sites(), vec![0]);
        let small = InstanceBuilder::new(8).links((1..8).map(|k| (0, k))).build().unwrap();
        assert!(small.cart8_sites().is_empty());
        let mut shifted = InstanceBuilder::new(9);
        for k in (0..9).filter(|&k| k != 3) {
            shifted = shifted.link(3, k);
        }
        assert_eq!(shifted.build().unwrap().cart8_sites(), vec![3]);
    }

    #[test]
    fn rejects_bad_topology() {
        assert!(InstanceBuilder::new(2).link(0, 1).link(1, 0).build().is_err());
        assert!(InstanceBuilder::new(2).link(0, 0).build().is_err());
        // isolated site
        assert!(InstanceBuilder::new(3).link(0, 1).build().is_err());
        // degree 9
        assert!(InstanceBuilder::new(10).links((1..10).map(|k| (0, k))).build().is_err());
    }

    #[test]
    fn rejects_bad_gaps() {
        let inst = triangle();
        let mut parts = inst.to_parts();
        let k = parts.constraints.iter().position(|c| c.kind == ConstraintKind::Duplex).unwrap();
        parts.constraints[k].gap = 500;
        assert!(Instance::from_parts(parts, &ModelLimits::default()).is_err());

        let mut parts = inst.to_parts();
        let k = parts.constraints.iter().position(|c| c.kind == ConstraintKind::RxRx).unwrap();
        parts.constraints[k].gap = 81;
        assert!(Instance::from_parts(parts.clone(), &ModelLimits::default()).is_err());
        let relaxed = ModelLimits { rx_rx_cap: 90, ..ModelLimits::default() };
        assert!(Instance::from_parts(parts, &relaxed).is_ok());

        let mut parts = inst.to_parts();
        parts.constraints.remove(0);
        assert!(Instance::from_parts(parts, &ModelLimits::default()).is_err());
    }

    #[test]
    fn domain_override_extends_spectrum() {
        let inst = InstanceBuilder::new(2)
            .link(0, 1)
            .domain(1, vec![Frequency(39000), Frequency(44000)])
            .build()
            .unwrap();
        assert_eq!(inst.spectrum().len(), 21);
        assert_eq!(inst.domain(0), inst.default_domain());
        assert_eq!(inst.spectrum().to_vec(inst.domain(1)), vec![Frequency(39000), Frequency(44000)]);
    }
}
