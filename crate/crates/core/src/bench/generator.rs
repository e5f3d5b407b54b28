//! Random scenarios shaped like the four benchmark groups.
//!
//! The topology is built in three steps: every eight-link site gets eight
//! ordinary neighbours, the resulting components are chained together into
//! one connected graph, and random extra links fill the remaining budget.
//! Ordinary sites stay below eight links, so the eight-link sites are exactly
//! the requested ones. Receive gaps are drawn per site; far-field records join
//! random pairs of links that share no site.

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Instance, InstanceBuilder, ModelError, SiteId, MAX_SITE_LINKS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    G01,
    G10,
    G20,
    G30,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::G01, Group::G10, Group::G20, Group::G30];

    pub fn name(self) -> &'static str {
        match self {
            Group::G01 => "g01",
            Group::G10 => "g10",
            Group::G20 => "g20",
            Group::G30 => "g30",
        }
    }

    pub fn links(self) -> usize {
        match self {
            Group::G01 => 150,
            Group::G10 => 50,
            Group::G20 => 100,
            Group::G30 => 300,
        }
    }

    /// Same links-per-site ratio for every group: 28 sites for 50 links,
    /// 168 for 300.
    pub fn sites(self) -> usize {
        self.links() * 28 / 50
    }

    pub fn cart8(self) -> usize {
        match self {
            Group::G10 => 1,
            Group::G01 | Group::G20 => 2,
            Group::G30 => 4,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown group `{s}` (expected g01, g10, g20 or g30)"))
    }
}

/// Distribution of a gap value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GapSampler {
    Fixed(u32),
    /// Values with relative weights.
    Weighted(Vec<(u32, f64)>),
    /// Uniform over the listed values.
    OneOf(Vec<u32>),
}

impl GapSampler {
    /// Receive gaps around 60, never above 80.
    pub fn rx_rx_default() -> Self {
        GapSampler::Weighted(vec![(50, 0.25), (60, 0.55), (70, 0.15), (80, 0.05)])
    }

    pub fn far_field_default() -> Self {
        GapSampler::OneOf(vec![10, 20, 30, 40, 50])
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<u32, GeneratorError> {
        match self {
            GapSampler::Fixed(g) => Ok(*g),
            GapSampler::Weighted(table) => {
                let dist = WeightedIndex::new(table.iter().map(|t| t.1))
                    .map_err(|e| GeneratorError::Params(format!("bad gap weights: {e}")))?;
                Ok(table[dist.sample(rng)].0)
            }
            GapSampler::OneOf(values) => values
                .choose(rng)
                .copied()
                .ok_or_else(|| GeneratorError::Params("empty gap list".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub links: usize,
    pub sites: usize,
    pub cart8: usize,
    pub rx_rx: GapSampler,
    pub far_field: GapSampler,
    /// Chance that a pair of links sharing no site gets far-field records.
    pub far_field_probability: f64,
    pub seed: u64,
}

impl ScenarioParams {
    pub fn group(group: Group, seed: u64) -> Self {
        ScenarioParams {
            links: group.links(),
            sites: group.sites(),
            cart8: group.cart8(),
            rx_rx: GapSampler::rx_rx_default(),
            far_field: GapSampler::far_field_default(),
            far_field_probability: 0.02,
            seed,
        }
    }

    pub fn with_cart8(mut self, cart8: usize) -> Self {
        self.cart8 = cart8;
        self
    }

    pub fn with_rx_rx(mut self, rx_rx: GapSampler) -> Self {
        self.rx_rx = rx_rx;
        self
    }
}

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("{cart8} eight-link sites need {} links but only {links} are allowed", cart8 * 8)]
    Cart8ExceedsLinks { cart8: usize, links: usize },
    #[error("infeasible parameters: {0}")]
    Params(String),
    #[error("generated instance is invalid: {0}")]
    Model(#[from] ModelError),
}

const ORDINARY_CAP: usize = MAX_SITE_LINKS - 1;

struct Graph {
    degree: Vec<usize>,
    links: Vec<(SiteId, SiteId)>,
    adjacent: Vec<Vec<bool>>,
    parent: Vec<usize>,
}

impl Graph {
    fn new(n: usize) -> Self {
        Graph {
            degree: vec![0; n],
            links: Vec::new(),
            adjacent: vec![vec![false; n]; n],
            parent: (0..n).collect(),
        }
    }

    fn root(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn add(&mut self, a: SiteId, b: SiteId) {
        self.degree[a] += 1;
        self.degree[b] += 1;
        self.adjacent[a][b] = true;
        self.adjacent[b][a] = true;
        self.links.push((a.min(b), a.max(b)));
        let (ra, rb) = (self.root(a), self.root(b));
        self.parent[ra] = rb;
    }
}

fn infeasible(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::Params(msg.into())
}

fn topology(p: &ScenarioParams, rng: &mut ChaCha8Rng) -> Result<Graph, GeneratorError> {
    let n = p.sites;
    let mut g = Graph::new(n);
    let mut ids: Vec<SiteId> = (0..n).collect();
    ids.shuffle(rng);
    let mut is_center = vec![false; n];
    for &c in &ids[..p.cart8] {
        is_center[c] = true;
    }
    let ordinary: Vec<SiteId> = (0..n).filter(|&s| !is_center[s]).collect();

    for &c in &ids[..p.cart8] {
        let open: Vec<SiteId> = ordinary.iter().copied().filter(|&s| g.degree[s] < ORDINARY_CAP).collect();
        if open.len() < MAX_SITE_LINKS {
            return Err(infeasible("not enough ordinary sites around the eight-link sites"));
        }
        for &s in open.choose_multiple(rng, MAX_SITE_LINKS) {
            g.add(c, s);
        }
    }

    // chain the components through ordinary sites with spare capacity
    let mut comps: Vec<Vec<SiteId>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for &s in &ordinary {
        let r = g.root(s);
        match root_of[r] {
            Some(k) => comps[k].push(s),
            None => {
                root_of[r] = Some(comps.len());
                comps.push(vec![s]);
            }
        }
    }
    comps.shuffle(rng);
    let mut pool: Vec<SiteId> = comps.first().cloned().unwrap_or_default();
    for comp in comps.iter().skip(1) {
        let spare = |v: &[SiteId], g: &Graph| -> Vec<SiteId> {
            v.iter().copied().filter(|&t| g.degree[t] < ORDINARY_CAP).collect()
        };
        let a = spare(comp, &g).choose(rng).copied();
        let b = spare(&pool, &g).choose(rng).copied();
        let (Some(a), Some(b)) = (a, b) else {
            return Err(infeasible("no spare capacity left to connect the sites"));
        };
        g.add(a, b);
        pool.extend(comp);
    }
    if g.links.len() > p.links {
        return Err(infeasible(format!(
            "connecting {n} sites takes more than {} links",
            p.links
        )));
    }

    while g.links.len() < p.links {
        let mut picked = None;
        for _ in 0..64 {
            let a = *ordinary.choose(rng).unwrap();
            let b = *ordinary.choose(rng).unwrap();
            if a != b && !g.adjacent[a][b] && g.degree[a] < ORDINARY_CAP && g.degree[b] < ORDINARY_CAP {
                picked = Some((a, b));
                break;
            }
        }
        if picked.is_none() {
            let open: Vec<(SiteId, SiteId)> = ordinary
                .iter()
                .flat_map(|&a| ordinary.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| {
                    a < b && !g.adjacent[a][b] && g.degree[a] < ORDINARY_CAP && g.degree[b] < ORDINARY_CAP
                })
                .collect();
            picked = open.choose(rng).copied();
        }
        let (a, b) = picked.ok_or_else(|| infeasible(format!("{n} sites cannot carry {} links", p.links)))?;
        g.add(a, b);
    }
    Ok(g)
}

/// Builds one scenario; the same parameters always give the same instance.
pub fn generate_instance(p: &ScenarioParams) -> Result<Instance, GeneratorError> {
    if p.cart8 * MAX_SITE_LINKS > p.links {
        return Err(GeneratorError::Cart8ExceedsLinks {
            cart8: p.cart8,
            links: p.links,
        });
    }
    if p.cart8 > p.sites {
        return Err(infeasible("more eight-link sites than sites"));
    }
    if p.sites < 2 || p.links == 0 {
        return Err(infeasible("need at least two sites and one link"));
    }
    if !(0.0..=1.0).contains(&p.far_field_probability) {
        return Err(infeasible("far-field probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut g = topology(p, &mut rng)?;
    g.links.shuffle(&mut rng);

    let mut builder = InstanceBuilder::new(p.sites).links(g.links.iter().copied());
    // path 2l goes a -> b, path 2l+1 goes b -> a
    let mut rx_at: Vec<Vec<usize>> = vec![Vec::new(); p.sites];
    for (l, &(a, b)) in g.links.iter().enumerate() {
        rx_at[b].push(2 * l);
        rx_at[a].push(2 * l + 1);
    }
    for paths in &rx_at {
        let gap = p.rx_rx.sample(&mut rng)?;
        for (k, &i) in paths.iter().enumerate() {
            for &j in &paths[k + 1..] {
                builder = builder.rx_rx_override(i, j, gap);
            }
        }
    }
    for l in 0..g.links.len() {
        let (a, b) = g.links[l];
        for m in l + 1..g.links.len() {
            let (c, d) = g.links[m];
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if !rng.random_bool(p.far_field_probability) {
                continue;
            }
            for i in [2 * l, 2 * l + 1] {
                for j in [2 * m, 2 * m + 1] {
                    builder = builder.far_field(i, j, p.far_field.sample(&mut rng)?);
                }
            }
        }
    }
    Ok(builder.build()?)
}
