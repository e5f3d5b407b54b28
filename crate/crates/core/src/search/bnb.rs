//! Iterative Branch&Bound.
//!
//! Paths are visited in the static order of [`order_variables`]. Each depth
//! keeps its ranked candidate list and a `reconsider` cursor, the number of
//! list positions already tried (0 for a fresh node). Going back past a depth
//! resets its cursor so the node is re-ranked when it is entered again.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::availability::{availability_filter, solution_disp_with, Direction, SiteDomains};
use crate::model::{Frequency, Instance, PathId};
use crate::propagation::DomainStore;

use super::ordering::{order_variables, ValueOrdering};
use super::{Improvement, SearchConfig, SearchError, SearchResult, SearchStats, StopReason};

struct Search<'a, 'c> {
    instance: &'a Instance,
    config: &'c SearchConfig,
    store: DomainStore<'a>,
    ord: ValueOrdering,
    order: Vec<PathId>,
    values: Vec<Vec<usize>>,
    reconsider: Vec<usize>,
    succeeded: Vec<bool>,
    /// Completion bound per site, maintained in the objective modes.
    site_bound: Vec<u32>,
    bound_total: u64,
    bound_trail: Vec<(usize, u32)>,
    bound_marks: Vec<usize>,
    full_links: usize,
    best_links: usize,
    best_assignment: Vec<Option<Frequency>>,
    best_disp: Option<u32>,
    solved: bool,
    blockages: u64,
    stats: SearchStats,
    rng: Option<ChaCha8Rng>,
    start: Instant,
}

enum Step {
    Descend,
    Backtrack,
    Stop(StopReason),
}

impl<'a, 'c> Search<'a, 'c> {
    fn new(instance: &'a Instance, config: &'c SearchConfig) -> Self {
        let store = DomainStore::new(instance);
        let ord = ValueOrdering::new(instance, &config.availability, config.strategy);
        let order = order_variables(instance);
        let n = order.len();
        let mut s = Search {
            instance,
            config,
            store,
            ord,
            order,
            values: vec![Vec::new(); n],
            reconsider: vec![0; n],
            succeeded: vec![false; n],
            site_bound: Vec::new(),
            bound_total: 0,
            bound_trail: Vec::new(),
            bound_marks: Vec::new(),
            full_links: 0,
            best_links: 0,
            best_assignment: vec![None; n],
            best_disp: None,
            solved: false,
            blockages: 0,
            stats: SearchStats::default(),
            rng: config.seed.map(ChaCha8Rng::seed_from_u64),
            start: Instant::now(),
        };
        if config.mode.uses_objective() {
            s.site_bound = (0..instance.site_count()).map(|site| s.bound_at(site)).collect();
            s.bound_total = s.site_bound.iter().map(|&b| b as u64).sum();
        }
        s
    }

    fn bound_at(&self, site: usize) -> u32 {
        let state = self.ord.site_state(&self.store, site);
        self.ord
            .availability()
            .assess(&state, SiteDomains::of_site(&self.store, site), self.config.strategy)
            .bound
    }

    fn out_of_budget(&self) -> Option<StopReason> {
        if self.config.node_limit.is_some_and(|n| self.stats.nodes >= n) {
            return Some(StopReason::NodeLimit);
        }
        if self.config.time_budget.is_some_and(|b| self.start.elapsed() >= b) {
            return Some(StopReason::TimeLimit);
        }
        None
    }

    fn rank(&mut self, depth: usize) {
        let ranked = self.ord.ranked(&self.store, self.order[depth]);
        let mut values: Vec<usize> = ranked.iter().map(|&(f, _)| f).collect();
        if let Some(rng) = self.rng.as_mut() {
            let mut k = 0;
            while k < ranked.len() {
                let end = k + ranked[k..].iter().take_while(|r| r.1 == ranked[k].1).count();
                values[k..end].shuffle(rng);
                k = end;
            }
        }
        self.values[depth] = values;
    }

    /// Assigns and propagates one value. The level stays open on failure.
    fn try_value(&mut self, path: PathId, f: usize) -> bool {
        let p = *self.instance.path(path);
        let mut ok = self.store.assign_index(path, f);
        self.bound_marks.push(self.bound_trail.len());
        if self.store.is_assigned(p.sibling()) {
            self.full_links += 1;
        }
        if ok && self.config.mode.uses_filter() {
            'sites: for site in [p.tx, p.rx] {
                if !self.config.filter.is_active(&self.store, site) {
                    continue;
                }
                for dir in [Direction::Tx, Direction::Rx] {
                    let out = availability_filter(
                        &mut self.store,
                        self.ord.availability(),
                        &self.config.availability,
                        site,
                        dir,
                        self.config.strategy,
                    );
                    self.stats.filtered += out.removed.len() as u64;
                    self.stats.site_filtered += out.site_removed.len() as u64;
                    if out.wiped_out {
                        ok = false;
                        break 'sites;
                    }
                }
            }
        }
        if ok && self.config.mode.uses_objective() {
            for site in [p.tx, p.rx] {
                let b = self.bound_at(site);
                let old = std::mem::replace(&mut self.site_bound[site], b);
                self.bound_trail.push((site, old));
                self.bound_total = self.bound_total - old as u64 + b as u64;
            }
            if self.best_disp.is_some_and(|best| self.bound_total <= best as u64) {
                self.stats.pruned += 1;
                ok = false;
            }
        }
        ok
    }

    fn undo(&mut self) {
        let path = self.store.pop_level().expect("undo without an open level");
        if self.store.is_assigned(path ^ 1) {
            self.full_links -= 1;
        }
        let mark = self.bound_marks.pop().expect("bound marks out of step");
        while self.bound_trail.len() > mark {
            let (site, old) = self.bound_trail.pop().unwrap();
            self.bound_total = self.bound_total - self.site_bound[site] as u64 + old as u64;
            self.site_bound[site] = old;
        }
    }

    fn snapshot(&self) -> Vec<Option<Frequency>> {
        let mut a = self.store.assignment();
        for p in 0..a.len() {
            if a[p ^ 1].is_none() {
                a[p] = None;
            }
        }
        a
    }

    fn note_progress(&mut self) {
        if self.full_links > self.best_links {
            self.best_links = self.full_links;
            self.best_assignment = self.snapshot();
            self.stats.improvements.push(Improvement {
                node: self.stats.nodes,
                elapsed_secs: self.start.elapsed().as_secs_f64(),
                links: self.best_links,
            });
        }
    }

    fn save_solution(&mut self) {
        self.stats.solutions += 1;
        self.solved = true;
        if !self.config.mode.uses_objective() {
            self.best_assignment = self.snapshot();
            return;
        }
        let disp = solution_disp_with(
            self.ord.availability(),
            &self.store,
            &self.config.availability,
            self.config.strategy,
        );
        if self.best_disp.is_none_or(|best| disp > best) {
            self.best_disp = Some(disp);
            self.best_assignment = self.snapshot();
        }
    }

    /// Tries the remaining candidates at `depth` from its cursor.
    fn advance(&mut self, depth: usize) -> Step {
        let path = self.order[depth];
        while self.reconsider[depth] < self.values[depth].len() {
            let f = self.values[depth][self.reconsider[depth]];
            self.reconsider[depth] += 1;
            if !self.store.domain(path).contains(f) {
                continue;
            }
            let ok = self.try_value(path, f);
            // the assignment itself is consistent even when propagation fails
            self.note_progress();
            if !ok {
                self.undo();
                continue;
            }
            self.succeeded[depth] = true;
            if depth + 1 < self.order.len() {
                return Step::Descend;
            }
            self.save_solution();
            if !self.config.mode.uses_objective() {
                return Step::Stop(StopReason::Solved);
            }
            self.undo();
            if let Some(reason) = self.out_of_budget() {
                return Step::Stop(reason);
            }
        }
        Step::Backtrack
    }

    fn run(mut self) -> SearchResult {
        let total = self.order.len();
        let stop = if total == 0 {
            self.solved = true;
            self.best_disp = self.config.mode.uses_objective().then(|| {
                solution_disp_with(
                    self.ord.availability(),
                    &self.store,
                    &self.config.availability,
                    self.config.strategy,
                )
            });
            StopReason::Solved
        } else {
            self.explore()
        };
        self.stats.elapsed_secs = self.start.elapsed().as_secs_f64();
        let link_total = self.instance.link_count();
        SearchResult {
            links: if self.solved { link_total } else { self.best_links },
            link_total,
            assignment: self.best_assignment,
            solved: self.solved,
            best_disp: self.best_disp,
            blockages: self.blockages,
            stop,
            stats: self.stats,
        }
    }

    fn explore(&mut self) -> StopReason {
        let mut depth = 0;
        let mut entering = true;
        loop {
            if entering {
                if let Some(reason) = self.out_of_budget() {
                    return reason;
                }
                self.stats.nodes += 1;
                self.rank(depth);
                self.reconsider[depth] = 0;
                self.succeeded[depth] = false;
            }
            match self.advance(depth) {
                Step::Descend => {
                    depth += 1;
                    entering = true;
                }
                Step::Backtrack => {
                    if !self.succeeded[depth] {
                        self.blockages += 1;
                    }
                    self.reconsider[depth] = 0;
                    if depth == 0 {
                        return StopReason::Exhausted;
                    }
                    depth -= 1;
                    self.undo();
                    self.stats.backtracks += 1;
                    entering = false;
                }
                Step::Stop(reason) => return reason,
            }
        }
    }
}

/// Searches `instance` as given; see [`super::solve`] for the preprocessed
/// entry point.
pub fn branch_and_bound(instance: &Instance, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    config.validate()?;
    Ok(Search::new(instance, config).run())
}
