//! Branch&Bound over path frequencies with availability-driven value
//! selection, objective and filtering.

mod bnb;
mod brute;
mod ordering;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::availability::{AvailabilityConfig, FilterActivation, Strategy};
use crate::model::{Frequency, Instance};
use crate::preprocess::cart8_reduce;

pub use bnb::branch_and_bound;
pub use brute::{brute_force_solve, BruteForceOutcome, BRUTE_FORCE_MAX_LINKS};
pub use ordering::{order_variables, ValueOrdering};

/// How availability participates in the search. Each mode includes the
/// previous one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    /// Availability orders and screens candidate values.
    #[serde(rename = "av-sel")]
    Selection,
    /// Also keeps only complete solutions that improve total availability.
    #[serde(rename = "av-obj")]
    Objective,
    /// Also filters domains at sites through availability.
    #[serde(rename = "av-filt")]
    Filtering,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Selection, Mode::Objective, Mode::Filtering];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Selection => "av-sel",
            Mode::Objective => "av-obj",
            Mode::Filtering => "av-filt",
        }
    }

    pub fn uses_objective(self) -> bool {
        self >= Mode::Objective
    }

    pub fn uses_filter(self) -> bool {
        self == Mode::Filtering
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}` (expected av-sel, av-obj or av-filt)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub mode: Mode,
    pub strategy: Strategy,
    /// Wall-clock budget; `None` runs until the tree is exhausted.
    pub time_budget: Option<Duration>,
    /// Cap on expanded nodes, for reproducible budgets.
    pub node_limit: Option<u64>,
    pub availability: AvailabilityConfig,
    pub filter: FilterActivation,
    /// Restrict the paths of eight-link sites before searching.
    pub cart8: bool,
    /// Shuffles equally scored values when set.
    pub seed: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: Mode::Selection,
            strategy: Strategy::Async,
            time_budget: None,
            node_limit: None,
            availability: AvailabilityConfig::default(),
            filter: FilterActivation::default(),
            cart8: true,
            seed: None,
        }
    }
}

impl SearchConfig {
    pub fn new(mode: Mode, strategy: Strategy) -> Self {
        SearchConfig {
            mode,
            strategy,
            ..Default::default()
        }
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }

    pub fn with_node_limit(mut self, nodes: u64) -> Self {
        self.node_limit = Some(nodes);
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.time_budget.is_some_and(|b| b.is_zero()) || self.node_limit == Some(0) {
            return Err(SearchError::InvalidBudget);
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("search budget must be positive")]
    InvalidBudget,
    #[error("{links} links exceed the brute-force limit of {BRUTE_FORCE_MAX_LINKS}")]
    TooLarge { links: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// A complete assignment was found and the mode does not look further.
    Solved,
    /// The whole tree was explored.
    Exhausted,
    TimeLimit,
    NodeLimit,
}

/// Point at which the incumbent grew.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub node: u64,
    pub elapsed_secs: f64,
    pub links: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Expanded search nodes.
    pub nodes: u64,
    pub backtracks: u64,
    /// Values removed from path domains by availability filtering.
    pub filtered: u64,
    /// Values removed from site availability sets by filtering.
    pub site_filtered: u64,
    /// Branches cut because they cannot improve total availability.
    pub pruned: u64,
    /// Complete assignments reached.
    pub solutions: u64,
    pub elapsed_secs: f64,
    pub improvements: Vec<Improvement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Fully assigned links in the incumbent.
    pub links: usize,
    pub link_total: usize,
    /// Incumbent frequency per path; `None` for paths of unassigned links.
    pub assignment: Vec<Option<Frequency>>,
    pub solved: bool,
    /// Total availability of the retained complete solution.
    pub best_disp: Option<u32>,
    /// Search nodes where no candidate value could be propagated.
    pub blockages: u64,
    pub stop: StopReason,
    pub stats: SearchStats,
}

impl SearchResult {
    /// Links the incumbent leaves without frequencies.
    pub fn unassigned_links(&self) -> usize {
        self.link_total - self.links
    }
}

/// Runs the configured preprocessing and then [`branch_and_bound`].
pub fn solve(instance: &Instance, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    if config.cart8 {
        let reduced = cart8_reduce(instance).apply(instance);
        branch_and_bound(&reduced, config)
    } else {
        branch_and_bound(instance, config)
    }
}
