//! Runs the mode × strategy × budget matrix over generated groups.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::availability::Strategy;
use crate::model::Instance;
use crate::search::{solve, Mode, SearchConfig};

use super::generator::{generate_instance, GeneratorError, Group, ScenarioParams};

/// Environment variable capping the number of concurrent solver runs.
pub const THREADS_ENV: &str = "FAPK_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Seconds(f64),
    /// Expanded search nodes; makes runs reproducible.
    Nodes(u64),
}

impl Budget {
    pub fn label(&self) -> String {
        match self {
            Budget::Seconds(s) => format!("{s}s"),
            Budget::Nodes(n) => format!("{n}n"),
        }
    }

    pub fn is_positive(&self) -> bool {
        match *self {
            Budget::Seconds(s) => s > 0.0 && s.is_finite(),
            Budget::Nodes(n) => n > 0,
        }
    }

    pub fn apply(&self, config: &mut SearchConfig) {
        match *self {
            Budget::Seconds(s) => {
                config.time_budget = Some(Duration::from_secs_f64(s.max(0.0)));
                config.node_limit = None;
            }
            Budget::Nodes(n) => {
                config.time_budget = None;
                config.node_limit = Some(n);
            }
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetUnit {
    Seconds,
    Nodes,
}

impl BudgetUnit {
    pub fn budget(self, amount: f64) -> Budget {
        match self {
            BudgetUnit::Seconds => Budget::Seconds(amount),
            BudgetUnit::Nodes => Budget::Nodes(amount.max(0.0) as u64),
        }
    }
}

impl FromStr for BudgetUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seconds" | "s" => Ok(BudgetUnit::Seconds),
            "nodes" | "n" => Ok(BudgetUnit::Nodes),
            _ => Err(format!("unknown budget unit `{s}` (expected seconds or nodes)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub group: String,
    pub seed: u64,
    pub instance: Instance,
}

impl BenchInstance {
    pub fn links(&self) -> usize {
        self.instance.link_count()
    }
}

/// `count` instances of a group, seeded `base_seed`, `base_seed + 1`, ...
pub fn generate_group(group: Group, count: usize, base_seed: u64) -> Result<Vec<BenchInstance>, GeneratorError> {
    (0..count as u64)
        .map(|k| {
            let seed = base_seed + k;
            Ok(BenchInstance {
                group: group.name().to_string(),
                seed,
                instance: generate_instance(&ScenarioParams::group(group, seed))?,
            })
        })
        .collect()
}

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub group: String,
    pub seed: u64,
    pub mode: Mode,
    pub strategy: Strategy,
    pub budget: Budget,
    pub links: usize,
    pub link_total: usize,
    pub solved: bool,
    pub blockages: u64,
    pub filtered: u64,
    pub nodes: u64,
    pub elapsed: f64,
    pub error: Option<String>,
}

/// One aggregate line: a group under one mode, strategy and budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub group: String,
    pub n: usize,
    pub mode: Mode,
    pub strategy: Strategy,
    pub budget: String,
    pub mean_links: f64,
    pub solved: usize,
    pub blockages: f64,
    pub filtered: f64,
    pub elapsed: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    pub runs: Vec<RunRecord>,
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn run_one(inst: &BenchInstance, mode: Mode, strategy: Strategy, budget: Budget, base: &SearchConfig) -> RunRecord {
    let mut config = base.clone();
    config.mode = mode;
    config.strategy = strategy;
    budget.apply(&mut config);
    let mut record = RunRecord {
        group: inst.group.clone(),
        seed: inst.seed,
        mode,
        strategy,
        budget,
        links: 0,
        link_total: inst.links(),
        solved: false,
        blockages: 0,
        filtered: 0,
        nodes: 0,
        elapsed: 0.0,
        error: None,
    };
    match solve(&inst.instance, &config) {
        Ok(r) => {
            record.links = r.links;
            record.solved = r.solved;
            record.blockages = r.blockages;
            record.filtered = r.stats.filtered;
            record.nodes = r.stats.nodes;
            record.elapsed = r.stats.elapsed_secs;
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Solves every instance under every combination and aggregates per group.
/// Rows come budget by budget, then group by group in order of first
/// appearance, then strategy, then mode.
pub fn run_matrix(
    instances: &[BenchInstance],
    budgets: &[Budget],
    modes: &[Mode],
    strategies: &[Strategy],
    base: &SearchConfig,
) -> ResultTable {
    let mut jobs = Vec::new();
    for &budget in budgets {
        for inst in instances {
            for &strategy in strategies {
                for &mode in modes {
                    jobs.push((inst, mode, strategy, budget));
                }
            }
        }
    }
    let work = || -> Vec<RunRecord> {
        jobs.par_iter()
            .map(|&(inst, mode, strategy, budget)| run_one(inst, mode, strategy, budget, base))
            .collect()
    };
    let runs = match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(work),
        None => work(),
    };

    let mut groups: Vec<(&str, usize)> = Vec::new();
    for inst in instances {
        if !groups.iter().any(|g| g.0 == inst.group) {
            groups.push((&inst.group, inst.links()));
        }
    }
    let mut rows = Vec::new();
    for &budget in budgets {
        for &(group, n) in &groups {
            for &strategy in strategies {
                for &mode in modes {
                    let of: Vec<&RunRecord> = runs
                        .iter()
                        .filter(|r| r.group == group && r.mode == mode && r.strategy == strategy && r.budget == budget)
                        .collect();
                    let mean = |f: &dyn Fn(&RunRecord) -> f64| {
                        if of.is_empty() {
                            0.0
                        } else {
                            of.iter().map(|r| f(r)).sum::<f64>() / of.len() as f64
                        }
                    };
                    rows.push(ResultRow {
                        group: group.to_string(),
                        n,
                        mode,
                        strategy,
                        budget: budget.label(),
                        mean_links: mean(&|r| r.links as f64),
                        solved: of.iter().filter(|r| r.solved).count(),
                        blockages: mean(&|r| r.blockages as f64),
                        filtered: mean(&|r| r.filtered as f64),
                        elapsed: mean(&|r| r.elapsed),
                    });
                }
            }
        }
    }
    ResultTable { rows, runs }
}
