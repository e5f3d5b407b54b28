use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fapk_core::availability::{AvailabilityConfig, Strategy};
use fapk_core::bench::{
    emit, generate_group, generate_instance, run_matrix, BudgetUnit, Format, GapSampler, GeneratorError, Group,
    ReportError, ScenarioParams,
};
use fapk_core::model::{read_instance, write_instance, ModelError};
use fapk_core::preprocess::cart8_reduce;
use fapk_core::search::{branch_and_bound, Mode, SearchConfig, SearchError, SearchResult};

#[derive(Parser)]
#[command(name = "fapk", version, about = "Kernel frequency assignment with site availability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random scenario.
    Gen(GenArgs),
    /// Solve one instance file.
    Solve(SolveArgs),
    /// Run the mode x strategy x budget matrix over generated groups.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "g10")]
    group: Group,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Override the group's link count.
    #[arg(long)]
    links: Option<usize>,
    /// Override the group's site count.
    #[arg(long)]
    sites: Option<usize>,
    /// Override the number of eight-link sites.
    #[arg(long)]
    cart8: Option<usize>,
    /// Use one receive gap everywhere instead of sampling per site.
    #[arg(long)]
    rx_rx: Option<u32>,
    /// Chance of far-field records between two links sharing no site.
    #[arg(long)]
    far_field_probability: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[arg(long, default_value = "av-sel")]
    mode: Mode,
    #[arg(long, default_value = "async")]
    strategy: Strategy,
    /// Skip the eight-link site domain reduction.
    #[arg(long)]
    no_cart8: bool,
    /// Shuffle equally scored values with this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Receive gap assumed for future paths when counting availability.
    #[arg(long, default_value_t = 60)]
    rx_rx: u32,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            mode: self.mode,
            strategy: self.strategy,
            cart8: !self.no_cart8,
            seed: self.seed,
            availability: AvailabilityConfig { rx_rx: self.rx_rx },
            ..SearchConfig::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Time budget in seconds.
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    /// Stop after this many search nodes.
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "g01,g10,g20,g30")]
    groups: Vec<Group>,
    #[arg(long, value_delimiter = ',', default_value = "5,60")]
    budgets: Vec<f64>,
    #[arg(long, default_value = "seconds")]
    budget_unit: BudgetUnit,
    #[arg(long, value_delimiter = ',', default_value = "av-sel,av-obj,av-filt")]
    modes: Vec<Mode>,
    #[arg(long, value_delimiter = ',', default_value = "async,sync")]
    strategies: Vec<Strategy>,
    /// Instances per group; 6 for g01 and 10 for the others when omitted.
    #[arg(long)]
    instances: Option<usize>,
    /// Seed of each group's first instance.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    no_cart8: bool,
    #[arg(long, default_value_t = 60)]
    rx_rx: u32,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv, json or text; taken from the output extension when omitted.
    #[arg(long)]
    format: Option<String>,
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("cannot write to stdout"),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let mut p = ScenarioParams::group(args.group, args.seed);
    if let Some(n) = args.links {
        p.links = n;
    }
    if let Some(n) = args.sites {
        p.sites = n;
    }
    if let Some(n) = args.cart8 {
        p.cart8 = n;
    }
    if let Some(g) = args.rx_rx {
        p.rx_rx = GapSampler::Fixed(g);
    }
    if let Some(prob) = args.far_field_probability {
        p.far_field_probability = prob;
    }
    let inst = generate_instance(&p)?;
    write_output(args.out.as_deref(), &write_instance(&inst))
}

fn print_text(result: &SearchResult, warnings: usize) -> String {
    let mut s = String::new();
    s.push_str(&format!("links      {}/{}\n", result.links, result.link_total));
    s.push_str(&format!("solved     {}\n", result.solved));
    s.push_str(&format!("blockages  {}\n", result.blockages));
    if let Some(d) = result.best_disp {
        s.push_str(&format!("best_disp  {d}\n"));
    }
    s.push_str(&format!("filtered   {}\n", result.stats.filtered));
    s.push_str(&format!("nodes      {}\n", result.stats.nodes));
    s.push_str(&format!("stop       {:?}\n", result.stop));
    s.push_str(&format!("elapsed    {:.3}s\n", result.stats.elapsed_secs));
    if warnings > 0 {
        s.push_str(&format!("warnings   {warnings}\n"));
    }
    for (p, f) in result.assignment.iter().enumerate() {
        if let Some(f) = f {
            s.push_str(&format!("path {p} {}\n", f.0));
        }
    }
    s
}

fn solve(args: SolveArgs) -> Result<()> {
    let format = args.format.parse::<Format>()?;
    let text = fs::read_to_string(&args.file).with_context(|| format!("cannot read {}", args.file.display()))?;
    let inst = read_instance(&text)?;
    let mut config = args.search.config();
    if !(args.budget.is_finite() && args.budget > 0.0) {
        return Err(SearchError::InvalidBudget.into());
    }
    config.time_budget = Some(Duration::from_secs_f64(args.budget));
    config.node_limit = args.node_limit;

    let mut warnings = 0;
    let result = if config.cart8 {
        let reduction = cart8_reduce(&inst);
        for w in &reduction.warnings {
            eprintln!("warning: path {} ({} -> {}): {}", w.path, w.tx_site, w.rx_site, w.message);
        }
        warnings = reduction.warnings.len();
        branch_and_bound(&reduction.apply(&inst), &config)?
    } else {
        branch_and_bound(&inst, &config)?
    };
    let out = match format {
        Format::Json => serde_json::to_string_pretty(&result)? + "\n",
        Format::Text => print_text(&result, warnings),
        Format::Csv => bail!("solve prints text or json"),
    };
    write_output(None, &out)
}

fn bench(args: BenchArgs) -> Result<()> {
    let format = match (&args.format, &args.out) {
        (Some(f), _) => f.parse::<Format>()?,
        (None, Some(p)) => match p.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            Some("txt") => Format::Text,
            _ => Format::Csv,
        },
        (None, None) => Format::Text,
    };
    let budgets: Vec<_> = args.budgets.iter().map(|&b| args.budget_unit.budget(b)).collect();
    if let Some(b) = budgets.iter().find(|b| !b.is_positive()) {
        return Err(anyhow::Error::new(SearchError::InvalidBudget).context(format!("budget {b}")));
    }
    let mut instances = Vec::new();
    for &g in &args.groups {
        let count = args.instances.unwrap_or(if g == Group::G01 { 6 } else { 10 });
        instances.extend(generate_group(g, count, args.seed)?);
    }
    let base = SearchConfig {
        cart8: !args.no_cart8,
        availability: AvailabilityConfig { rx_rx: args.rx_rx },
        ..SearchConfig::default()
    };
    let table = run_matrix(&instances, &budgets, &args.modes, &args.strategies, &base);
    for r in table.runs.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "run failed: {} seed {} {} {} {}: {}",
            r.group,
            r.seed,
            r.mode,
            r.strategy.name(),
            r.budget,
            r.error.as_deref().unwrap_or_default()
        );
    }
    write_output(args.out.as_deref(), &emit(&table, format)?)
}

/// 2 for unreadable or invalid input, 3 for unsatisfiable generator settings.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<GeneratorError>().is_some() {
        3
    } else if err.downcast_ref::<ModelError>().is_some()
        || err.downcast_ref::<SearchError>().is_some()
        || err.downcast_ref::<ReportError>().is_some()
    {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
