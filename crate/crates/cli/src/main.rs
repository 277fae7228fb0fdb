use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use treematch::{
    approx_search, format_tree, gen_database, linearize, perturb_with, run_bench_thresholds, BenchReport, CostParams, EditBudget,
    EditMix, GenParams, PerturbParams, SearchParams, Tree, TreeDatabase, TreeId, TreeTrie,
};

/// Error-tolerant retrieval of labeled trees.
#[derive(Debug, Parser)]
#[command(name = "treematch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random tree database.
    Gen(GenArgs),
    /// Sample database trees and apply random leaf edits to make queries.
    Perturb(PerturbArgs),
    /// Find the database trees within a threshold of one query tree.
    Query(QueryArgs),
    /// Time trie searches for a file of queries, checked against a linear scan.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct CostArgs {
    /// Cost of changing a leaf label.
    #[arg(long, default_value_t = 1)]
    cost_change: u32,
    /// Cost of inserting or deleting a leaf.
    #[arg(long, default_value_t = 2)]
    cost_indel: u32,
}

impl CostArgs {
    fn params(&self) -> Result<CostParams> {
        CostParams::new(self.cost_change, self.cost_indel).context("invalid costs")
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    count: usize,
    /// Probability that a child below the depth limit is a leaf, as a
    /// decimal or a fraction such as 1/3.
    #[arg(long, value_parser = parse_probability)]
    alp: f64,
    #[arg(long)]
    max_children: usize,
    #[arg(long)]
    max_depth: usize,
    /// Number of distinct labels.
    #[arg(long, default_value_t = 26)]
    alphabet: usize,
    #[arg(long, env = "TREEMATCH_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("budget").required(true).args(["edits", "cost_budget"]))]
struct PerturbArgs {
    #[arg(long)]
    db: PathBuf,
    /// Number of queries to produce.
    #[arg(long)]
    count: usize,
    /// Number of edits per query.
    #[arg(long)]
    edits: Option<usize>,
    /// Total edit cost per query.
    #[arg(long)]
    cost_budget: Option<u32>,
    /// Relative weights of deletions, insertions and relabels.
    #[arg(long, value_parser = parse_mix, default_value = "1,1,1")]
    mix: EditMix,
    #[command(flatten)]
    costs: CostArgs,
    #[arg(long, env = "TREEMATCH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["query", "tree"]))]
struct QueryArgs {
    #[arg(long)]
    db: PathBuf,
    /// File holding the query tree, or `-` for standard input.
    #[arg(long)]
    query: Option<String>,
    /// The query tree itself.
    #[arg(long)]
    tree: Option<String>,
    #[arg(short = 't', long, default_value_t = 2)]
    threshold: u32,
    #[command(flatten)]
    costs: CostArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Exit with a failure status when nothing matches.
    #[arg(long)]
    fail_empty: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    db: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    /// Threshold to report; repeat for several.
    #[arg(short = 't', long = "threshold", default_values_t = [2, 4])]
    thresholds: Vec<u32>,
    /// Timed runs per search; the fastest is reported.
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    #[command(flatten)]
    costs: CostArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Database name in the report; defaults to the file name.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_probability(text: &str) -> Result<f64, String> {
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| format!("{e}"))?;
            let den: f64 = den.trim().parse().map_err(|e| format!("{e}"))?;
            num / den
        }
        None => text.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{text:?} is not a finite number"))
    }
}

fn parse_mix(text: &str) -> Result<EditMix, String> {
    let weights: Vec<u32> = text
        .split(',')
        .map(|w| w.trim().parse::<u32>().map_err(|e| format!("{w:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match weights[..] {
        [delete, insert, relabel] => Ok(EditMix { delete, insert, relabel }),
        _ => Err("expected three weights: delete,insert,relabel".to_string()),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_database(path: &Path) -> Result<TreeDatabase> {
    TreeDatabase::parse(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let params = GenParams {
        count: args.count,
        alp: args.alp,
        max_children: args.max_children,
        max_depth: args.max_depth,
        alphabet: args.alphabet,
        seed: args.seed,
    };
    let db = gen_database(&params).context("invalid generator settings")?;
    write_output(args.out.as_deref(), &db.to_text())?;

    let leaves: usize = db.iter().map(|r| r.tree.leaf_count()).sum();
    let nodes: usize = db.iter().map(|r| r.tree.node_count()).sum();
    let height = db.iter().map(|r| r.tree.height()).max().unwrap_or(0);
    let fanout = db.iter().map(|r| r.tree.max_fanout()).max().unwrap_or(0);
    let per_tree = |n: usize| if db.is_empty() { 0.0 } else { n as f64 / db.len() as f64 };
    eprintln!(
        "{} trees, {:.2} leaves and {:.2} nodes per tree, max height {height}, max fanout {fanout}",
        db.len(),
        per_tree(leaves),
        per_tree(nodes)
    );
    Ok(())
}

fn cmd_perturb(args: PerturbArgs) -> Result<()> {
    let db = read_database(&args.db)?;
    let costs = args.costs.params()?;
    ensure!(args.count == 0 || !db.is_empty(), "{} holds no trees to perturb", args.db.display());
    let budget = match (args.edits, args.cost_budget) {
        (Some(n), _) => EditBudget::Ops(n),
        (None, Some(k)) => EditBudget::Cost(k),
        (None, None) => unreachable!("clap requires one budget"),
    };
    let params = PerturbParams {
        budget,
        mix: args.mix,
        seed: args.seed,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    // Distinct sources while they last, then sources drawn with replacement.
    let mut picks = sample(&mut rng, db.len(), args.count.min(db.len())).into_vec();
    while picks.len() < args.count {
        picks.push(rng.random_range(0..db.len()));
    }

    let mut text = String::new();
    let mut shortfall = 0;
    for (i, pick) in picks.into_iter().enumerate() {
        let source = &db.records()[pick];
        let out = perturb_with(&source.tree, &params, costs, &mut rng).context("invalid edit mix")?;
        shortfall += out.shortfall;
        text.push_str(&format!("# source-id={}, applied-cost={}\n", source.id, out.applied_cost));
        text.push_str(&format!("{i}\t{}\n", format_tree(&out.tree)));
    }
    write_output(args.out.as_deref(), &text)?;
    if shortfall > 0 {
        eprintln!("{shortfall} requested edits could not be applied");
    }
    Ok(())
}

#[derive(Serialize)]
struct QueryMatch {
    id: TreeId,
    distance: u32,
    tree: String,
}

fn read_query(args: &QueryArgs) -> Result<Tree> {
    let (text, origin) = match (&args.tree, &args.query) {
        (Some(tree), _) => (tree.clone(), "--tree".to_string()),
        (None, Some(path)) if path == "-" => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).context("reading standard input")?;
            (text, "standard input".to_string())
        }
        (None, Some(path)) => (read_text(Path::new(path))?, path.clone()),
        (None, None) => unreachable!("clap requires a query"),
    };
    let parsed = TreeDatabase::parse(&text).with_context(|| format!("parsing query from {origin}"))?;
    ensure!(parsed.len() == 1, "expected one query tree in {origin}, found {}", parsed.len());
    Ok(parsed.records()[0].tree.clone())
}

fn cmd_query(args: QueryArgs) -> Result<ExitCode> {
    let costs = args.costs.params()?;
    let query = read_query(&args)?;
    let db = read_database(&args.db)?;
    let trie = TreeTrie::build(&db);
    let (found, _) = approx_search(&trie, &linearize(&query), &SearchParams::new(args.threshold, costs));

    let matches: Vec<QueryMatch> = found
        .iter()
        .map(|m| QueryMatch {
            id: m.id,
            distance: m.distance,
            tree: format_tree(db.get(m.id).expect("matches come from the database")),
        })
        .collect();
    let text = match args.format {
        Format::Text => matches.iter().map(|m| format!("{}\t{}\t{}\n", m.distance, m.id, m.tree)).collect(),
        Format::Json => serde_json::to_string_pretty(&matches)? + "\n",
    };
    write_output(args.out.as_deref(), &text)?;
    Ok(if args.fail_empty && matches.is_empty() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let costs = args.costs.params()?;
    let db = read_database(&args.db)?;
    let queries: Vec<Tree> = read_database(&args.queries)?.iter().map(|r| r.tree.clone()).collect();
    if args.thresholds.is_empty() {
        bail!("no thresholds");
    }
    let name = args
        .name
        .clone()
        .unwrap_or_else(|| args.db.file_name().map_or_else(|| "db".to_string(), |n| n.to_string_lossy().into_owned()));
    let runs = run_bench_thresholds(&db, &name, &queries, &args.thresholds, costs, args.repeat)?;
    let report = BenchReport::from_runs(&runs);
    let text = match args.format {
        Format::Text => report.to_string(),
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
    };
    write_output(args.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(args).map(|()| ExitCode::SUCCESS),
        Command::Perturb(args) => cmd_perturb(args).map(|()| ExitCode::SUCCESS),
        Command::Query(args) => cmd_query(args),
        Command::Bench(args) => cmd_bench(args).map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
