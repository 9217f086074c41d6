use std::fmt::{self, Display};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use quartets::construct::TheoremRow;
use quartets::decide::Witness;
use quartets::enumerate::{count_trees_capped, enumerate_trees_capped, ALL_CAP};
use quartets::io::{
    parse_newick, parse_quartet_file, serialize_newick, serialize_quartet_file, ReportJson,
    SearchJson, TheoremRowJson,
};
use quartets::search::{search, SearchConfig};
use quartets::{
    caterpillar, closure_lemma3, construct_qn, minimality_report, semantic_infers, verify_theorem,
    DecideMode, LeafSet, QuartetSet, Status, TreeMode,
};

// Output stops quietly when the reader closes the pipe, as in `quartets enumerate | head`.
macro_rules! print {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

macro_rules! println {
    ($($arg:tt)*) => { emit(format_args!("{}\n", format_args!($($arg)*))) };
}

/// Environment variable holding the default worker thread count.
const THREADS_VAR: &str = "QUARTETS_THREADS";

/// Leaf cap for `enumerate --binary` unless `--cap` is given.
const CLI_BINARY_CAP: usize = 10;

#[derive(Parser)]
#[command(
    name = "quartets",
    version,
    about = "Definitive and minimal definitive quartet sets on phylogenetic trees",
    after_help = "Set QUARTETS_THREADS to fix the number of worker threads."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the size 2n-8 quartet set for the caterpillar on n leaves.
    Construct(LeafCount),
    /// Print the caterpillar on leaves 1..n as Newick.
    Caterpillar(LeafCount),
    /// Decide whether a quartet file is minimally definitive.
    Check {
        #[arg(long, value_name = "FILE")]
        quartets: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Fast)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Test whether a tree displays a quartet.
    Display {
        #[arg(long, value_name = "NEWICK_FILE")]
        tree: PathBuf,
        #[arg(long, value_name = "a,b|c,d")]
        quartet: String,
    },
    /// Stream every tree on leaves 1..n as Newick, or count them.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Binary trees only.
        #[arg(long)]
        binary: bool,
        #[arg(long)]
        count_only: bool,
        /// Raise the leaf cap (defaults: 10 binary, 9 for all trees).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Close a quartet set under the dyadic rule, or test one inference.
    Infer(InferArgs),
    /// Check the 2n-8 family for every n from 5 to the given maximum.
    VerifyTheorem {
        #[arg(long, value_name = "K")]
        max_n: usize,
        /// Also run the exhaustive oracle up to this many leaves.
        #[arg(long, value_name = "M", default_value_t = 7)]
        oracle_max_n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Randomized search for large minimal definitive sets (exploratory).
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target_size: usize,
        #[arg(long, value_name = "TRIALS")]
        budget: u64,
        #[arg(long)]
        seed: u64,
        /// Stop after this many distinct findings.
        #[arg(long, default_value_t = 10)]
        max_findings: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct LeafCount {
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("inference").required(true).args(["closure", "query"])))]
struct InferArgs {
    #[arg(long, value_name = "FILE")]
    quartets: PathBuf,
    /// Print the closure as a quartet file.
    #[arg(long)]
    closure: bool,
    /// Test whether the set infers this quartet.
    #[arg(long, value_name = "a,b|c,d")]
    query: Option<String>,
    /// Decide the query over all displaying trees instead of the closure.
    #[arg(long, requires = "query", conflicts_with = "closure")]
    semantic: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fast,
    Oracle,
}

impl From<Mode> for DecideMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Fast => DecideMode::Fast,
            Mode::Oracle => DecideMode::Oracle,
        }
    }
}

/// A failure reported as one line on stderr with exit status 2.
struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let message: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty() && !l.starts_with("tip:") && !l.starts_with("For more"))
                .collect();
            eprintln!(
                "quartets: {}",
                message.join(" ").trim_start_matches("error: ")
            );
            return ExitCode::from(2);
        }
    };
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(message)) => {
            eprintln!("quartets: {message}");
            ExitCode::from(2)
        }
    }
}

fn emit(args: fmt::Arguments) {
    if let Err(e) = io::stdout().lock().write_fmt(args) {
        let Failure(message) = stdout_failed(e);
        eprintln!("quartets: {message}");
        std::process::exit(2);
    }
}

fn stdout_failed(e: io::Error) -> Failure {
    if e.kind() == io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    Failure(format!("stdout: {e}"))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Failure(format!(
            "{THREADS_VAR} must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Construct(LeafCount { n }) => {
            print!("{}", serialize_quartet_file(&construct_qn(n)?));
            Ok(0)
        }
        Command::Caterpillar(LeafCount { n }) => {
            println!("{}", serialize_newick(&caterpillar(n)?)?);
            Ok(0)
        }
        Command::Check {
            quartets,
            mode,
            json,
        } => check(&quartets, mode.into(), json),
        Command::Display { tree, quartet } => {
            let tree = parse_newick(&read(&tree)?)?;
            let q = tree.leaves().parse_quartet(&quartet)?;
            let shown = tree.displays(&q);
            println!("{shown}");
            Ok(if shown { 0 } else { 1 })
        }
        Command::Enumerate {
            n,
            binary,
            count_only,
            cap,
        } => enumerate(n, binary, count_only, cap),
        Command::Infer(args) => infer(args),
        Command::VerifyTheorem {
            max_n,
            oracle_max_n,
            json,
        } => verify(max_n, oracle_max_n, json),
        Command::Search {
            n,
            target_size,
            budget,
            seed,
            max_findings,
            json,
        } => run_search(
            SearchConfig {
                n,
                target_size,
                budget,
                seed,
                max_findings,
            },
            json,
        ),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_quartets(path: &Path) -> Result<QuartetSet, Failure> {
    let file = parse_quartet_file(&read(path)?)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    for line in &file.duplicate_lines {
        eprintln!(
            "quartets: warning: {}:{line}: duplicate quartet ignored",
            path.display()
        );
    }
    Ok(file.quartets)
}

fn check(path: &Path, mode: DecideMode, json: bool) -> Outcome {
    let q = load_quartets(path)?;
    let report = minimality_report(&q, mode)?;
    let code = if report.minimal { 0 } else { 1 };
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&ReportJson::from_report(&report)?)?
        );
        return Ok(code);
    }
    let leaves = q.leaves();
    println!(
        "leaves: {}  quartets: {}  lower bound: {}",
        report.n,
        report.size,
        report.lower_bound()
    );
    match &report.verdict.status {
        Status::Defines(t) => println!("defines: {}", serialize_newick(t)?),
        Status::Incompatible => println!("defines: no (no tree displays the set)"),
        Status::NotDefinitive {
            displayer_count,
            displayers,
        } => {
            match displayer_count {
                Some(c) => println!("defines: no ({c} displaying trees)"),
                None => println!("defines: no"),
            }
            for t in displayers {
                println!("  displayed by {}", serialize_newick(t)?);
            }
        }
    }
    if report.verdict.is_definitive() {
        println!("minimal: {}", report.minimal);
        for e in &report.entries {
            let detail = match &e.witness {
                Witness::AlternativeTree(t) => serialize_newick(t)?,
                Witness::UndistinguishedEdge(s) => s.render(leaves),
                Witness::Redundant => String::from("-"),
            };
            println!(
                "  {:<12} {:<22} {detail}",
                e.quartet.render(leaves),
                e.witness.kind()
            );
        }
    }
    println!("mode: {}", mode.as_str());
    Ok(code)
}

fn enumerate(n: usize, binary: bool, count_only: bool, cap: Option<usize>) -> Outcome {
    let mode = if binary {
        TreeMode::Binary
    } else {
        TreeMode::All
    };
    let cap = cap.unwrap_or(if binary { CLI_BINARY_CAP } else { ALL_CAP });
    if count_only {
        println!("{}", count_trees_capped(n, mode, cap)?);
        return Ok(0);
    }
    let stream = enumerate_trees_capped(Arc::new(LeafSet::numbered(n)?), mode, cap)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for t in stream {
        writeln!(out, "{}", serialize_newick(&t)?).map_err(stdout_failed)?;
    }
    out.flush().map_err(stdout_failed)?;
    Ok(0)
}

fn infer(args: InferArgs) -> Outcome {
    let q = load_quartets(&args.quartets)?;
    let Some(query) = args.query else {
        print!("{}", serialize_quartet_file(&closure_lemma3(&q)));
        return Ok(0);
    };
    let target = q.leaves().parse_quartet(&query)?;
    let inferred = if args.semantic {
        semantic_infers(&q, &target)?
    } else {
        closure_lemma3(&q).contains(&target)
    };
    println!("{inferred}");
    Ok(if inferred { 0 } else { 1 })
}

fn verify(max_n: usize, oracle_max_n: usize, json: bool) -> Outcome {
    let rows = verify_theorem(max_n, oracle_max_n)?;
    let passed = rows.iter().all(TheoremRow::passed);
    if json {
        let rows: Vec<TheoremRowJson> = rows.iter().map(TheoremRowJson::from).collect();
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        println!(
            "{:>3}  {:>4}  {:>4}  {:<8}  {:<7}  {:<22}  {:<6}  result",
            "n", "size", "2n-8", "displays", "minimal", "oracle", "chain"
        );
        for r in &rows {
            let oracle = match &r.oracle {
                None => String::from("-"),
                Some(o) => format!(
                    "{} of {} trees",
                    if o.unique_displayer && o.minimal {
                        "unique"
                    } else {
                        "FAILED"
                    },
                    o.trees_scanned
                ),
            };
            let chain = match r.witness_chain {
                None => "-",
                Some(true) => "ok",
                Some(false) => "FAILED",
            };
            println!(
                "{:>3}  {:>4}  {:>4}  {:<8}  {:<7}  {:<22}  {:<6}  {}",
                r.n,
                r.size,
                r.expected_size,
                r.caterpillar_displays,
                r.fast_minimal && r.fast_defines_caterpillar,
                oracle,
                chain,
                if r.passed() { "PASS" } else { "FAIL" }
            );
            for f in &r.failures {
                println!("     ! {f}");
            }
        }
    }
    Ok(if passed { 0 } else { 1 })
}

fn run_search(config: SearchConfig, json: bool) -> Outcome {
    let outcome = search(&config)?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&SearchJson::from_outcome(&outcome)?)?
        );
    } else {
        println!(
            "{} finding(s) of size >= {} in {} trial(s), seed {}",
            outcome.findings.len(),
            config.target_size,
            outcome.trials_run,
            config.seed
        );
        for f in &outcome.findings {
            println!(
                "size {} (trial {}): {}  tree {}",
                f.size,
                f.trial,
                f.quartets.render().join(" "),
                serialize_newick(&f.tree)?
            );
        }
    }
    Ok(0)
}
