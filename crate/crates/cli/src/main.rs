mod cache;
mod input;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hgsp_core::group::symmetric_invariant_dimension;
use hgsp_core::linalg::content;
use hgsp_core::pairs::{enumerate_mum_pairs, enumerate_qualified_pairs};
use hgsp_core::report::{classify, reproduce, ReferenceData};
use hgsp_core::{
    search_witness, verify_proposition, Convention, HypergeometricGroup, PairRecord, SearchConfig,
    SearchOutcome, Word,
};
use thiserror::Error;

use cache::{Cache, ResultRecord};
use input::PairInput;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cache {path}: {source}")]
    Cache { path: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Parser, Debug)]
#[command(
    name = "hgsp",
    version,
    about = "Arithmeticity witnesses for symplectic hypergeometric groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List qualified pairs of a given degree
    Enumerate {
        #[arg(long, default_value_t = 6)]
        degree: usize,
        /// Only pairs with f = (x-1)^n
        #[arg(long)]
        mum: bool,
        /// Pair identification: shift or shift+swap
        #[arg(long, default_value_t = Convention::ShiftSwap)]
        convention: Convention,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Show v, |lc|, gcd(v), the invariant form and the small-lc verdict
    Analyze {
        #[command(flatten)]
        pair: PairInput,
        /// Print the JSON record instead
        #[arg(long)]
        json: bool,
    },
    /// Search for a minimal witness word
    Search {
        #[command(flatten)]
        pair: PairInput,
        /// Longest word length to try
        #[arg(short = 'k', long, default_value_t = 10)]
        max_depth: usize,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Prefix length used to split work between threads
        #[arg(long, default_value_t = 4)]
        pivot_depth: usize,
        /// Give up before a length whose words would exceed this many in total
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long, env = "HGSP_CACHE", default_value = "./hgsp-cache.jsonl")]
        cache: PathBuf,
        /// Ignore cached results
        #[arg(long)]
        force: bool,
    },
    /// Check the full certificate for a word; exit 0 pass, 1 fail, 2 bad input
    Verify {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long, short = 'w')]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the published counts and tables
    Report {
        #[arg(long, default_value_t = Convention::ShiftSwap)]
        convention: Convention,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Enumerate {
            degree,
            mum,
            convention,
            format,
        } => enumerate(degree, mum, convention, format),
        Command::Analyze { pair, json } => analyze(&pair, json),
        Command::Search {
            pair,
            max_depth,
            threads,
            pivot_depth,
            node_budget,
            cache,
            force,
        } => {
            let mut cfg = SearchConfig {
                max_depth,
                pivot_depth,
                node_budget,
                ..SearchConfig::default()
            };
            if let Some(t) = threads {
                cfg.threads = t;
            }
            search(&pair, &cfg, &Cache::new(cache), force)
        }
        Command::Verify { pair, word, json } => verify(&pair, &word, json),
        Command::Report { convention, json } => report(convention, json),
    }
}

fn enumerate(
    degree: usize,
    mum: bool,
    convention: Convention,
    format: Format,
) -> Result<ExitCode, CliError> {
    let pairs = if mum {
        enumerate_mum_pairs(degree, convention)
    } else {
        enumerate_qualified_pairs(degree, convention)
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    let stdout = io::stdout().lock();
    let records = pairs.iter().map(|p| {
        PairRecord::new(p, convention).map_err(|e| CliError::Input(format!("{}: {e}", p.pair_id)))
    });
    match format {
        Format::Jsonl => {
            let mut out = io::BufWriter::new(stdout);
            for record in records {
                serde_json::to_writer(&mut out, &record?)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        Format::Csv => {
            let mut out = csv::Writer::from_writer(stdout);
            for record in records {
                out.serialize(record?.csv_row())?;
            }
            out.flush()?;
        }
    }
    let small = pairs.iter().filter(|p| p.is_sv_arithmetic()).count();
    eprintln!(
        "{}",
        serde_json::json!({"total": pairs.len(), "lc_at_most_2": small, "lc_at_least_3": pairs.len() - small})
    );
    Ok(ExitCode::SUCCESS)
}

fn analyze(input: &PairInput, json: bool) -> Result<ExitCode, CliError> {
    let pair = input.resolve()?;
    let record = PairRecord::new(&pair, Convention::default())
        .map_err(|e| CliError::Input(e.to_string()))?;
    if json {
        println!("{}", serde_json::to_string(&record)?);
        return Ok(ExitCode::SUCCESS);
    }
    let group = HypergeometricGroup::new(&pair).map_err(|e| CliError::Input(e.to_string()))?;
    let ints = |xs: &[hgsp_core::BigInt]| {
        xs.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("pair      {}", pair.pair_id);
    println!("f         {} = {}", pair.f, pair.f_poly.pretty());
    println!("g         {} = {}", pair.g, pair.g_poly.pretty());
    println!("alpha     {}", pair.alpha());
    println!("beta      {}", pair.beta());
    println!("v         ({})", ints(&group.v));
    println!("|lc|      {}", pair.abs_lc());
    println!("gcd(v)    {}", content(&group.v));
    println!("omega     {}", group.omega.matrix());
    let sym = symmetric_invariant_dimension(&group.generators)
        .map_err(|e| CliError::Input(e.to_string()))?;
    println!("symmetric invariant forms: {sym}");
    if pair.is_sv_arithmetic() {
        println!("arithmetic by the small leading-coefficient criterion (|lc| <= 2)");
    } else {
        println!("small leading-coefficient criterion does not apply (|lc| >= 3)");
    }
    println!("status    {}", record.classification.label());
    Ok(ExitCode::SUCCESS)
}

fn search(
    input: &PairInput,
    cfg: &SearchConfig,
    cache: &Cache,
    force: bool,
) -> Result<ExitCode, CliError> {
    let pair = input.resolve()?;
    if !force {
        if let Some(hit) = cache.lookup(&pair.pair_id, cfg.max_depth)? {
            eprintln!("cached result from {}", cache.path().display());
            println!("{}", serde_json::to_string(&hit)?);
            return Ok(ExitCode::SUCCESS);
        }
    }
    let outcome = search_witness(&pair, cfg).map_err(|e| CliError::Input(e.to_string()))?;
    let record = ResultRecord::new(&pair.pair_id, classify(&pair, &outcome), &outcome);
    cache.append(&record)?;
    match &outcome {
        SearchOutcome::Found { witness, .. } => eprintln!(
            "witness {} (length {}, c = {})",
            witness.word,
            witness.word.len(),
            witness.last_entry
        ),
        SearchOutcome::NotFound { max_depth, nodes } => eprintln!(
            "no witness up to length {max_depth} ({} words)",
            nodes.total()
        ),
        SearchOutcome::Obstructed { gcd } => eprintln!("obstructed: gcd(v) = {gcd}"),
        SearchOutcome::BudgetExhausted {
            completed_depth,
            nodes,
        } => {
            eprintln!(
                "node budget exhausted after length {completed_depth} ({} words)",
                nodes.total()
            )
        }
    }
    println!("{}", serde_json::to_string(&record)?);
    Ok(ExitCode::SUCCESS)
}

fn verify(input: &PairInput, word: &str, json: bool) -> Result<ExitCode, CliError> {
    let pair = input.resolve()?;
    let word: Word = word
        .parse()
        .map_err(|e| CliError::Input(format!("word: {e}")))?;
    let group = HypergeometricGroup::new(&pair).map_err(|e| CliError::Input(e.to_string()))?;
    let report = verify_proposition(&group, &word);
    if json {
        println!("{}", report.to_json());
    } else {
        println!("pair        {}", pair.pair_id);
        println!("{report}");
    }
    Ok(if report.verdict.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn report(convention: Convention, json: bool) -> Result<ExitCode, CliError> {
    let report = reproduce(&ReferenceData::published(), convention)
        .map_err(|e| CliError::Input(e.to_string()))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{report}");
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
