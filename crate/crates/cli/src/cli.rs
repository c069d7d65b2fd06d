use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rough_afford::oracle::StrictnessClaim;
use rough_afford::Sort;

#[derive(Debug, Parser)]
#[command(
    name = "rough-afford",
    version,
    about = "Rough-set reasoning over affordance structures"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON record per line.
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the indiscernibility blocks of one table.
    Partition {
        #[command(flatten)]
        source: Source,
    },
    /// Print the lower and upper approximation of a set and each element's status.
    Approx {
        #[command(flatten)]
        source: Source,
        /// Named set to approximate.
        #[arg(long, conflicts_with = "ids", required_unless_present = "ids")]
        set: Option<String>,
        /// Comma-separated ids to approximate.
        #[arg(long, value_delimiter = ',')]
        ids: Option<Vec<String>>,
        /// Named-set file; overrides the manifest's.
        #[arg(long)]
        sets: Option<PathBuf>,
    },
    /// Evaluate queries against a structure.
    Eval {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(
            long,
            conflicts_with = "query_file",
            required_unless_present = "query_file"
        )]
        query: Option<String>,
        /// One query per line; blank lines and `#` comments are skipped.
        #[arg(long)]
        query_file: Option<PathBuf>,
        /// Named-set file; overrides the manifest's.
        #[arg(long)]
        sets: Option<PathBuf>,
    },
    /// Run the law suite over generated structures or one loaded structure.
    Check(CheckArgs),
    /// Generate a random structure.
    Gen(GenArgs),
    /// Search for a structure where an inclusion is strict.
    Witness {
        #[arg(value_parser = parse_claim)]
        claim: StrictnessClaim,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Maximum number of generated structures to try.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
}

/// Either a structure bundle with a sort, or one bare table.
#[derive(Debug, Args)]
pub struct Source {
    /// Manifest file, or a directory containing `manifest.toml`.
    #[arg(long, conflicts_with = "table", required_unless_present = "table")]
    pub manifest: Option<PathBuf>,
    /// A single attribute table.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, value_parser = parse_sort, default_value = "A")]
    pub sort: Sort,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// Check only the named laws.
    #[arg(long = "law")]
    pub laws: Vec<String>,
    /// Check a loaded structure instead of generated ones.
    #[arg(long, conflicts_with = "trials")]
    pub manifest: Option<PathBuf>,
    /// Also compare the operators with the naive evaluator.
    #[arg(long)]
    pub oracle: bool,
    /// Also search for a strictness witness.
    #[arg(long, value_parser = parse_claim)]
    pub witness: Option<StrictnessClaim>,
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Reproduce the structure `check` uses for this trial.
    #[arg(long)]
    pub trial: Option<u64>,
    #[arg(long, default_value_t = 5)]
    pub max_objects: usize,
    #[arg(long, default_value_t = 3)]
    pub max_attributes: usize,
    #[arg(long, default_value_t = 3)]
    pub max_atoms: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    /// Give every object its own value vector.
    #[arg(long)]
    pub distinct_rows: bool,
    /// Write a bundle with a manifest into this directory instead of printing.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_sort(text: &str) -> Result<Sort, String> {
    let mut chars = text.chars();
    match (chars.next().and_then(Sort::from_letter), chars.next()) {
        (Some(s), None) => Ok(s),
        _ => Err(format!("expected A, O or E, found `{text}`")),
    }
}

fn parse_claim(text: &str) -> Result<StrictnessClaim, String> {
    text.parse()
        .map_err(|e: rough_afford::oracle::OracleError| e.to_string())
}
