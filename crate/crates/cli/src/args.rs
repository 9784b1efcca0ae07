use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "codensity",
    version,
    about = "Codensity monads of small finite structures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute TX for one object and print its elements, unit and multiplication.
    Compute {
        #[command(flatten)]
        common: Common,
        /// Construction to use; `auto` picks one that embeds TX into collections.
        #[arg(long, value_enum, default_value_t = ConstructionArg::Auto)]
        construction: ConstructionArg,
        /// Also print the limit cone.
        #[arg(long)]
        cone: bool,
        /// Object document: a file path or inline JSON.
        object: String,
    },
    /// Run a verification suite over every object up to --max-size, or over one object.
    Verify {
        #[command(flatten)]
        common: Common,
        /// monad-laws, units, characterizations, agreement, enrichment, stability or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Object document to check instead of every small object.
        object: Option<String>,
        /// Add wall-clock time to the report.
        #[arg(long)]
        timing: bool,
    },
    /// Export the coslice, the limit cone or the monad instance.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(value_enum)]
        what: ExportWhat,
        /// Object document, or an instance file written by `export monad --format json`.
        object: String,
        /// Write to a file instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// set, par, pos, jsl, gra, vec, mset, sigma_str, top or top0.
    #[arg(long)]
    pub category: Option<String>,
    /// Field order for vec (a prime).
    #[arg(long)]
    pub q: Option<usize>,
    /// Monoid for mset: a file path or inline JSON {"elements", "table"}.
    #[arg(long)]
    pub monoid_file: Option<String>,
    /// Signature for sigma_str: a file path or inline JSON [{"name", "arity"}].
    #[arg(long)]
    pub signature_file: Option<String>,
    /// Size bound of the skeleton subcategory.
    #[arg(long, default_value_t = 4)]
    pub fp_bound: usize,
    /// Explicit subcategory: inline JSON array, a file, or `K,K2` for vector spaces.
    #[arg(long)]
    pub subcat: Option<String>,
    /// Largest object checked by `verify`.
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
    /// Enumeration budget; defaults to CODENSITY_BUDGET or 10^7.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Output format; dot is for diagrams and instances.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Coslice,
    LimitCone,
    Monad,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructionArg {
    Auto,
    Dual2,
    Limit,
    Smonad,
}
