//! Command-line front end for the spherica library: validation, conversion,
//! enumeration, table emission and extended weight semigroups.
//!
//! Exit status is 0 on success, 1 when an object fails validation or a
//! conversion precondition, and 2 on malformed input.

pub mod commands;
pub mod document;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spherica::enumerate::{DEFAULT_RANK_BOUND, RANK_BOUND_VAR};

pub use commands::{run, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "spherica",
    version,
    about = "Strongly solvable spherical subgroups: validate, convert, enumerate"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Diagram,
    System,
    Hsd,
    Admissible,
    Ars,
    Ews,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Diagram => "diagram",
            Kind::System => "system",
            Kind::Hsd => "hsd",
            Kind::Admissible => "admissible",
            Kind::Ars => "ars",
            Kind::Ews => "ews",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Conversion {
    SystemToAdmissible,
    AdmissibleToSystem,
    AdmissibleToArs,
    ArsToAdmissible,
    ArsToHsd,
    HsdToArs,
    SystemToHsd,
    HsdToSystem,
    ArsToEws,
    HsdToEws,
    EwsToHsd,
    AdmissibleToFan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// `SL2 × SL2 × SL2` with a torsion character group.
    Sl2Cubed,
}

/// Where a document comes from.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Path to a JSON document, `-` for standard input, or inline JSON.
    #[arg(long)]
    pub input: Option<String>,
}

/// Rank guard and parallelism for enumeration.
#[derive(Debug, Clone, Args)]
pub struct EnumerationArgs {
    /// Dynkin type such as A3 or A1xA1.
    #[arg(long = "type")]
    pub ty: Option<String>,
    /// Largest rank accepted by the enumerator.
    #[arg(long, env = RANK_BOUND_VAR, default_value_t = DEFAULT_RANK_BOUND)]
    pub rank_bound: usize,
    /// Compute records on a thread pool; output is identical.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an object axiom by axiom.
    Check {
        /// Expected kind; required with --matrix.
        kind: Option<Kind>,
        #[command(flatten)]
        input: InputArgs,
        /// Dynkin type, with --matrix.
        #[arg(long = "type")]
        ty: Option<String>,
        /// Inline matrix: an admissible map, or the colors of a cuspidal system.
        #[arg(long)]
        matrix: Option<String>,
        /// Distinguished subset of colors to check, 1-based, e.g. 1,4.
        #[arg(long, value_delimiter = ',')]
        dsc: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Convert between the classifications.
    Convert {
        conversion: Conversion,
        #[command(flatten)]
        input: InputArgs,
        /// Distinguished subset of colors, 1-based, e.g. 1,4.
        #[arg(long, value_delimiter = ',')]
        dsc: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Enumerate strongly solvable spherical systems with their witnesses.
    Enumerate {
        #[command(flatten)]
        enumeration: EnumerationArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Keep only cuspidal systems.
        #[arg(long)]
        cuspidal: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the markdown classification table of cuspidal systems.
    EmitTable {
        #[command(flatten)]
        enumeration: EnumerationArgs,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Extended weight semigroup generators and the invariants they determine.
    Ews {
        #[command(flatten)]
        input: InputArgs,
        /// Use a built-in example instead of an input document.
        #[arg(long, value_enum)]
        example: Option<Example>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}
