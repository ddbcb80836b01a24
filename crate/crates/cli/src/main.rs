//! `taxo`: command-line front end for the asset taxonomy engine.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use output::{Failure, Output};

#[derive(Debug, Parser)]
#[command(name = "taxo", version, about = "Classify, encode, compare and store assets")]
struct Cli {
    /// Emit a single JSON document on stdout instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Use a taxonomy document instead of the built-in taxonomy.
    #[arg(long, global = true, value_name = "FILE")]
    taxonomy: Option<PathBuf>,

    /// Colorize human-readable output when stdout is a terminal.
    #[arg(long, global = true)]
    color: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a classification document against the taxonomy.
    Validate {
        file: PathBuf,
        /// Treat unset attributes as errors.
        #[arg(long)]
        strict: bool,
    },
    /// Print the compact code of a classification document.
    Encode { file: PathBuf },
    /// Expand a compact code into a classification document.
    Decode { code: String },
    /// Compare two classifications attribute by attribute.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Basis::Determined)]
        similarity: Basis,
    },
    /// Draw the morphological box, optionally with up to two overlays.
    Render {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the rendering to a file instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        overlays: Vec<PathBuf>,
    },
    /// Compare the taxonomy with prior classification frameworks.
    Coverage(CoverageArgs),
    /// Manage an on-disk store of classified assets.
    Registry(RegistryArgs),
    /// Work with the bundled example classifications.
    Fixtures {
        #[command(subcommand)]
        command: FixturesCommand,
    },
    /// Print the active taxonomy as a canonical document.
    Taxonomy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Basis {
    Determined,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Svg,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["framework", "counts"])))]
struct CoverageArgs {
    /// Framework id; requires a classification file.
    #[arg(long, value_name = "ID", requires = "file")]
    framework: Option<String>,
    /// Print per-framework and per-attribute coverage counts.
    #[arg(long)]
    counts: bool,
    #[arg(requires = "framework", conflicts_with = "counts")]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RegistryArgs {
    /// Store directory.
    #[arg(long, env = "TAXO_STORE", value_name = "DIR")]
    store: PathBuf,
    #[command(subcommand)]
    command: RegistryCommand,
}

#[derive(Debug, Subcommand)]
enum RegistryCommand {
    /// Add a classification and print its new asset id.
    Add { file: PathBuf },
    /// Print a stored classification.
    Get { id: String },
    /// Replace a stored classification.
    Update { id: String, file: PathBuf },
    /// Delete a stored classification.
    Remove { id: String },
    /// List assets matching every `--where attribute=characteristic`.
    Query {
        #[arg(long = "where", value_name = "ATTR=CHAR")]
        predicates: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
enum FixturesCommand {
    /// Write the bundled classifications as JSON files into a directory.
    Export { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => return output::usage_error(e),
    };
    let out = Output::new(cli.json, cli.color);
    match commands::run(&cli, &out) {
        Ok(code) => code,
        Err(failure) => out.fail(failure),
    }
}

pub(crate) type CmdResult = Result<ExitCode, Failure>;
