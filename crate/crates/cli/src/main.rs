//! `hilb2`: load, validate and compute with manifold descriptors.
//!
//! Exit codes: 0 success, 1 input error, 2 mathematical failure or axiom
//! violation, 3 the two Hilbert-scheme methods disagree.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "hilb2",
    version,
    about = "Mod-2 Betti numbers of two-point Hilbert schemes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    X,
    Exceptional,
    Sym2,
    Config,
    Hilb2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Closed,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelMode {
    All,
    Families12,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IntegralSpace {
    Sym2,
}

#[derive(Subcommand)]
enum Command {
    /// Check a descriptor against the Steenrod-module axioms.
    Validate {
        /// Descriptor file, or a catalog name.
        path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Print a Betti table.
    Betti {
        path: PathBuf,
        #[arg(long, value_enum)]
        space: Space,
        /// Hilbert-scheme route (hilb2 only); defaults to exact.
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Kernel dimensions of the pushforward from the exceptional divisor.
    Kernel {
        path: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        /// List every generator as family/u/j and its value.
        #[arg(long)]
        generators: bool,
        #[arg(long, value_enum, default_value = "all")]
        mode: KernelMode,
    },
    /// Integral homology profile (torsion-free X only).
    Integral {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "sym2")]
        space: IntegralSpace,
    },
    /// Run the verification suite.
    Check {
        path: PathBuf,
        #[arg(long, default_value_t = hilb2_core::verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Built-in descriptors.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show {
        name: String,
    },
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { path, format } => commands::validate(&path, format),
        Command::Betti {
            path,
            space,
            method,
            format,
        } => commands::betti(&path, space, method, format),
        Command::Kernel {
            path,
            degree,
            generators,
            mode,
        } => commands::kernel(&path, degree, generators, mode),
        Command::Integral { path, space } => commands::integral(&path, space),
        Command::Check { path, seed, format } => commands::check(&path, seed, format),
        Command::Catalog { action } => match action {
            CatalogAction::List => commands::catalog_list(),
            CatalogAction::Show { name } => commands::catalog_show(&name),
            CatalogAction::Export { name, output } => {
                commands::catalog_export(&name, output.as_deref())
            }
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("hilb2: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}
