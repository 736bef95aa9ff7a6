//! `famdim` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input or failed validation, 3 a resource
//! cap was exceeded.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "famdim", version, about = "Geometric dimension of 3-manifold groups for the virtually abelian families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// `--k` selector: an integer ≥ 2 or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSelect {
    All,
    One(u32),
}

fn parse_k(s: &str) -> Result<KSelect, String> {
    if s == "all" {
        return Ok(KSelect::All);
    }
    match s.parse::<u32>() {
        Ok(k) if k >= 2 => Ok(KSelect::One(k)),
        _ => Err(format!("expected an integer ≥ 2 or \"all\", got {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a manifold description (JSON file, "-" for stdin).
    Compute {
        file: String,
        /// Family index: 2, 3, any larger integer (evaluated as 3), or "all".
        #[arg(long, default_value = "all", value_parser = parse_k)]
        k: KSelect,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print the derivation trace with rule ids.
        #[arg(long)]
        explain: bool,
    },
    /// Recompute a JSON report from its embedded input and compare values.
    Replay { file: String },
    /// Check a manifold description and list every violation.
    Validate {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Classify a GL₂(ℤ) matrix given as "a,b;c,d".
    ClassifyMatrix {
        matrix: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        explain: bool,
    },
    /// Classify a 2-orbifold by its orbifold Euler characteristic.
    ClassifyOrbifold {
        /// sphere | torus | projective | klein | genus:G | genus:G:nonor
        #[arg(long)]
        surface: String,
        /// Cone point orders, comma separated.
        #[arg(long, value_delimiter = ',')]
        cone: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        boundary: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build a ball in the Bass-Serre tree of a free product of cyclic groups.
    Ball {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cone off axes in a tree ball and report the push-out dimension bound.
    ConeOff {
        #[command(flatten)]
        tree: TreeArgs,
        /// "auto" (products of two distinct generators) or words like "ab,bc".
        #[arg(long, default_value = "auto")]
        axes: String,
        /// Word-length budget for stabilizer searches.
        #[arg(long, default_value_t = 4)]
        budget: usize,
        /// Print the push-out dimension bound.
        #[arg(long)]
        bound: bool,
        /// Dimension assigned to vertex-group cells (0: every stabilizer in the family).
        #[arg(long, default_value_t = 0)]
        factor_gd: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certify the normalizer of a cyclic subgroup of ℤ²⋊_A ℤ.
    ProbeNormalizer {
        /// Hyperbolic monodromy "a,b;c,d".
        #[arg(long)]
        monodromy: String,
        /// Element "x,y,l" standing for ((x,y), l).
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 8)]
        bound: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// Orders of the cyclic factors, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    factors: Vec<u32>,
    #[arg(long)]
    radius: usize,
    /// Maximum number of ball vertices.
    #[arg(long, default_value_t = famdim::bass_serre::DEFAULT_VERTEX_CAP)]
    cap: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute { file, k, format, explain } => commands::compute(&file, k, format, explain),
        Command::Replay { file } => commands::replay(&file),
        Command::Validate { file, format } => commands::validate(&file, format),
        Command::ClassifyMatrix { matrix, format, explain } => commands::classify_matrix(&matrix, format, explain),
        Command::ClassifyOrbifold { surface, cone, boundary, format } => {
            commands::classify_orbifold(&surface, cone, boundary, format)
        }
        Command::Ball { tree, format } => commands::ball(&tree, format),
        Command::ConeOff { tree, axes, budget, bound, factor_gd, format } => {
            commands::cone_off(&tree, &axes, budget, bound, factor_gd, format)
        }
        Command::ProbeNormalizer { monodromy, element, bound, format } => commands::probe(&monodromy, &element, bound, format),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(out) = e.stdout() {
                print!("{out}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
