use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fervir::cli::{
    cmd_act, cmd_bracket, cmd_character, cmd_classify_rank2, cmd_decompose, cmd_is_smooth,
    cmd_jacobi, cmd_verify_module, resolve_arg, CommandOutput,
};

/// Exact computer algebra for fermion and fermion-Virasoro superalgebra
/// representations.
#[derive(Parser)]
#[command(name = "fervir", version, about)]
struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket two elements of an algebra.
    Bracket {
        /// One of thv, vir, f0, f12, s0, s12.
        #[arg(long)]
        algebra: String,
        /// First element, e.g. "L_2".
        x: String,
        /// Second element, e.g. "L_-2".
        y: String,
    },
    /// Sweep the graded Jacobi identity over all basis triples in a window.
    Jacobi {
        #[arg(long)]
        algebra: String,
        /// Index bound of the sweep.
        #[arg(long)]
        range: i64,
    },
    /// Apply an algebra element to a Fock module vector.
    Act {
        /// Module descriptor JSON, or @file.
        #[arg(long)]
        module: String,
        /// Element text, e.g. "psi_0 + 2*L_-1".
        element: String,
        /// Vector text, e.g. "xi(0,2)".
        vector: String,
    },
    /// Exact multiplicities of the Virasoro weight spectrum of the full
    /// module.
    Character {
        /// 0 or 1/2.
        #[arg(long)]
        delta: String,
        /// Largest weight offset listed.
        #[arg(long = "max-n")]
        max_n: i64,
    },
    /// Sweep the module axioms of a module descriptor.
    VerifyModule {
        /// Module descriptor JSON, or @file.
        #[arg(long)]
        module: String,
        /// Generator index bound.
        #[arg(long = "index-bound")]
        index_bound: i64,
        /// Test vector degree bound.
        #[arg(long = "degree-bound")]
        degree_bound: i64,
    },
    /// Identify a rank-2 free module from generator action data.
    ClassifyRank2 {
        /// Rank-2 data JSON, or @file.
        #[arg(long)]
        data: String,
    },
    /// Split the cyclic span of a homogeneous vector into simple summands.
    Decompose {
        /// Module descriptor JSON (V_m or sum of V_m), or @file.
        #[arg(long)]
        module: String,
        /// Coordinate vector as a JSON array of scalars, or @file.
        #[arg(long)]
        vector: String,
    },
    /// Whether every basis vector is annihilated by all sufficiently
    /// positive fermion modes.
    IsSmooth {
        /// Module descriptor JSON, or @file.
        #[arg(long)]
        module: String,
    },
}

fn run(cli: &Cli) -> fervir::Result<CommandOutput> {
    match &cli.command {
        Command::Bracket { algebra, x, y } => cmd_bracket(algebra, x, y),
        Command::Jacobi { algebra, range } => cmd_jacobi(algebra, *range),
        Command::Act {
            module,
            element,
            vector,
        } => cmd_act(&resolve_arg(module)?, element, vector),
        Command::Character { delta, max_n } => cmd_character(delta, *max_n),
        Command::VerifyModule {
            module,
            index_bound,
            degree_bound,
        } => cmd_verify_module(&resolve_arg(module)?, *index_bound, *degree_bound),
        Command::ClassifyRank2 { data } => cmd_classify_rank2(&resolve_arg(data)?),
        Command::Decompose { module, vector } => {
            cmd_decompose(&resolve_arg(module)?, &resolve_arg(vector)?)
        }
        Command::IsSmooth { module } => cmd_is_smooth(&resolve_arg(module)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string(&out.json).expect("serializable"));
            } else {
                println!("{}", out.text);
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
