use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use freqlab::cli::{run_from_path, ExperimentKind, RunOptions};

#[derive(Parser)]
#[command(name = "freqlab", version, about = "Frequency-function experiments on balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H, I, N over a radius grid
    Profile(Args),
    /// N(r) + C W r² nondecreasing
    Monotonicity(Args),
    /// Three-ball inequalities over a family
    ThreeBallSweep(Args),
    /// Vanishing orders from mass power laws
    VanishOrder(Args),
    /// Ball-chain lower-bound certificate
    Chain(Args),
    /// Stacked frequency of a polyharmonic system
    Polysystem(Args),
    /// Doubling ratios h(2R)/h(R)
    Doubling(Args),
    /// The α = 0 stacked monotonicity
    Ucp(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config's sampling seed
    #[arg(long)]
    seed: Option<u64>,
    /// Re-run quadratures at doubled orders for error estimates
    #[arg(long)]
    self_check: bool,
    /// Also write a gnuplot script next to the CSV
    #[arg(long)]
    emit_gnuplot: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Profile(a) => (ExperimentKind::Profile, a),
        Command::Monotonicity(a) => (ExperimentKind::Monotonicity, a),
        Command::ThreeBallSweep(a) => (ExperimentKind::ThreeBallSweep, a),
        Command::VanishOrder(a) => (ExperimentKind::VanishOrder, a),
        Command::Chain(a) => (ExperimentKind::Chain, a),
        Command::Polysystem(a) => (ExperimentKind::Polysystem, a),
        Command::Doubling(a) => (ExperimentKind::Doubling, a),
        Command::Ucp(a) => (ExperimentKind::Ucp, a),
    };
    let options = RunOptions {
        out_dir: args.out,
        seed: args.seed,
        self_check: args.self_check,
        emit_gnuplot: args.emit_gnuplot,
    };
    let (code, text) = run_from_path(kind, &args.config, &options);
    if code == 2 {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(code as u8)
}
