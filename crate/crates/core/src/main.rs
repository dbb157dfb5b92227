use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopf_galois::cli::{self, Command, Format, RunConfig, Status};

#[derive(Parser)]
#[command(
    name = "hgs",
    version,
    about = "Hopf-Galois structures: census, normal basis generators, associated orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// List the regular subgroups of Perm(G) normalized by λ(G)
    Enumerate(RunArgs),
    /// Compare K[G]- and H_λ-generator verdicts on seeded random elements
    Nbg(RunArgs),
    /// Associated orders, generator search and certificate transfer for a lattice
    Theorem(RunArgs),
    /// Hopf-order test for both associated orders
    HopfOrder(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Markdown,
}

#[derive(Args)]
struct RunArgs {
    /// Context fixture (JSON), optionally with a "lattice" entry
    #[arg(long)]
    fixture: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Coefficient bound for the generator search
    #[arg(long = "box", default_value_t = 2)]
    search_box: u32,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Re-check the certificates in an earlier theorem report
    #[arg(long)]
    verify_only: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Enumerate(a) => (Command::Enumerate, a),
        Sub::Nbg(a) => (Command::Nbg, a),
        Sub::Theorem(a) => (Command::Theorem, a),
        Sub::HopfOrder(a) => (Command::HopfOrder, a),
    };
    let config = RunConfig {
        command,
        fixture: args.fixture,
        seed: args.seed,
        samples: args.samples as usize,
        search_box: args.search_box,
        out: args.out,
        format: match args.format {
            FormatArg::Json => Format::Json,
            FormatArg::Markdown => Format::Markdown,
        },
        verify_only: args.verify_only,
    };
    let report = match cli::run(&config) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("hgs: {}", f.message);
            return ExitCode::from(f.status.code());
        }
    };
    let text = report.render();
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("hgs: {}: {e}", path.display());
                return ExitCode::from(Status::Io.code());
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.status.code())
}
