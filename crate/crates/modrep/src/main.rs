use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use modrep::{render, run_suite, Format, SuiteConfig};

#[derive(Parser)]
#[command(name = "modrep", about = "Verification harness for mod-p representations of SL2 over GF(q)((t))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// carter-lusztig, cosets, iwahori-hecke, spherical, principal-series,
    /// supersingular, identities or all.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Series precision N.
    #[arg(long, default_value_t = 64)]
    precision: i64,
    /// Support radius R.
    #[arg(long, default_value_t = 4)]
    radius: i64,
    /// Principal-series level cap M.
    #[arg(long, default_value_t = 4)]
    level: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: OutFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let Command::Verify(a) = Cli::parse().command;
    let cfg = SuiteConfig { p: a.p, e: a.e, precision: a.precision, radius: a.radius, level: a.level, seed: a.seed };
    let report = match run_suite(&a.suite, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("modrep: {e}");
            return ExitCode::from(2);
        }
    };
    let format = match a.format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Json,
    };
    let text = render(&report, format);
    match &a.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("modrep: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
