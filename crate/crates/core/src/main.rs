use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use packet_atom::app::{self, RunConfig, CSV_SCHEMAS};

#[derive(Parser)]
#[command(
    name = "packet-atom",
    version,
    about = "Excited two-level atom hit by a single-photon wave packet",
    after_help = CSV_SCHEMAS
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one scenario and write its CSV files.
    #[command(after_help = CSV_SCHEMAS)]
    Run {
        /// fig1, fig2, fig3, fig4, fig5, semiclassical-table, shift-table or scaling-check
        scenario: String,
        /// TOML file with [physics], [numerics], [cgs] and [output] sections
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (overrides output.dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write SVG plots
        #[arg(long)]
        svg: bool,
        /// Override a config entry, e.g. --set physics.gamma=0.02
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run {
        scenario,
        config,
        out,
        svg,
        set,
    } = cli.command;
    let mut cfg = match RunConfig::load(config.as_deref(), &set) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(dir) = out {
        cfg.output.dir = dir;
    }
    cfg.output.svg |= svg;
    match app::run(&scenario, &cfg) {
        Ok(manifest) => {
            print!("{manifest}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
