use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tcm3_cli::{parse_config, run_scenario, Scenario};
use tcm3_core::Preset;

#[derive(Parser)]
#[command(name = "tcm3", version, about = "Three atoms in a resonant cavity: dynamics, entanglement and Q-function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file
    Run {
        config: PathBuf,
        /// Output directory (overrides output_dir in the config)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip SVG plots
        #[arg(long)]
        no_svg: bool,
    },
    /// List built-in atomic presets
    Presets,
}

fn presets() {
    let d = Scenario::preset(Preset::Excited);
    println!("{:<6}{}", "name", "atomic state");
    println!("{:<6}{}", "eee", "|eee>, all three atoms excited");
    println!("{:<6}{}", "ghz", "(|eee> + |ggg>)/sqrt(2)");
    println!("{:<6}{}", "w", "(|eeg> + |ege> + |gee>)/sqrt(3)");
    println!();
    println!(
        "defaults: alpha0 = {}, tau in [{}, {:.4}] step {}, products = {}",
        d.alpha0.re,
        d.tau_start,
        d.tau_end,
        d.tau_step,
        d.products.names().join(" ")
    );
}

fn run(config: PathBuf, out: Option<PathBuf>, no_svg: bool) -> ExitCode {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return ExitCode::from(1);
        }
    };
    let scenario = match parse_config(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(1);
        }
    };
    let dir = out.or_else(|| scenario.output_dir.clone()).unwrap_or_else(|| PathBuf::from(&scenario.name));
    match run_scenario(&scenario, &dir, !no_svg) {
        Ok((sim, files)) => {
            println!(
                "{}: n_max={} tail_mass={:.3e} norm_drift={:.3e} in {:.2}s",
                scenario.name, sim.field.n_max, sim.field.tail_mass, sim.invariants.norm_drift, sim.wall_seconds
            );
            for f in files {
                println!("  {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, out, no_svg } => run(config, out, no_svg),
        Command::Presets => {
            presets();
            ExitCode::SUCCESS
        }
    }
}
