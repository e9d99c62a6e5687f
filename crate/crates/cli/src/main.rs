use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cir::output::{report_json, write_corpus_csv, write_outputs};
use cir::{build_corpus, run_all, run_scenario, scenario, CaType, CirError, RunConfig, TopologyId};
use cir_core::topology::global_metrics;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cir", version, about = "Capacity-interference relationship experiments on wireless mesh networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all 48 scenarios and write reports, summary and plot data.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scenario and print its report.
    Scenario {
        #[arg(long)]
        id: usize,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Generate and score a corpus, printed as CSV.
    Corpus {
        #[arg(long)]
        topology: TopologyId,
        #[arg(long, default_value = "generic")]
        ca_type: CaType,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print a topology, or its global metrics.
    Topo {
        #[arg(long)]
        label: TopologyId,
        #[arg(long)]
        metrics: bool,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load(path: Option<PathBuf>) -> Result<RunConfig, CirError> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn execute(cmd: Command) -> Result<bool, CirError> {
    match cmd {
        Command::Run { config, out } => {
            let mut cfg = load(config)?;
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            let outcome = run_all(&cfg)?;
            let written = write_outputs(&outcome, &cfg.output_dir)?;
            for (spec, r) in &outcome.results {
                match r {
                    Ok(rep) => println!(
                        "TS{:<2} {:<8} {:<7} {:<4} {}  {:<3} {}",
                        spec.id,
                        spec.topology,
                        spec.ca_type,
                        spec.metric,
                        spec.direction,
                        rep.label,
                        rep.nature.label()
                    ),
                    Err(e) => eprintln!("TS{} failed: {e}", spec.id),
                }
            }
            println!("{} files written to {}", written.len(), cfg.output_dir.display());
            Ok(outcome.failures() == 0)
        }
        Command::Scenario { id, config } => {
            let cfg = load(config)?;
            let spec = scenario(id).ok_or_else(|| CirError::Config(format!("scenario id {id} outside 1..=48")))?;
            print!("{}", report_json(&run_scenario(spec, &cfg)?)?);
            Ok(true)
        }
        Command::Corpus { topology, ca_type, config } => {
            let cfg = load(config)?;
            let corpus = build_corpus(&cfg, topology, ca_type)?;
            let stdout = std::io::stdout();
            write_corpus_csv(&corpus, stdout.lock())?;
            Ok(true)
        }
        Command::Topo { label, metrics, config } => {
            let cfg = load(config)?;
            let topo = cfg.build_topology(label)?;
            let mut stdout = std::io::stdout().lock();
            if metrics {
                let m = global_metrics(&topo)?;
                let t = if m.transitivity_defined { format!("{:.4}", m.transitivity_t) } else { "NA".into() };
                writeln!(stdout, "topology {label}: nodes={} links={}", topo.node_count(), m.link_count)?;
                writeln!(stdout, "delta={:.4} eps_min={:.2} T={t}", m.density_delta, m.radius_eps_min)?;
            } else {
                writeln!(stdout, "{}", topo.to_json()?)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
