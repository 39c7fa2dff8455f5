use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use radio_leader::audit::audit_jsonl;
use radio_leader::harness::{run_sweep, ExperimentSpec};
use radio_leader::{build_topology, ChannelModel, Error, Family, Protocol, ProtocolSpec, TopologySpec, TraceLevel};
use serde_json::json;

#[derive(Parser)]
#[command(name = "radio-leader", version, about = "Leader election simulator for radio and beep networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a topology and print it as JSON.
    Topo {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Orient the cycle family.
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one election and print its outcome as JSON.
    Run {
        #[arg(long)]
        protocol: Protocol,
        /// Defaults to the protocol's native model.
        #[arg(long)]
        model: Option<ChannelModel>,
        #[arg(long)]
        n: usize,
        /// Defaults to complete for single-hop and path otherwise.
        #[arg(long)]
        family: Option<Family>,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        /// Schedule with this D instead of the exact eccentricity.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        topo_seed: u64,
        #[arg(long)]
        alpha: Option<u32>,
        /// Write the full round-by-round trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Record only primitive invocations in the trace.
        #[arg(long)]
        invocations_only: bool,
    },
    /// Run a TOML experiment spec; exits 2 if any cell breaches a threshold.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out_stats: Option<PathBuf>,
        #[arg(long)]
        out_runs: Option<PathBuf>,
    },
    /// Audit a JSONL trace; exits 2 on any violation.
    Audit {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Topo { family, n, p, seed, directed, out } => {
            let t = build_topology(&TopologySpec::new(family, n).with_p(p).with_seed(seed).directed(directed))?;
            let doc = json!({
                "family": family,
                "n": t.n(),
                "directed": t.is_directed(),
                "D": t.eccentricity(),
                "edges": t.arcs(),
            });
            let mut w = output(out.as_ref())?;
            serde_json::to_writer(&mut w, &doc)?;
            writeln!(w)?;
            Ok(true)
        }
        Command::Run { protocol, model, n, family, p, d, seed, topo_seed, alpha, trace, invocations_only } => {
            let family = family.unwrap_or(if protocol == Protocol::SingleHop { Family::Complete } else { Family::Path });
            let t = build_topology(&TopologySpec::new(family, n).with_p(p).with_seed(topo_seed))?;
            let mut spec = ProtocolSpec::new(protocol);
            if let Some(m) = model {
                spec = spec.with_model(m);
            }
            if let Some(a) = alpha {
                spec = spec.with_alpha(a);
            }
            if let Some(d) = d {
                spec = spec.with_d(d);
            }
            if trace.is_some() {
                spec = spec.with_trace(if invocations_only { TraceLevel::Invocations } else { TraceLevel::Full });
            }
            let (outcome, tr) = radio_leader::run_protocol(&t, &spec, seed)?;
            if let Some(path) = trace {
                tr.write_jsonl(BufWriter::new(File::create(path)?))?;
            }
            println!("{}", serde_json::to_string(&outcome.record())?);
            Ok(true)
        }
        Command::Sweep { spec, out_stats, out_runs } => {
            let spec = ExperimentSpec::from_path(&spec)?;
            let report = run_sweep(&spec)?;
            let stats_path = out_stats.or(spec.output.stats.clone());
            report.write_stats_csv(output(stats_path.as_ref())?)?;
            if let Some(path) = out_runs.or(spec.output.runs.clone()) {
                report.write_runs_jsonl(BufWriter::new(File::create(path)?))?;
            }
            for b in &report.breaches {
                eprintln!("cell {}: {} = {} breaches limit {}", b.cell, b.metric, b.value, b.limit);
            }
            Ok(report.breaches.is_empty())
        }
        Command::Audit { trace, report } => {
            let rep = audit_jsonl(BufReader::new(File::open(trace)?))?;
            let mut w = output(report.as_ref())?;
            serde_json::to_writer_pretty(&mut w, &rep)?;
            writeln!(w)?;
            eprintln!(
                "{} rounds, {} invocations, {} violations",
                rep.rounds_checked,
                rep.invocations_checked,
                rep.violations.len()
            );
            Ok(rep.is_clean())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
