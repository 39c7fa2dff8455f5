//! Seeded Monte Carlo sweeps over protocols and topology families.
//!
//! A sweep is a grid of cells (family × n × p). Each cell builds one
//! topology and runs `trials` elections on it, each with seed
//! `derive_seed(root, [cell, trial])`, so any single run can be replayed from
//! its output row. Every run is audited from its invocation-level trace.
//! Runs execute sequentially and all statistics are computed from the run
//! list in order, so identical specs give byte-identical outputs.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::audit::{audit_trace, AuditReport};
use crate::bits::Bitstring;
use crate::channel::ChannelModel;
use crate::election::{run_protocol, Protocol, ProtocolSpec};
use crate::engine::DEFAULT_ROUND_CAP;
use crate::error::{Error, Result};
use crate::prims::DEFAULT_ALPHA;
use crate::rng::derive_seed;
use crate::topology::{build_topology, Family, NodeId, Topology, TopologySpec};
use crate::trace::{Primitive, TraceLevel};

/// Salt separating a cell's topology seed from its run seeds.
const TOPOLOGY_SALT: u64 = u64::MAX;

/// A sweep configuration, usually read from TOML.
///
/// ```toml
/// protocol = "expected"
/// families = ["path", "grid"]
/// n = [16, 64]
/// trials = 100
/// seed = 7
///
/// [thresholds]
/// min_success_rate = 0.99
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub protocol: Protocol,
    /// Defaults to the protocol's native model.
    #[serde(default)]
    pub model: Option<ChannelModel>,
    pub families: Vec<Family>,
    pub n: Vec<usize>,
    /// Extra-edge probabilities; only random families are swept over them.
    #[serde(default = "default_p")]
    pub p: Vec<f64>,
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: u32,
    #[serde(default)]
    pub d_override: Option<usize>,
    #[serde(default = "default_round_cap")]
    pub round_cap: u64,
    /// Layer width for the layered family.
    #[serde(default)]
    pub width: Option<usize>,
    /// Orientation of the cycle family.
    #[serde(default)]
    pub directed: bool,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub output: Outputs,
}

fn default_p() -> Vec<f64> {
    vec![0.1]
}

fn default_alpha() -> u32 {
    DEFAULT_ALPHA
}

fn default_round_cap() -> u64 {
    DEFAULT_ROUND_CAP
}

/// Per-cell limits; a cell outside them is a breach.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    pub min_success_rate: Option<f64>,
    /// Largest tolerated fraction of runs with at least one violation.
    pub max_violation_rate: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub stats: Option<PathBuf>,
    pub runs: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(protocol: Protocol, families: Vec<Family>, n: Vec<usize>, trials: u32) -> Self {
        Self {
            protocol,
            model: None,
            families,
            n,
            p: default_p(),
            trials,
            seed: 0,
            alpha: DEFAULT_ALPHA,
            d_override: None,
            round_cap: DEFAULT_ROUND_CAP,
            width: None,
            directed: false,
            thresholds: Thresholds::default(),
            output: Outputs::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn model(&self) -> ChannelModel {
        self.model.unwrap_or(self.protocol.default_model())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.alpha == 0 {
            return bad("alpha must be positive".into());
        }
        if self.n.contains(&0) {
            return bad("every n must be positive".into());
        }
        if let Some(p) = self.p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return bad(format!("probability {p} outside [0, 1]"));
        }
        if self.families.iter().any(|f| f.is_random()) && self.p.is_empty() {
            return bad("random families need at least one p".into());
        }
        for rate in [self.thresholds.min_success_rate, self.thresholds.max_violation_rate].into_iter().flatten() {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("threshold {rate} outside [0, 1]"));
            }
        }
        Ok(())
    }

    /// The grid cells in execution order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &family in &self.families {
            for &n in &self.n {
                let ps: &[f64] = if family.is_random() { &self.p } else { &[0.0] };
                for &p in ps {
                    cells.push(Cell { index: cells.len(), family, n, p });
                }
            }
        }
        cells
    }

    fn topology_spec(&self, cell: &Cell) -> TopologySpec {
        let mut spec = TopologySpec::new(cell.family, cell.n)
            .with_p(cell.p)
            .with_seed(derive_seed(self.seed, &[cell.index as u64, TOPOLOGY_SALT]))
            .directed(self.directed);
        if let Some(w) = self.width {
            spec = spec.with_width(w);
        }
        spec
    }

    fn protocol_spec(&self) -> ProtocolSpec {
        let mut spec = ProtocolSpec::new(self.protocol)
            .with_model(self.model())
            .with_alpha(self.alpha)
            .with_trace(TraceLevel::Invocations);
        spec.round_cap = self.round_cap;
        spec.d_override = self.d_override;
        spec
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub family: Family,
    pub n: usize,
    pub p: f64,
}

/// One line of the runs file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub cell: usize,
    pub trial: u32,
    pub seed: u64,
    pub protocol: Protocol,
    pub family: Family,
    pub n: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub success: bool,
    pub round_cap_hit: bool,
    pub leader_node: Option<NodeId>,
    pub output_id: Option<Bitstring>,
    pub rounds: u64,
    pub iterations: u32,
    /// Violation counts keyed by primitive; empty for a clean run.
    pub violations: BTreeMap<String, usize>,
}

/// CSV column order of the stats file.
pub const STATS_COLUMNS: [&str; 24] = [
    "cell",
    "protocol",
    "model",
    "family",
    "n",
    "p",
    "D",
    "trials",
    "successes",
    "success_rate",
    "mean_rounds",
    "sd_rounds",
    "min_rounds",
    "max_rounds",
    "mean_iterations",
    "round_cap_hits",
    "violating_runs",
    "v_decay",
    "v_pmb",
    "v_selection",
    "v_search",
    "v_beep_wave",
    "v_single_hop",
    "v_channel",
];

/// Aggregates for one cell, in [`STATS_COLUMNS`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub cell: usize,
    pub protocol: Protocol,
    pub model: ChannelModel,
    pub family: Family,
    pub n: usize,
    pub p: f64,
    #[serde(rename = "D")]
    pub d: usize,
    pub trials: u32,
    pub successes: u32,
    pub success_rate: f64,
    pub mean_rounds: f64,
    pub sd_rounds: f64,
    pub min_rounds: u64,
    pub max_rounds: u64,
    pub mean_iterations: f64,
    pub round_cap_hits: u32,
    pub violating_runs: u32,
    pub v_decay: usize,
    pub v_pmb: usize,
    pub v_selection: usize,
    pub v_search: usize,
    pub v_beep_wave: usize,
    pub v_single_hop: usize,
    pub v_channel: usize,
}

impl CellStats {
    fn from_runs(cell: &Cell, spec: &ExperimentSpec, d: usize, runs: &[RunRecord]) -> Self {
        let count = runs.len() as f64;
        let rounds: Vec<f64> = runs.iter().map(|r| r.rounds as f64).collect();
        let mean = rounds.iter().sum::<f64>() / count;
        let sd = if runs.len() > 1 {
            (rounds.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
        } else {
            0.0
        };
        let successes = runs.iter().filter(|r| r.success).count() as u32;
        let violations = |name: &str| runs.iter().filter_map(|r| r.violations.get(name)).sum::<usize>();
        Self {
            cell: cell.index,
            protocol: spec.protocol,
            model: spec.model(),
            family: cell.family,
            n: cell.n,
            p: cell.p,
            d,
            trials: runs.len() as u32,
            successes,
            success_rate: successes as f64 / count,
            mean_rounds: mean,
            sd_rounds: sd,
            min_rounds: runs.iter().map(|r| r.rounds).min().unwrap_or(0),
            max_rounds: runs.iter().map(|r| r.rounds).max().unwrap_or(0),
            mean_iterations: runs.iter().map(|r| r.iterations as f64).sum::<f64>() / count,
            round_cap_hits: runs.iter().filter(|r| r.round_cap_hit).count() as u32,
            violating_runs: runs.iter().filter(|r| !r.violations.is_empty()).count() as u32,
            v_decay: violations(Primitive::Decay.name()),
            v_pmb: violations(Primitive::Pmb.name()),
            v_selection: violations(Primitive::Selection.name()),
            v_search: violations(Primitive::Search.name()),
            v_beep_wave: violations(Primitive::BeepWave.name()),
            v_single_hop: violations(Primitive::SingleHop.name()),
            v_channel: violations("channel"),
        }
    }
}

/// A cell that fell outside the spec's thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breach {
    pub cell: usize,
    pub metric: String,
    pub value: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub cells: Vec<CellStats>,
    pub runs: Vec<RunRecord>,
    pub breaches: Vec<Breach>,
}

impl SweepReport {
    pub fn write_stats_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(STATS_COLUMNS)?;
        for c in &self.cells {
            out.serialize(c)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_runs_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.runs {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn stats_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_stats_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Runs trial `trial` of `cell` on `topo` and audits it.
pub fn run_trial(spec: &ExperimentSpec, cell: &Cell, topo: &Topology, trial: u32) -> Result<(RunRecord, AuditReport)> {
    let seed = derive_seed(spec.seed, &[cell.index as u64, trial as u64]);
    let (outcome, trace, cap_hit) = match run_protocol(topo, &spec.protocol_spec(), seed) {
        Ok((outcome, trace)) => (Some(outcome), trace, false),
        Err(Error::RoundCap { trace, .. }) => (None, *trace, true),
        Err(e) => return Err(e),
    };
    let audit = audit_trace(&trace)?;
    let mut record = RunRecord {
        cell: cell.index,
        trial,
        seed,
        protocol: spec.protocol,
        family: cell.family,
        n: cell.n,
        d: topo.eccentricity(),
        success: false,
        round_cap_hit: cap_hit,
        leader_node: None,
        output_id: None,
        rounds: spec.round_cap,
        iterations: trace.invocations().map(|i| i.iteration).max().unwrap_or(0),
        violations: audit.counts_by_primitive(),
    };
    if let Some(o) = outcome {
        record.success = o.success;
        record.leader_node = o.leader_node();
        record.output_id = o.output_id().cloned();
        record.rounds = o.rounds;
        record.iterations = o.iterations;
    }
    Ok((record, audit))
}

/// Executes every cell of `spec` and aggregates the results.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepReport> {
    spec.validate()?;
    let mut report = SweepReport { cells: Vec::new(), runs: Vec::new(), breaches: Vec::new() };
    for cell in spec.cells() {
        let topo = build_topology(&spec.topology_spec(&cell))?;
        spec.protocol
            .check_model(spec.model(), &topo)
            .map_err(|e| Error::InvalidSpec(format!("cell {}: {e}", cell.index)))?;
        let first = report.runs.len();
        for trial in 0..spec.trials {
            report.runs.push(run_trial(spec, &cell, &topo, trial)?.0);
        }
        let stats = CellStats::from_runs(&cell, spec, topo.eccentricity(), &report.runs[first..]);
        if let Some(min) = spec.thresholds.min_success_rate {
            if stats.success_rate < min {
                report.breaches.push(Breach { cell: cell.index, metric: "success_rate".into(), value: stats.success_rate, limit: min });
            }
        }
        if let Some(max) = spec.thresholds.max_violation_rate {
            let rate = stats.violating_runs as f64 / stats.trials as f64;
            if rate > max {
                report.breaches.push(Breach { cell: cell.index, metric: "violation_rate".into(), value: rate, limit: max });
            }
        }
        report.cells.push(stats);
    }
    Ok(report)
}
