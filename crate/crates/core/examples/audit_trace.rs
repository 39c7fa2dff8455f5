// Records a full trace, writes it as JSON Lines, audits it, then plants a
// fault in one reception and audits again.

use std::fs::File;
use std::io::{BufReader, BufWriter};

use radio_leader::audit::{audit_jsonl, audit_trace};
use radio_leader::trace::Record;
use radio_leader::{build_topology, run_protocol, Family, Protocol, ProtocolSpec, TopologySpec, TraceLevel};

fn main() -> radio_leader::Result<()> {
    let t = build_topology(&TopologySpec::new(Family::Grid, 16))?;
    let spec = ProtocolSpec::new(Protocol::Expected).with_trace(TraceLevel::Full);
    let (outcome, mut trace) = run_protocol(&t, &spec, 8)?;
    println!("election: success={} rounds={}", outcome.success, outcome.rounds);

    let path = std::env::temp_dir().join("radio_leader_audit_example.jsonl");
    trace.write_jsonl(BufWriter::new(File::create(&path)?))?;
    let report = audit_jsonl(BufReader::new(File::open(&path)?))?;
    println!(
        "{}: {} rounds and {} invocations checked, {} violations",
        path.display(),
        report.rounds_checked,
        report.invocations_checked,
        report.violations.len()
    );

    // Flip the first delivered message into silence.
    let planted = trace.records.iter_mut().find_map(|r| match r {
        Record::Round(round) => round
            .receptions
            .iter_mut()
            .find(|e| e.kind == "message")
            .map(|e| (round.round, e)),
        _ => None,
    });
    if let Some((round, entry)) = planted {
        entry.kind = "silence".into();
        entry.payload = None;
        println!("planted a fault at round {round}");
    }
    for v in audit_trace(&trace)?.violations {
        println!("  round {} [{}] {:?}: {}", v.round, v.primitive, v.kind, v.detail);
    }
    std::fs::remove_file(path)?;
    Ok(())
}
