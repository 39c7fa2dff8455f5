// A small experiment sweep from an inline TOML spec; prints the stats CSV.

use radio_leader::harness::{run_sweep, ExperimentSpec};

const SPEC: &str = r#"
protocol = "beep"
families = ["path", "grid", "random-undirected"]
n = [16, 64]
p = [0.05]
trials = 25
seed = 2024

[thresholds]
min_success_rate = 0.9
"#;

fn main() -> radio_leader::Result<()> {
    let spec = ExperimentSpec::from_toml(SPEC)?;
    let report = run_sweep(&spec)?;
    print!("{}", report.stats_csv_string());
    if report.breaches.is_empty() {
        println!("all cells within thresholds");
    }
    for b in &report.breaches {
        println!("breach: cell {} {} = {} (limit {})", b.cell, b.metric, b.value, b.limit);
    }
    Ok(())
}
