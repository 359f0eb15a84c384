//! IPOG against BOT-its on five generated 20-parameter SUTs at t=2.

use ctforge::harness::{render_table, run_mini_benchmark, HarnessConfig};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let cfg = HarnessConfig::default();
    let rows = run_mini_benchmark(&cfg)?;
    assert!(rows.iter().all(|r| r.valid));
    Ok(render_table(&rows, cfg.t))
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
