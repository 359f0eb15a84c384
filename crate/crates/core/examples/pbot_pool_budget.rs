//! PBOT-its: the same construction with the tuple pool capped in bytes.

use ctforge::bot::{build_pbot, BotConfig};
use ctforge::formats::parse_acts;
use ctforge::verify::verify_mcac;

const MODEL: &str = include_str!("../data/example1.acts");

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let model = parse_acts(MODEL)?;
    let mut out = String::new();
    for budget in [None, Some(41), Some(20), Some(8)] {
        let suite = build_pbot(&model, 2, BotConfig { pool_budget: budget, ..BotConfig::default() })?;
        assert!(verify_mcac(&model, 2, &suite)?.valid());
        let st = suite.meta.stats;
        out += &format!(
            "budget={} size={} slices={} peak_pool_bytes={}\n",
            budget.map_or("none".into(), |b| b.to_string()),
            suite.len(),
            st.slices,
            st.peak_pool_bytes
        );
    }
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
