//! BOT-its with tests streamed out as soon as each one is final.

use ctforge::bot::{build_bot_with, BotConfig};
use ctforge::formats::parse_acts;
use ctforge::verify::verify_mcac;

const MODEL: &str = include_str!("../data/example1.acts");

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let model = parse_acts(MODEL)?;
    let mut out = String::new();
    let cfg = BotConfig { cb: Some(10), seed: 7, pool_budget: None };
    let suite = build_bot_with(&model, 2, cfg, &mut |test| {
        let row: Vec<&str> = test
            .cells
            .iter()
            .zip(&model.parameters)
            .map(|(v, p)| p.values[v.expect("emitted tests are final")].as_str())
            .collect();
        out += &format!("emit {}\n", row.join(""));
    })?;
    assert!(verify_mcac(&model, 2, &suite)?.valid());
    let st = suite.meta.stats;
    out += &format!(
        "size={} limited_queries={} sat_queries={} amend_removals={}\n",
        suite.len(),
        st.limited_queries,
        st.sat_queries,
        st.amend_removals
    );
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
