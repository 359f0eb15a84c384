//! IPOG on the running example, written out as CSV.

use ctforge::formats::{parse_acts, write_test_suite};
use ctforge::ipog::build_ipog;
use ctforge::verify::verify_mcac;

const MODEL: &str = include_str!("../data/example1.acts");

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let model = parse_acts(MODEL)?;
    let suite = build_ipog(&model, 2, None)?;
    let report = verify_mcac(&model, 2, &suite)?;
    assert!(report.valid());
    Ok(format!(
        "size={} sat_queries={}\n{}",
        suite.len(),
        suite.meta.stats.sat_queries,
        write_test_suite(&suite, &model)?
    ))
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
