//! Checks the reference 22-row and 21-row arrays, and a 20-row truncation.

use ctforge::formats::{parse_acts, read_test_suite};
use ctforge::verify::{describe, verify_mcac};

const MODEL: &str = include_str!("../data/example1.acts");
const CA22: &str = include_str!("../data/ca22.csv");
const CA21: &str = include_str!("../data/ca21.csv");

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let model = parse_acts(MODEL)?;
    let mut out = String::new();
    for (name, csv) in [("CA22", CA22), ("CA21", CA21)] {
        let report = verify_mcac(&model, 2, &read_test_suite(csv, &model)?)?;
        out += &format!("{name}: valid={} tests={}\n", report.valid(), report.tests);
    }
    let mut cut = read_test_suite(CA21, &model)?;
    cut.tests.remove(0);
    let report = verify_mcac(&model, 2, &cut)?;
    let missing: Vec<String> = report.uncovered.iter().map(|t| describe(&model, t)).collect();
    out += &format!("CA21 without its first row: valid={} uncovered={}\n", report.valid(), missing.join(" "));
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
