//! Carving a ten-parameter SUT out of a random 3-CNF at a target hardness.

use ctforge::formats::{parse_dimacs, write_extended_acts};
use ctforge::sutgen::{generate, GenConfig};

const CNF: &str = include_str!("../data/random3sat_100_410.cnf");

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let formula = parse_dimacs(CNF)?;
    let mut result = generate(&formula, &GenConfig::new(10, 50.0, 5000.0))?;
    result.provenance.source = "random3sat_100_410.cnf".into();
    let text = write_extended_acts(&result.model);
    Ok(format!(
        "{}--- first lines of the model ---\n{}\n",
        result.provenance.to_sidecar(),
        text.lines().take(16).collect::<Vec<_>>().join("\n")
    ))
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
