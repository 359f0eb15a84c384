//! The running example through ACTS, CASA and Extended ACTS.

use ctforge::formats::{parse_acts, parse_casa, parse_extended_acts, write_acts, write_casa, write_extended_acts};
use ctforge::model::{compile, enumerate_tuples, is_allowed, SutModel};
use ctforge::sat::SolverConfig;

const MODEL: &str = include_str!("../data/example1.acts");
const CASA_MODEL: &str = include_str!("../data/example1.model");
const CASA_CONSTRAINTS: &str = include_str!("../data/example1.constraints");

fn allowed(model: &SutModel) -> Result<usize, ctforge::Error> {
    let enc = compile(model)?;
    let mut s = enc.solver(SolverConfig::default());
    let mut n = 0;
    for tau in enumerate_tuples(model, 2)? {
        n += is_allowed(&tau, &enc, &mut s)? as usize;
    }
    Ok(n)
}

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let acts = parse_acts(MODEL)?;
    let (casa_model, casa_constraints) = write_casa(&acts, 2)?;
    let from_casa = parse_casa(&casa_model, Some(&casa_constraints))?;
    let bundled = parse_casa(CASA_MODEL, Some(CASA_CONSTRAINTS))?;

    let xacts = write_extended_acts(&acts);
    assert_eq!(parse_extended_acts(&xacts)?, acts);
    assert_eq!(write_acts(&parse_acts(&write_acts(&acts)?)?)?, write_acts(&acts)?);

    Ok(format!(
        "acts allowed={} casa allowed={} bundled allowed={}\n--- casa constraints ---\n{casa_constraints}--- acts ---\n{xacts}",
        allowed(&acts)?,
        allowed(&from_casa)?,
        allowed(&bundled)?
    ))
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
