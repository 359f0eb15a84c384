//! DIMACS parsing, writing and solving.

use ctforge::formats::{parse_dimacs, write_dimacs};
use ctforge::sat::{Solver, SolverConfig};

const CNF: &str = include_str!("../data/random3sat_100_410.cnf");

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let f = parse_dimacs(CNF)?;
    let text = write_dimacs(&f);
    assert_eq!(parse_dimacs(&text)?, f);

    let out = Solver::from_formula(&f, SolverConfig::default()).solve(&[]);
    let model = out.model.ok_or("fixture should be satisfiable")?;
    assert!(f.is_satisfied_by(&model.to_bools()));
    Ok(format!(
        "vars={} clauses={} status={:?} conflicts={}\n",
        f.n_vars,
        f.len(),
        out.status,
        out.n_conflicts
    ))
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
