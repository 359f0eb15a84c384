//! Allowed and forbidden pairs of the four-parameter OS/platform/resolution/orientation model.

use ctforge::formats::parse_acts;
use ctforge::model::{compile, enumerate_tuples, tuple_status, TupleStatus};
use ctforge::sat::SolverConfig;
use ctforge::verify::{describe, oracle_allowed_tuples};

const MODEL: &str = include_str!("../data/example1.acts");

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let model = parse_acts(MODEL)?;
    let enc = compile(&model)?;
    let mut solver = enc.solver(SolverConfig::default());
    let mut forbidden = Vec::new();
    let mut total = 0;
    for tau in enumerate_tuples(&model, 2)? {
        total += 1;
        if tuple_status(&tau, &enc, &mut solver) == TupleStatus::Forbidden {
            forbidden.push(describe(&model, &tau));
        }
    }
    let allowed = total - forbidden.len();
    assert_eq!(allowed, oracle_allowed_tuples(&model, 2)?.len());
    Ok(format!(
        "total={total} allowed={allowed} forbidden={}\n{}\n",
        forbidden.len(),
        forbidden.join("\n")
    ))
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
