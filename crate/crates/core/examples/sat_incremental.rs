//! Incremental solving: assumptions, cores, unit propagation and conflict budgets.

use ctforge::sat::{Lit, Propagation, SolverConfig, Solver};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let (a, b, c) = (Lit::pos(1), Lit::pos(2), Lit::pos(3));
    let mut s = Solver::new(SolverConfig::default());
    // a -> b, b -> c
    s.add_clause([!a, b]);
    s.add_clause([!b, c]);

    let mut out = String::new();
    let sat = s.solve(&[a]);
    out += &format!("under a: {:?}, c={}\n", sat.status, sat.model.unwrap().is_true(c));

    let unsat = s.solve(&[a, !c]);
    out += &format!("under a,!c: {:?}, core={:?}\n", unsat.status, unsat.core.unwrap());

    if let Propagation::Fixpoint(lits) = s.propagate(&[a]) {
        let shown: Vec<i32> = lits.iter().map(|l| l.to_dimacs()).collect();
        out += &format!("propagate(a) = {shown:?}\n");
    }

    // clauses added later are seen by the next call
    s.add_clause([!c]);
    out += &format!("after adding !c, under a: {:?}\n", s.solve(&[a]).status);
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("example failed"));
}
