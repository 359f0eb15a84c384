use rand::seq::index;
use rand::Rng;

use super::{Clause, CnfFormula, Lit};

/// Uniform random k-CNF: each clause picks `k` distinct variables and random signs.
pub fn random_kcnf<R: Rng>(n_vars: usize, n_clauses: usize, k: usize, rng: &mut R) -> CnfFormula {
    assert!(k <= n_vars, "clause width exceeds the variable count");
    let mut f = CnfFormula::new(n_vars);
    for _ in 0..n_clauses {
        let lits = index::sample(rng, n_vars, k)
            .into_iter()
            .map(|v| Lit::new(v as u32 + 1, rng.gen_bool(0.5)))
            .collect();
        f.push(Clause::new(lits));
    }
    f
}
