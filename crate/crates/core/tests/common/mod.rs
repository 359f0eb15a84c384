//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ctforge::model::{ConstraintExpr, ParamKind, Parameter, SutModel};
use itertools::Itertools;
use ctforge::sat::{random_kcnf, Clause, CnfFormula, Lit};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random 3-CNF with `n` variables and `round(ratio * n)` clauses.
pub fn random_3cnf(n: usize, ratio: f64, rng: &mut ChaCha8Rng) -> CnfFormula {
    random_kcnf(n, (ratio * n as f64).round() as usize, 3.min(n), rng)
}

/// Clause as (positive mask, negative mask) over bit `var - 1`.
fn masks(c: &Clause) -> (u32, u32) {
    c.lits.iter().fold((0, 0), |(p, n), l| {
        let bit = 1u32 << (l.var() - 1);
        if l.is_positive() {
            (p | bit, n)
        } else {
            (p, n | bit)
        }
    })
}

/// First assignment (as a bit mask) satisfying the formula and the literals, if any.
pub fn brute_force(f: &CnfFormula, assumps: &[Lit]) -> Option<u32> {
    assert!(f.n_vars <= 24);
    let cs: Vec<(u32, u32)> = f.clauses.iter().map(masks).chain(assumps.iter().map(|&l| masks(&Clause::new(vec![l])))).collect();
    (0u32..1 << f.n_vars).find(|&x| cs.iter().all(|&(p, n)| x & p != 0 || !x & n != 0))
}

/// Unit propagation by repeated full scans. `None` on conflict; otherwise the
/// assigned literals sorted by variable.
pub fn naive_up(f: &CnfFormula, assumps: &[Lit]) -> Option<Vec<Lit>> {
    let mut val: Vec<Option<bool>> = vec![None; f.n_vars + 1];
    for &l in assumps {
        match val[l.var() as usize] {
            Some(v) if v != l.is_positive() => return None,
            _ => val[l.var() as usize] = Some(l.is_positive()),
        }
    }
    loop {
        let mut changed = false;
        for c in &f.clauses {
            let mut open = Vec::new();
            let mut sat = false;
            for &l in &c.lits {
                match val[l.var() as usize] {
                    Some(v) if v == l.is_positive() => sat = true,
                    Some(_) => {}
                    None => open.push(l),
                }
            }
            if sat {
                continue;
            }
            match open.as_slice() {
                [] => return None,
                [l] => {
                    val[l.var() as usize] = Some(l.is_positive());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    Some(
        (1..=f.n_vars)
            .filter_map(|v| val[v].map(|b| Lit::new(v as u32, b)))
            .collect(),
    )
}

fn random_atom(rng: &mut ChaCha8Rng, domains: &[usize]) -> ConstraintExpr {
    let param = rng.gen_range(0..domains.len());
    let value = rng.gen_range(0..domains[param]);
    if rng.gen_bool(0.5) {
        ConstraintExpr::Eq { param, value }
    } else {
        ConstraintExpr::Neq { param, value }
    }
}

fn random_constraint(rng: &mut ChaCha8Rng, domains: &[usize]) -> ConstraintExpr {
    match rng.gen_range(0..4) {
        0 => ConstraintExpr::Or((0..rng.gen_range(2..=3)).map(|_| random_atom(rng, domains)).collect()),
        1 => ConstraintExpr::implies(random_atom(rng, domains), random_atom(rng, domains)),
        2 => ConstraintExpr::negate(ConstraintExpr::And(vec![random_atom(rng, domains), random_atom(rng, domains)])),
        _ => ConstraintExpr::implies(
            ConstraintExpr::And(vec![random_atom(rng, domains), random_atom(rng, domains)]),
            ConstraintExpr::Or(vec![random_atom(rng, domains), random_atom(rng, domains)]),
        ),
    }
}

/// A satisfiable model with 3..=6 parameters, domains 2..=4 and at most 5 constraints.
pub fn random_model(rng: &mut ChaCha8Rng) -> SutModel {
    loop {
        let n = rng.gen_range(3..=6);
        let domains: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=4)).collect();
        let params = domains
            .iter()
            .enumerate()
            .map(|(i, &g)| Parameter::enumeration(format!("P{i}"), (0..g).map(|v| format!("v{v}"))))
            .collect();
        let k = rng.gen_range(0..=5);
        let constraints = (0..k).map(|_| random_constraint(rng, &domains)).collect();
        let model = SutModel::new("random", params, vec![], constraints).unwrap();
        if ctforge::model::compile(&model).is_ok() {
            return model;
        }
    }
}

/// Like [`random_model`] but with up to two auxiliaries mixed into the constraints.
pub fn random_model_with_aux(rng: &mut ChaCha8Rng) -> SutModel {
    loop {
        let mut m = random_model(rng);
        let m_aux = rng.gen_range(1..=2);
        m.aux_vars = (0..m_aux).map(|j| format!("x{j}")).collect();
        let mut extra = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let aux = rng.gen_range(0..m_aux);
            let atom = random_atom(rng, &m.domain_sizes());
            let lit = ConstraintExpr::Aux { aux, positive: rng.gen_bool(0.5) };
            let mut parts = vec![atom, lit];
            parts.shuffle(rng);
            extra.push(ConstraintExpr::Or(parts));
        }
        m.constraints.extend(extra);
        if m.validate().is_ok() && ctforge::model::compile(&m).is_ok() {
            return m;
        }
    }
}

pub const SAT_RATIOS: [f64; 4] = [2.0, 3.0, 4.2, 6.0];

fn random_assumptions(rng: &mut ChaCha8Rng, n_vars: usize) -> Vec<Lit> {
    let k = rng.gen_range(0..=3.min(n_vars));
    rand::seq::index::sample(rng, n_vars, k)
        .into_iter()
        .map(|v| Lit::new(v as u32 + 1, rng.gen_bool(0.5)))
        .collect()
}

/// Checks one solver outcome against brute force; returns a description of each mismatch.
fn check_outcome(f: &CnfFormula, assumps: &[Lit], out: &ctforge::sat::SolveOutcome, tag: &str) -> Vec<String> {
    use ctforge::sat::SolveStatus;
    let mut bad = Vec::new();
    let truth = brute_force(f, assumps);
    match out.status {
        SolveStatus::Sat => {
            let model = out.model.as_ref().unwrap().to_bools();
            if truth.is_none() {
                bad.push(format!("{tag}: Sat but brute force finds no model"));
            }
            if !f.is_satisfied_by(&model) || !assumps.iter().all(|l| model[l.var() as usize - 1] == l.is_positive()) {
                bad.push(format!("{tag}: model violates the formula or the assumptions"));
            }
        }
        SolveStatus::Unsat => {
            if truth.is_some() {
                bad.push(format!("{tag}: Unsat but brute force finds a model"));
            }
            let core = out.core.as_ref().unwrap();
            if !core.iter().all(|l| assumps.contains(l)) {
                bad.push(format!("{tag}: core is not a subset of the assumptions"));
            }
            if brute_force(f, core).is_some() {
                bad.push(format!("{tag}: core does not re-verify Unsat"));
            }
        }
        SolveStatus::BudgetExhausted => bad.push(format!("{tag}: budget exhausted without a budget")),
    }
    bad
}

/// Random 3-CNFs over 3..=18 variables cycling through [`SAT_RATIOS`], each checked for
/// status, model and core validity (plain and under assumptions), propagation against
/// [`naive_up`], determinism, and incremental agreement with fresh solvers.
pub fn sat_oracle_sweep(instances: usize, seed: u64) -> Vec<String> {
    use ctforge::sat::{Propagation, Solver, SolverConfig};
    let mut bad = Vec::new();
    let mut r = rng(seed);
    for i in 0..instances {
        let ratio = SAT_RATIOS[i % SAT_RATIOS.len()];
        let n = r.gen_range(3..=18);
        let f = random_3cnf(n, ratio, &mut r);
        let cfg = SolverConfig::randomized(r.gen());
        let tag = format!("instance {i} (n={n}, ratio={ratio})");

        let mut s = Solver::from_formula(&f, cfg.clone());
        let plain = s.solve(&[]);
        bad.extend(check_outcome(&f, &[], &plain, &tag));

        let again = Solver::from_formula(&f, cfg.clone()).solve(&[]);
        if again != plain {
            bad.push(format!("{tag}: not deterministic"));
        }

        for round in 0..4 {
            let a = random_assumptions(&mut r, n);
            let tag = format!("{tag} round {round} assumptions {a:?}");
            let inc = s.solve(&a);
            bad.extend(check_outcome(&f, &a, &inc, &tag));
            let fresh = Solver::from_formula(&f, cfg.clone()).solve(&a);
            if fresh.status != inc.status {
                bad.push(format!("{tag}: incremental and fresh answers differ"));
            }

            let expected = naive_up(&f, &a);
            let got = Solver::from_formula(&f, SolverConfig::default()).propagate(&a);
            match (&expected, &got) {
                (None, Propagation::Conflict) => {}
                (Some(e), Propagation::Fixpoint(g)) if e == g => {
                    let mut p = Solver::from_formula(&f, SolverConfig::default());
                    if p.propagate(g) != got {
                        bad.push(format!("{tag}: propagate is not idempotent"));
                    }
                }
                _ => bad.push(format!("{tag}: propagate {got:?} but naive UP gives {expected:?}")),
            }
        }
    }
    bad
}

const VALUE_NAMES: [&str; 10] = ["0", "1", "a", "b.c", "x_y", "on-off", "$v", "K9", "42", "zz"];

fn expr(r: &mut ChaCha8Rng, domains: &[usize], n_aux: usize, depth: u32) -> ConstraintExpr {
    let leaf = depth == 0 || r.gen_bool(0.3);
    if leaf {
        if n_aux > 0 && r.gen_bool(0.25) {
            return ConstraintExpr::Aux { aux: r.gen_range(0..n_aux), positive: r.gen_bool(0.5) };
        }
        let param = r.gen_range(0..domains.len());
        let value = r.gen_range(0..domains[param]);
        return if r.gen_bool(0.5) {
            ConstraintExpr::Eq { param, value }
        } else {
            ConstraintExpr::Neq { param, value }
        };
    }
    let kids = |r: &mut ChaCha8Rng| (0..r.gen_range(2..=3)).map(|_| expr(r, domains, n_aux, depth - 1)).collect();
    match r.gen_range(0..4) {
        0 => ConstraintExpr::negate(expr(r, domains, n_aux, depth - 1)),
        1 => ConstraintExpr::And(kids(r)),
        2 => ConstraintExpr::Or(kids(r)),
        _ => ConstraintExpr::implies(expr(r, domains, n_aux, depth - 1), expr(r, domains, n_aux, depth - 1)),
    }
}

/// Structurally valid (not necessarily satisfiable) model with assorted names and kinds.
pub fn arbitrary_model(seed: u64, with_aux: bool) -> SutModel {
    let mut r = rng(seed);
    let n = r.gen_range(1..=5);
    let mut params = Vec::new();
    for i in 0..n {
        let p = match r.gen_range(0..3) {
            0 => Parameter::new(format!("b{i}"), ParamKind::Bool, vec!["true".into(), "false".into()]),
            1 => {
                let g = r.gen_range(1..=4);
                let vals: Vec<String> = (0..g).map(|v| (v as i64 * 3 - 2).to_string()).collect();
                Parameter::new(format!("n_{i}"), ParamKind::Int, vals)
            }
            _ => {
                let g = r.gen_range(1..=4);
                let vals: Vec<&str> = VALUE_NAMES.choose_multiple(&mut r, g).copied().collect();
                Parameter::enumeration(format!("P.{i}"), vals)
            }
        };
        params.push(p);
    }
    let domains: Vec<usize> = params.iter().map(Parameter::domain_size).collect();
    let n_aux = if with_aux { r.gen_range(0..=2) } else { 0 };
    let constraints = (0..r.gen_range(0..=4)).map(|_| expr(&mut r, &domains, n_aux, 3)).collect();
    let aux = (0..n_aux).map(|j| format!("aux{j}")).collect();
    SutModel::new(format!("M{seed}"), params, aux, constraints).unwrap()
}

/// Full parameter assignments accepted for some auxiliary assignment.
pub fn accepted(m: &SutModel) -> BTreeSet<Vec<usize>> {
    let k = m.aux_vars.len();
    m.domain_sizes()
        .iter()
        .map(|&g| 0..g)
        .multi_cartesian_product()
        .filter(|vals| {
            (0u32..1 << k).any(|mask| {
                let aux: Vec<bool> = (0..k).map(|j| mask >> j & 1 == 1).collect();
                m.accepts(vals, &aux)
            })
        })
        .collect()
}

