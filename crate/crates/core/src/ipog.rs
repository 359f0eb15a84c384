//! In-Parameter-Order-General construction with SAT-checked constraints.
//!
//! Parameters are processed by descending domain size. The suite starts as one
//! test per allowed tuple of the first `t` parameters; every later parameter is
//! absorbed by horizontal extension, fill-the-empties and vertical growth.
//! Every partial test written into the suite is consistent with the constraints.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{compile, BuildStats, CnfEncoding, SuiteMeta, SutModel, TestCase, TestSuite, ValueTuple};
use crate::sat::{Lit, SolveStatus, Solver, SolverConfig};

/// Memoized SAT consistency of partial tests.
struct Checker {
    enc: CnfEncoding,
    solver: Solver,
    memo: HashMap<Vec<Lit>, bool>,
    stats: BuildStats,
}

impl Checker {
    fn new(enc: CnfEncoding) -> Checker {
        let solver = enc.solver(SolverConfig::default());
        Checker {
            enc,
            solver,
            memo: HashMap::new(),
            stats: BuildStats::default(),
        }
    }

    fn consistent(&mut self, test: &TestCase) -> Result<bool> {
        let mut lits = self.enc.test_lits(test);
        lits.sort_unstable();
        if let Some(&known) = self.memo.get(&lits) {
            return Ok(known);
        }
        self.stats.sat_queries += 1;
        let answer = match self.solver.solve(&lits).status {
            SolveStatus::Sat => true,
            SolveStatus::Unsat => false,
            SolveStatus::BudgetExhausted => return Err(Error::Engine("unbudgeted query stopped".into())),
        };
        self.memo.insert(lits, answer);
        Ok(answer)
    }

    fn complete(&mut self, test: &mut TestCase) -> Result<()> {
        let lits = self.enc.test_lits(test);
        self.stats.sat_queries += 1;
        let out = self.solver.solve(&lits);
        let model = out
            .model
            .ok_or_else(|| Error::Engine("a suite test lost consistency".into()))?;
        let values = self.enc.decode(&model);
        for (cell, v) in test.cells.iter_mut().zip(values) {
            cell.get_or_insert(v);
        }
        Ok(())
    }
}

/// The value of `p` whose addition to `test` covers the most tuples of `pool`,
/// among the consistent ones. `None` (EMPTY) when no consistent value covers anything.
///
/// `value_order` lists the candidate values; equal counts keep that order.
pub fn choose_best_value(
    test: &TestCase,
    p: usize,
    pool: &[ValueTuple],
    value_order: &[usize],
    mut consistent: impl FnMut(&TestCase) -> Result<bool>,
) -> Result<Option<usize>> {
    let domain = value_order.iter().copied().max().map_or(0, |m| m + 1);
    let mut counts = vec![0usize; domain];
    for tau in pool {
        let mut value = None;
        let rest_covered = tau.pairs().iter().all(|&(q, v)| {
            if q == p {
                value = Some(v);
                true
            } else {
                test.cells[q] == Some(v)
            }
        });
        if let (true, Some(v)) = (rest_covered, value) {
            if v < domain {
                counts[v] += 1;
            }
        }
    }
    let mut ranked: Vec<usize> = value_order.to_vec();
    ranked.sort_by_key(|&v| std::cmp::Reverse(counts[v]));
    for v in ranked {
        if counts[v] == 0 {
            break;
        }
        let mut candidate = test.clone();
        candidate.cells[p] = Some(v);
        if consistent(&candidate)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Stable order of parameter indices by descending domain size.
pub fn parameter_order(model: &SutModel) -> Vec<usize> {
    let mut order: Vec<usize> = (0..model.n_params()).collect();
    order.sort_by_key(|&p| std::cmp::Reverse(model.parameters[p].domain_size()));
    order
}

/// Builds an MCAC of strength `t`. `seed = None` breaks ties by lowest value
/// index; a seed shuffles the candidate order per test instead.
pub fn build_ipog(model: &SutModel, t: usize, seed: Option<u64>) -> Result<TestSuite> {
    let start = Instant::now();
    model.check_strength(t)?;
    let enc = compile(model)?;
    let mut chk = Checker::new(enc);
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let order = parameter_order(model);
    let n = model.n_params();
    let domains = model.domain_sizes();

    let mut suite: Vec<TestCase> = Vec::new();
    for values in order[..t].iter().map(|&p| 0..domains[p]).multi_cartesian_product() {
        let mut test = TestCase::empty(n);
        for (&p, v) in order[..t].iter().zip(values) {
            test.cells[p] = Some(v);
        }
        if chk.consistent(&test)? {
            suite.push(test);
        } else {
            chk.stats.forbidden_tuples += 1;
        }
    }

    for k in t..n {
        let p = order[k];
        let processed = &order[..k];
        let mut pool = initial_pool(&suite, processed, p, domains[p], t);

        for test in suite.iter_mut() {
            if pool.is_empty() {
                break;
            }
            let mut value_order: Vec<usize> = (0..domains[p]).collect();
            if let Some(rng) = rng.as_mut() {
                value_order.shuffle(rng);
            }
            let chosen = choose_best_value(test, p, &pool, &value_order, |c| chk.consistent(c))?;
            if let Some(v) = chosen {
                test.cells[p] = Some(v);
                pool.retain(|tau| !test.covers(tau));
            }
        }

        for tau in pool {
            if suite.iter().any(|u| u.covers(&tau)) {
                continue;
            }
            let mut alone = TestCase::empty(n);
            for &(q, v) in tau.pairs() {
                alone.cells[q] = Some(v);
            }
            if !chk.consistent(&alone)? {
                chk.stats.forbidden_tuples += 1;
                continue;
            }
            let mut placed = false;
            for u in suite.iter_mut() {
                let fits = tau
                    .pairs()
                    .iter()
                    .all(|&(q, v)| u.cells[q].is_none() || u.cells[q] == Some(v));
                if !fits {
                    continue;
                }
                let mut merged = u.clone();
                for &(q, v) in tau.pairs() {
                    merged.cells[q] = Some(v);
                }
                if chk.consistent(&merged)? {
                    *u = merged;
                    placed = true;
                    break;
                }
            }
            if !placed {
                suite.push(alone);
            }
        }
    }

    for test in suite.iter_mut() {
        if !test.is_final() {
            chk.complete(test)?;
        }
    }

    Ok(TestSuite {
        tests: suite,
        meta: SuiteMeta {
            strength: t,
            algorithm: "ipog".into(),
            seed,
            model_fingerprint: model.fingerprint(),
            wall_time: start.elapsed(),
            stats: chk.stats,
        },
    })
}

/// `d(p)` crossed with the distinct `(t-1)`-tuples over `processed` covered by the suite.
fn initial_pool(suite: &[TestCase], processed: &[usize], p: usize, g: usize, t: usize) -> Vec<ValueTuple> {
    let mut sorted = processed.to_vec();
    sorted.sort_unstable();
    let mut seen: HashSet<Vec<(usize, usize)>> = HashSet::new();
    let mut bases: Vec<Vec<(usize, usize)>> = Vec::new();
    for combo in sorted.iter().copied().combinations(t - 1) {
        for test in suite {
            let pairs: Option<Vec<(usize, usize)>> =
                combo.iter().map(|&q| test.cells[q].map(|v| (q, v))).collect();
            if let Some(pairs) = pairs {
                if seen.insert(pairs.clone()) {
                    bases.push(pairs);
                }
            }
        }
    }
    let mut pool = Vec::with_capacity(bases.len() * g);
    for base in bases {
        for v in 0..g {
            let mut pairs = base.clone();
            pairs.push((p, v));
            pool.push(ValueTuple::new(pairs));
        }
    }
    pool
}
