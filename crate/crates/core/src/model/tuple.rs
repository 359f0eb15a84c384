use std::time::Duration;

use crate::error::{Error, Result};
use crate::sat::{SolveStatus, Solver};

use super::{CnfEncoding, SutModel};

/// A partial assignment fixing distinct parameters, ordered by parameter index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueTuple {
    pairs: Vec<(usize, usize)>,
}

impl ValueTuple {
    /// Sorts the pairs by parameter; panics on a repeated parameter.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> ValueTuple {
        pairs.sort_unstable();
        assert!(
            pairs.windows(2).all(|w| w[0].0 != w[1].0),
            "a value tuple cannot repeat a parameter"
        );
        ValueTuple { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// One row of a covering array. `None` marks an empty (not yet chosen) cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TestCase {
    pub cells: Vec<Option<usize>>,
}

impl TestCase {
    pub fn empty(n_params: usize) -> TestCase {
        TestCase {
            cells: vec![None; n_params],
        }
    }

    pub fn full(values: &[usize]) -> TestCase {
        TestCase {
            cells: values.iter().map(|&v| Some(v)).collect(),
        }
    }

    pub fn is_final(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    /// All cell values, when none is empty.
    pub fn values(&self) -> Option<Vec<usize>> {
        self.cells.iter().copied().collect()
    }

    pub fn covers(&self, tuple: &ValueTuple) -> bool {
        covers(self, tuple)
    }
}

/// True iff every pair of `tuple` is assigned the same value by `test`. Empty cells never match.
pub fn covers(test: &TestCase, tuple: &ValueTuple) -> bool {
    tuple
        .pairs()
        .iter()
        .all(|&(p, v)| test.cells.get(p).copied().flatten() == Some(v))
}

/// Counters reported by the builders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub sat_queries: u64,
    pub limited_queries: u64,
    pub amend_removals: u64,
    pub forbidden_tuples: u64,
    pub slices: u64,
    pub peak_pool_bytes: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteMeta {
    pub strength: usize,
    pub algorithm: String,
    pub seed: Option<u64>,
    pub model_fingerprint: String,
    pub wall_time: Duration,
    pub stats: BuildStats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TestSuite {
    pub tests: Vec<TestCase>,
    pub meta: SuiteMeta,
}

impl TestSuite {
    pub fn new(tests: Vec<TestCase>) -> TestSuite {
        TestSuite {
            tests,
            meta: SuiteMeta::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }
}

/// Number of t-tuples: Σ over parameter t-subsets of the product of their domain sizes.
pub fn tuple_count(domains: &[usize], t: usize) -> u128 {
    // elementary symmetric polynomial e_t(g_1, ..., g_n)
    let mut e = vec![0u128; t + 1];
    e[0] = 1;
    for &g in domains {
        for k in (1..=t).rev() {
            e[k] += e[k - 1] * g as u128;
        }
    }
    e[t]
}

/// Lexicographic stream of all t-tuples: parameter subsets in lexicographic
/// order, and for each subset the value combinations with the last parameter
/// varying fastest.
#[derive(Clone, Debug)]
pub struct TupleEnumerator {
    domains: Vec<usize>,
    combo: Vec<usize>,
    values: Vec<usize>,
    done: bool,
}

impl TupleEnumerator {
    pub fn new(domains: Vec<usize>, t: usize) -> TupleEnumerator {
        let done = t == 0 || t > domains.len() || domains.contains(&0);
        TupleEnumerator {
            combo: (0..t).collect(),
            values: vec![0; t],
            domains,
            done,
        }
    }

    fn advance(&mut self) {
        let t = self.combo.len();
        for i in (0..t).rev() {
            if self.values[i] + 1 < self.domains[self.combo[i]] {
                self.values[i] += 1;
                return;
            }
            self.values[i] = 0;
        }
        let n = self.domains.len();
        for i in (0..t).rev() {
            if self.combo[i] < n - t + i {
                self.combo[i] += 1;
                for j in i + 1..t {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for TupleEnumerator {
    type Item = ValueTuple;

    fn next(&mut self) -> Option<ValueTuple> {
        if self.done {
            return None;
        }
        let tuple = ValueTuple {
            pairs: self
                .combo
                .iter()
                .copied()
                .zip(self.values.iter().copied())
                .collect(),
        };
        self.advance();
        Some(tuple)
    }
}

pub fn enumerate_tuples(model: &SutModel, t: usize) -> Result<TupleEnumerator> {
    model.check_strength(t)?;
    Ok(TupleEnumerator::new(model.domain_sizes(), t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TupleStatus {
    Allowed,
    Forbidden,
    /// The solver ran out of budget before deciding.
    Unknown,
}

/// Satisfiability of the tuple's literals under the solver's current limits.
pub fn tuple_status(tuple: &ValueTuple, enc: &CnfEncoding, solver: &mut Solver) -> TupleStatus {
    match solver.solve(&enc.tuple_lits(tuple)).status {
        SolveStatus::Sat => TupleStatus::Allowed,
        SolveStatus::Unsat => TupleStatus::Forbidden,
        SolveStatus::BudgetExhausted => TupleStatus::Unknown,
    }
}

/// True iff the tuple extends to a configuration accepted by the constraints.
///
/// An exhausted solver budget is reported as an error; callers that want to
/// treat it as forbidden use [`tuple_status`].
pub fn is_allowed(tuple: &ValueTuple, enc: &CnfEncoding, solver: &mut Solver) -> Result<bool> {
    match tuple_status(tuple, enc, solver) {
        TupleStatus::Allowed => Ok(true),
        TupleStatus::Forbidden => Ok(false),
        TupleStatus::Unknown => Err(Error::Engine("conflict budget exhausted".into())),
    }
}
