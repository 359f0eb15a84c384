//! One-test-at-a-time construction (BOT-its) and its pool-limited variant (PBOT-its).
//!
//! Each test is seeded with the first uncovered tuple of the pool that a full
//! SAT check proves allowed. The remaining parameters are fixed greedily in a
//! seeded random order; each fix is validated only by a conflict-limited query,
//! and an exhausted budget counts as consistent. The completed test is then
//! amended: while a full check fails, the most recent non-seed fix is undone.
//!
//! The pool stores one status byte per tuple. PBOT-its materializes the tuple
//! enumeration in slices that fit the byte budget and exhausts each slice
//! before loading the next.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    compile, tuple_count, BuildStats, CnfEncoding, SuiteMeta, SutModel, TestCase, TestSuite,
    TupleEnumerator, ValueTuple,
};
use crate::sat::{SolveStatus, Solver, SolverConfig};

/// Resident bytes per pooled tuple.
pub const TUPLE_RECORD_BYTES: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BotConfig {
    /// Conflict budget of the per-fix consistency checks; `None` makes them exact.
    pub cb: Option<u64>,
    pub seed: u64,
    /// Pool size limit in bytes (PBOT-its); `None` keeps the whole pool resident.
    pub pool_budget: Option<u64>,
}

impl Default for BotConfig {
    fn default() -> Self {
        BotConfig {
            cb: Some(100),
            seed: 0,
            pool_budget: None,
        }
    }
}

impl BotConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cb == Some(0) {
            return Err(Error::InvalidConfig("cb must be at least 1".into()));
        }
        if matches!(self.pool_budget, Some(b) if b < TUPLE_RECORD_BYTES) {
            return Err(Error::InvalidConfig(format!(
                "pool budget must hold at least one tuple ({TUPLE_RECORD_BYTES} byte)"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
enum Slot {
    Uncovered = 0,
    Covered = 1,
    Forbidden = 2,
}

/// A contiguous range of the tuple enumeration with one status byte per tuple.
#[derive(Clone, Debug)]
pub struct TuplePool {
    start: TupleEnumerator,
    status: Vec<Slot>,
    live: usize,
}

impl TuplePool {
    /// Every t-tuple of the model.
    pub fn all(model: &SutModel, t: usize) -> Result<TuplePool> {
        model.check_strength(t)?;
        let total = tuple_count(&model.domain_sizes(), t);
        let len = usize::try_from(total).map_err(|_| Error::CapExceeded {
            required: total,
            cap: usize::MAX as u128,
        })?;
        Ok(TuplePool::load(TupleEnumerator::new(model.domain_sizes(), t), len, &[]))
    }

    /// The next `len` tuples of `at`, skipping those already covered by `suite`.
    fn load(at: TupleEnumerator, len: usize, suite: &[TestCase]) -> TuplePool {
        let status: Vec<Slot> = at
            .clone()
            .take(len)
            .map(|tau| {
                if suite.iter().any(|u| u.covers(&tau)) {
                    Slot::Covered
                } else {
                    Slot::Uncovered
                }
            })
            .collect();
        let live = status.iter().filter(|&&s| s == Slot::Uncovered).count();
        TuplePool {
            start: at,
            status,
            live,
        }
    }

    pub fn len(&self) -> usize {
        self.status.len()
    }

    pub fn is_empty(&self) -> bool {
        self.status.is_empty()
    }

    /// Tuples neither covered nor proven forbidden.
    pub fn live(&self) -> usize {
        self.live
    }

    pub fn resident_bytes(&self) -> u64 {
        self.status.len() as u64 * TUPLE_RECORD_BYTES
    }

    fn iter(&self) -> impl Iterator<Item = (usize, ValueTuple)> + '_ {
        self.start.clone().take(self.status.len()).enumerate()
    }

    fn live_tuples(&self) -> impl Iterator<Item = (usize, ValueTuple)> + '_ {
        self.iter().filter(|(i, _)| self.status[*i] == Slot::Uncovered)
    }

    fn set(&mut self, i: usize, slot: Slot) {
        if self.status[i] == Slot::Uncovered && slot != Slot::Uncovered {
            self.live -= 1;
        }
        self.status[i] = slot;
    }

    /// Marks the tuples covered by `test`; returns how many were live.
    pub fn remove_covered(&mut self, test: &TestCase) -> usize {
        let hits: Vec<usize> = self
            .live_tuples()
            .filter(|(_, tau)| test.covers(tau))
            .map(|(i, _)| i)
            .collect();
        for &i in &hits {
            self.set(i, Slot::Covered);
        }
        hits.len()
    }
}

/// Builder state shared by the tests of one run.
pub struct BotEngine {
    enc: CnfEncoding,
    solver: Solver,
    cfg: BotConfig,
    rng: ChaCha8Rng,
    n_params: usize,
    domains: Vec<usize>,
    pub stats: BuildStats,
}

impl BotEngine {
    pub fn new(model: &SutModel, cfg: BotConfig) -> Result<BotEngine> {
        cfg.validate()?;
        let enc = compile(model)?;
        let solver = enc.solver(SolverConfig::default());
        Ok(BotEngine {
            enc,
            solver,
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            n_params: model.n_params(),
            domains: model.domain_sizes(),
            stats: BuildStats::default(),
        })
    }

    fn full_check(&mut self, test: &TestCase) -> Result<Option<Vec<usize>>> {
        self.stats.sat_queries += 1;
        self.solver.set_conflict_budget(None);
        let out = self.solver.solve(&self.enc.test_lits(test));
        match out.status {
            SolveStatus::Sat => Ok(Some(self.enc.decode(out.model.as_ref().unwrap()))),
            SolveStatus::Unsat => Ok(None),
            SolveStatus::BudgetExhausted => Err(Error::Engine("unbudgeted query stopped".into())),
        }
    }

    fn limited_check(&mut self, test: &TestCase) -> bool {
        self.stats.limited_queries += 1;
        self.solver.set_conflict_budget(self.cfg.cb);
        let status = self.solver.solve(&self.enc.test_lits(test)).status;
        self.solver.set_conflict_budget(None);
        status != SolveStatus::Unsat
    }

    /// Builds one test covering at least one live tuple, or `None` when the pool has none left.
    pub fn build_one_test(&mut self, pool: &mut TuplePool) -> Result<Option<TestCase>> {
        let seed_tuple = loop {
            let Some((i, tau)) = pool.live_tuples().next() else {
                return Ok(None);
            };
            let mut probe = TestCase::empty(self.n_params);
            for &(p, v) in tau.pairs() {
                probe.cells[p] = Some(v);
            }
            if self.full_check(&probe)?.is_some() {
                break tau;
            }
            pool.set(i, Slot::Forbidden);
            self.stats.forbidden_tuples += 1;
        };

        let mut test = TestCase::empty(self.n_params);
        for &(p, v) in seed_tuple.pairs() {
            test.cells[p] = Some(v);
        }
        let mut visit: Vec<usize> = (0..self.n_params).filter(|&p| test.cells[p].is_none()).collect();
        visit.shuffle(&mut self.rng);

        let mut fixes: Vec<usize> = Vec::new();
        for q in visit {
            let counts = self.coverage_gain(&test, q, pool);
            let mut ranked: Vec<usize> = (0..self.domains[q]).collect();
            ranked.sort_by_key(|&v| std::cmp::Reverse(counts[v]));
            for v in ranked {
                if counts[v] == 0 {
                    break;
                }
                test.cells[q] = Some(v);
                if self.limited_check(&test) {
                    fixes.push(q);
                    break;
                }
                test.cells[q] = None;
            }
        }

        let values = loop {
            if let Some(values) = self.full_check(&test)? {
                break values;
            }
            let q = fixes
                .pop()
                .ok_or_else(|| Error::Engine("seed tuple became inconsistent".into()))?;
            test.cells[q] = None;
            self.stats.amend_removals += 1;
        };
        for (cell, v) in test.cells.iter_mut().zip(values) {
            cell.get_or_insert(v);
        }
        pool.remove_covered(&test);
        Ok(Some(test))
    }

    /// Live tuples containing `(q, v)` whose other pairs are all fixed in `test`, per value `v`.
    fn coverage_gain(&self, test: &TestCase, q: usize, pool: &TuplePool) -> Vec<usize> {
        let mut counts = vec![0usize; self.domains[q]];
        for (_, tau) in pool.live_tuples() {
            let mut value = None;
            let rest = tau.pairs().iter().all(|&(p, v)| {
                if p == q {
                    value = Some(v);
                    true
                } else {
                    test.cells[p] == Some(v)
                }
            });
            if let (true, Some(v)) = (rest, value) {
                counts[v] += 1;
            }
        }
        counts
    }
}

pub fn build_bot(model: &SutModel, t: usize, cfg: BotConfig) -> Result<TestSuite> {
    run(model, t, BotConfig { pool_budget: None, ..cfg }, &mut |_| {}, "bot")
}

/// PBOT-its; without a budget it behaves as [`build_bot`].
pub fn build_pbot(model: &SutModel, t: usize, cfg: BotConfig) -> Result<TestSuite> {
    run(model, t, cfg, &mut |_| {}, "pbot")
}

/// Runs BOT-its (or PBOT-its when `cfg.pool_budget` is set), handing each test
/// to `emit` as soon as it is final.
pub fn build_bot_with(
    model: &SutModel,
    t: usize,
    cfg: BotConfig,
    emit: &mut dyn FnMut(&TestCase),
) -> Result<TestSuite> {
    let label = if cfg.pool_budget.is_some() { "pbot" } else { "bot" };
    run(model, t, cfg, emit, label)
}

fn run(
    model: &SutModel,
    t: usize,
    cfg: BotConfig,
    emit: &mut dyn FnMut(&TestCase),
    label: &str,
) -> Result<TestSuite> {
    let start = Instant::now();
    model.check_strength(t)?;
    let mut engine = BotEngine::new(model, cfg)?;
    let domains = model.domain_sizes();
    let total = tuple_count(&domains, t);
    let per_slice: u128 = match cfg.pool_budget {
        Some(bytes) => (bytes / TUPLE_RECORD_BYTES) as u128,
        None => total.max(1),
    };
    let per_slice = usize::try_from(per_slice.min(total.max(1))).map_err(|_| Error::CapExceeded {
        required: total,
        cap: usize::MAX as u128,
    })?;

    let mut suite: Vec<TestCase> = Vec::new();
    let mut cursor = TupleEnumerator::new(domains, t);
    let mut loaded: u128 = 0;
    while loaded < total {
        let len = per_slice.min((total - loaded) as usize);
        let mut pool = TuplePool::load(cursor.clone(), len, &suite);
        engine.stats.slices += 1;
        engine.stats.peak_pool_bytes = engine.stats.peak_pool_bytes.max(pool.resident_bytes());
        while let Some(test) = engine.build_one_test(&mut pool)? {
            emit(&test);
            suite.push(test);
        }
        for _ in 0..len {
            cursor.next();
        }
        loaded += len as u128;
    }

    Ok(TestSuite {
        tests: suite,
        meta: SuiteMeta {
            strength: t,
            algorithm: label.into(),
            seed: Some(cfg.seed),
            model_fingerprint: model.fingerprint(),
            wall_time: start.elapsed(),
            stats: engine.stats,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::example1;
    use crate::model::{enumerate_tuples, ConstraintExpr, Parameter};

    fn two_valued(names: &[&str], aux: &[&str], constraints: Vec<ConstraintExpr>) -> SutModel {
        let params = names
            .iter()
            .map(|n| Parameter::enumeration(*n, ["v0", "v1"]))
            .collect();
        SutModel::new("f", params, aux.iter().map(|a| a.to_string()).collect(), constraints).unwrap()
    }

    /// X=v0, Y=v0, Z=v0 together force an unsatisfiable core over two auxiliaries
    /// that unit propagation alone does not refute.
    fn hidden_ternary() -> SutModel {
        use ConstraintExpr::*;
        let a = |positive| Aux { aux: 0, positive };
        let b = |positive| Aux { aux: 1, positive };
        let core = And(vec![
            Or(vec![a(true), b(true)]),
            Or(vec![a(true), b(false)]),
            Or(vec![a(false), b(true)]),
            Or(vec![a(false), b(false)]),
        ]);
        let c = ConstraintExpr::implies(
            And(vec![
                Eq { param: 0, value: 0 },
                Eq { param: 1, value: 0 },
                Eq { param: 2, value: 0 },
            ]),
            core,
        );
        two_valued(&["X", "Y", "Z"], &["a", "b"], vec![c])
    }

    #[test]
    fn unconstrained_needs_no_amendment() {
        let m = two_valued(&["A", "B", "C"], &[], vec![]);
        let s = build_bot(&m, 2, BotConfig::default()).unwrap();
        assert_eq!(s.meta.stats.amend_removals, 0);
        assert!((4..=8).contains(&s.len()));
    }

    #[test]
    fn single_assignment_model() {
        let params = vec![Parameter::enumeration("A", ["x"]), Parameter::enumeration("B", ["y"])];
        let m = SutModel::new("one", params, vec![], vec![]).unwrap();
        assert_eq!(build_bot(&m, 2, BotConfig::default()).unwrap().len(), 1);
    }

    #[test]
    fn forbidden_seed_is_never_selected() {
        let m = example1();
        let s = build_bot(&m, 2, BotConfig::default()).unwrap();
        let forbidden = ValueTuple::new(vec![(0, 3), (2, 0)]);
        assert!(!s.tests.iter().any(|u| u.covers(&forbidden)));
        assert!(s.len() >= 21);
        assert!(s.tests.iter().all(|u| m.accepts(&u.values().unwrap(), &[])));
    }

    #[test]
    fn amendment_removes_exactly_the_last_fix() {
        let m = hidden_ternary();
        let mut engine = BotEngine::new(&m, BotConfig { cb: Some(1), seed: 0, pool_budget: None }).unwrap();
        let mut pool = TuplePool::all(&m, 2).unwrap();
        let test = engine.build_one_test(&mut pool).unwrap().unwrap();
        assert_eq!(engine.stats.amend_removals, 1);
        assert_eq!(test.cells, vec![Some(0), Some(0), Some(1)]);

        let mut exact = BotEngine::new(&m, BotConfig { cb: None, seed: 0, pool_budget: None }).unwrap();
        let mut pool = TuplePool::all(&m, 2).unwrap();
        let test = exact.build_one_test(&mut pool).unwrap().unwrap();
        assert_eq!(exact.stats.amend_removals, 0);
        assert_eq!(test.cells, vec![Some(0), Some(0), Some(1)]);
    }

    #[test]
    fn tests_stream_in_order() {
        let m = example1();
        let mut seen = Vec::new();
        let s = build_bot_with(&m, 2, BotConfig::default(), &mut |u| seen.push(u.clone())).unwrap();
        assert_eq!(seen, s.tests);
    }

    #[test]
    fn unbounded_pbot_equals_bot() {
        let m = example1();
        let cfg = BotConfig { seed: 4, ..BotConfig::default() };
        let bot = build_bot(&m, 2, cfg).unwrap();
        let big = build_pbot(&m, 2, BotConfig { pool_budget: Some(1 << 20), ..cfg }).unwrap();
        assert_eq!(bot.tests, big.tests);
        assert_eq!(big.meta.stats.slices, 1);
    }

    #[test]
    fn sliced_pool_respects_budget_and_stays_valid() {
        let m = example1();
        let s = build_pbot(&m, 2, BotConfig { pool_budget: Some(30), ..BotConfig::default() }).unwrap();
        assert!(s.meta.stats.slices >= 2);
        assert!(s.meta.stats.peak_pool_bytes <= 30);
        let mut chk = compile(&m).unwrap().solver(SolverConfig::default());
        let enc = compile(&m).unwrap();
        for tau in enumerate_tuples(&m, 2).unwrap() {
            let allowed = chk.solve(&enc.tuple_lits(&tau)).is_sat();
            assert_eq!(allowed, s.tests.iter().any(|u| u.covers(&tau)), "{tau:?}");
        }
    }

    #[test]
    fn config_validation() {
        let m = example1();
        assert!(build_bot(&m, 2, BotConfig { cb: Some(0), ..BotConfig::default() }).is_err());
        assert!(build_pbot(&m, 2, BotConfig { pool_budget: Some(0), ..BotConfig::default() }).is_err());
    }
}
