//! Independent MCAC validation and brute-force ground truth.
//!
//! Nothing here goes through the builders: tuples are enumerated locally, test
//! validity is decided on the constraint AST, and SAT is used only through a
//! fresh engine (allowed-ness of uncovered tuples, and the existential check on
//! auxiliaries).

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::model::{compile, SutModel, TestSuite, ValueTuple};
use crate::sat::{SolveStatus, SolverConfig};

/// Largest number of full assignments the oracle will enumerate by default.
pub const DEFAULT_ORACLE_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub strength: usize,
    pub tests: usize,
    /// Indices of tests that violate the constraints.
    pub violations: Vec<usize>,
    pub uncovered: Vec<ValueTuple>,
    pub total: u128,
    pub allowed: u128,
    pub forbidden: u128,
    pub covered: u128,
}

impl VerifyReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty() && self.uncovered.is_empty()
    }

    /// One line per failure: `violation,<test>` (1-based) or `uncovered,<P=v;Q=w>`.
    pub fn failures_csv(&self, model: &SutModel) -> String {
        let mut out = String::from("kind,item\n");
        for &i in &self.violations {
            let _ = writeln!(out, "violation,{}", i + 1);
        }
        for tau in &self.uncovered {
            let _ = writeln!(out, "uncovered,{}", describe(model, tau));
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid={}", self.valid())?;
        writeln!(f, "t={}", self.strength)?;
        writeln!(f, "tests={}", self.tests)?;
        writeln!(f, "violations={}", self.violations.len())?;
        writeln!(f, "uncovered={}", self.uncovered.len())?;
        writeln!(f, "total={}", self.total)?;
        writeln!(f, "allowed={}", self.allowed)?;
        writeln!(f, "forbidden={}", self.forbidden)?;
        write!(f, "covered={}", self.covered)
    }
}

/// `P=v;Q=w` with parameter and value names.
pub fn describe(model: &SutModel, tau: &ValueTuple) -> String {
    tau.pairs()
        .iter()
        .map(|&(p, v)| format!("{}={}", model.parameters[p].name, model.parameters[p].values[v]))
        .join(";")
}

fn all_t_tuples(domains: &[usize], t: usize) -> impl Iterator<Item = ValueTuple> + '_ {
    (0..domains.len()).combinations(t).flat_map(move |params| {
        params
            .iter()
            .map(|&p| 0..domains[p])
            .multi_cartesian_product()
            .map(move |vals| ValueTuple::new(params.iter().copied().zip(vals).collect()))
    })
}

pub fn verify_mcac(model: &SutModel, t: usize, suite: &TestSuite) -> Result<VerifyReport> {
    model.check_strength(t)?;
    let n = model.n_params();
    let mut rows = Vec::with_capacity(suite.len());
    for (i, test) in suite.tests.iter().enumerate() {
        if test.cells.len() != n {
            return Err(Error::SuiteMismatch(format!(
                "test {} has {} cells for {n} parameters",
                i + 1,
                test.cells.len()
            )));
        }
        let mut row = Vec::with_capacity(n);
        for (p, cell) in test.cells.iter().enumerate() {
            let v = cell.ok_or(Error::EmptyCell { test: i, param: p })?;
            if v >= model.parameters[p].domain_size() {
                return Err(Error::SuiteMismatch(format!(
                    "test {} uses value index {v} outside the domain of {}",
                    i + 1,
                    model.parameters[p].name
                )));
            }
            row.push(v);
        }
        rows.push(row);
    }

    let enc = compile(model)?;
    let mut solver = enc.solver(SolverConfig::default());
    let uses_aux = model.constraints.iter().any(|c| c.mentions_aux());

    let mut violations = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let ok = if uses_aux {
            let lits: Vec<_> = row.iter().enumerate().map(|(p, &v)| enc.value_lit(p, v)).collect();
            match solver.solve(&lits).status {
                SolveStatus::Sat => true,
                SolveStatus::Unsat => false,
                SolveStatus::BudgetExhausted => return Err(Error::Engine("unbudgeted query stopped".into())),
            }
        } else {
            model.accepts(row, &[])
        };
        if !ok {
            violations.push(i);
        }
    }

    let mut report = VerifyReport {
        strength: t,
        tests: rows.len(),
        violations,
        ..VerifyReport::default()
    };
    let domains = model.domain_sizes();
    for tau in all_t_tuples(&domains, t) {
        report.total += 1;
        let covered = rows
            .iter()
            .any(|row| tau.pairs().iter().all(|&(p, v)| row[p] == v));
        let allowed = match solver.solve(&enc.tuple_lits(&tau)).status {
            SolveStatus::Sat => true,
            SolveStatus::Unsat => false,
            SolveStatus::BudgetExhausted => return Err(Error::Engine("unbudgeted query stopped".into())),
        };
        if covered {
            report.covered += 1;
        }
        if allowed {
            report.allowed += 1;
            if !covered {
                report.uncovered.push(tau);
            }
        } else {
            report.forbidden += 1;
        }
    }
    Ok(report)
}

/// Exact allowed t-tuples by exhaustive enumeration of parameters and auxiliaries.
pub fn oracle_allowed_tuples(model: &SutModel, t: usize) -> Result<BTreeSet<ValueTuple>> {
    oracle_allowed_tuples_capped(model, t, DEFAULT_ORACLE_CAP)
}

pub fn oracle_allowed_tuples_capped(model: &SutModel, t: usize, cap: u128) -> Result<BTreeSet<ValueTuple>> {
    model.check_strength(t)?;
    let domains = model.domain_sizes();
    let m = model.aux_vars.len();
    let required = domains
        .iter()
        .try_fold(1u128, |acc, &g| acc.checked_mul(g as u128))
        .and_then(|x| x.checked_mul(1u128.checked_shl(m as u32)?))
        .unwrap_or(u128::MAX);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }

    let accepted: Vec<Vec<usize>> = domains
        .iter()
        .map(|&g| 0..g)
        .multi_cartesian_product()
        .filter(|vals| {
            (0u64..1 << m).any(|mask| {
                let aux: Vec<bool> = (0..m).map(|j| mask >> j & 1 == 1).collect();
                model.accepts(vals, &aux)
            })
        })
        .collect();

    let mut allowed = BTreeSet::new();
    for params in (0..domains.len()).combinations(t) {
        for vals in &accepted {
            allowed.insert(ValueTuple::new(params.iter().map(|&p| (p, vals[p])).collect()));
        }
    }
    Ok(allowed)
}
