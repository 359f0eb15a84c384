//! SUT-G: Boolean SUT benchmarks carved out of SAT instances.
//!
//! An incremental solver is loaded once with the input formula. Assumption
//! literals are added (drawn from a model) while the instance is too hard and
//! removed while it is too easy or leaves too few free variables. Hardness is
//! the mean per-call conflict count over a list of solver seeds. On success the
//! unit closure of the assumptions is fixed, the formula simplified and
//! renamed, and `n` of its variables become the parameters; the rest become
//! auxiliaries.
//!
//! All sampling is driven by one RNG seeded with `gen_seed`, so a run is a pure
//! function of the formula and the configuration (unless a wall-clock limit is set).

use std::fmt;
use std::fmt::Write as _;
use std::time::Duration;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ConstraintExpr, Parameter, SutModel};
use crate::sat::{Assignment, Clause, CnfFormula, Lit, Propagation, SolveStatus, Solver, SolverConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub delta_a: usize,
    pub nabla_a: usize,
    pub seeds: Vec<u64>,
    pub max_tries: u32,
    /// Per-solve conflict cap; exhausting it counts as UNSAT.
    pub query_budget: Option<u64>,
    pub time_limit: Option<Duration>,
    pub gen_seed: u64,
    pub rnd_freq: f64,
    pub rnd_pol_freq: f64,
}

impl GenConfig {
    pub fn new(n: usize, c_min: f64, c_max: f64) -> GenConfig {
        GenConfig {
            n,
            c_min,
            c_max,
            delta_a: 10,
            nabla_a: 5,
            seeds: vec![1, 2, 3, 4, 5],
            max_tries: 100,
            query_budget: Some(10_000_000),
            time_limit: None,
            gen_seed: 0,
            rnd_freq: 0.5,
            rnd_pol_freq: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if !(self.c_min >= 0.0 && self.c_min < self.c_max) {
            return bad("need 0 <= c_min < c_max");
        }
        if self.delta_a == 0 || self.nabla_a == 0 {
            return bad("assumption steps must be at least 1");
        }
        if self.seeds.is_empty() {
            return bad("at least one solver seed is required");
        }
        if self.max_tries == 0 {
            return bad("max_tries must be at least 1");
        }
        if self.query_budget == Some(0) {
            return bad("query budget must be positive");
        }
        if !(0.0..=1.0).contains(&self.rnd_freq) || !(0.0..=1.0).contains(&self.rnd_pol_freq) {
            return bad("random frequencies must lie in [0, 1]");
        }
        Ok(())
    }

    fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seeds[0],
            rnd_decision_freq: self.rnd_freq,
            rnd_polarity_freq: self.rnd_pol_freq,
            conflict_budget: self.query_budget,
            time_limit: self.time_limit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailReason {
    Unsatisfiable,
    /// The initial solve ran out of budget, which counts as UNSAT.
    BudgetExhausted,
    TooFewFreeVariables,
    TooEasy,
    /// The instance is too easy or too constrained and no assumption is left to drop.
    CannotRelax,
    TriesExhausted,
    /// Simplification left fewer than `n` variables.
    TooFewVariablesAfterSimplify,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailReason::Unsatisfiable => "the formula is unsatisfiable",
            FailReason::BudgetExhausted => "the formula could not be solved within the query budget",
            FailReason::TooFewFreeVariables => "fewer free variables than requested parameters",
            FailReason::TooEasy => "the formula is easier than c_min",
            FailReason::CannotRelax => "no assumption left to remove",
            FailReason::TriesExhausted => "maximum number of tries reached",
            FailReason::TooFewVariablesAfterSimplify => {
                "simplification left fewer variables than requested parameters"
            }
        })
    }
}

/// One hardness measurement.
#[derive(Clone, Debug)]
pub struct Subproblem {
    /// A model sampled among the per-seed models; `None` on UNSAT or budget exhaustion.
    pub model: Option<Assignment>,
    /// Mean conflicts over the seeds that ran.
    pub c: f64,
    pub status: SolveStatus,
    pub per_seed_conflicts: Vec<u64>,
}

/// Solves under `assumptions` once per seed and averages the conflict counts.
pub fn solve_subproblem(
    solver: &mut Solver,
    assumptions: &[Lit],
    seeds: &[u64],
    rng: &mut ChaCha8Rng,
) -> Subproblem {
    let mut models = Vec::with_capacity(seeds.len());
    let mut per_seed = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        solver.set_seed(seed);
        let out = solver.solve(assumptions);
        per_seed.push(out.n_conflicts);
        if out.status != SolveStatus::Sat {
            let c = per_seed.iter().sum::<u64>() as f64 / per_seed.len() as f64;
            return Subproblem {
                model: None,
                c,
                status: out.status,
                per_seed_conflicts: per_seed,
            };
        }
        models.push(out.model.expect("SAT outcome carries a model"));
    }
    let c = per_seed.iter().sum::<u64>() as f64 / seeds.len() as f64;
    Subproblem {
        model: models.choose(rng).cloned(),
        c,
        status: SolveStatus::Sat,
        per_seed_conflicts: per_seed,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FindOutcome {
    Success {
        /// Unit closure of the final assumptions.
        fixed: Vec<Lit>,
        assumptions: Vec<Lit>,
        c: f64,
        tries: u32,
    },
    Fail(FailReason),
}

fn free_vars(solver: &mut Solver, assumptions: &[Lit]) -> usize {
    match solver.propagate(assumptions) {
        Propagation::Fixpoint(lits) => solver.n_vars().saturating_sub(lits.len()),
        Propagation::Conflict => 0,
    }
}

/// Adjusts the assumptions until the hardness lies in `[c_min, c_max]` with at least `n` free variables.
pub fn find_satisfiable_subproblem(formula: &CnfFormula, cfg: &GenConfig) -> Result<FindOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.gen_seed);
    find_with_rng(formula, cfg, &mut rng)
}

fn find_with_rng(formula: &CnfFormula, cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Result<FindOutcome> {
    cfg.validate()?;
    let mut sat = Solver::from_formula(formula, cfg.solver_config());
    let mut assumptions: Vec<Lit> = Vec::new();

    let first = solve_subproblem(&mut sat, &assumptions, &cfg.seeds, rng);
    let mut model = match first.model {
        Some(m) => m,
        None if first.status == SolveStatus::BudgetExhausted => {
            return Ok(FindOutcome::Fail(FailReason::BudgetExhausted))
        }
        None => return Ok(FindOutcome::Fail(FailReason::Unsatisfiable)),
    };
    let mut c = first.c;
    if free_vars(&mut sat, &assumptions) < cfg.n {
        return Ok(FindOutcome::Fail(FailReason::TooFewFreeVariables));
    }
    if c < cfg.c_min {
        return Ok(FindOutcome::Fail(FailReason::TooEasy));
    }

    let mut tries = 1u32;
    while tries < cfg.max_tries {
        if free_vars(&mut sat, &assumptions) < cfg.n || c < cfg.c_min {
            if assumptions.is_empty() {
                return Ok(FindOutcome::Fail(FailReason::CannotRelax));
            }
            let k = cfg.nabla_a.min(assumptions.len());
            let mut drop = index::sample(rng, assumptions.len(), k).into_vec();
            drop.sort_unstable();
            for i in drop.into_iter().rev() {
                assumptions.remove(i);
            }
        } else if c > cfg.c_max {
            let candidates: Vec<Lit> = model
                .lits()
                .into_iter()
                .filter(|l| !assumptions.contains(l))
                .collect();
            let k = cfg.delta_a.min(candidates.len());
            assumptions.extend(candidates.choose_multiple(rng, k).copied());
        } else {
            let fixed = match sat.propagate(&assumptions) {
                Propagation::Fixpoint(lits) => lits,
                Propagation::Conflict => return Err(Error::Conflict),
            };
            return Ok(FindOutcome::Success {
                fixed,
                assumptions,
                c,
                tries,
            });
        }

        if free_vars(&mut sat, &assumptions) >= cfg.n {
            let sub = solve_subproblem(&mut sat, &assumptions, &cfg.seeds, rng);
            match sub.model {
                Some(m) => {
                    model = m;
                    c = sub.c;
                }
                // out of budget: too hard, keep the previous model (it satisfies the assumptions)
                None if sub.status == SolveStatus::BudgetExhausted => c = f64::INFINITY,
                None => return Ok(FindOutcome::Fail(FailReason::Unsatisfiable)),
            }
            tries += 1;
        }
    }
    Ok(FindOutcome::Fail(FailReason::TriesExhausted))
}

/// A simplified formula over dense variables `1..=n_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplified {
    pub formula: CnfFormula,
    /// `(old, new)` for every surviving variable, ascending in both.
    pub rename: Vec<(u32, u32)>,
    /// The unit-propagation fixpoint used for the reduction.
    pub fixed: Vec<Lit>,
}

/// Fixes `fixed` as units, reduces the formula by the unit closure and renames
/// the surviving variables densely, preserving their order.
pub fn simplify(formula: &CnfFormula, fixed: &[Lit]) -> Result<Simplified> {
    let mut solver = Solver::from_formula(formula, SolverConfig::default());
    let lits = match solver.propagate(fixed) {
        Propagation::Fixpoint(lits) => lits,
        Propagation::Conflict => return Err(Error::Conflict),
    };
    let n = formula.n_vars.max(solver.n_vars());
    let mut value: Vec<Option<bool>> = vec![None; n + 1];
    for l in &lits {
        value[l.var() as usize] = Some(l.is_positive());
    }

    let mut kept: Vec<Vec<Lit>> = Vec::new();
    'clauses: for clause in &formula.clauses {
        let mut out: Vec<Lit> = Vec::with_capacity(clause.len());
        for &l in &clause.lits {
            match value[l.var() as usize] {
                Some(v) if v == l.is_positive() => continue 'clauses,
                Some(_) => {}
                None => {
                    if !out.contains(&l) {
                        out.push(l);
                    }
                }
            }
        }
        kept.push(out);
    }

    let mut new_of = vec![0u32; n + 1];
    for c in &kept {
        for l in c {
            new_of[l.var() as usize] = 1;
        }
    }
    let mut rename = Vec::new();
    let mut next = 0u32;
    for (old, slot) in new_of.iter_mut().enumerate().skip(1) {
        if *slot != 0 {
            next += 1;
            *slot = next;
            rename.push((old as u32, next));
        }
    }
    let mut out = CnfFormula::new(next as usize);
    for c in kept {
        out.push(Clause::new(
            c.into_iter()
                .map(|l| Lit::new(new_of[l.var() as usize], l.is_positive()))
                .collect(),
        ));
    }
    Ok(Simplified {
        formula: out,
        rename,
        fixed: lits,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub source: String,
    pub n: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub measured_c: f64,
    pub seeds: Vec<u64>,
    pub gen_seed: u64,
    pub tries_used: u32,
    pub assumptions_final: usize,
    pub fixed_literals: usize,
    pub input_vars: usize,
    pub output_vars: usize,
    /// Original variable of each parameter `p1..pn`.
    pub param_sources: Vec<u32>,
    /// Original variable of each auxiliary `a1..am`.
    pub aux_sources: Vec<u32>,
}

impl Provenance {
    /// `key=value` lines.
    pub fn to_sidecar(&self) -> String {
        let join = |xs: &[u32]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let seeds = self.seeds.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "source={}", self.source);
        let _ = writeln!(s, "n={}", self.n);
        let _ = writeln!(s, "c_min={}", self.c_min);
        let _ = writeln!(s, "c_max={}", self.c_max);
        let _ = writeln!(s, "measured_c={}", self.measured_c);
        let _ = writeln!(s, "seeds={seeds}");
        let _ = writeln!(s, "gen_seed={}", self.gen_seed);
        let _ = writeln!(s, "tries_used={}", self.tries_used);
        let _ = writeln!(s, "assumptions_final={}", self.assumptions_final);
        let _ = writeln!(s, "fixed_literals={}", self.fixed_literals);
        let _ = writeln!(s, "input_vars={}", self.input_vars);
        let _ = writeln!(s, "output_vars={}", self.output_vars);
        let _ = writeln!(s, "params={}", join(&self.param_sources));
        let _ = writeln!(s, "aux={}", join(&self.aux_sources));
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenResult {
    pub model: SutModel,
    pub provenance: Provenance,
    /// The simplified formula over its own dense variables.
    pub simplified: Simplified,
    /// Simplified-formula variable of each model variable: parameters first, then auxiliaries.
    pub model_vars: Vec<u32>,
}

impl GenResult {
    /// The simplified formula with variables renumbered as the model's Boolean encoding numbers them.
    pub fn model_formula(&self) -> CnfFormula {
        let mut pos = vec![0u32; self.simplified.formula.n_vars + 1];
        for (i, &y) in self.model_vars.iter().enumerate() {
            pos[y as usize] = i as u32 + 1;
        }
        let mut f = CnfFormula::new(self.model_vars.len());
        for c in &self.simplified.formula.clauses {
            f.push(Clause::new(
                c.lits
                    .iter()
                    .map(|l| Lit::new(pos[l.var() as usize], l.is_positive()))
                    .collect(),
            ));
        }
        f
    }
}

/// Runs the whole generator. A [`FailReason`] is reported as [`Error::GenerationFailed`].
pub fn generate(formula: &CnfFormula, cfg: &GenConfig) -> Result<GenResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.gen_seed);
    let (fixed, assumptions, c, tries) = match find_with_rng(formula, cfg, &mut rng)? {
        FindOutcome::Success {
            fixed,
            assumptions,
            c,
            tries,
        } => (fixed, assumptions, c, tries),
        FindOutcome::Fail(reason) => return Err(Error::GenerationFailed(reason)),
    };
    let simplified = simplify(formula, &fixed)?;
    let n_prime = simplified.formula.n_vars;
    if n_prime < cfg.n {
        return Err(Error::GenerationFailed(FailReason::TooFewVariablesAfterSimplify));
    }

    let params: Vec<u32> = index::sample(&mut rng, n_prime, cfg.n)
        .into_iter()
        .map(|i| i as u32 + 1)
        .collect();
    let mut is_param = vec![false; n_prime + 1];
    for &p in &params {
        is_param[p as usize] = true;
    }
    let aux: Vec<u32> = (1..=n_prime as u32).filter(|&v| !is_param[v as usize]).collect();
    let mut model_vars = params.clone();
    model_vars.extend(&aux);

    let model = boolean_model(&simplified.formula, &params, &aux)?;
    let old_of = |y: u32| simplified.rename[y as usize - 1].0;
    let provenance = Provenance {
        source: String::new(),
        n: cfg.n,
        c_min: cfg.c_min,
        c_max: cfg.c_max,
        measured_c: c,
        seeds: cfg.seeds.clone(),
        gen_seed: cfg.gen_seed,
        tries_used: tries,
        assumptions_final: assumptions.len(),
        fixed_literals: simplified.fixed.len(),
        input_vars: formula.n_vars,
        output_vars: n_prime,
        param_sources: params.iter().map(|&y| old_of(y)).collect(),
        aux_sources: aux.iter().map(|&y| old_of(y)).collect(),
    };
    Ok(GenResult {
        model,
        provenance,
        simplified,
        model_vars,
    })
}

/// Parameters `p1..pn` with values `0,1` for `params`, auxiliaries `a1..am` for `aux`,
/// one disjunction per clause.
fn boolean_model(formula: &CnfFormula, params: &[u32], aux: &[u32]) -> Result<SutModel> {
    #[derive(Clone, Copy)]
    enum Role {
        Param(usize),
        Aux(usize),
    }
    let mut role = vec![None; formula.n_vars + 1];
    for (i, &v) in params.iter().enumerate() {
        role[v as usize] = Some(Role::Param(i));
    }
    for (i, &v) in aux.iter().enumerate() {
        role[v as usize] = Some(Role::Aux(i));
    }
    let parameters = (1..=params.len())
        .map(|i| Parameter::enumeration(format!("p{i}"), ["0", "1"]))
        .collect();
    let aux_vars = (1..=aux.len()).map(|i| format!("a{i}")).collect();
    let constraints = formula
        .clauses
        .iter()
        .map(|c| {
            let mut atoms: Vec<ConstraintExpr> = c
                .lits
                .iter()
                .map(|l| match role[l.var() as usize].expect("every variable has a role") {
                    Role::Param(param) => ConstraintExpr::Eq {
                        param,
                        value: l.is_positive() as usize,
                    },
                    Role::Aux(aux) => ConstraintExpr::Aux {
                        aux,
                        positive: l.is_positive(),
                    },
                })
                .collect();
            if atoms.len() == 1 {
                atoms.pop().unwrap()
            } else {
                ConstraintExpr::Or(atoms)
            }
        })
        .collect();
    SutModel::new("sutg", parameters, aux_vars, constraints)
}
