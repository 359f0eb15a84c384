use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::heap::VarHeap;
use super::types::{Assignment, Clause, CnfFormula, LBool, Lit};

const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RESTART_BASE: u64 = 100;
const FIRST_REDUCE: u64 = 2000;
const REDUCE_INCREMENT: u64 = 300;

/// Randomization and limits for a [`Solver`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub seed: u64,
    /// Probability of branching on a random variable instead of the most active one.
    pub rnd_decision_freq: f64,
    /// Probability of a random polarity instead of the saved phase.
    pub rnd_polarity_freq: f64,
    /// Maximum number of conflicts per `solve` call.
    pub conflict_budget: Option<u64>,
    /// Optional wall-clock cap per `solve` call.
    pub time_limit: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            rnd_decision_freq: 0.0,
            rnd_polarity_freq: 0.0,
            conflict_budget: None,
            time_limit: None,
        }
    }
}

impl SolverConfig {
    /// The randomized setting used for hardness measurement (both frequencies at 0.5).
    pub fn randomized(seed: u64) -> Self {
        SolverConfig {
            seed,
            rnd_decision_freq: 0.5,
            rnd_polarity_freq: 0.5,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Sat,
    Unsat,
    BudgetExhausted,
}

/// Result of one [`Solver::solve`] call.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Full assignment, present iff `status == Sat`.
    pub model: Option<Assignment>,
    /// Subset of the assumptions sufficient for unsatisfiability, present iff `status == Unsat`.
    pub core: Option<Vec<Lit>>,
    /// Conflicts encountered during this call only.
    pub n_conflicts: u64,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        self.status == SolveStatus::Sat
    }

    pub fn is_unsat(&self) -> bool {
        self.status == SolveStatus::Unsat
    }
}

/// Result of a propagation-only query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// Every literal fixed by unit propagation, sorted by variable.
    Fixpoint(Vec<Lit>),
    Conflict,
}

/// Cumulative counters over the lifetime of a solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub reductions: u64,
}

type CRef = u32;
const NO_REASON: CRef = u32::MAX;

#[derive(Clone, Debug)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    lbd: u32,
    activity: f64,
}

#[derive(Clone, Copy, Debug)]
struct Watch {
    cref: CRef,
    blocker: Lit,
}

enum SearchResult {
    Sat,
    Unsat,
    Restart,
    OutOfBudget,
}

/// Incremental CDCL solver.
///
/// Two-watched-literal propagation with blocking literals, first-UIP learning,
/// VSIDS branching with phase saving, Luby restarts and LBD-driven deletion of
/// learned clauses. Learned clauses persist across `solve` calls.
#[derive(Clone, Debug)]
pub struct Solver {
    config: SolverConfig,
    rng: ChaCha8Rng,
    ok: bool,

    clauses: Vec<ClauseData>,
    n_learnts: usize,
    watches: Vec<Vec<Watch>>,

    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<CRef>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,

    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    order: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    level_stamp: Vec<u64>,
    stamp: u64,

    next_reduce: u64,
    learnt_since_reduce: u64,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}

impl Solver {
    pub fn new(config: SolverConfig) -> Solver {
        Solver {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            ok: true,
            clauses: Vec::new(),
            n_learnts: 0,
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            order: VarHeap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            level_stamp: vec![0],
            stamp: 0,
            next_reduce: FIRST_REDUCE,
            learnt_since_reduce: 0,
            stats: SolverStats::default(),
        }
    }

    /// A solver loaded with every clause of `formula`.
    pub fn from_formula(formula: &CnfFormula, config: SolverConfig) -> Solver {
        let mut solver = Solver::new(config);
        solver.reserve_vars(formula.n_vars);
        for c in &formula.clauses {
            solver.add_clause(c.lits.iter().copied());
        }
        solver
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn n_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len() - self.n_learnts
    }

    pub fn n_learnts(&self) -> usize {
        self.n_learnts
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// False once the loaded formula is known to be unsatisfiable without assumptions.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.config.seed = seed;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    pub fn set_conflict_budget(&mut self, budget: Option<u64>) {
        self.config.conflict_budget = budget;
    }

    pub fn set_time_limit(&mut self, limit: Option<Duration>) {
        self.config.time_limit = limit;
    }

    /// Makes sure variables `1..=n` exist.
    pub fn reserve_vars(&mut self, n: usize) {
        while self.assigns.len() < n {
            let v = self.assigns.len();
            self.assigns.push(LBool::Undef);
            self.level.push(0);
            self.reason.push(NO_REASON);
            self.activity.push(0.0);
            self.phase.push(false);
            self.seen.push(false);
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
            self.level_stamp.push(0);
            self.order.grow(v + 1);
            self.order.insert(v, &self.activity);
        }
    }

    pub fn add_formula(&mut self, formula: &CnfFormula) {
        self.reserve_vars(formula.n_vars);
        for c in &formula.clauses {
            self.add_clause(c.lits.iter().copied());
        }
    }

    /// Conjoins a clause to the loaded formula.
    ///
    /// Duplicate literals are merged, tautologies dropped, and literals already
    /// decided at the root level are simplified away. An empty clause makes the
    /// solver permanently unsatisfiable.
    pub fn add_clause<I: IntoIterator<Item = Lit>>(&mut self, lits: I) {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        if let Some(max) = lits.iter().map(|l| l.var()).max() {
            self.reserve_vars(max as usize);
        }
        if !self.ok {
            return;
        }
        debug_assert_eq!(self.decision_level(), 0);
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[1] == !w[0]) {
            return;
        }
        let mut kept = Vec::with_capacity(lits.len());
        for &l in &lits {
            match self.lit_value(l) {
                LBool::True => return,
                LBool::False => {}
                LBool::Undef => kept.push(l),
            }
        }
        match kept.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(kept[0], NO_REASON);
                if self.propagate_units().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let cref = self.alloc(kept, false, 0);
                self.attach(cref);
            }
        }
    }

    /// Decides satisfiability of the loaded formula under `assumps`.
    pub fn solve(&mut self, assumps: &[Lit]) -> SolveOutcome {
        self.stats.solves += 1;
        if let Some(max) = assumps.iter().map(|l| l.var()).max() {
            self.reserve_vars(max as usize);
        }
        if !self.ok {
            return unsat(Vec::new(), 0);
        }
        let deadline = self.config.time_limit.map(|d| Instant::now() + d);
        let mut conflicts = 0u64;
        let mut restarts = 0u32;
        let mut core = Vec::new();
        let result = loop {
            let limit = luby(restarts) * RESTART_BASE;
            match self.search(assumps, limit, &mut conflicts, deadline, &mut core) {
                SearchResult::Restart => {
                    restarts += 1;
                    self.stats.restarts += 1;
                }
                other => break other,
            }
        };
        let outcome = match result {
            SearchResult::Sat => SolveOutcome {
                status: SolveStatus::Sat,
                model: Some(Assignment::from_values(self.assigns.clone())),
                core: None,
                n_conflicts: conflicts,
            },
            SearchResult::Unsat => unsat(core, conflicts),
            SearchResult::OutOfBudget => SolveOutcome {
                status: SolveStatus::BudgetExhausted,
                model: None,
                core: None,
                n_conflicts: conflicts,
            },
            SearchResult::Restart => unreachable!(),
        };
        self.cancel_until(0, true);
        outcome
    }

    /// Unit propagation of the loaded clauses under `assumps`, without search.
    ///
    /// The clause database includes learned clauses, which are consequences of
    /// the loaded formula.
    pub fn propagate(&mut self, assumps: &[Lit]) -> Propagation {
        if let Some(max) = assumps.iter().map(|l| l.var()).max() {
            self.reserve_vars(max as usize);
        }
        if !self.ok {
            return Propagation::Conflict;
        }
        if self.propagate_units().is_some() {
            self.ok = false;
            return Propagation::Conflict;
        }
        for &a in assumps {
            match self.lit_value(a) {
                LBool::True => {}
                LBool::False => {
                    self.cancel_until(0, false);
                    return Propagation::Conflict;
                }
                LBool::Undef => {
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(a, NO_REASON);
                    if self.propagate_units().is_some() {
                        self.cancel_until(0, false);
                        return Propagation::Conflict;
                    }
                }
            }
        }
        let mut fixed = self.trail.clone();
        fixed.sort_unstable_by_key(|l| l.var());
        self.cancel_until(0, false);
        Propagation::Fixpoint(fixed)
    }

    // ---- internals ----

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> LBool {
        lit_value(&self.assigns, l)
    }

    fn enqueue(&mut self, l: Lit, reason: CRef) {
        let v = l.index();
        self.assigns[v] = LBool::from_bool(l.is_positive());
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn alloc(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> CRef {
        let cref = self.clauses.len() as CRef;
        self.clauses.push(ClauseData {
            lits,
            learnt,
            lbd,
            activity: 0.0,
        });
        if learnt {
            self.n_learnts += 1;
        }
        cref
    }

    fn attach(&mut self, cref: CRef) {
        let c = &self.clauses[cref as usize];
        let (a, b) = (c.lits[0], c.lits[1]);
        self.watches[a.code()].push(Watch { cref, blocker: b });
        self.watches[b.code()].push(Watch { cref, blocker: a });
    }

    /// Propagates pending trail literals; returns the conflicting clause, if any.
    fn propagate_units(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            'watches: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if lit_value(&self.assigns, w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let lits = &mut self.clauses[w.cref as usize].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let kept = Watch {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && lit_value(&self.assigns, first) == LBool::True {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                for k in 2..lits.len() {
                    if lit_value(&self.assigns, lits[k]) != LBool::False {
                        lits.swap(1, k);
                        let moved = lits[1];
                        self.watches[moved.code()].push(kept);
                        continue 'watches;
                    }
                }
                ws[j] = kept;
                j += 1;
                if lit_value(&self.assigns, first) == LBool::False {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn cancel_until(&mut self, level: usize, save_phase: bool) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level];
        for idx in (lim..self.trail.len()).rev() {
            let l = self.trail[idx];
            let v = l.index();
            self.assigns[v] = LBool::Undef;
            self.reason[v] = NO_REASON;
            if save_phase {
                self.phase[v] = l.is_positive();
            }
            self.order.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level);
        self.qhead = self.trail.len();
    }

    fn search(
        &mut self,
        assumps: &[Lit],
        restart_limit: u64,
        conflicts: &mut u64,
        deadline: Option<Instant>,
        core: &mut Vec<Lit>,
    ) -> SearchResult {
        let mut local_conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate_units() {
                *conflicts += 1;
                local_conflicts += 1;
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchResult::Unsat;
                }
                let (learnt, backtrack, lbd) = self.analyze(confl);
                self.cancel_until(backtrack, true);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let first = learnt[0];
                    let cref = self.alloc(learnt, true, lbd);
                    self.attach(cref);
                    self.bump_clause(cref);
                    self.enqueue(first, cref);
                    self.learnt_since_reduce += 1;
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                continue;
            }

            if let Some(budget) = self.config.conflict_budget {
                if *conflicts >= budget {
                    return SearchResult::OutOfBudget;
                }
            }
            if let Some(deadline) = deadline {
                if Instant::now() >= deadline {
                    return SearchResult::OutOfBudget;
                }
            }
            if local_conflicts >= restart_limit {
                self.cancel_until(0, true);
                return SearchResult::Restart;
            }
            if self.learnt_since_reduce >= self.next_reduce {
                self.learnt_since_reduce = 0;
                self.next_reduce += REDUCE_INCREMENT;
                self.reduce_db();
            }

            let mut next = None;
            while self.decision_level() < assumps.len() {
                let a = assumps[self.decision_level()];
                match self.lit_value(a) {
                    LBool::True => self.trail_lim.push(self.trail.len()),
                    LBool::False => {
                        *core = self.analyze_final(a);
                        return SearchResult::Unsat;
                    }
                    LBool::Undef => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let next = match next {
                Some(l) => l,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => return SearchResult::Sat,
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, NO_REASON);
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        let mut next = None;
        if self.config.rnd_decision_freq > 0.0
            && self.rng.gen::<f64>() < self.config.rnd_decision_freq
            && !self.order.is_empty()
        {
            let v = self.order.at(self.rng.gen_range(0..self.order.len()));
            if self.assigns[v] == LBool::Undef {
                next = Some(v);
            }
        }
        let v = match next {
            Some(v) => v,
            None => loop {
                let v = self.order.pop(&self.activity)?;
                if self.assigns[v] == LBool::Undef {
                    break v;
                }
            },
        };
        let positive = if self.config.rnd_polarity_freq > 0.0
            && self.rng.gen::<f64>() < self.config.rnd_polarity_freq
        {
            self.rng.gen::<bool>()
        } else {
            self.phase[v]
        };
        Some(Lit::new(v as u32 + 1, positive))
    }

    /// First-UIP conflict analysis with local minimization.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, usize, u32) {
        let current = self.decision_level() as u32;
        let mut learnt = vec![Lit::pos(1)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let start = usize::from(p.is_some());
            let n = self.clauses[confl as usize].lits.len();
            for k in start..n {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].index()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            confl = self.reason[lit.index()];
            self.seen[lit.index()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = !p.unwrap();

        let to_clear: Vec<Lit> = learnt.clone();
        let mut kept = 1;
        for k in 1..learnt.len() {
            let l = learnt[k];
            if self.is_redundant(l) {
                continue;
            }
            learnt[kept] = l;
            kept += 1;
        }
        learnt.truncate(kept);
        for l in to_clear {
            self.seen[l.index()] = false;
        }

        let mut backtrack = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].index()] > self.level[learnt[max_i].index()] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            backtrack = self.level[learnt[1].index()] as usize;
        }
        let lbd = self.compute_lbd(&learnt);
        (learnt, backtrack, lbd)
    }

    /// A literal is redundant when every other literal of its reason is already in the clause.
    fn is_redundant(&self, l: Lit) -> bool {
        let r = self.reason[l.index()];
        if r == NO_REASON {
            return false;
        }
        self.clauses[r as usize].lits[1..]
            .iter()
            .all(|q| self.seen[q.index()] || self.level[q.index()] == 0)
    }

    fn compute_lbd(&mut self, lits: &[Lit]) -> u32 {
        self.stamp += 1;
        let mut n = 0;
        for l in lits {
            let lv = self.level[l.index()] as usize;
            if self.level_stamp[lv] != self.stamp {
                self.level_stamp[lv] = self.stamp;
                n += 1;
            }
        }
        n
    }

    /// Collects the assumptions responsible for `failed` being false.
    fn analyze_final(&mut self, failed: Lit) -> Vec<Lit> {
        let mut core = vec![failed];
        if self.decision_level() == 0 {
            return core;
        }
        self.seen[failed.index()] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.index();
            if !self.seen[v] {
                continue;
            }
            let r = self.reason[v];
            if r == NO_REASON {
                if l != failed && !core.contains(&l) {
                    core.push(l);
                }
            } else {
                for k in 1..self.clauses[r as usize].lits.len() {
                    let q = self.clauses[r as usize].lits[k];
                    if self.level[q.index()] > 0 {
                        self.seen[q.index()] = true;
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[failed.index()] = false;
        core
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: CRef) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn is_locked(&self, cref: CRef) -> bool {
        let first = self.clauses[cref as usize].lits[0];
        self.reason[first.index()] == cref && self.lit_value(first) == LBool::True
    }

    /// Deletes roughly half of the learned clauses (high LBD, low activity first),
    /// never touching glue clauses or clauses that are reasons on the trail.
    fn reduce_db(&mut self) {
        self.stats.reductions += 1;
        let mut candidates: Vec<CRef> = (0..self.clauses.len() as CRef)
            .filter(|&c| {
                let cd = &self.clauses[c as usize];
                cd.learnt && cd.lbd > 2 && !self.is_locked(c)
            })
            .collect();
        candidates.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd
                .cmp(&ca.lbd)
                .then(ca.activity.total_cmp(&cb.activity))
                .then(a.cmp(&b))
        });
        let n_remove = self.n_learnts / 2;
        let mut remove = vec![false; self.clauses.len()];
        for &c in candidates.iter().take(n_remove) {
            remove[c as usize] = true;
        }

        let mut remap = vec![NO_REASON; self.clauses.len()];
        let old = std::mem::take(&mut self.clauses);
        self.n_learnts = 0;
        for (i, c) in old.into_iter().enumerate() {
            if remove[i] {
                continue;
            }
            remap[i] = self.clauses.len() as CRef;
            if c.learnt {
                self.n_learnts += 1;
            }
            self.clauses.push(c);
        }
        for r in &mut self.reason {
            if *r != NO_REASON {
                *r = remap[*r as usize];
            }
        }
        for w in &mut self.watches {
            w.clear();
        }
        for cref in 0..self.clauses.len() as CRef {
            self.attach(cref);
        }
    }
}

#[inline]
fn lit_value(assigns: &[LBool], l: Lit) -> LBool {
    match assigns[l.index()] {
        LBool::Undef => LBool::Undef,
        v => LBool::from_bool((v == LBool::True) == l.is_positive()),
    }
}

fn unsat(core: Vec<Lit>, n_conflicts: u64) -> SolveOutcome {
    SolveOutcome {
        status: SolveStatus::Unsat,
        model: None,
        core: Some(core),
        n_conflicts,
    }
}

/// Luby sequence 1,1,2,1,1,2,4,... (0-based index).
fn luby(mut i: u32) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < u64::from(i) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != u64::from(i) {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size as u32;
    }
    1u64 << seq
}

/// Convenience: a solver loaded with `clauses` in default configuration.
pub fn solver_with(clauses: &[Clause]) -> Solver {
    let mut s = Solver::default();
    for c in clauses {
        s.add_clause(c.lits.iter().copied());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(v: &[i32]) -> Vec<Lit> {
        v.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect()
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn unit_clause_is_forced() {
        let mut s = Solver::default();
        s.add_clause(lits(&[1]));
        let out = s.solve(&[]);
        assert!(out.is_sat());
        assert!(out.model.unwrap().is_true(Lit::pos(1)));
    }

    #[test]
    fn direct_contradiction() {
        let mut s = Solver::default();
        s.add_clause(lits(&[1]));
        s.add_clause(lits(&[-1]));
        assert!(s.solve(&[]).is_unsat());
        assert!(!s.is_ok());
    }

    #[test]
    fn tautology_is_discarded() {
        let mut s = Solver::default();
        s.add_clause(lits(&[1, -1]));
        assert_eq!(s.n_clauses(), 0);
        assert!(s.solve(&[]).is_sat());
    }

    #[test]
    fn empty_clause_poisons_solver() {
        let mut s = Solver::default();
        s.add_clause(Vec::<Lit>::new());
        assert!(s.solve(&[]).is_unsat());
        s.add_clause(lits(&[1]));
        assert!(s.solve(&[]).is_unsat());
    }

    #[test]
    fn assumption_propagates_through_implication() {
        let mut s = Solver::default();
        s.add_clause(lits(&[-1, 2]));
        let out = s.solve(&lits(&[1]));
        let m = out.model.unwrap();
        assert!(m.is_true(Lit::pos(1)) && m.is_true(Lit::pos(2)));
    }

    #[test]
    fn failed_assumption_core() {
        let mut s = Solver::default();
        s.add_clause(lits(&[-1]));
        let out = s.solve(&lits(&[1]));
        assert!(out.is_unsat());
        assert_eq!(out.core.unwrap(), lits(&[1]));
        assert!(s.is_ok());
        assert!(s.solve(&[]).is_sat());
    }

    #[test]
    fn complementary_assumptions_core_is_the_pair() {
        let mut s = Solver::default();
        s.add_clause(lits(&[1, 2]));
        let out = s.solve(&lits(&[3, -3]));
        assert!(out.is_unsat());
        let mut core = out.core.unwrap();
        core.sort();
        assert_eq!(core, vec![Lit::pos(3), Lit::neg(3)]);
    }

    #[test]
    fn core_excludes_irrelevant_assumptions() {
        let mut s = Solver::default();
        s.add_clause(lits(&[-1, -2]));
        let out = s.solve(&lits(&[5, 1, 2]));
        let mut core = out.core.unwrap();
        core.sort();
        assert_eq!(core, lits(&[1, 2]));
    }

    #[test]
    fn propagation_chain_and_conflict() {
        let mut s = Solver::default();
        s.add_clause(lits(&[-1, 2]));
        s.add_clause(lits(&[-2, 3]));
        assert_eq!(
            s.propagate(&lits(&[1])),
            Propagation::Fixpoint(lits(&[1, 2, 3]))
        );

        let mut s = Solver::default();
        s.add_clause(lits(&[-1, 2]));
        s.add_clause(lits(&[-1, -2]));
        assert_eq!(s.propagate(&lits(&[1])), Propagation::Conflict);
        // the formula itself is still satisfiable
        assert!(s.solve(&[]).is_sat());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // pigeonhole 6 -> 5 needs many conflicts
        let mut s = Solver::new(SolverConfig {
            conflict_budget: Some(3),
            ..Default::default()
        });
        let var = |p: u32, h: u32| p * 5 + h + 1;
        for p in 0..6 {
            s.add_clause((0..5).map(|h| Lit::pos(var(p, h))));
        }
        for h in 0..5 {
            for p in 0..6 {
                for q in p + 1..6 {
                    s.add_clause([Lit::neg(var(p, h)), Lit::neg(var(q, h))]);
                }
            }
        }
        let out = s.solve(&[]);
        assert_eq!(out.status, SolveStatus::BudgetExhausted);
        assert_eq!(out.n_conflicts, 3);
        s.set_conflict_budget(None);
        assert!(s.solve(&[]).is_unsat());
    }
}
