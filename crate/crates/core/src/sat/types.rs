use std::fmt;
use std::ops::Not;

/// A propositional literal over a 1-based variable index.
///
/// Internally stored as `2 * (var - 1) + negated`, so a literal and its
/// negation differ only in the lowest bit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        assert!(var >= 1, "variables are 1-based");
        Lit(((var - 1) << 1) | u32::from(!positive))
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(var, true)
    }

    pub fn neg(var: u32) -> Lit {
        Lit::new(var, false)
    }

    /// Literal from a signed DIMACS integer. Returns `None` for zero.
    pub fn from_dimacs(value: i32) -> Option<Lit> {
        match value {
            0 => None,
            v => Some(Lit::new(v.unsigned_abs(), v > 0)),
        }
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var() as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> u32 {
        (self.0 >> 1) + 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        (self.0 >> 1) as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Three-valued truth state of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LBool {
    True,
    False,
    Undef,
}

impl LBool {
    pub fn from_bool(b: bool) -> LBool {
        if b {
            LBool::True
        } else {
            LBool::False
        }
    }
}

/// A disjunction of literals, kept in the order it was written.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Clause {
    pub lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Clause {
        Clause { lits }
    }

    pub fn from_dimacs(values: &[i32]) -> Clause {
        Clause {
            lits: values.iter().filter_map(|&v| Lit::from_dimacs(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.lits.iter().map(|l| l.var()).max().unwrap_or(0)
    }

    /// True when some literal holds under `values` (index `var - 1`).
    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        self.lits
            .iter()
            .any(|l| values[l.index()] == l.is_positive())
    }
}

impl From<Vec<Lit>> for Clause {
    fn from(lits: Vec<Lit>) -> Clause {
        Clause { lits }
    }
}

/// A CNF formula: a conjunction of clauses over variables `1..=n_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub n_vars: usize,
    pub clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(n_vars: usize) -> CnfFormula {
        CnfFormula {
            n_vars,
            clauses: Vec::new(),
        }
    }

    /// Appends a clause, growing `n_vars` if the clause mentions a larger variable.
    pub fn push(&mut self, clause: impl Into<Clause>) {
        let clause = clause.into();
        self.n_vars = self.n_vars.max(clause.max_var() as usize);
        self.clauses.push(clause);
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied_by(values))
    }
}

/// A (possibly partial) truth assignment indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<LBool>,
}

impl Assignment {
    pub fn new(n_vars: usize) -> Assignment {
        Assignment {
            values: vec![LBool::Undef; n_vars],
        }
    }

    pub(crate) fn from_values(values: Vec<LBool>) -> Assignment {
        Assignment { values }
    }

    pub fn n_vars(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, var: u32) -> LBool {
        self.values
            .get(var as usize - 1)
            .copied()
            .unwrap_or(LBool::Undef)
    }

    pub fn set(&mut self, lit: Lit) {
        let idx = lit.index();
        if idx >= self.values.len() {
            self.values.resize(idx + 1, LBool::Undef);
        }
        self.values[idx] = LBool::from_bool(lit.is_positive());
    }

    pub fn lit_value(&self, lit: Lit) -> LBool {
        match self.value(lit.var()) {
            LBool::Undef => LBool::Undef,
            v => LBool::from_bool((v == LBool::True) == lit.is_positive()),
        }
    }

    pub fn is_true(&self, lit: Lit) -> bool {
        self.lit_value(lit) == LBool::True
    }

    /// The defined variables as literals, in variable order.
    pub fn lits(&self) -> Vec<Lit> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| match v {
                LBool::True => Some(Lit::pos(i as u32 + 1)),
                LBool::False => Some(Lit::neg(i as u32 + 1)),
                LBool::Undef => None,
            })
            .collect()
    }

    /// Total assignment as booleans; undefined variables read as false.
    pub fn to_bools(&self) -> Vec<bool> {
        self.values.iter().map(|v| *v == LBool::True).collect()
    }
}
