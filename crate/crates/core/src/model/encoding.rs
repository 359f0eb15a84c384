use crate::error::{Error, Result};
use crate::sat::{Assignment, Clause, CnfFormula, Lit, Solver, SolverConfig};

use super::{ConstraintExpr, SutModel, TestCase, ValueTuple};

/// How parameter values map onto SAT variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncodingMode {
    /// One variable per parameter/value pair with exactly-one clauses;
    /// constraints go through a polarity-aware Tseitin translation.
    OneHot,
    /// Every parameter has values `0,1` and every constraint is a clause:
    /// one variable per parameter/auxiliary and constraints imported verbatim.
    Boolean,
}

/// A SUT compiled to CNF.
///
/// Variables `1..=n_model_vars()` are the parameter-value (or Boolean
/// parameter) variables followed by the auxiliaries; Tseitin definition
/// variables come after them.
#[derive(Clone, Debug)]
pub struct CnfEncoding {
    mode: EncodingMode,
    domains: Vec<usize>,
    /// First variable of each parameter (1-based).
    param_base: Vec<u32>,
    aux_base: u32,
    n_aux: usize,
    formula: CnfFormula,
}

impl CnfEncoding {
    pub fn mode(&self) -> EncodingMode {
        self.mode
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn n_vars(&self) -> usize {
        self.formula.n_vars
    }

    /// Variables that stand for parameters and auxiliaries (no definition variables).
    pub fn n_model_vars(&self) -> usize {
        (self.aux_base as usize - 1) + self.n_aux
    }

    /// The literal that is true exactly when `param` takes `value`.
    pub fn value_lit(&self, param: usize, value: usize) -> Lit {
        debug_assert!(value < self.domains[param]);
        match self.mode {
            EncodingMode::OneHot => Lit::pos(self.param_base[param] + value as u32),
            EncodingMode::Boolean => Lit::new(self.param_base[param], value == 1),
        }
    }

    pub fn aux_lit(&self, aux: usize, positive: bool) -> Lit {
        Lit::new(self.aux_base + aux as u32, positive)
    }

    pub fn tuple_lits(&self, tuple: &ValueTuple) -> Vec<Lit> {
        tuple.pairs().iter().map(|&(p, v)| self.value_lit(p, v)).collect()
    }

    /// Literals of the fixed (non-empty) cells of a test.
    pub fn test_lits(&self, test: &TestCase) -> Vec<Lit> {
        test.cells
            .iter()
            .enumerate()
            .filter_map(|(p, c)| c.map(|v| self.value_lit(p, v)))
            .collect()
    }

    /// Reads the parameter values out of a model of the encoding.
    pub fn decode(&self, model: &Assignment) -> Vec<usize> {
        (0..self.domains.len())
            .map(|p| {
                (0..self.domains[p])
                    .find(|&v| model.is_true(self.value_lit(p, v)))
                    .expect("exactly one value per parameter holds in every model")
            })
            .collect()
    }

    pub fn decode_aux(&self, model: &Assignment) -> Vec<bool> {
        (0..self.n_aux)
            .map(|a| model.is_true(self.aux_lit(a, true)))
            .collect()
    }

    /// A fresh solver loaded with the encoding.
    pub fn solver(&self, config: SolverConfig) -> Solver {
        Solver::from_formula(&self.formula, config)
    }
}

/// Compiles a model and checks that it admits at least one configuration.
pub fn compile(model: &SutModel) -> Result<CnfEncoding> {
    let enc = encode(model)?;
    let mut solver = enc.solver(SolverConfig::default());
    if !solver.solve(&[]).is_sat() {
        return Err(Error::ModelUnsatisfiable);
    }
    Ok(enc)
}

/// Compiles a model to CNF without the satisfiability check.
pub fn encode(model: &SutModel) -> Result<CnfEncoding> {
    model.validate()?;
    let boolean = model.parameters.iter().all(|p| p.is_binary_native())
        && model.constraints.iter().all(|c| c.as_clause().is_some());
    let domains = model.domain_sizes();
    let mut param_base = Vec::with_capacity(domains.len());
    let mut next = 1u32;
    for &g in &domains {
        param_base.push(next);
        next += if boolean { 1 } else { g as u32 };
    }
    let aux_base = next;
    let n_aux = model.aux_vars.len();
    let mut enc = CnfEncoding {
        mode: if boolean {
            EncodingMode::Boolean
        } else {
            EncodingMode::OneHot
        },
        domains,
        param_base,
        aux_base,
        n_aux,
        formula: CnfFormula::new(aux_base as usize - 1 + n_aux),
    };

    if boolean {
        for c in &model.constraints {
            let lits = c
                .as_clause()
                .unwrap()
                .into_iter()
                .map(|atom| atom_lit(&enc, atom))
                .collect::<Vec<_>>();
            enc.formula.push(Clause::new(lits));
        }
        return Ok(enc);
    }

    for p in 0..enc.domains.len() {
        let g = enc.domains[p];
        let lits: Vec<Lit> = (0..g).map(|v| enc.value_lit(p, v)).collect();
        enc.formula.push(Clause::new(lits.clone()));
        for i in 0..g {
            for j in i + 1..g {
                enc.formula.push(Clause::new(vec![!lits[i], !lits[j]]));
            }
        }
    }
    let mut tseitin = Tseitin {
        next_var: enc.formula.n_vars as u32 + 1,
        clauses: Vec::new(),
    };
    for c in &model.constraints {
        let nnf = to_nnf(&enc, c, false).simplify();
        tseitin.assert_root(nnf);
    }
    for c in tseitin.clauses {
        enc.formula.push(c);
    }
    enc.formula.n_vars = enc.formula.n_vars.max(tseitin.next_var as usize - 1);
    Ok(enc)
}

fn atom_lit(enc: &CnfEncoding, atom: &ConstraintExpr) -> Lit {
    match *atom {
        ConstraintExpr::Eq { param, value } => enc.value_lit(param, value),
        ConstraintExpr::Neq { param, value } => !enc.value_lit(param, value),
        ConstraintExpr::Aux { aux, positive } => enc.aux_lit(aux, positive),
        _ => unreachable!("not an atom"),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Nnf {
    Const(bool),
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn to_nnf(enc: &CnfEncoding, e: &ConstraintExpr, negated: bool) -> Nnf {
    match e {
        ConstraintExpr::Eq { .. } | ConstraintExpr::Neq { .. } | ConstraintExpr::Aux { .. } => {
            let l = atom_lit(enc, e);
            Nnf::Lit(if negated { !l } else { l })
        }
        ConstraintExpr::Not(inner) => to_nnf(enc, inner, !negated),
        ConstraintExpr::And(es) => {
            let parts = es.iter().map(|x| to_nnf(enc, x, negated)).collect();
            if negated {
                Nnf::Or(parts)
            } else {
                Nnf::And(parts)
            }
        }
        ConstraintExpr::Or(es) => {
            let parts = es.iter().map(|x| to_nnf(enc, x, negated)).collect();
            if negated {
                Nnf::And(parts)
            } else {
                Nnf::Or(parts)
            }
        }
        ConstraintExpr::Implies(a, b) => {
            // a => b  ==  !a || b ; negated: a && !b
            if negated {
                Nnf::And(vec![to_nnf(enc, a, false), to_nnf(enc, b, true)])
            } else {
                Nnf::Or(vec![to_nnf(enc, a, true), to_nnf(enc, b, false)])
            }
        }
    }
}

impl Nnf {
    /// Flattens nested connectives of the same kind and folds constants.
    fn simplify(self) -> Nnf {
        match self {
            Nnf::And(parts) => {
                let mut out = Vec::new();
                for p in parts.into_iter().map(Nnf::simplify) {
                    match p {
                        Nnf::Const(true) => {}
                        Nnf::Const(false) => return Nnf::Const(false),
                        Nnf::And(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                match out.len() {
                    0 => Nnf::Const(true),
                    1 => out.pop().unwrap(),
                    _ => Nnf::And(out),
                }
            }
            Nnf::Or(parts) => {
                let mut out = Vec::new();
                for p in parts.into_iter().map(Nnf::simplify) {
                    match p {
                        Nnf::Const(false) => {}
                        Nnf::Const(true) => return Nnf::Const(true),
                        Nnf::Or(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                match out.len() {
                    0 => Nnf::Const(false),
                    1 => out.pop().unwrap(),
                    _ => Nnf::Or(out),
                }
            }
            other => other,
        }
    }
}

/// Plaisted–Greenbaum style translation: subformulas only occur positively
/// after NNF, so each definition variable needs the implication `d -> sub` only.
struct Tseitin {
    next_var: u32,
    clauses: Vec<Clause>,
}

impl Tseitin {
    fn assert_root(&mut self, f: Nnf) {
        match f {
            Nnf::Const(true) => {}
            Nnf::Const(false) => self.clauses.push(Clause::new(vec![])),
            Nnf::Lit(l) => self.clauses.push(Clause::new(vec![l])),
            Nnf::And(parts) => parts.into_iter().for_each(|p| self.assert_root(p)),
            Nnf::Or(parts) => {
                let lits = parts.into_iter().map(|p| self.define(p)).collect();
                self.clauses.push(Clause::new(lits));
            }
        }
    }

    fn define(&mut self, f: Nnf) -> Lit {
        match f {
            Nnf::Lit(l) => l,
            Nnf::Const(_) => unreachable!("constants are folded before definition"),
            Nnf::And(parts) => {
                let d = self.fresh();
                for p in parts {
                    let l = self.define(p);
                    self.clauses.push(Clause::new(vec![!d, l]));
                }
                d
            }
            Nnf::Or(parts) => {
                let d = self.fresh();
                let mut lits = vec![!d];
                for p in parts {
                    lits.push(self.define(p));
                }
                self.clauses.push(Clause::new(lits));
                d
            }
        }
    }

    fn fresh(&mut self) -> Lit {
        let l = Lit::pos(self.next_var);
        self.next_var += 1;
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::example1;
    use crate::model::{ConstraintExpr as E, Parameter};

    #[test]
    fn example1_value_variables() {
        let enc = compile(&example1()).unwrap();
        assert_eq!(enc.mode(), EncodingMode::OneHot);
        assert_eq!(enc.n_model_vars(), 15);
        // ALO + pairwise AMO for domains 5,4,4,2: 4 + (10 + 6 + 6 + 1)
        let exactly_one = 4 + 10 + 6 + 6 + 1;
        assert!(enc.formula().len() > exactly_one);
        assert_eq!(enc.value_lit(1, 0), Lit::pos(6));
        assert_eq!(enc.value_lit(3, 1), Lit::pos(15));
    }

    #[test]
    fn unconstrained_model_is_exactly_one_only() {
        let m = SutModel::new(
            "m",
            vec![
                Parameter::enumeration("A", ["a", "b", "c"]),
                Parameter::enumeration("B", ["x", "y"]),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let enc = compile(&m).unwrap();
        assert_eq!(enc.formula().len(), 2 + 3 + 1);
        assert_eq!(enc.n_vars(), 5);
    }

    #[test]
    fn contradictory_atoms_are_unsatisfiable() {
        let m = example1();
        let mut bad = m.clone();
        bad.constraints = vec![E::And(vec![
            E::Eq { param: 0, value: 0 },
            E::Eq { param: 0, value: 1 },
        ])];
        assert!(matches!(compile(&bad), Err(Error::ModelUnsatisfiable)));
    }

    #[test]
    fn boolean_mode_imports_clauses_verbatim() {
        let bin = |n: &str| Parameter::enumeration(n, ["0", "1"]);
        let m = SutModel::new(
            "g",
            vec![bin("p1"), bin("p2")],
            vec!["a1".into()],
            vec![E::Or(vec![
                E::Eq { param: 0, value: 1 },
                E::Eq { param: 1, value: 0 },
                E::Aux { aux: 0, positive: false },
            ])],
        )
        .unwrap();
        let enc = compile(&m).unwrap();
        assert_eq!(enc.mode(), EncodingMode::Boolean);
        assert_eq!(enc.n_vars(), 3);
        assert_eq!(
            enc.formula().clauses,
            vec![Clause::from_dimacs(&[1, -2, -3])]
        );
    }

    #[test]
    fn decoded_models_satisfy_the_ast() {
        let m = example1();
        let enc = compile(&m).unwrap();
        let mut s = enc.solver(SolverConfig::default());
        // enumerate all models over value vars by blocking
        let mut count = 0;
        loop {
            let out = s.solve(&[]);
            let Some(model) = out.model else { break };
            let values = enc.decode(&model);
            assert!(m.accepts(&values, &[]));
            let block: Vec<Lit> = values
                .iter()
                .enumerate()
                .map(|(p, &v)| !enc.value_lit(p, v))
                .collect();
            s.add_clause(block);
            count += 1;
        }
        let brute = itertools::iproduct!(0..5, 0..4, 0..4, 0..2)
            .filter(|&(a, b, c, d)| m.accepts(&[a, b, c, d], &[]))
            .count();
        assert_eq!(count, brute);
    }
}
