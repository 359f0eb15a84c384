//! SUT models: parameters with finite domains, Boolean auxiliaries, and
//! constraints over both. Also the tuple/test/suite vocabulary used by the
//! builders and the verifier.

mod encoding;
mod tuple;

use std::collections::HashSet;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use encoding::{compile, encode, CnfEncoding, EncodingMode};
pub use tuple::{
    covers, enumerate_tuples, is_allowed, tuple_count, tuple_status, BuildStats, SuiteMeta,
    TestCase, TestSuite, TupleEnumerator, TupleStatus, ValueTuple,
};

/// Declared type of a parameter, kept so that writers reproduce the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamKind {
    Enum,
    Bool,
    Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Parameter {
    pub name: String,
    pub kind: ParamKind,
    pub values: Vec<String>,
}

impl Parameter {
    pub fn new(name: impl Into<String>, kind: ParamKind, values: Vec<String>) -> Parameter {
        Parameter {
            name: name.into(),
            kind,
            values,
        }
    }

    pub fn enumeration<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Parameter {
        Parameter::new(name, ParamKind::Enum, values.into_iter().map(Into::into).collect())
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }

    /// Index of the value read as "true" for a bare Boolean reference.
    pub fn true_index(&self) -> Option<usize> {
        self.values.iter().position(|v| v.eq_ignore_ascii_case("true"))
    }

    /// Parameters with the values `0,1` in this order map to a single SAT variable.
    pub fn is_binary_native(&self) -> bool {
        self.values.len() == 2 && self.values[0] == "0" && self.values[1] == "1"
    }
}

/// Constraint abstract syntax tree. Indices refer to the owning model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintExpr {
    Eq { param: usize, value: usize },
    Neq { param: usize, value: usize },
    Aux { aux: usize, positive: bool },
    Not(Box<ConstraintExpr>),
    And(Vec<ConstraintExpr>),
    Or(Vec<ConstraintExpr>),
    Implies(Box<ConstraintExpr>, Box<ConstraintExpr>),
}

impl ConstraintExpr {
    pub fn negate(e: ConstraintExpr) -> ConstraintExpr {
        ConstraintExpr::Not(Box::new(e))
    }

    pub fn implies(a: ConstraintExpr, b: ConstraintExpr) -> ConstraintExpr {
        ConstraintExpr::Implies(Box::new(a), Box::new(b))
    }

    /// Evaluates under a full parameter assignment and auxiliary valuation.
    pub fn eval(&self, values: &[usize], aux: &[bool]) -> bool {
        match self {
            ConstraintExpr::Eq { param, value } => values[*param] == *value,
            ConstraintExpr::Neq { param, value } => values[*param] != *value,
            ConstraintExpr::Aux { aux: a, positive } => aux[*a] == *positive,
            ConstraintExpr::Not(e) => !e.eval(values, aux),
            ConstraintExpr::And(es) => es.iter().all(|e| e.eval(values, aux)),
            ConstraintExpr::Or(es) => es.iter().any(|e| e.eval(values, aux)),
            ConstraintExpr::Implies(a, b) => !a.eval(values, aux) || b.eval(values, aux),
        }
    }

    pub fn mentions_aux(&self) -> bool {
        match self {
            ConstraintExpr::Aux { .. } => true,
            ConstraintExpr::Eq { .. } | ConstraintExpr::Neq { .. } => false,
            ConstraintExpr::Not(e) => e.mentions_aux(),
            ConstraintExpr::And(es) | ConstraintExpr::Or(es) => es.iter().any(Self::mentions_aux),
            ConstraintExpr::Implies(a, b) => a.mentions_aux() || b.mentions_aux(),
        }
    }

    fn is_atom(&self) -> bool {
        matches!(
            self,
            ConstraintExpr::Eq { .. } | ConstraintExpr::Neq { .. } | ConstraintExpr::Aux { .. }
        )
    }

    /// The atoms of this constraint when it is a plain disjunction of atoms.
    pub fn as_clause(&self) -> Option<Vec<&ConstraintExpr>> {
        match self {
            e if e.is_atom() => Some(vec![e]),
            ConstraintExpr::Or(es) if !es.is_empty() && es.iter().all(Self::is_atom) => {
                Some(es.iter().collect())
            }
            _ => None,
        }
    }

    fn check_refs(&self, model: &SutModel) -> Result<()> {
        match self {
            ConstraintExpr::Eq { param, value } | ConstraintExpr::Neq { param, value } => {
                let p = model.parameters.get(*param).ok_or_else(|| {
                    Error::InvalidModel(format!("constraint references parameter #{param}"))
                })?;
                if *value >= p.values.len() {
                    return Err(Error::InvalidModel(format!(
                        "constraint references value #{value} of {}",
                        p.name
                    )));
                }
                Ok(())
            }
            ConstraintExpr::Aux { aux, .. } => {
                if *aux >= model.aux_vars.len() {
                    return Err(Error::InvalidModel(format!(
                        "constraint references auxiliary #{aux}"
                    )));
                }
                Ok(())
            }
            ConstraintExpr::Not(e) => e.check_refs(model),
            ConstraintExpr::And(es) | ConstraintExpr::Or(es) => {
                if es.is_empty() {
                    return Err(Error::InvalidModel("empty connective".into()));
                }
                es.iter().try_for_each(|e| e.check_refs(model))
            }
            ConstraintExpr::Implies(a, b) => {
                a.check_refs(model)?;
                b.check_refs(model)
            }
        }
    }
}

/// A system under test: named parameters with finite domains, Boolean
/// auxiliary variables and the constraints that restrict valid configurations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SutModel {
    pub name: String,
    pub parameters: Vec<Parameter>,
    pub aux_vars: Vec<String>,
    pub constraints: Vec<ConstraintExpr>,
    /// Interaction strength carried by formats that store one (CASA). Metadata only.
    pub strength_hint: Option<usize>,
}

impl SutModel {
    /// Builds and structurally validates a model. Satisfiability is checked by [`compile`].
    pub fn new(
        name: impl Into<String>,
        parameters: Vec<Parameter>,
        aux_vars: Vec<String>,
        constraints: Vec<ConstraintExpr>,
    ) -> Result<SutModel> {
        let model = SutModel {
            name: name.into(),
            parameters,
            aux_vars,
            constraints,
            strength_hint: None,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        for p in &self.parameters {
            if !names.insert(p.name.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate name {}", p.name)));
            }
            if p.values.is_empty() {
                return Err(Error::InvalidModel(format!("parameter {} has an empty domain", p.name)));
            }
            let mut seen = HashSet::new();
            for v in &p.values {
                if !seen.insert(v.as_str()) {
                    return Err(Error::InvalidModel(format!(
                        "parameter {} repeats value {v}",
                        p.name
                    )));
                }
            }
        }
        for a in &self.aux_vars {
            if !names.insert(a.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate name {a}")));
            }
        }
        self.constraints.iter().try_for_each(|c| c.check_refs(self))
    }

    pub fn n_params(&self) -> usize {
        self.parameters.len()
    }

    pub fn domain_sizes(&self) -> Vec<usize> {
        self.parameters.iter().map(Parameter::domain_size).collect()
    }

    /// Σ of the domain sizes, i.e. the number of parameter/value pairs.
    pub fn total_values(&self) -> usize {
        self.parameters.iter().map(Parameter::domain_size).sum()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p.name == name)
    }

    pub fn aux_index(&self, name: &str) -> Option<usize> {
        self.aux_vars.iter().position(|a| a == name)
    }

    /// Direct evaluation of every constraint (auxiliaries must be given).
    pub fn accepts(&self, values: &[usize], aux: &[bool]) -> bool {
        self.constraints.iter().all(|c| c.eval(values, aux))
    }

    pub fn check_strength(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.n_params() {
            return Err(Error::StrengthOutOfRange {
                t,
                n_params: self.n_params(),
            });
        }
        Ok(())
    }

    /// Short content hash, stable across runs.
    pub fn fingerprint(&self) -> String {
        let text = crate::formats::write_extended_acts(self);
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
