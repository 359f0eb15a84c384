//! CASA `.model` / `.constraints` pair.
//!
//! The model file holds the parameter count, the strength and the domain
//! sizes. The constraints file holds a clause count followed, per clause, by
//! a symbol count and the signed symbols. Symbols are 0-based global value
//! indices: parameter `p` with value `v` is `offset(p) + v`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{ConstraintExpr, ParamKind, Parameter, SutModel};

use super::tokens_with_columns;

/// Upper bound on clauses produced when distributing a non-CNF constraint.
const MAX_DISTRIBUTED_CLAUSES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CasaSymbol {
    pub positive: bool,
    pub index: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CasaDoc {
    pub strength: usize,
    pub domains: Vec<usize>,
    pub clauses: Vec<Vec<CasaSymbol>>,
}

impl CasaDoc {
    pub fn total_values(&self) -> usize {
        self.domains.iter().sum()
    }

    /// Maps a global symbol index to `(parameter, value)`.
    pub fn decode_symbol(&self, index: usize) -> Option<(usize, usize)> {
        let mut offset = 0;
        for (p, &g) in self.domains.iter().enumerate() {
            if index < offset + g {
                return Some((p, index - offset));
            }
            offset += g;
        }
        None
    }

    pub fn encode_symbol(&self, param: usize, value: usize) -> usize {
        self.domains[..param].iter().sum::<usize>() + value
    }
}

struct Tokens<'a> {
    items: Vec<(usize, usize, &'a str)>,
    pos: usize,
    what: &'static str,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str, what: &'static str) -> Tokens<'a> {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| tokens_with_columns(line).map(move |(c, t)| (i + 1, c, t)))
            .collect();
        Tokens { items, pos: 0, what }
    }

    fn is_empty(&self) -> bool {
        self.pos >= self.items.len()
    }

    fn here(&self) -> (usize, usize) {
        match self.items.get(self.pos).or(self.items.last()) {
            Some(&(l, c, _)) => (l, c),
            None => (1, 1),
        }
    }

    fn next_raw(&mut self, expected: &str) -> Result<(usize, usize, &'a str)> {
        let item = self.items.get(self.pos).copied().ok_or_else(|| {
            let (l, c) = self.here();
            Error::parse(self.what, l, c, format!("unexpected end of input, expected {expected}"))
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn number(&mut self, expected: &str) -> Result<usize> {
        let (l, c, tok) = self.next_raw(expected)?;
        tok.parse()
            .map_err(|_| Error::parse(self.what, l, c, format!("expected {expected}, found '{tok}'")))
    }

    fn symbol(&mut self) -> Result<(usize, usize, CasaSymbol)> {
        let (l, c, tok) = self.next_raw("a signed symbol")?;
        let (positive, rest) = match tok.as_bytes()[0] {
            b'+' => (true, &tok[1..]),
            b'-' => (false, &tok[1..]),
            _ => return Err(Error::parse(self.what, l, c, format!("expected '+' or '-', found '{tok}'"))),
        };
        let index = if rest.is_empty() {
            self.number("a symbol index")?
        } else {
            rest.parse()
                .map_err(|_| Error::parse(self.what, l, c, format!("invalid symbol '{tok}'")))?
        };
        Ok((l, c, CasaSymbol { positive, index }))
    }
}

pub fn parse_casa_doc(model_text: &str, constraints_text: Option<&str>) -> Result<CasaDoc> {
    let mut toks = Tokens::new(model_text, "CASA model");
    let n = toks.number("the parameter count")?;
    let strength = toks.number("the strength")?;
    let mut domains = Vec::with_capacity(n);
    for _ in 0..n {
        let g = toks.number("a domain size")?;
        if g == 0 {
            let (l, c) = (toks.items[toks.pos - 1].0, toks.items[toks.pos - 1].1);
            return Err(Error::parse("CASA model", l, c, "domain size must be positive"));
        }
        domains.push(g);
    }
    if !toks.is_empty() {
        let (l, c) = toks.here();
        return Err(Error::parse(
            "CASA model",
            l,
            c,
            format!("{n} domain sizes declared but more values follow"),
        ));
    }
    let mut doc = CasaDoc {
        strength,
        domains,
        clauses: Vec::new(),
    };

    let Some(text) = constraints_text else {
        return Ok(doc);
    };
    let mut toks = Tokens::new(text, "CASA constraints");
    if toks.is_empty() {
        return Ok(doc);
    }
    let total = doc.total_values();
    let n_clauses = toks.number("the clause count")?;
    for _ in 0..n_clauses {
        let m = toks.number("a symbol count")?;
        let mut clause = Vec::with_capacity(m);
        for _ in 0..m {
            let (l, c, sym) = toks.symbol()?;
            if sym.index >= total {
                return Err(Error::parse(
                    "CASA constraints",
                    l,
                    c,
                    format!("symbol {} out of range (model has {total} values)", sym.index),
                ));
            }
            clause.push(sym);
        }
        doc.clauses.push(clause);
    }
    if !toks.is_empty() {
        let (l, c) = toks.here();
        return Err(Error::parse(
            "CASA constraints",
            l,
            c,
            format!("{n_clauses} clauses declared but more data follows"),
        ));
    }
    Ok(doc)
}

pub fn write_casa_doc(doc: &CasaDoc) -> (String, String) {
    let mut model = String::new();
    let _ = writeln!(model, "{}", doc.domains.len());
    let _ = writeln!(model, "{}", doc.strength);
    let sizes: Vec<String> = doc.domains.iter().map(ToString::to_string).collect();
    let _ = writeln!(model, "{}", sizes.join(" "));

    let mut constraints = String::new();
    let _ = writeln!(constraints, "{}", doc.clauses.len());
    for clause in &doc.clauses {
        let _ = writeln!(constraints, "{}", clause.len());
        let syms: Vec<String> = clause
            .iter()
            .map(|s| format!("{} {}", if s.positive { '+' } else { '-' }, s.index))
            .collect();
        let _ = writeln!(constraints, "{}", syms.join(" "));
    }
    (model, constraints)
}

/// Builds the model: parameters `p1..pn` with values `0..g-1`, one constraint per clause.
pub fn casa_to_model(doc: &CasaDoc) -> Result<SutModel> {
    let parameters = doc
        .domains
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            Parameter::new(
                format!("p{}", i + 1),
                ParamKind::Enum,
                (0..g).map(|v| v.to_string()).collect(),
            )
        })
        .collect();
    let mut constraints = Vec::with_capacity(doc.clauses.len());
    for clause in &doc.clauses {
        let mut atoms: Vec<ConstraintExpr> = clause
            .iter()
            .map(|s| {
                let (param, value) = doc
                    .decode_symbol(s.index)
                    .ok_or_else(|| Error::InvalidModel(format!("symbol {} out of range", s.index)))?;
                Ok(if s.positive {
                    ConstraintExpr::Eq { param, value }
                } else {
                    ConstraintExpr::Neq { param, value }
                })
            })
            .collect::<Result<_>>()?;
        constraints.push(match atoms.len() {
            0 => return Err(Error::InvalidModel("empty CASA clause".into())),
            1 => atoms.pop().unwrap(),
            _ => ConstraintExpr::Or(atoms),
        });
    }
    let mut model = SutModel::new("", parameters, vec![], constraints)?;
    model.strength_hint = Some(doc.strength);
    Ok(model)
}

/// Converts a model to CASA. Non-clausal constraints are distributed into CNF;
/// auxiliaries cannot be expressed.
pub fn model_to_casa(model: &SutModel, strength: usize) -> Result<CasaDoc> {
    if !model.aux_vars.is_empty() {
        return Err(Error::Inexpressible {
            format: "CASA",
            reason: "auxiliary variables are not supported".into(),
        });
    }
    let mut doc = CasaDoc {
        strength,
        domains: model.domain_sizes(),
        clauses: Vec::new(),
    };
    for c in &model.constraints {
        let clauses = match c.as_clause() {
            Some(atoms) => vec![atoms.into_iter().cloned().collect::<Vec<_>>()],
            None => distribute(c, false)?,
        };
        for clause in clauses {
            let syms = clause
                .iter()
                .map(|a| match *a {
                    ConstraintExpr::Eq { param, value } => CasaSymbol {
                        positive: true,
                        index: doc.encode_symbol(param, value),
                    },
                    ConstraintExpr::Neq { param, value } => CasaSymbol {
                        positive: false,
                        index: doc.encode_symbol(param, value),
                    },
                    _ => unreachable!("auxiliaries rejected above"),
                })
                .collect();
            doc.clauses.push(syms);
        }
    }
    Ok(doc)
}

pub fn parse_casa(model_text: &str, constraints_text: Option<&str>) -> Result<SutModel> {
    casa_to_model(&parse_casa_doc(model_text, constraints_text)?)
}

pub fn write_casa(model: &SutModel, strength: usize) -> Result<(String, String)> {
    Ok(write_casa_doc(&model_to_casa(model, strength)?))
}

/// CNF of `e` (or of `!e` when `negated`) as lists of Eq/Neq atoms.
fn distribute(e: &ConstraintExpr, negated: bool) -> Result<Vec<Vec<ConstraintExpr>>> {
    use ConstraintExpr::*;
    let too_big = || Error::Inexpressible {
        format: "CASA",
        reason: format!("CNF expansion exceeds {MAX_DISTRIBUTED_CLAUSES} clauses"),
    };
    Ok(match e {
        Eq { param, value } => vec![vec![if negated {
            Neq { param: *param, value: *value }
        } else {
            e.clone()
        }]],
        Neq { param, value } => vec![vec![if negated {
            Eq { param: *param, value: *value }
        } else {
            e.clone()
        }]],
        Aux { .. } => unreachable!("auxiliaries rejected by caller"),
        Not(inner) => distribute(inner, !negated)?,
        And(es) | Or(es) => {
            let conj = matches!(e, And(_)) != negated;
            let parts = es
                .iter()
                .map(|x| distribute(x, negated))
                .collect::<Result<Vec<_>>>()?;
            if conj {
                parts.into_iter().flatten().collect()
            } else {
                let mut acc: Vec<Vec<ConstraintExpr>> = vec![vec![]];
                for part in parts {
                    if acc.len() * part.len() > MAX_DISTRIBUTED_CLAUSES {
                        return Err(too_big());
                    }
                    acc = acc
                        .iter()
                        .flat_map(|a| {
                            part.iter().map(move |b| {
                                let mut c = a.clone();
                                c.extend(b.iter().cloned());
                                c
                            })
                        })
                        .collect();
                }
                acc
            }
        }
        Implies(a, b) => {
            let as_or = Or(vec![Not(a.clone()), (**b).clone()]);
            distribute(&as_or, negated)?
        }
    })
}
