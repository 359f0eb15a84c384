//! DIMACS CNF reading and writing.
//!
//! Reading is lenient the way real benchmark corpora require: header counts
//! that disagree with the body produce warnings, clauses may span lines, and a
//! SATLIB-style `%` line ends the body.

use std::fmt::Write as _;

use log::warn;

use crate::error::{Error, Result};
use crate::sat::{Clause, CnfFormula, Lit};

use super::tokens_with_columns;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimacsDoc {
    pub n_vars: usize,
    pub n_clauses: usize,
    pub clauses: Vec<Clause>,
    pub comments: Vec<String>,
    pub warnings: Vec<String>,
}

impl DimacsDoc {
    /// The formula, with `n_vars` covering both the header and the body.
    pub fn to_formula(&self) -> CnfFormula {
        let mut f = CnfFormula::new(self.n_vars);
        for c in &self.clauses {
            f.push(c.clone());
        }
        f
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    Ok(parse_dimacs_doc(text)?.to_formula())
}

pub fn parse_dimacs_doc(text: &str) -> Result<DimacsDoc> {
    let mut doc = DimacsDoc::default();
    let mut header: Option<(usize, usize)> = None;
    let mut current: Vec<Lit> = Vec::new();
    let mut max_var = 0usize;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                doc.comments.push(rest.trim_start().to_string());
                continue;
            }
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse("DIMACS", line_no, 1, "duplicate header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(Error::parse("DIMACS", line_no, 1, "expected 'p cnf <vars> <clauses>'"));
            }
            let parse_count = |s: &str, col| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse("DIMACS", line_no, col, format!("invalid count '{s}'")))
            };
            header = Some((parse_count(fields[2], 7)?, parse_count(fields[3], 7)?));
            continue;
        }
        if header.is_none() {
            return Err(Error::parse("DIMACS", line_no, 1, "clause data before the 'p cnf' header"));
        }
        for (col, token) in tokens_with_columns(raw) {
            let value: i64 = token.parse().map_err(|_| {
                Error::parse("DIMACS", line_no, col, format!("invalid literal '{token}'"))
            })?;
            if value == 0 {
                doc.clauses.push(Clause::new(std::mem::take(&mut current)));
                continue;
            }
            if value.unsigned_abs() > i32::MAX as u64 {
                return Err(Error::parse("DIMACS", line_no, col, "variable index too large"));
            }
            let lit = Lit::from_dimacs(value as i32).unwrap();
            max_var = max_var.max(lit.var() as usize);
            current.push(lit);
        }
    }

    let (n_vars, n_clauses) =
        header.ok_or_else(|| Error::parse("DIMACS", last_line.max(1), 1, "missing 'p cnf' header"))?;
    if !current.is_empty() {
        return Err(Error::parse("DIMACS", last_line, 1, "final clause is not terminated by 0"));
    }
    if max_var > n_vars {
        let msg = format!("header declares {n_vars} variables but variable {max_var} occurs");
        warn!("{msg}");
        doc.warnings.push(msg);
    }
    if doc.clauses.len() != n_clauses {
        let msg = format!(
            "header declares {n_clauses} clauses but {} were read",
            doc.clauses.len()
        );
        warn!("{msg}");
        doc.warnings.push(msg);
    }
    doc.n_vars = n_vars.max(max_var);
    doc.n_clauses = n_clauses;
    Ok(doc)
}

pub fn write_dimacs(formula: &CnfFormula) -> String {
    write_dimacs_with_comments(formula, &[])
}

pub fn write_dimacs_with_comments(formula: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {c}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", formula.n_vars, formula.clauses.len());
    for clause in &formula.clauses {
        for l in &clause.lits {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f.n_vars, 2);
        assert_eq!(f.clauses, vec![Clause::from_dimacs(&[1, -2])]);
    }

    #[test]
    fn comments_are_skipped() {
        let doc = parse_dimacs_doc("c hi\np cnf 1 1\n1 0").unwrap();
        assert_eq!(doc.n_vars, 1);
        assert_eq!(doc.clauses.len(), 1);
        assert_eq!(doc.comments, vec!["hi".to_string()]);
    }

    #[test]
    fn clause_spanning_lines() {
        let f = parse_dimacs("p cnf 2 1\n1\n-2 0\n").unwrap();
        assert_eq!(f.clauses, vec![Clause::from_dimacs(&[1, -2])]);
    }

    #[test]
    fn several_clauses_per_line_and_crlf() {
        let f = parse_dimacs("p cnf 3 2\r\n1 2 0 -3 0\r\n").unwrap();
        assert_eq!(f.clauses.len(), 2);
        assert_eq!(f.clauses[1], Clause::from_dimacs(&[-3]));
    }

    #[test]
    fn count_mismatches_are_warnings() {
        let doc = parse_dimacs_doc("p cnf 1 3\n1 2 0\n").unwrap();
        assert_eq!(doc.n_vars, 2);
        assert_eq!(doc.warnings.len(), 2);
    }

    #[test]
    fn percent_terminator() {
        let f = parse_dimacs("p cnf 1 1\n1 0\n%\n0\n").unwrap();
        assert_eq!(f.clauses.len(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_dimacs("p cnf x 1\n1 0"),
            Err(Error::Parse { .. })
        ));
        assert!(parse_dimacs("p cnf 1 1\n1 a 0").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 -2").is_err());
        assert!(parse_dimacs("1 0\n").is_err());
        assert!(parse_dimacs("").is_err());
        let err = parse_dimacs("p cnf 2 1\n1 b 0").unwrap_err().to_string();
        assert!(err.contains("2:3"), "{err}");
    }

    #[test]
    fn write_then_read() {
        let mut f = CnfFormula::new(4);
        f.push(Clause::from_dimacs(&[1, -4]));
        f.push(Clause::from_dimacs(&[2]));
        let text = write_dimacs_with_comments(&f, &["generated".into()]);
        assert_eq!(text, "c generated\np cnf 4 2\n1 -4 0\n2 0\n");
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }
}
