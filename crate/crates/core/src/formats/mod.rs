//! Readers and writers for DIMACS CNF, ACTS, Extended ACTS, CASA and CSV suites.
//!
//! Readers accept LF or CRLF line endings; writers emit LF.

mod acts;
mod casa;
mod dimacs;
mod suite;

pub use acts::{parse_acts, parse_extended_acts, write_acts, write_extended_acts};
pub use casa::{
    casa_to_model, model_to_casa, parse_casa, parse_casa_doc, write_casa, write_casa_doc,
    CasaDoc, CasaSymbol,
};
pub use dimacs::{parse_dimacs, parse_dimacs_doc, write_dimacs, write_dimacs_with_comments, DimacsDoc};
pub use suite::{read_test_suite, write_test_suite};

/// Whitespace-separated tokens of one line with their 1-based character columns.
pub(crate) fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut col = 1;
    std::iter::from_fn(move || {
        let skipped = rest.len() - rest.trim_start().len();
        col += rest[..skipped].chars().count();
        rest = &rest[skipped..];
        if rest.is_empty() {
            return None;
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let (token, tail) = rest.split_at(end);
        let start = col;
        col += token.chars().count();
        rest = tail;
        Some((start, token))
    })
}
