//! ACTS text models and the Extended ACTS superset with an `[Auxiliar]` section.
//!
//! Constraint grammar, loosest first:
//!
//! ```text
//! implies := or ( "=>" implies )?
//! or      := and ( "||" and )*
//! and     := unary ( "&&" unary )*
//! unary   := "!" unary | primary
//! primary := "(" implies ")" | NAME ( ("=" | "==" | "!=") VALUE )?
//! ```
//!
//! A bare `NAME` is an auxiliary or a Boolean parameter read as `NAME = "true"`.
//! A constraint may span several lines; a line opens a new constraint when it
//! carries a `Label:` prefix or when the previous one is syntactically complete.

use std::fmt::Write as _;

use log::warn;

use crate::error::{Error, Result};
use crate::model::{ConstraintExpr, ParamKind, Parameter, SutModel};

const PLAIN: &str = "ACTS";
const EXTENDED: &str = "Extended ACTS";

pub fn parse_acts(text: &str) -> Result<SutModel> {
    parse(text, false)
}

pub fn parse_extended_acts(text: &str) -> Result<SutModel> {
    parse(text, true)
}

/// Plain ACTS; fails with [`Error::Inexpressible`] when the model has auxiliaries.
pub fn write_acts(model: &SutModel) -> Result<String> {
    if !model.aux_vars.is_empty() {
        return Err(Error::Inexpressible {
            format: PLAIN,
            reason: "auxiliary variables need the extended format".into(),
        });
    }
    Ok(write_extended_acts(model))
}

pub fn write_extended_acts(model: &SutModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[System]");
    if model.name.is_empty() {
        let _ = writeln!(out, "Name:");
    } else {
        let _ = writeln!(out, "Name: {}", model.name);
    }
    let _ = writeln!(out, "\n[Parameter]");
    for p in &model.parameters {
        let kind = match p.kind {
            ParamKind::Enum => "enum",
            ParamKind::Bool => "bool",
            ParamKind::Int => "int",
        };
        let _ = writeln!(out, "{} ({kind}) : {}", p.name, p.values.join(","));
    }
    if !model.aux_vars.is_empty() {
        let _ = writeln!(out, "\n[Auxiliar]");
        for a in &model.aux_vars {
            let _ = writeln!(out, "{a} (bool)");
        }
    }
    if !model.constraints.is_empty() {
        let _ = writeln!(out, "\n[Constraint]");
        for c in &model.constraints {
            let _ = writeln!(out, "{}", Printer { model }.expr(c));
        }
    }
    out
}

struct Printer<'a> {
    model: &'a SutModel,
}

impl Printer<'_> {
    fn prec(e: &ConstraintExpr) -> u8 {
        match e {
            ConstraintExpr::Implies(..) => 1,
            ConstraintExpr::Or(_) => 2,
            ConstraintExpr::And(_) => 3,
            ConstraintExpr::Not(_) => 4,
            _ => 5,
        }
    }

    fn child(&self, e: &ConstraintExpr, paren_at_or_below: u8) -> String {
        if Self::prec(e) <= paren_at_or_below {
            format!("({})", self.expr(e))
        } else {
            self.expr(e)
        }
    }

    fn expr(&self, e: &ConstraintExpr) -> String {
        let m = self.model;
        match e {
            ConstraintExpr::Eq { param, value } => {
                let p = &m.parameters[*param];
                format!("{} = \"{}\"", p.name, p.values[*value])
            }
            ConstraintExpr::Neq { param, value } => {
                let p = &m.parameters[*param];
                format!("{} != \"{}\"", p.name, p.values[*value])
            }
            ConstraintExpr::Aux { aux, positive } => {
                let sign = if *positive { "" } else { "!" };
                format!("{sign}{}", m.aux_vars[*aux])
            }
            ConstraintExpr::Not(inner) => format!("!({})", self.expr(inner)),
            ConstraintExpr::And(es) => es
                .iter()
                .map(|x| self.child(x, 3))
                .collect::<Vec<_>>()
                .join(" && "),
            ConstraintExpr::Or(es) => es
                .iter()
                .map(|x| self.child(x, 2))
                .collect::<Vec<_>>()
                .join(" || "),
            ConstraintExpr::Implies(a, b) => {
                format!("{} => {}", self.child(a, 1), self.expr(b))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    System,
    Parameter,
    Auxiliar,
    Constraint,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | '$')
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char)
}

fn strip_quotes(s: &str) -> &str {
    let s = s.trim();
    if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// Column (1-based) of the first non-blank character.
fn indent_col(raw: &str) -> usize {
    raw.chars().take_while(|c| c.is_whitespace()).count() + 1
}

fn parse(text: &str, extended: bool) -> Result<SutModel> {
    let format = if extended { EXTENDED } else { PLAIN };
    let err = |line: usize, col: usize, msg: String| Error::parse(format, line, col, msg);

    let mut name = String::new();
    let mut parameters: Vec<Parameter> = Vec::new();
    let mut aux_vars: Vec<String> = Vec::new();
    let mut constraint_lines: Vec<(usize, &str)> = Vec::new();
    let mut current: Option<Section> = None;
    let mut skipping = false;
    let mut seen: Vec<Section> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("--") || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            let tag = line[1..line.len() - 1].trim().to_ascii_lowercase();
            let section = match tag.as_str() {
                "system" => Section::System,
                "parameter" => Section::Parameter,
                "auxiliar" => Section::Auxiliar,
                "constraint" => Section::Constraint,
                _ => {
                    warn!("{format}: skipping unsupported section [{tag}] at line {line_no}");
                    skipping = true;
                    continue;
                }
            };
            if section == Section::Auxiliar && !extended {
                return Err(err(
                    line_no,
                    indent_col(raw),
                    "[Auxiliar] requires the extended format".into(),
                ));
            }
            if seen.last().is_some_and(|&s| s >= section) {
                return Err(err(
                    line_no,
                    indent_col(raw),
                    format!("section {line} is repeated or out of order"),
                ));
            }
            seen.push(section);
            current = Some(section);
            skipping = false;
            continue;
        }
        if skipping {
            continue;
        }
        match current {
            None => {
                return Err(err(line_no, indent_col(raw), "content before the first section".into()))
            }
            Some(Section::System) => {
                if let Some((key, value)) = line.split_once(':') {
                    if key.trim().eq_ignore_ascii_case("name") {
                        name = value.trim().to_string();
                    }
                }
            }
            Some(Section::Parameter) => {
                parameters.push(parse_parameter(line, line_no, indent_col(raw), format)?);
            }
            Some(Section::Auxiliar) => {
                aux_vars.push(parse_aux(line, line_no, indent_col(raw), format)?);
            }
            Some(Section::Constraint) => constraint_lines.push((line_no, raw)),
        }
    }

    if !seen.contains(&Section::Parameter) {
        let last = text.lines().count().max(1);
        return Err(err(last, 1, "missing [Parameter] section".into()));
    }

    let mut model = SutModel {
        name,
        parameters,
        aux_vars,
        constraints: Vec::new(),
        strength_hint: None,
    };
    // names first, so that constraint errors are reported against a sound symbol table
    model
        .validate()
        .map_err(|e| err(1, 1, e.to_string()))?;

    for group in group_constraints(&constraint_lines) {
        let tokens = lex(&group, format)?;
        let mut parser = ExprParser {
            tokens,
            pos: 0,
            model: &model,
            format,
        };
        let expr = parser.parse_constraint()?;
        model.constraints.push(expr);
    }
    model.validate().map_err(|e| err(1, 1, e.to_string()))?;
    Ok(model)
}

fn parse_parameter(line: &str, line_no: usize, col: usize, format: &'static str) -> Result<Parameter> {
    let err = |msg: String| Error::parse(format, line_no, col, msg);
    let open = line
        .find('(')
        .ok_or_else(|| err(format!("expected 'name (type) : values', found '{line}'")))?;
    let close = line[open..]
        .find(')')
        .map(|i| i + open)
        .ok_or_else(|| err("unterminated parameter type".into()))?;
    let pname = line[..open].trim();
    if !is_ident(pname) {
        return Err(err(format!("invalid parameter name '{pname}'")));
    }
    let kind = match line[open + 1..close].trim().to_ascii_lowercase().as_str() {
        "enum" => ParamKind::Enum,
        "bool" | "boolean" => ParamKind::Bool,
        "int" => ParamKind::Int,
        other => return Err(err(format!("unknown parameter type '{other}'"))),
    };
    let rest = line[close + 1..].trim();
    let values: Vec<String> = if rest.is_empty() {
        if kind != ParamKind::Bool {
            return Err(err(format!("parameter {pname} lists no values")));
        }
        vec!["true".into(), "false".into()]
    } else {
        let list = rest
            .strip_prefix(':')
            .ok_or_else(|| err(format!("expected ':' after the type of {pname}")))?;
        list.split(',').map(|v| strip_quotes(v).to_string()).collect()
    };
    for v in &values {
        if !is_ident(v) {
            return Err(err(format!("invalid value '{v}' for {pname}")));
        }
        if kind == ParamKind::Int && v.parse::<i64>().is_err() {
            return Err(err(format!("value '{v}' of int parameter {pname} is not an integer")));
        }
    }
    Ok(Parameter::new(pname, kind, values))
}

fn parse_aux(line: &str, line_no: usize, col: usize, format: &'static str) -> Result<String> {
    let err = |msg: String| Error::parse(format, line_no, col, msg);
    let (aname, rest) = match line.find('(') {
        Some(open) => (line[..open].trim(), &line[open..]),
        None => (line, ""),
    };
    if !is_ident(aname) {
        return Err(err(format!("invalid auxiliary name '{aname}'")));
    }
    if !rest.is_empty() {
        let close = rest.find(')').ok_or_else(|| err("unterminated type".into()))?;
        let kind = rest[1..close].trim().to_ascii_lowercase();
        if kind != "bool" && kind != "boolean" {
            return Err(err(format!("auxiliary {aname} must be bool, found '{kind}'")));
        }
        let tail = rest[close + 1..].trim();
        if let Some(list) = tail.strip_prefix(':') {
            let mut vals: Vec<String> = list.split(',').map(|v| strip_quotes(v).to_lowercase()).collect();
            vals.sort();
            if vals != ["false", "true"] {
                return Err(err(format!("auxiliary {aname} must range over true,false")));
            }
        } else if !tail.is_empty() {
            return Err(err(format!("unexpected '{tail}' after auxiliary {aname}")));
        }
    }
    Ok(aname.to_string())
}

/// Splits off an optional `Label:` prefix, returning the column where the body starts.
fn strip_label(raw: &str) -> (bool, usize) {
    let start = raw.len() - raw.trim_start().len();
    let body = &raw[start..];
    let ident_len = body.find(|c: char| !is_ident_char(c)).unwrap_or(body.len());
    if ident_len > 0 {
        let after = body[ident_len..].trim_start();
        if let Some(stripped) = after.strip_prefix(':') {
            return (true, raw.len() - stripped.len());
        }
    }
    (false, start)
}

fn paren_depth(s: &str) -> i64 {
    let mut depth = 0;
    let mut quoted = false;
    for c in s.chars() {
        match c {
            '"' => quoted = !quoted,
            '(' if !quoted => depth += 1,
            ')' if !quoted => depth -= 1,
            _ => {}
        }
    }
    depth
}

const TRAILING_OPS: [&str; 6] = ["&&", "||", "=>", "!", "(", "="];
const LEADING_OPS: [&str; 4] = ["&&", "||", "=>", ")"];

/// Groups constraint lines into constraints; each piece is (line, byte offset of body, text).
fn group_constraints<'a>(lines: &[(usize, &'a str)]) -> Vec<Vec<(usize, usize, &'a str)>> {
    let mut groups: Vec<Vec<(usize, usize, &'a str)>> = Vec::new();
    let mut depth = 0i64;
    let mut last_body = "";
    for &(line_no, raw) in lines {
        let (labelled, offset) = strip_label(raw);
        let body = raw[offset..].trim();
        let continues = !groups.is_empty()
            && !labelled
            && (depth > 0
                || TRAILING_OPS.iter().any(|op| last_body.ends_with(op))
                || LEADING_OPS.iter().any(|op| body.starts_with(op)));
        if !continues {
            groups.push(Vec::new());
            depth = 0;
        }
        depth += paren_depth(body);
        last_body = body;
        groups.last_mut().unwrap().push((line_no, offset, raw));
    }
    groups
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Str(String),
    Eq,
    Neq,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(s) => format!("'{s}'"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Eq => "'='".into(),
            Tok::Neq => "'!='".into(),
            Tok::Not => "'!'".into(),
            Tok::And => "'&&'".into(),
            Tok::Or => "'||'".into(),
            Tok::Implies => "'=>'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(pieces: &[(usize, usize, &str)], format: &'static str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for &(line, offset, raw) in pieces {
        let chars: Vec<(usize, char)> = raw.char_indices().collect();
        let col_of = |byte: usize| raw[..byte].chars().count() + 1;
        let mut i = chars.iter().position(|&(b, _)| b >= offset).unwrap_or(chars.len());
        while i < chars.len() {
            let (b, c) = chars[i];
            let next = chars.get(i + 1).map(|&(_, c)| c);
            let col = col_of(b);
            let mut push = |tok, width| {
                out.push(Spanned { tok, line, col });
                width
            };
            let step = match (c, next) {
                (c, _) if c.is_whitespace() => 1,
                ('(', _) => push(Tok::LParen, 1),
                (')', _) => push(Tok::RParen, 1),
                ('=', Some('>')) => push(Tok::Implies, 2),
                ('=', Some('=')) => push(Tok::Eq, 2),
                ('=', _) => push(Tok::Eq, 1),
                ('!', Some('=')) => push(Tok::Neq, 2),
                ('!', _) => push(Tok::Not, 1),
                ('&', Some('&')) => push(Tok::And, 2),
                ('|', Some('|')) => push(Tok::Or, 2),
                ('"', _) => {
                    let end = chars[i + 1..]
                        .iter()
                        .position(|&(_, c)| c == '"')
                        .ok_or_else(|| Error::parse(format, line, col, "unterminated string"))?;
                    let s: String = chars[i + 1..i + 1 + end].iter().map(|&(_, c)| c).collect();
                    push(Tok::Str(s), end + 2)
                }
                (c, _) if is_ident_char(c) => {
                    let len = chars[i..].iter().take_while(|&&(_, c)| is_ident_char(c)).count();
                    let s: String = chars[i..i + len].iter().map(|&(_, c)| c).collect();
                    push(Tok::Name(s), len)
                }
                (c, _) => {
                    return Err(Error::parse(format, line, col, format!("unexpected character '{c}'")))
                }
            };
            i += step;
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    tokens: Vec<Spanned>,
    pos: usize,
    model: &'a SutModel,
    format: &'static str,
}

impl ExprParser<'_> {
    fn error_here(&self, msg: impl Into<String>) -> Error {
        let (line, col) = match self.tokens.get(self.pos).or(self.tokens.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        };
        Error::parse(self.format, line, col, msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|s| &s.tok)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_constraint(&mut self) -> Result<ConstraintExpr> {
        let e = self.implies()?;
        match self.peek() {
            None => Ok(e),
            Some(t) => Err(self.error_here(format!("unexpected {}", t.describe()))),
        }
    }

    fn implies(&mut self) -> Result<ConstraintExpr> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(ConstraintExpr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<ConstraintExpr> {
        let mut parts = vec![self.and()?];
        while self.eat(&Tok::Or) {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            ConstraintExpr::Or(parts)
        })
    }

    fn and(&mut self) -> Result<ConstraintExpr> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::And) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            ConstraintExpr::And(parts)
        })
    }

    fn unary(&mut self) -> Result<ConstraintExpr> {
        if self.eat(&Tok::Not) {
            // `!a` on a bare auxiliary is a negative literal, anything else a negation node
            if let Some(Tok::Name(n)) = self.peek() {
                let follows_op = matches!(
                    self.tokens.get(self.pos + 1).map(|s| &s.tok),
                    Some(Tok::Eq | Tok::Neq)
                );
                if !follows_op {
                    if let Some(aux) = self.model.aux_index(n) {
                        self.pos += 1;
                        return Ok(ConstraintExpr::Aux { aux, positive: false });
                    }
                }
            }
            return Ok(ConstraintExpr::negate(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<ConstraintExpr> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.implies()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error_here("expected ')'"));
                }
                Ok(e)
            }
            Some(Tok::Name(name)) => {
                let name_pos = self.pos;
                self.pos += 1;
                let negated = match self.peek() {
                    Some(Tok::Eq) => false,
                    Some(Tok::Neq) => true,
                    _ => return self.bare_name(&name, name_pos),
                };
                self.pos += 1;
                let value = match self.peek().cloned() {
                    Some(Tok::Str(s)) | Some(Tok::Name(s)) => s,
                    _ => return Err(self.error_here("expected a value")),
                };
                let param = self.model.param_index(&name).ok_or_else(|| {
                    self.pos = name_pos;
                    self.error_here(format!("unknown parameter '{name}'"))
                })?;
                let value_idx = self.model.parameters[param].value_index(&value).ok_or_else(|| {
                    self.error_here(format!("'{value}' is not a value of {name}"))
                })?;
                self.pos += 1;
                Ok(if negated {
                    ConstraintExpr::Neq { param, value: value_idx }
                } else {
                    ConstraintExpr::Eq { param, value: value_idx }
                })
            }
            Some(t) => Err(self.error_here(format!("unexpected {}", t.describe()))),
            None => Err(self.error_here("unexpected end of constraint")),
        }
    }

    fn bare_name(&mut self, name: &str, at: usize) -> Result<ConstraintExpr> {
        if let Some(aux) = self.model.aux_index(name) {
            return Ok(ConstraintExpr::Aux { aux, positive: true });
        }
        if let Some(param) = self.model.param_index(name) {
            if let Some(value) = self.model.parameters[param].true_index() {
                return Ok(ConstraintExpr::Eq { param, value });
            }
            self.pos = at;
            return Err(self.error_here(format!("{name} is not Boolean and needs a comparison")));
        }
        self.pos = at;
        Err(self.error_here(format!("unknown name '{name}'")))
    }
}
