//! Reader and writer for the text LP file format.
//!
//! The writer emits `Minimize` with a zero objective, then `Subject To`,
//! `Bounds`, `Binaries`, `Generals` and `End`, everything ordered by var id
//! and constraint index. The reader accepts that subset of the format and
//! lists binaries before general integers, which reproduces the ids of
//! every model that declares its binaries first.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::model::{IlpModel, LinearConstraint, Sense, VarId, VarKind};
use super::IlpError;

const TERMS_PER_LINE: usize = 8;

pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ Problem: {}", model.name);
    out.push_str("Minimize\n obj: 0\nSubject To\n");
    for c in model.constraints() {
        let _ = write!(out, " {}:", c.name);
        if c.terms.is_empty() {
            out.push_str(" 0");
        }
        for (k, &(a, v)) in c.terms.iter().enumerate() {
            if k > 0 && k % TERMS_PER_LINE == 0 {
                out.push_str("\n   ");
            }
            let name = &model.var(v).name;
            match (k, a) {
                (0, 1) => {
                    let _ = write!(out, " {name}");
                }
                (0, -1) => {
                    let _ = write!(out, " -{name}");
                }
                (0, _) => {
                    let _ = write!(out, " {a} {name}");
                }
                (_, 1) => {
                    let _ = write!(out, " + {name}");
                }
                (_, -1) => {
                    let _ = write!(out, " - {name}");
                }
                (_, a) if a < 0 => {
                    let _ = write!(out, " - {} {name}", -a);
                }
                (_, a) => {
                    let _ = write!(out, " + {a} {name}");
                }
            }
        }
        let _ = writeln!(out, " {} {}", c.sense, c.rhs);
    }

    out.push_str("Bounds\n");
    for var in model.vars() {
        if let VarKind::Integer { lo, hi } = var.kind {
            let _ = writeln!(out, " {lo} <= {} <= {hi}", var.name);
        }
    }
    write_name_list(&mut out, "Binaries", model, |k| k == VarKind::Binary);
    write_name_list(&mut out, "Generals", model, |k| k != VarKind::Binary);
    out.push_str("End\n");
    out
}

fn write_name_list(
    out: &mut String,
    header: &str,
    model: &IlpModel,
    keep: impl Fn(VarKind) -> bool,
) {
    out.push_str(header);
    out.push('\n');
    let names: Vec<&str> = model
        .vars()
        .iter()
        .filter(|v| keep(v.kind))
        .map(|v| v.name.as_str())
        .collect();
    for chunk in names.chunks(TERMS_PER_LINE * 2) {
        out.push(' ');
        out.push_str(&chunk.join(" "));
        out.push('\n');
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Generals,
    End,
}

fn section_header(line: &str) -> Option<Section> {
    match line.to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "min" | "maximize" | "maximise" | "max" => {
            Some(Section::Objective)
        }
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "binaries" | "binary" | "bin" => Some(Section::Binaries),
        "generals" | "general" | "gen" => Some(Section::Generals),
        "end" => Some(Section::End),
        _ => None,
    }
}

/// Parses the LP subset written by [`export_lp`].
pub fn parse_lp(text: &str) -> Result<IlpModel, IlpError> {
    let mut name = String::new();
    let mut section = Section::Preamble;
    let mut constraint_tokens: Vec<String> = Vec::new();
    let mut bounds: HashMap<String, (i64, i64)> = HashMap::new();
    let mut binaries: Vec<String> = Vec::new();
    let mut generals: Vec<String> = Vec::new();

    for raw in text.lines() {
        let (body, comment) = match raw.find('\\') {
            Some(k) => (&raw[..k], Some(&raw[k + 1..])),
            None => (raw, None),
        };
        if let Some(rest) = comment.and_then(|c| c.trim().strip_prefix("Problem:")) {
            name = rest.trim().to_string();
        }
        let line = body.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(next) = section_header(line) {
            section = next;
            continue;
        }
        match section {
            Section::Preamble => {
                return Err(parse_err(format!("content before any section: {line}")))
            }
            Section::Objective => {}
            Section::Constraints => constraint_tokens.extend(tokenize(line)),
            Section::Bounds => {
                let (var, lo, hi) = parse_bound(line)?;
                bounds.insert(var, (lo, hi));
            }
            Section::Binaries => binaries.extend(line.split_whitespace().map(str::to_string)),
            Section::Generals => generals.extend(line.split_whitespace().map(str::to_string)),
            Section::End => return Err(parse_err(format!("content after End: {line}"))),
        }
    }
    if section != Section::End {
        return Err(parse_err("missing End"));
    }

    let mut model = IlpModel::new(name);
    let mut ids: HashMap<String, VarId> = HashMap::new();
    for b in binaries {
        if ids.contains_key(&b) {
            return Err(parse_err(format!("variable {b} declared twice")));
        }
        let id = model.add_binary(b.clone());
        ids.insert(b, id);
    }
    for g in generals {
        if ids.contains_key(&g) {
            return Err(parse_err(format!("variable {g} declared twice")));
        }
        let (lo, hi) = *bounds
            .get(&g)
            .ok_or_else(|| parse_err(format!("general {g} has no bounds")))?;
        let id = model.add_integer(g.clone(), lo, hi)?;
        ids.insert(g, id);
    }
    for c in parse_constraints(&constraint_tokens, &ids)? {
        model.add_constraint(c)?;
    }
    Ok(model)
}

fn parse_err(msg: impl Into<String>) -> IlpError {
    IlpError::Parse(msg.into())
}

/// Splits a line into names, numbers, signs, senses and `name:` labels.
fn tokenize(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in line.split_whitespace() {
        let mut rest = word;
        while !rest.is_empty() {
            let first = rest.chars().next().expect("non-empty");
            let len = if rest.starts_with("<=")
                || rest.starts_with(">=")
                || rest.starts_with("=<")
                || rest.starts_with("=>")
            {
                2
            } else if matches!(first, '<' | '>' | '=' | '+') {
                1
            } else if first == '-' {
                // keep a sign glued to a number ("-1") but split it from names
                match rest[1..].chars().next() {
                    Some(c) if c.is_ascii_digit() => rest
                        .find(|c: char| !(c.is_ascii_digit() || c == '-'))
                        .unwrap_or(rest.len()),
                    _ => 1,
                }
            } else {
                rest.find(['<', '>', '=', '+', '-']).unwrap_or(rest.len())
            };
            let (tok, tail) = rest.split_at(len);
            out.push(tok.to_string());
            rest = tail;
        }
    }
    out
}

fn parse_sense(tok: &str) -> Option<Sense> {
    match tok {
        "<=" | "=<" | "<" => Some(Sense::Le),
        ">=" | "=>" | ">" => Some(Sense::Ge),
        "=" => Some(Sense::Eq),
        _ => None,
    }
}

fn parse_constraints(
    tokens: &[String],
    ids: &HashMap<String, VarId>,
) -> Result<Vec<LinearConstraint>, IlpError> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < tokens.len() {
        let label = tokens[k]
            .strip_suffix(':')
            .ok_or_else(|| parse_err(format!("expected constraint label, found {}", tokens[k])))?;
        k += 1;
        let mut terms = Vec::new();
        let mut sign = 1i64;
        let mut coef: Option<i64> = None;
        let sense = loop {
            let tok = tokens
                .get(k)
                .ok_or_else(|| parse_err(format!("constraint {label} has no sense")))?;
            k += 1;
            if let Some(s) = parse_sense(tok) {
                if coef.is_some_and(|c| c != 0) {
                    return Err(parse_err(format!("constant term in constraint {label}")));
                }
                break s;
            }
            match tok.as_str() {
                "+" => sign = 1,
                "-" => sign = -1,
                t if t.parse::<i64>().is_ok() => coef = Some(t.parse::<i64>().expect("checked")),
                t => {
                    let var = *ids
                        .get(t)
                        .ok_or_else(|| parse_err(format!("undeclared variable {t} in {label}")))?;
                    terms.push((sign * coef.unwrap_or(1), var));
                    sign = 1;
                    coef = None;
                }
            }
        };
        let rhs = tokens
            .get(k)
            .and_then(|t| t.parse::<i64>().ok())
            .ok_or_else(|| {
                parse_err(format!("constraint {label} has no integer right-hand side"))
            })?;
        k += 1;
        out.push(LinearConstraint::new(label, terms, sense, rhs));
    }
    Ok(out)
}

fn parse_bound(line: &str) -> Result<(String, i64, i64), IlpError> {
    let toks = tokenize(line);
    match toks.as_slice() {
        [lo, le1, var, le2, hi]
            if parse_sense(le1) == Some(Sense::Le) && parse_sense(le2) == Some(Sense::Le) =>
        {
            let lo = lo
                .parse()
                .map_err(|_| parse_err(format!("bad lower bound in {line}")))?;
            let hi = hi
                .parse()
                .map_err(|_| parse_err(format!("bad upper bound in {line}")))?;
            Ok((var.clone(), lo, hi))
        }
        _ => Err(parse_err(format!("unsupported bound line: {line}"))),
    }
}
