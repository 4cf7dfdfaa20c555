//! Text formats: problem files, DIMACS CNF and witnesses.
//!
//! Problem files are line oriented. `#` starts a comment; blank lines are
//! ignored.
//!
//! ```text
//! species A B C          # optional; otherwise inferred in order of appearance
//! rxn 2A + B -> 2C
//! rxn C ->               # empty side: nothing produced
//! init A=1 B=1/2         # unlisted species start at 0
//! target C=1
//! k 1                    # optional reaction budget
//! ```
//!
//! Witnesses are written either as text (`steps: N` followed by one
//! `step i: label=value ...` line per flux vector, optionally `state i: ...`
//! trace lines) or as JSON `{"steps":[{"r1":"1/2"}], "trace":[...]}`.
//! Reactions are labelled `r1`, `r2`, ... in file order and only nonzero
//! fluxes are listed.

use crate::cnf::{CnfError, CnfFormula};
use crate::crn::{
    valid_species_name, Crn, CrnError, FluxVector, FluxVectorSequence, ReachWitness, Reaction,
    State,
};
use crate::rational::{format_rational, parse_rational, Rational};
use num::{Signed, Zero};
use serde_json::{json, Map, Value};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },
}

fn invalid(line: usize, message: impl Into<String>) -> ProblemError {
    ProblemError::Validation {
        line,
        message: message.into(),
    }
}

/// A reachability instance: network, start state `c`, target `d`, and an
/// optional reaction budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub crn: Crn,
    pub start: State,
    pub target: State,
    pub k: Option<u64>,
}

/// A whitespace-free token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

/// Strips a trailing `#` comment.
fn content(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn check_name(name: &str, line: usize, column: usize) -> Result<(), ParseError> {
    if valid_species_name(name) {
        Ok(())
    } else {
        Err(ParseError::new(
            line,
            column,
            format!("invalid species name '{name}'"),
        ))
    }
}

struct RawTerm<'a> {
    coefficient: u32,
    name: &'a str,
    column: usize,
}

fn parse_side<'a>(
    text: &'a str,
    offset: usize,
    line: usize,
) -> Result<Vec<RawTerm<'a>>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut pos = 0;
    for piece in text.split('+') {
        let column = offset + pos + (piece.len() - piece.trim_start().len()) + 1;
        pos += piece.len() + 1;
        let term = piece.trim();
        if term.is_empty() {
            return Err(ParseError::new(line, column, "missing term around '+'"));
        }
        let split = term
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(term.len());
        let (digits, name) = term.split_at(split);
        let coefficient = if digits.is_empty() {
            1
        } else {
            digits.parse::<u32>().map_err(|_| {
                ParseError::new(line, column, format!("coefficient '{digits}' out of range"))
            })?
        };
        if coefficient == 0 {
            return Err(ParseError::new(
                line,
                column,
                "stoichiometric coefficient 0",
            ));
        }
        if name.is_empty() {
            return Err(ParseError::new(line, column, "missing species name"));
        }
        check_name(name, line, column + digits.len())?;
        terms.push(RawTerm {
            coefficient,
            name,
            column,
        });
    }
    Ok(terms)
}

struct RawReaction<'a> {
    line: usize,
    reactants: Vec<RawTerm<'a>>,
    products: Vec<RawTerm<'a>>,
}

struct RawAssignment<'a> {
    name: &'a str,
    value: Rational,
    column: usize,
}

fn parse_assignments<'a>(
    toks: &[Token<'a>],
    line: usize,
) -> Result<Vec<RawAssignment<'a>>, ParseError> {
    let mut out: Vec<RawAssignment<'a>> = Vec::new();
    for tok in toks {
        let (name, value) = tok.text.split_once('=').ok_or_else(|| {
            ParseError::new(
                line,
                tok.column,
                format!("expected name=value, found '{}'", tok.text),
            )
        })?;
        check_name(name, line, tok.column)?;
        let value_column = tok.column + name.len() + 1;
        let value = parse_rational(value)
            .map_err(|e| ParseError::new(line, value_column + e.offset, e.message))?;
        if out.iter().any(|a| a.name == name) {
            return Err(ParseError::new(
                line,
                tok.column,
                format!("species '{name}' assigned twice"),
            ));
        }
        out.push(RawAssignment {
            name,
            value,
            column: tok.column,
        });
    }
    Ok(out)
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let mut declared: Option<(usize, Vec<String>)> = None;
    let mut reactions = Vec::new();
    let mut init: Option<(usize, Vec<RawAssignment>)> = None;
    let mut target: Option<(usize, Vec<RawAssignment>)> = None;
    let mut k: Option<u64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = content(raw);
        let toks = tokens(body);
        let Some(keyword) = toks.first() else {
            continue;
        };
        match keyword.text {
            "species" => {
                if declared.is_some() {
                    return Err(invalid(line, "second 'species' line"));
                }
                let mut names: Vec<String> = Vec::new();
                for tok in &toks[1..] {
                    check_name(tok.text, line, tok.column)?;
                    if names.iter().any(|n| n == tok.text) {
                        return Err(invalid(
                            line,
                            format!("species '{}' declared twice", tok.text),
                        ));
                    }
                    names.push(tok.text.to_string());
                }
                declared = Some((line, names));
            }
            "rxn" => {
                let rest_offset = keyword.column - 1 + keyword.text.len();
                let rest = &body[rest_offset..];
                let arrow = rest.find("->").ok_or_else(|| {
                    ParseError::new(line, keyword.column, "reaction is missing '->'")
                })?;
                if rest[arrow + 2..].contains("->") {
                    return Err(ParseError::new(
                        line,
                        rest_offset + arrow + 3,
                        "reaction has more than one '->'",
                    )
                    .into());
                }
                let reactants = parse_side(&rest[..arrow], rest_offset, line)?;
                let products = parse_side(&rest[arrow + 2..], rest_offset + arrow + 2, line)?;
                reactions.push(RawReaction {
                    line,
                    reactants,
                    products,
                });
            }
            "init" | "target" => {
                let slot = if keyword.text == "init" {
                    &mut init
                } else {
                    &mut target
                };
                if slot.is_some() {
                    return Err(invalid(line, format!("second '{}' line", keyword.text)));
                }
                *slot = Some((line, parse_assignments(&toks[1..], line)?));
            }
            "k" => {
                if k.is_some() {
                    return Err(invalid(line, "second 'k' line"));
                }
                let [_, value] = toks.as_slice() else {
                    return Err(
                        ParseError::new(line, keyword.column, "expected 'k <natural>'").into(),
                    );
                };
                let parsed = value.text.parse::<u64>().map_err(|_| {
                    ParseError::new(line, value.column, "expected a natural number")
                })?;
                k = Some(parsed);
            }
            other => {
                return Err(ParseError::new(
                    line,
                    keyword.column,
                    format!("unknown directive '{other}'"),
                )
                .into())
            }
        }
    }

    let (init_line, init) = init.ok_or_else(|| invalid(0, "missing 'init' line"))?;
    let (target_line, target) = target.ok_or_else(|| invalid(0, "missing 'target' line"))?;

    let species: Vec<String> = match declared {
        Some((_, names)) => names,
        None => {
            let mut names: Vec<String> = Vec::new();
            let mentioned = reactions
                .iter()
                .flat_map(|r| r.reactants.iter().chain(&r.products).map(|t| t.name))
                .chain(init.iter().map(|a| a.name))
                .chain(target.iter().map(|a| a.name));
            for name in mentioned {
                if !names.iter().any(|n| n == name) {
                    names.push(name.to_string());
                }
            }
            names
        }
    };
    let index: HashMap<&str, usize> = species
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let lookup = |name: &str, line: usize, column: usize| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| ProblemError::Validation {
                line,
                message: format!("column {column}: unknown species '{name}'"),
            })
    };

    let mut built = Vec::with_capacity(reactions.len());
    for raw in &reactions {
        let mut r = vec![0u32; species.len()];
        let mut p = vec![0u32; species.len()];
        for (terms, side) in [(&raw.reactants, &mut r), (&raw.products, &mut p)] {
            for term in terms {
                let s = lookup(term.name, raw.line, term.column)?;
                side[s] = side[s].checked_add(term.coefficient).ok_or_else(|| {
                    invalid(
                        raw.line,
                        format!("coefficient of '{}' overflows", term.name),
                    )
                })?;
            }
        }
        built.push(Reaction::new(r, p).map_err(|e| match e {
            CrnError::ZeroNetChange { .. } => invalid(raw.line, "reaction has zero net change"),
            other => invalid(raw.line, other.to_string()),
        })?);
    }

    let state = |assignments: &[RawAssignment], line: usize| -> Result<State, ProblemError> {
        let mut conc = vec![Rational::zero(); species.len()];
        for a in assignments {
            if a.value.is_negative() {
                return Err(invalid(
                    line,
                    format!(
                        "column {}: negative concentration for '{}'",
                        a.column, a.name
                    ),
                ));
            }
            conc[lookup(a.name, line, a.column)?] = a.value.clone();
        }
        Ok(State::new(conc).expect("checked non-negative"))
    };
    let start = state(&init, init_line)?;
    let target = state(&target, target_line)?;
    let crn = Crn::new(species, built).map_err(|e| invalid(0, e.to_string()))?;
    Ok(ProblemFile {
        crn,
        start,
        target,
        k,
    })
}

fn assignments(crn: &Crn, state: &State, keep_zero: bool) -> Vec<String> {
    state
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, v)| keep_zero || !v.is_zero())
        .map(|(i, v)| format!("{}={}", crn.species()[i], format_rational(v)))
        .collect()
}

fn line_with(keyword: &str, items: &[String]) -> String {
    if items.is_empty() {
        format!("{keyword}\n")
    } else {
        format!("{keyword} {}\n", items.join(" "))
    }
}

/// Canonical problem-file text; [`parse_problem`] reads it back unchanged.
pub fn emit_problem(problem: &ProblemFile) -> String {
    let crn = &problem.crn;
    let mut out = line_with("species", crn.species());
    for j in 0..crn.num_reactions() {
        out.push_str(&format!("rxn {}\n", crn.reaction_text(j)));
    }
    out.push_str(&line_with("init", &assignments(crn, &problem.start, false)));
    out.push_str(&line_with(
        "target",
        &assignments(crn, &problem.target, false),
    ));
    if let Some(k) = problem.k {
        out.push_str(&format!("k {k}\n"));
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: clause has {len} literals, at most 3 allowed")]
    ClauseTooLong { line: usize, len: usize },
}

/// Parses DIMACS CNF. Clauses are `0`-terminated and may span lines; `c`
/// lines are comments and a `%` line ends the clause section.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut clause_lines: Vec<usize> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut current_line = 0;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokens(raw);
        let Some(first) = toks.first() else {
            continue;
        };
        if first.text.starts_with('c') {
            continue;
        }
        if first.text == "%" {
            break;
        }
        if first.text == "p" {
            if header.is_some() {
                return Err(ParseError::new(line, first.column, "second problem line").into());
            }
            let [_, fmt, vars, count] = toks.as_slice() else {
                return Err(ParseError::new(
                    line,
                    first.column,
                    "expected 'p cnf <vars> <clauses>'",
                )
                .into());
            };
            if fmt.text != "cnf" {
                return Err(
                    ParseError::new(line, fmt.column, "only 'cnf' format is supported").into(),
                );
            }
            let vars = vars
                .text
                .parse()
                .map_err(|_| ParseError::new(line, vars.column, "bad variable count"))?;
            let count = count
                .text
                .parse()
                .map_err(|_| ParseError::new(line, count.column, "bad clause count"))?;
            header = Some((line, vars, count));
            continue;
        }
        let Some((_, num_vars, _)) = header else {
            return Err(ParseError::new(line, first.column, "clause before 'p cnf' line").into());
        };
        for tok in &toks {
            let lit: i32 = tok.text.parse().map_err(|_| {
                ParseError::new(line, tok.column, format!("bad literal '{}'", tok.text))
            })?;
            if lit.unsigned_abs() as usize > num_vars {
                return Err(ParseError::new(
                    line,
                    tok.column,
                    format!(
                        "variable {} exceeds declared count {num_vars}",
                        lit.unsigned_abs()
                    ),
                )
                .into());
            }
            if current.is_empty() {
                current_line = line;
            }
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                clause_lines.push(current_line);
            } else {
                current.push(lit);
            }
        }
    }
    let Some((header_line, num_vars, count)) = header else {
        return Err(ParseError::new(last_line.max(1), 1, "missing 'p cnf' line").into());
    };
    if !current.is_empty() {
        return Err(ParseError::new(current_line, 1, "clause not terminated by 0").into());
    }
    if clauses.len() != count {
        return Err(ParseError::new(
            header_line,
            1,
            format!("header declares {count} clauses, found {}", clauses.len()),
        )
        .into());
    }
    CnfFormula::new(num_vars, clauses).map_err(|e| match e {
        CnfError::ClauseTooLong { clause, len } => DimacsError::ClauseTooLong {
            line: clause_lines[clause],
            len,
        },
        CnfError::EmptyClause { clause }
        | CnfError::Tautology { clause, .. }
        | CnfError::VariableOutOfRange { clause, .. } => {
            ParseError::new(clause_lines[clause], 1, e.to_string()).into()
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessFormat {
    Text,
    Json,
}

fn flux_entries(u: &FluxVector) -> Vec<(String, String)> {
    u.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| (Crn::reaction_label(j), format_rational(v)))
        .collect()
}

/// Serializes a witness. Species names in trace states come from `crn`.
pub fn emit_witness(witness: &ReachWitness, crn: &Crn, format: WitnessFormat) -> String {
    let steps = witness.sequence.steps();
    match format {
        WitnessFormat::Text => {
            let mut out = format!("steps: {}\n", steps.len());
            for (i, u) in steps.iter().enumerate() {
                let items: Vec<String> = flux_entries(u)
                    .into_iter()
                    .map(|(l, v)| format!("{l}={v}"))
                    .collect();
                out.push_str(&line_with(&format!("step {}:", i + 1), &items));
            }
            if let Some(trace) = &witness.trace {
                for (i, state) in trace.iter().enumerate() {
                    out.push_str(&line_with(
                        &format!("state {i}:"),
                        &assignments(crn, state, true),
                    ));
                }
            }
            out
        }
        WitnessFormat::Json => {
            let steps: Vec<Value> = steps
                .iter()
                .map(|u| {
                    Value::Object(
                        flux_entries(u)
                            .into_iter()
                            .map(|(l, v)| (l, Value::String(v)))
                            .collect(),
                    )
                })
                .collect();
            let mut doc = json!({ "steps": steps });
            if let Some(trace) = &witness.trace {
                let states: Vec<Value> = trace
                    .iter()
                    .map(|s| {
                        Value::Object(
                            s.as_slice()
                                .iter()
                                .enumerate()
                                .map(|(i, v)| {
                                    (crn.species()[i].clone(), Value::String(format_rational(v)))
                                })
                                .collect::<Map<_, _>>(),
                        )
                    })
                    .collect();
                doc["trace"] = Value::Array(states);
            }
            let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            text.push('\n');
            text
        }
    }
}

fn rational_at(text: &str, line: usize, column: usize) -> Result<Rational, ParseError> {
    parse_rational(text).map_err(|e| ParseError::new(line, column + e.offset, e.message))
}

fn flux_from_pairs<'a>(
    crn: &Crn,
    pairs: impl Iterator<Item = (&'a str, Rational, usize, usize)>,
) -> Result<FluxVector, ParseError> {
    let mut flux = vec![Rational::zero(); crn.num_reactions()];
    let mut seen = vec![false; crn.num_reactions()];
    for (label, value, line, column) in pairs {
        let j = crn.reaction_by_label(label).ok_or_else(|| {
            ParseError::new(line, column, format!("unknown reaction label '{label}'"))
        })?;
        if std::mem::replace(&mut seen[j], true) {
            return Err(ParseError::new(
                line,
                column,
                format!("reaction '{label}' listed twice"),
            ));
        }
        if value.is_negative() {
            return Err(ParseError::new(line, column, "negative flux"));
        }
        flux[j] = value;
    }
    Ok(FluxVector::new(flux).expect("checked non-negative"))
}

fn state_from_pairs<'a>(
    crn: &Crn,
    pairs: impl Iterator<Item = (&'a str, Rational, usize, usize)>,
) -> Result<State, ParseError> {
    let mut conc = vec![Rational::zero(); crn.num_species()];
    for (name, value, line, column) in pairs {
        let s = crn
            .species_index(name)
            .ok_or_else(|| ParseError::new(line, column, format!("unknown species '{name}'")))?;
        if value.is_negative() {
            return Err(ParseError::new(line, column, "negative concentration"));
        }
        conc[s] = value;
    }
    Ok(State::new(conc).expect("checked non-negative"))
}

fn parse_witness_text(text: &str, crn: &Crn) -> Result<ReachWitness, ParseError> {
    let mut declared: Option<usize> = None;
    let mut steps = Vec::new();
    let mut trace = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = content(raw);
        let toks = tokens(body);
        let Some(first) = toks.first() else {
            continue;
        };
        if first.text == "steps:" {
            let [_, n] = toks.as_slice() else {
                return Err(ParseError::new(
                    line,
                    first.column,
                    "expected 'steps: <count>'",
                ));
            };
            if declared.is_some() {
                return Err(ParseError::new(line, first.column, "second 'steps:' line"));
            }
            declared = Some(
                n.text
                    .parse()
                    .map_err(|_| ParseError::new(line, n.column, "bad step count"))?,
            );
            continue;
        }
        let (kind, expected) = match first.text {
            "step" => ("step", steps.len() + 1),
            "state" => ("state", trace.len()),
            other => {
                return Err(ParseError::new(
                    line,
                    first.column,
                    format!("unexpected '{other}'"),
                ));
            }
        };
        if declared.is_none() {
            return Err(ParseError::new(
                line,
                first.column,
                "missing 'steps:' header",
            ));
        }
        let Some(number) = toks.get(1) else {
            return Err(ParseError::new(
                line,
                first.column,
                format!("expected '{kind} <n>:'"),
            ));
        };
        let n: usize = number
            .text
            .strip_suffix(':')
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| {
                ParseError::new(line, number.column, format!("expected '{kind} <n>:'"))
            })?;
        if n != expected {
            return Err(ParseError::new(
                line,
                number.column,
                format!("expected {kind} {expected}, found {n}"),
            ));
        }
        let mut pairs = Vec::new();
        for tok in &toks[2..] {
            let (key, value) = tok
                .text
                .split_once('=')
                .ok_or_else(|| ParseError::new(line, tok.column, "expected name=value"))?;
            let value = rational_at(value, line, tok.column + key.len() + 1)?;
            pairs.push((key, value, line, tok.column));
        }
        if kind == "step" {
            steps.push(flux_from_pairs(crn, pairs.into_iter())?);
        } else {
            trace.push(state_from_pairs(crn, pairs.into_iter())?);
        }
    }
    let declared = declared.ok_or_else(|| ParseError::new(1, 1, "missing 'steps:' header"))?;
    if declared != steps.len() {
        return Err(ParseError::new(
            1,
            1,
            format!("header declares {declared} steps, found {}", steps.len()),
        ));
    }
    finish_witness(steps, trace)
}

fn finish_witness(steps: Vec<FluxVector>, trace: Vec<State>) -> Result<ReachWitness, ParseError> {
    let trace = if trace.is_empty() {
        None
    } else if trace.len() != steps.len() + 1 {
        return Err(ParseError::new(
            1,
            1,
            format!(
                "trace has {} states, expected {}",
                trace.len(),
                steps.len() + 1
            ),
        ));
    } else {
        Some(trace)
    };
    Ok(ReachWitness {
        sequence: FluxVectorSequence::new(steps),
        trace,
    })
}

fn json_pairs(value: &Value, what: &str) -> Result<Vec<(String, Rational)>, ParseError> {
    let object = value
        .as_object()
        .ok_or_else(|| ParseError::new(1, 1, format!("{what} must be a JSON object")))?;
    object
        .iter()
        .map(|(key, v)| {
            let text = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                _ => {
                    return Err(ParseError::new(
                        1,
                        1,
                        format!("{what} entry '{key}' must be a rational string"),
                    ))
                }
            };
            let value = parse_rational(&text).map_err(|e| {
                ParseError::new(1, 1, format!("{what} entry '{key}': {}", e.message))
            })?;
            Ok((key.clone(), value))
        })
        .collect()
}

fn parse_witness_json(text: &str, crn: &Crn) -> Result<ReachWitness, ParseError> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| ParseError::new(e.line(), e.column(), e.to_string()))?;
    let steps = doc
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::new(1, 1, "missing \"steps\" array"))?;
    let steps = steps
        .iter()
        .map(|s| {
            let pairs = json_pairs(s, "step")?;
            flux_from_pairs(
                crn,
                pairs.iter().map(|(k, v)| (k.as_str(), v.clone(), 1, 1)),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let trace = match doc.get("trace") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(states)) => states
            .iter()
            .map(|s| {
                let pairs = json_pairs(s, "state")?;
                state_from_pairs(
                    crn,
                    pairs.iter().map(|(k, v)| (k.as_str(), v.clone(), 1, 1)),
                )
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(ParseError::new(1, 1, "\"trace\" must be an array")),
    };
    finish_witness(steps, trace)
}

/// Reads a witness in either format; JSON is recognized by a leading `{`.
pub fn parse_witness(text: &str, crn: &Crn) -> Result<ReachWitness, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_witness_json(text, crn)
    } else {
        parse_witness_text(text, crn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const WATER: &str = "species A B C\nrxn 2A + B -> 2C\ninit A=1 B=1\ntarget C=1\n";

    #[test]
    fn parses_water_example() {
        let p = parse_problem(WATER).unwrap();
        assert_eq!(p.crn.species(), &["A", "B", "C"]);
        assert_eq!(p.crn.reactions()[0].net_change(), vec![-2, -1, 2]);
        assert_eq!(p.start, State::from_integers(&[1, 1, 0]).unwrap());
        assert_eq!(p.target, State::from_integers(&[0, 0, 1]).unwrap());
        assert_eq!(p.k, None);
    }

    #[test]
    fn infers_species_in_order() {
        let p = parse_problem("rxn B + A -> C\ninit D=1/2\ntarget C=0\nk 2").unwrap();
        assert_eq!(p.crn.species(), &["B", "A", "C", "D"]);
        assert_eq!(p.start[3], ratio(1, 2));
        assert_eq!(p.k, Some(2));
    }

    #[test]
    fn empty_product_side() {
        let p = parse_problem("species A\nrxn A -> \ninit A=1\ntarget\n").unwrap();
        assert_eq!(p.crn.reactions()[0].products(), &[0]);
        assert_eq!(p.crn.reactions()[0].net_change(), vec![-1]);
    }

    #[test]
    fn catalysts_survive_parsing() {
        let p = parse_problem("rxn A + B -> A + C\ninit A=1\ntarget A=1").unwrap();
        assert!(p.crn.reactions()[0].is_catalytic());
        assert_eq!(p.crn.reactions()[0].reactants(), &[1, 1, 0]);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            parse_problem("rxn A -> A\ninit A=1\ntarget A=1"),
            Err(ProblemError::Validation {
                line: 1,
                message: "reaction has zero net change".into()
            })
        );
        assert!(matches!(
            parse_problem("species A\nrxn A -> B\ninit A=1\ntarget A=1"),
            Err(ProblemError::Validation { line: 2, .. })
        ));
        assert!(matches!(
            parse_problem("rxn A -> B\ninit A=-1\ntarget A=1"),
            Err(ProblemError::Validation { line: 2, .. })
        ));
        assert!(matches!(
            parse_problem("rxn A -> B\ntarget A=1"),
            Err(ProblemError::Validation { .. })
        ));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_problem("rxn A -> B\ninit A=1e3\ntarget A=1").unwrap_err();
        assert_eq!(
            err,
            ProblemError::Parse(ParseError::new(
                2,
                9,
                "unexpected character 'e' in rational (only p/q or integers are accepted)"
            ))
        );
        let err = parse_problem("rxn 0A -> B\ninit A=1\ntarget A=1").unwrap_err();
        assert!(matches!(
            err,
            ProblemError::Parse(ParseError {
                line: 1,
                column: 5,
                ..
            })
        ));
        let err = parse_problem("rxn A + -> B").unwrap_err();
        assert!(matches!(
            err,
            ProblemError::Parse(ParseError { line: 1, .. })
        ));
        let err = parse_problem("reaction A -> B").unwrap_err();
        assert!(matches!(
            err,
            ProblemError::Parse(ParseError {
                line: 1,
                column: 1,
                ..
            })
        ));
        let err = parse_problem("rxn A B\n").unwrap_err();
        assert!(matches!(err, ProblemError::Parse(_)));
    }

    #[test]
    fn comments_and_blank_lines() {
        let p =
            parse_problem("# header\n\nrxn A -> B # convert\n  \ninit A=1\ntarget B=1\n").unwrap();
        assert_eq!(p.crn.num_reactions(), 1);
    }

    #[test]
    fn problem_emit_round_trip() {
        let p = parse_problem(
            "species A B C D\nrxn 2A + B -> 2C\nrxn C ->\nrxn -> D\ninit A=1 B=1/2\ntarget\nk 3\n",
        )
        .unwrap();
        let text = emit_problem(&p);
        assert_eq!(parse_problem(&text).unwrap(), p);
    }

    #[test]
    fn dimacs_examples() {
        let f = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        assert_eq!((f.num_vars(), f.clauses()), (1, &[vec![1]][..]));
        let f = parse_dimacs("c two clauses\np cnf 2 2\n1 -2 0\n-1 2 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, -2], vec![-1, 2]]);
        assert_eq!(
            parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"),
            Err(DimacsError::ClauseTooLong { line: 2, len: 4 })
        );
    }

    #[test]
    fn dimacs_multiline_clause_and_errors() {
        let f = parse_dimacs("p cnf 3 1\n1 2\n3 0\n%\n0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2, 3]]);
        assert!(parse_dimacs("1 0").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0").is_err());
        assert!(parse_dimacs("p cnf 1 1\n1").is_err());
        assert!(parse_dimacs("p cnf 1 1\n1 -1 0").is_err());
        assert!(parse_dimacs("p cnf 1 1\nx 0").is_err());
        assert!(parse_dimacs("").is_err());
    }

    fn water_crn() -> Crn {
        parse_problem(WATER).unwrap().crn
    }

    #[test]
    fn empty_witness_text() {
        let w = ReachWitness::new(FluxVectorSequence::empty());
        assert_eq!(
            emit_witness(&w, &water_crn(), WitnessFormat::Text),
            "steps: 0\n"
        );
    }

    #[test]
    fn one_step_witness() {
        let crn = water_crn();
        let w = ReachWitness::new(FluxVectorSequence::new(vec![FluxVector::new(vec![ratio(
            1, 2,
        )])
        .unwrap()]));
        let text = emit_witness(&w, &crn, WitnessFormat::Text);
        assert_eq!(text, "steps: 1\nstep 1: r1=1/2\n");
        assert_eq!(parse_witness(&text, &crn).unwrap(), w);
        let json = emit_witness(&w, &crn, WitnessFormat::Json);
        assert!(json.contains("\"r1\": \"1/2\""));
        assert_eq!(parse_witness(&json, &crn).unwrap(), w);
    }

    #[test]
    fn witness_with_trace_round_trips() {
        let crn = water_crn();
        let start = State::new(vec![int(1), ratio(1, 2), int(0)]).unwrap();
        let w = ReachWitness::new(FluxVectorSequence::new(vec![
            FluxVector::new(vec![ratio(1, 4)]).unwrap(),
            FluxVector::zeros(1),
        ]))
        .with_trace(&crn, &start)
        .unwrap();
        for format in [WitnessFormat::Text, WitnessFormat::Json] {
            let text = emit_witness(&w, &crn, format);
            assert_eq!(parse_witness(&text, &crn).unwrap(), w, "{text}");
        }
    }

    #[test]
    fn witness_errors() {
        let crn = water_crn();
        assert!(parse_witness("steps: 1\nstep 1: r2=1\n", &crn).is_err());
        assert!(parse_witness("steps: 2\nstep 1: r1=1\n", &crn).is_err());
        assert!(parse_witness("steps: 1\nstep 1: r1=-1\n", &crn).is_err());
        assert!(parse_witness("step 1: r1=1\n", &crn).is_err());
        assert!(parse_witness("{\"steps\": [{\"r1\": 0.5}]}", &crn).is_err());
        assert!(parse_witness("{\"steps\": 3}", &crn).is_err());
        assert!(parse_witness("{", &crn).is_err());
    }
}
