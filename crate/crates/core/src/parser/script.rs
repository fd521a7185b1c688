//! Line-oriented proof scripts.
//!
//! ```text
//! # comment
//! theory T-inf-0
//! goal <formula>
//! 1. <formula> ; axiom EXT
//! 2. <formula> ; assume
//! 3. <formula> ; schema separation(alpha = alpha)
//! 4. <formula> ; logic refl
//! 5. <formula> ; from 1, 4 by MP
//! 6. <formula> ; from 5 by RULE-C [Ghat]
//! ```
//!
//! Justifications cite earlier step numbers; the formula of every step is
//! written out in full. The header names the ambient theory and the goal.

use super::{parse_formula_raw, ParseError, SourceSpan};
use crate::kernel::{Justification, LogicAxiom, ProofScript, RuleId, SchemaArg, Step};
use crate::theories::TheoryId;

fn err(line: u32, column: u32, expected: &str, found: impl Into<String>) -> ParseError {
    ParseError {
        span: SourceSpan { line, column, length: 1 },
        expected: vec![expected.to_string()],
        found: found.into(),
    }
}

/// Parse a proof script; every justification reference is resolved here,
/// and a dangling one is a parse error naming both positions.
pub fn parse_proof_script(text: &str) -> Result<ProofScript, ParseError> {
    let mut theory: Option<TheoryId> = None;
    let mut goal = None;
    let mut steps: Vec<Step> = Vec::new();
    let mut seen: Vec<(usize, u32)> = Vec::new(); // (index, line)

    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 as u32 + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("theory ") {
            let id = rest.trim();
            theory = Some(
                TheoryId::parse(id).ok_or_else(|| err(lineno, 1, "a theory id", id))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("goal ") {
            let parsed = parse_formula_raw(rest.trim())
                .map_err(|e| reline(e, lineno, raw.find("goal ").unwrap_or(0) as u32 + 6))?;
            goal = Some(parsed.formula);
            continue;
        }
        // Step line: "N. <formula> ; <justification>"
        let (index_part, rest) = line
            .split_once('.')
            .ok_or_else(|| err(lineno, 1, "a step number followed by `.`", line))?;
        let index: usize = index_part
            .trim()
            .parse()
            .map_err(|_| err(lineno, 1, "a step number", index_part.trim()))?;
        if let Some((prev, _)) = seen.last() {
            if index <= *prev {
                return Err(err(
                    lineno,
                    1,
                    "a step number greater than the previous one",
                    index.to_string(),
                ));
            }
        }
        let semi = last_top_level_semi(rest)
            .ok_or_else(|| err(lineno, 1, "`;` before the justification", line))?;
        let formula_text = &rest[..semi];
        let just_text = rest[semi + 1..].trim();
        let col0 = (raw.len() - raw.trim_start().len()) as u32
            + index_part.len() as u32
            + 2;
        let parsed =
            parse_formula_raw(formula_text.trim()).map_err(|e| reline(e, lineno, col0))?;
        let (justification, fresh) =
            parse_justification(just_text, lineno, index, &seen)?;
        seen.push((index, lineno));
        steps.push(Step { index, formula: parsed.formula, justification, fresh_constants: fresh });
    }

    let theory = theory.ok_or_else(|| err(1, 1, "a `theory <id>` header line", "none"))?;
    let goal = goal.ok_or_else(|| err(1, 1, "a `goal <formula>` header line", "none"))?;
    if steps.is_empty() {
        return Err(err(1, 1, "at least one proof step", "none"));
    }
    Ok(ProofScript { theory, goal, steps })
}

fn reline(mut e: ParseError, line: u32, col_offset: u32) -> ParseError {
    // Sub-parses are single-line; rebase onto the script line.
    e.span = SourceSpan {
        line,
        column: e.span.column + col_offset,
        length: e.span.length,
    };
    e
}

fn parse_justification(
    text: &str,
    lineno: u32,
    step_index: usize,
    seen: &[(usize, u32)],
) -> Result<(Justification, Vec<String>), ParseError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.first() {
        Some(&"assume") => Ok((Justification::Assume, vec![])),
        Some(&"axiom") => {
            let name = words
                .get(1)
                .ok_or_else(|| err(lineno, 1, "an axiom name after `axiom`", text))?;
            let (theory, axiom) = match name.split_once('.') {
                Some((t, a)) => {
                    let tid = TheoryId::parse(t)
                        .ok_or_else(|| err(lineno, 1, "a theory id before `.`", t))?;
                    (Some(tid), a.to_string())
                }
                None => (None, name.to_string()),
            };
            Ok((Justification::Axiom { theory, name: axiom }, vec![]))
        }
        Some(&"logic") => {
            let name =
                words.get(1).ok_or_else(|| err(lineno, 1, "a logic schema name", text))?;
            let ax = LogicAxiom::parse(name)
                .ok_or_else(|| err(lineno, 1, "a logic schema name", *name))?;
            Ok((Justification::Logic(ax), vec![]))
        }
        Some(&"schema") => {
            let rest = text.trim_start_matches("schema").trim();
            let open = rest
                .find('(')
                .ok_or_else(|| err(lineno, 1, "`(` after the schema name", rest))?;
            if !rest.ends_with(')') {
                return Err(err(lineno, 1, "`)` closing the schema arguments", rest));
            }
            let name = rest[..open].trim().to_string();
            let args_text = &rest[open + 1..rest.len() - 1];
            let mut args = Vec::new();
            for part in split_top_level(args_text) {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                if part.chars().all(|c| c.is_ascii_digit()) {
                    args.push(SchemaArg::Dim(part.parse().map_err(|_| {
                        err(lineno, 1, "a small dimension", part)
                    })?));
                } else {
                    let f = parse_formula_raw(part).map_err(|e| reline(e, lineno, 0))?;
                    args.push(SchemaArg::Formula(f.formula));
                }
            }
            Ok((Justification::Schema { name, args }, vec![]))
        }
        Some(&"from") | Some(&"by") => {
            let by_pos = words.iter().position(|w| *w == "by");
            let (premise_words, rule_words): (Vec<&str>, &[&str]) = match by_pos {
                Some(0) => (vec![], &words[1..]),
                Some(i) => (words[1..i].to_vec(), &words[i + 1..]),
                None => return Err(err(lineno, 1, "`by <rule>`", text)),
            };
            let mut premises = Vec::new();
            for w in premise_words.join(" ").split(',') {
                let w = w.trim();
                if w.is_empty() {
                    continue;
                }
                let idx: usize =
                    w.parse().map_err(|_| err(lineno, 1, "a premise step number", w))?;
                match seen.iter().find(|(i, _)| *i == idx) {
                    Some(_) => premises.push(idx),
                    None => {
                        return Err(err(
                            lineno,
                            1,
                            "a reference to an earlier step",
                            format!(
                                "unknown step {idx} (cited at step {step_index}, line {lineno})"
                            ),
                        ))
                    }
                }
            }
            let rule_name = rule_words
                .first()
                .ok_or_else(|| err(lineno, 1, "a rule name after `by`", text))?;
            let rule = RuleId::parse(rule_name)
                .ok_or_else(|| err(lineno, 1, "a rule name", *rule_name))?;
            // Optional fresh-constant list: [name, name]
            let tail = rule_words[1..].join(" ");
            let mut fresh = Vec::new();
            let tail = tail.trim();
            if !tail.is_empty() {
                if !(tail.starts_with('[') && tail.ends_with(']')) {
                    return Err(err(lineno, 1, "`[fresh-names]` or end of line", tail));
                }
                for n in tail[1..tail.len() - 1].split(',') {
                    let n = n.trim();
                    if !n.is_empty() {
                        fresh.push(n.to_string());
                    }
                }
            }
            Ok((Justification::Rule { premises, rule }, fresh))
        }
        _ => Err(err(lineno, 1, "a justification", text)),
    }
}

/// Position of the last `;` outside any bracket pair: the separator
/// between the formula and its justification. Matrix rows inside either
/// part also use `;`, but only inside brackets.
fn last_top_level_semi(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ';' if depth == 0 => found = Some(i),
            _ => {}
        }
    }
    found
}

/// Split at commas not nested inside parentheses, brackets, or braces.
/// Angle-bracket pairs are not tracked (the arrows `->` and `<->` contain
/// those characters); pair terms in schema arguments use `( , )`.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}
