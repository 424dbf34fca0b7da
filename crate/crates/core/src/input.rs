//! Line-oriented input documents: ring, optional weights, the acting
//! ideal, module components (with shifts), and an optional submodule —
//! plus the canonical echo renderer the reports and tools reuse.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::{parse_ideal, MonomialIdeal};
use crate::modules::{FamilyComponent, FamilySpec};
use crate::ring::Ring;

/// Parses a family description.
///
/// Grammar, one declaration per line (`#` starts a comment):
/// `ring <var>+`, optional `weights <int>+`, `ideal I = (<monomials>)`,
/// one or more `module M += [<shift>] / (<monomials>)`, then optionally one
/// `submodule N += (<monomials>)` per module line. The shift bracket and
/// the `/` may be omitted; `=` is accepted for `+=`.
pub fn parse_input(text: &str) -> Result<FamilySpec> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, s)| !s.is_empty())
        .collect();
    let mut cur = 0;

    let Some(&(ln, line)) = lines.get(cur) else {
        return Err(Error::parse(0, "empty input: expected `ring <vars>`"));
    };
    let names: Vec<&str> = strip_keyword(line, "ring")
        .ok_or_else(|| Error::parse(ln, "expected `ring <vars>` first"))?
        .split_whitespace()
        .collect();
    if names.is_empty() {
        return Err(Error::parse(ln, "the ring needs at least one variable"));
    }
    let ring_line = ln;
    cur += 1;

    let mut weights: Option<Vec<u64>> = None;
    if let Some(&(ln, line)) = lines.get(cur) {
        if let Some(rest) = strip_keyword(line, "weights") {
            let parsed = rest
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|_| Error::parse(ln, format!("bad weight `{tok}`")))
                })
                .collect::<Result<Vec<u64>>>()?;
            if parsed.len() != names.len() {
                return Err(Error::parse(
                    ln,
                    format!(
                        "expected {} weights for {} variables, got {}",
                        names.len(),
                        names.len(),
                        parsed.len()
                    ),
                ));
            }
            weights = Some(parsed);
            cur += 1;
        }
    }
    let ring = match weights {
        Some(w) => Ring::new(names.iter().map(|s| s.to_string()).collect(), w),
        None => Ring::standard(&names),
    }
    .map_err(|e| at(ring_line, e))?;
    let ring = Arc::new(ring);

    let Some(&(ln, line)) = lines.get(cur) else {
        return Err(Error::parse(
            0,
            "unexpected end of input: expected `ideal I = (...)`",
        ));
    };
    let rest = strip_keyword(line, "ideal")
        .ok_or_else(|| Error::parse(ln, "expected `ideal I = (...)`"))?;
    let rest = expect_name(rest, "I", ln)?;
    let rest = rest
        .strip_prefix('=')
        .ok_or_else(|| Error::parse(ln, "expected `=` after `ideal I`"))?
        .trim_start();
    let ideal = parse_ideal(rest, &ring).map_err(|e| at(ln, e))?;
    if ideal.is_unit() {
        return Err(Error::parse(ln, "ideal I must be proper"));
    }
    cur += 1;

    struct RawComponent {
        line: usize,
        shift: i64,
        relations: MonomialIdeal,
    }
    let mut modules: Vec<RawComponent> = Vec::new();
    let mut subs: Vec<MonomialIdeal> = Vec::new();
    let mut last_line = ln;
    while let Some(&(ln, line)) = lines.get(cur) {
        cur += 1;
        last_line = ln;
        if let Some(rest) = strip_keyword(line, "module") {
            if !subs.is_empty() {
                return Err(Error::parse(
                    ln,
                    "module lines must precede submodule lines",
                ));
            }
            let rest = expect_name(rest, "M", ln)?;
            let rest = expect_assign(rest, ln)?;
            let (shift, rest) = if let Some(r) = rest.strip_prefix('[') {
                let end = r
                    .find(']')
                    .ok_or_else(|| Error::parse(ln, "unclosed `[` in the shift"))?;
                let shift = r[..end]
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| Error::parse(ln, "the shift must be an integer"))?;
                (shift, r[end + 1..].trim_start())
            } else {
                (0, rest)
            };
            let rest = rest.strip_prefix('/').map(str::trim_start).unwrap_or(rest);
            let relations = parse_ideal(rest, &ring).map_err(|e| at(ln, e))?;
            modules.push(RawComponent {
                line: ln,
                shift,
                relations,
            });
        } else if let Some(rest) = strip_keyword(line, "submodule") {
            if modules.is_empty() {
                return Err(Error::parse(ln, "submodule lines follow the module lines"));
            }
            if subs.len() == modules.len() {
                return Err(Error::parse(
                    ln,
                    "more submodule lines than module components",
                ));
            }
            let rest = expect_name(rest, "N", ln)?;
            let rest = expect_assign(rest, ln)?;
            subs.push(parse_ideal(rest, &ring).map_err(|e| at(ln, e))?);
        } else {
            let hint = match line.split_whitespace().next() {
                Some("ring") => "the ring is declared once, at the top",
                Some("weights") => "weights belong on one line right after the ring",
                Some("ideal") => "ideal I is declared once, before the modules",
                _ => "expected `module M += [shift] / (...)` or `submodule N += (...)`",
            };
            return Err(Error::parse(ln, hint));
        }
    }
    if modules.is_empty() {
        return Err(Error::parse(
            0,
            "at least one `module M += ...` line is required",
        ));
    }
    if !subs.is_empty() && subs.len() != modules.len() {
        return Err(Error::parse(
            last_line,
            format!(
                "expected {} submodule lines to match the module components, found {}",
                modules.len(),
                subs.len()
            ),
        ));
    }
    let components = modules
        .into_iter()
        .enumerate()
        .map(|(i, raw)| {
            FamilyComponent::new(raw.shift, raw.relations, subs.get(i).cloned())
                .map_err(|e| at(raw.line, e))
        })
        .collect::<Result<Vec<_>>>()?;
    FamilySpec::new(ring, ideal, components)
}

/// Canonical echo of a family; `parse_input(render_input(spec))` gives the
/// same spec back.
pub fn render_input(spec: &FamilySpec) -> String {
    let ring = spec.ring();
    let mut out = String::new();
    writeln!(out, "ring {}", ring.vars().join(" ")).unwrap();
    if ring.weights().iter().any(|&w| w != 1) {
        let words: Vec<String> = ring.weights().iter().map(u64::to_string).collect();
        writeln!(out, "weights {}", words.join(" ")).unwrap();
    }
    writeln!(out, "ideal I = {}", spec.ideal().render()).unwrap();
    for c in spec.components() {
        writeln!(
            out,
            "module M += [{}] / {}",
            c.shift(),
            c.relations().render()
        )
        .unwrap();
    }
    if spec.components().iter().any(|c| !c.generators().is_unit()) {
        for c in spec.components() {
            writeln!(out, "submodule N += {}", c.generators().render()).unwrap();
        }
    }
    out
}

/// Strips a leading keyword followed by a token boundary.
fn strip_keyword<'a>(line: &'a str, keyword: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(keyword)?;
    if rest.is_empty() || rest.starts_with(char::is_whitespace) {
        Some(rest.trim_start())
    } else {
        None
    }
}

fn expect_name<'a>(rest: &'a str, name: &str, ln: usize) -> Result<&'a str> {
    let rest = rest
        .strip_prefix(name)
        .filter(|r| !r.starts_with(|c: char| c.is_alphanumeric()))
        .ok_or_else(|| Error::parse(ln, format!("expected the name `{name}` here")))?;
    Ok(rest.trim_start())
}

fn expect_assign(rest: &str, ln: usize) -> Result<&str> {
    rest.strip_prefix("+=")
        .or_else(|| rest.strip_prefix('='))
        .map(str::trim_start)
        .ok_or_else(|| Error::parse(ln, "expected `+=`"))
}

/// Repositions a line-less error at the given input line.
fn at(ln: usize, e: Error) -> Error {
    match e {
        Error::Parse { line: 0, msg } => Error::parse(ln, msg),
        Error::Parse { line, msg } => Error::parse(line, msg),
        other => Error::parse(ln, other.to_string()),
    }
}
