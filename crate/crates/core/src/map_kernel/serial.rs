//! The `PMAP 1` text format.
//!
//! ```text
//! PMAP 1 <darts> <root>
//! twin: t_0 t_1 ...
//! next: n_0 n_1 ...
//! ```
//! Single spaces, base-10 integers, exactly one trailing newline.

use super::{build_map, MapError, PlanarMap};
use std::fmt::Write;

pub fn serialize(m: &PlanarMap) -> String {
    let mut s = String::with_capacity(16 + 12 * m.darts());
    writeln!(s, "PMAP 1 {} {}", m.darts(), m.root()).unwrap();
    s.push_str("twin:");
    for d in 0..m.darts() {
        write!(s, " {}", d ^ 1).unwrap();
    }
    s.push_str("\nnext:");
    for &x in m.next_slice() {
        write!(s, " {x}").unwrap();
    }
    s.push('\n');
    s
}

fn err(line: usize, column: usize, msg: impl Into<String>) -> MapError {
    MapError::Parse { line, column, msg: msg.into() }
}

fn parse_uint(tok: &str, line: usize, column: usize) -> Result<usize, MapError> {
    let canonical = tok == "0" || (!tok.is_empty() && !tok.starts_with('0'));
    if !canonical || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, column, format!("expected a base-10 integer, found {tok:?}")));
    }
    tok.parse().map_err(|_| err(line, column, format!("integer out of range: {tok}")))
}

/// Splits on single spaces, returning tokens with their 1-based columns.
fn tokens(s: &str, line: usize) -> Result<Vec<(usize, &str)>, MapError> {
    let mut out = Vec::new();
    let mut col = 1;
    for tok in s.split(' ') {
        if tok.is_empty() {
            return Err(err(line, col, "unexpected whitespace"));
        }
        out.push((col, tok));
        col += tok.len() + 1;
    }
    Ok(out)
}

fn parse_list(line_text: &str, tag: &str, expected: usize, line: usize) -> Result<Vec<usize>, MapError> {
    let rest = line_text
        .strip_prefix(tag)
        .ok_or_else(|| err(line, 1, format!("expected line to start with {tag:?}")))?;
    if expected == 0 {
        return if rest.is_empty() { Ok(Vec::new()) } else { Err(err(line, tag.len() + 1, "too many entries")) };
    }
    let rest = rest
        .strip_prefix(' ')
        .ok_or_else(|| err(line, tag.len() + 1, "expected a single space"))?;
    let toks = tokens(rest, line)?;
    if toks.len() != expected {
        return Err(err(line, tag.len() + 2, format!("expected {expected} entries, found {}", toks.len())));
    }
    toks.into_iter().map(|(c, t)| parse_uint(t, line, c + tag.len() + 1)).collect()
}

pub fn deserialize(text: &str) -> Result<PlanarMap, MapError> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| err(text.lines().count().max(1), 1, "missing trailing newline"))?;
    let lines: Vec<&str> = body.split('\n').collect();
    if lines.len() != 3 {
        return Err(err(lines.len().min(4), 1, format!("expected 3 lines, found {}", lines.len())));
    }
    let head = tokens(lines[0], 1)?;
    if head.len() != 4 || head[0].1 != "PMAP" || head[1].1 != "1" {
        return Err(err(1, 1, "expected header `PMAP 1 <darts> <root>`"));
    }
    let darts = parse_uint(head[2].1, 1, head[2].0)?;
    let root = parse_uint(head[3].1, 1, head[3].0)?;
    let twin = parse_list(lines[1], "twin:", darts, 2)?;
    let next = parse_list(lines[2], "next:", darts, 3)?;
    build_map(darts, &twin, &next, root)
}
