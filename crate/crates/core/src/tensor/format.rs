//! Text format for map files.
//!
//! ```text
//! # triangular n=2, d=3: F = (x1 - x2^3, x2)
//! map triangular-2-3
//! n 2
//! d 3
//! w 1 2 2 2 6/1
//! end
//! ```
//!
//! Indices are 1-based. Lower indices may be listed in any order; entries
//! whose sorted keys coincide are summed. `#` starts a comment. Values are
//! `p/q` or a bare integer `p`.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{PolyMap, SymTensor, TensorError};
use crate::algebra::{fmt_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct MapFileError {
    pub line: usize,
    pub kind: MapFileErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapFileErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("entry has {found} lower indices, expected d = {expected}")]
    Arity { expected: usize, found: usize },
    #[error("missing `map` header")]
    MissingHeader,
    #[error("`{0}` must be declared before this line")]
    Undeclared(&'static str),
    #[error("missing `end`")]
    MissingEnd,
    #[error(transparent)]
    Tensor(TensorError),
}

fn err(line: usize, kind: MapFileErrorKind) -> MapFileError {
    MapFileError { line, kind }
}

fn syntax(line: usize, msg: impl Into<String>) -> MapFileError {
    err(line, MapFileErrorKind::Syntax(msg.into()))
}

fn parse_rational(tok: &str, line: usize) -> Result<Rational, MapFileError> {
    let (p, q) = match tok.split_once('/') {
        Some((p, q)) => (p, q),
        None => (tok, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| syntax(line, format!("bad rational `{tok}`")))?;
    let q: BigInt = q.parse().map_err(|_| syntax(line, format!("bad rational `{tok}`")))?;
    if q.is_zero() {
        return Err(syntax(line, format!("zero denominator in `{tok}`")));
    }
    Ok(Rational::new(p, q))
}

fn parse_count(tok: Option<&str>, what: &str, line: usize) -> Result<usize, MapFileError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("`{what}` needs a value")))?;
    tok.parse().map_err(|_| syntax(line, format!("bad value `{tok}` for `{what}`")))
}

pub fn parse_map(text: &str) -> Result<PolyMap, MapFileError> {
    let mut name: Option<Option<String>> = None;
    let mut n: Option<usize> = None;
    let mut d: Option<usize> = None;
    let mut tensor: Option<SymTensor> = None;
    let mut ended = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if ended {
            return Err(syntax(line, "content after `end`"));
        }
        let mut toks = content.split_whitespace();
        let keyword = toks.next().unwrap_or_default();
        if name.is_none() && keyword != "map" {
            return Err(err(line, MapFileErrorKind::MissingHeader));
        }
        match keyword {
            "map" => {
                if name.is_some() {
                    return Err(syntax(line, "duplicate `map` header"));
                }
                let label = toks.next().map(str::to_string);
                if toks.next().is_some() {
                    return Err(syntax(line, "map name must be a single token"));
                }
                name = Some(label);
            }
            "n" | "d" => {
                let value = parse_count(toks.next(), keyword, line)?;
                if toks.next().is_some() {
                    return Err(syntax(line, format!("trailing tokens after `{keyword}`")));
                }
                let slot = if keyword == "n" { &mut n } else { &mut d };
                if slot.is_some() {
                    return Err(syntax(line, format!("duplicate `{keyword}`")));
                }
                if tensor.is_some() {
                    return Err(syntax(line, format!("`{keyword}` after the first entry")));
                }
                *slot = Some(value);
            }
            "w" => {
                let (nn, dd) = match (n, d) {
                    (None, _) => return Err(err(line, MapFileErrorKind::Undeclared("n"))),
                    (_, None) => return Err(err(line, MapFileErrorKind::Undeclared("d"))),
                    (Some(nn), Some(dd)) => (nn, dd),
                };
                if tensor.is_none() {
                    tensor = Some(SymTensor::new(nn, dd).map_err(|e| err(line, MapFileErrorKind::Tensor(e)))?);
                }
                let rest: Vec<&str> = toks.collect();
                if rest.len() < 2 {
                    return Err(syntax(line, "`w` needs an upper index, lower indices and a value"));
                }
                let found = rest.len() - 2;
                if found != dd {
                    return Err(err(line, MapFileErrorKind::Arity { expected: dd, found }));
                }
                let mut indices = Vec::with_capacity(dd + 1);
                for tok in &rest[..rest.len() - 1] {
                    let ix: usize = tok.parse().map_err(|_| syntax(line, format!("bad index `{tok}`")))?;
                    if ix == 0 || ix > nn {
                        return Err(err(line, MapFileErrorKind::IndexOutOfRange { index: ix, n: nn }));
                    }
                    indices.push(ix - 1);
                }
                let value = parse_rational(rest[rest.len() - 1], line)?;
                tensor
                    .as_mut()
                    .expect("tensor initialised above")
                    .add(indices[0], &indices[1..], value)
                    .map_err(|e| err(line, MapFileErrorKind::Tensor(e)))?;
            }
            "end" => {
                if toks.next().is_some() {
                    return Err(syntax(line, "trailing tokens after `end`"));
                }
                if n.is_none() {
                    return Err(err(line, MapFileErrorKind::Undeclared("n")));
                }
                if d.is_none() {
                    return Err(err(line, MapFileErrorKind::Undeclared("d")));
                }
                ended = true;
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    if name.is_none() {
        return Err(err(last_line.max(1), MapFileErrorKind::MissingHeader));
    }
    if !ended {
        return Err(err(last_line.max(1), MapFileErrorKind::MissingEnd));
    }
    let (nn, dd) = (n.expect("checked at end"), d.expect("checked at end"));
    let tensor = match tensor {
        Some(t) => t,
        None => SymTensor::new(nn, dd).map_err(|e| err(last_line, MapFileErrorKind::Tensor(e)))?,
    };
    Ok(PolyMap::new(tensor, name.flatten()))
}

/// Canonical text: entries sorted, lower indices ascending, values as `p/q`.
pub fn serialize_map(map: &PolyMap) -> String {
    let mut out = String::new();
    match map.name() {
        Some(name) => writeln!(out, "map {name}").unwrap(),
        None => writeln!(out, "map").unwrap(),
    }
    writeln!(out, "n {}", map.n()).unwrap();
    writeln!(out, "d {}", map.d()).unwrap();
    for ((i, key), v) in map.tensor().entries() {
        write!(out, "w {}", i + 1).unwrap();
        for j in key {
            write!(out, " {}", j + 1).unwrap();
        }
        writeln!(out, " {}", fmt_rational(v)).unwrap();
    }
    out.push_str("end\n");
    out
}
