//! Line-oriented text format for arrays.
//!
//! ```text
//! PDA v1
//! q=2 m=3 omega=2 F=8 K=8 S=6
//! cols: 000 100 010 110 001 101 011 111
//! 000 | * * * 110:0 * 101:0 011:0 *
//! ...
//! ```
//!
//! Words are digit strings of exactly `m` characters, coordinate 0 first.
//! Tokens may be separated by any amount of horizontal whitespace.

use std::fmt::Write as _;

use super::{Entry, Label, PdaArray};
use crate::error::{Error, Result};
use crate::qvec::QVec;

const MAGIC: &str = "PDA v1";

pub fn serialize(p: &PdaArray) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(
        out,
        "q={} m={} omega={} F={} K={} S={}",
        p.q(),
        p.m(),
        p.omega(),
        p.f(),
        p.k(),
        p.symbol_count()
    );
    out.push_str("cols:");
    for c in p.cols() {
        let _ = write!(out, " {c}");
    }
    out.push('\n');
    for (r, row) in p.rows().iter().enumerate() {
        let _ = write!(out, "{row} |");
        for e in p.row(r) {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    column: s + 1,
                    text: &line[s..i],
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            column: s + 1,
            text: &line[s..],
        });
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Header {
    q: u8,
    m: usize,
    omega: usize,
    f: usize,
    k: usize,
    s: usize,
}

fn parse_header(line_no: usize, line: &str) -> Result<Header> {
    let toks = tokens(line);
    let keys = ["q", "m", "omega", "F", "K", "S"];
    if toks.len() != keys.len() {
        return Err(err(
            line_no,
            1,
            format!("expected {} key=value fields, found {}", keys.len(), toks.len()),
        ));
    }
    let mut values = [0u64; 6];
    for ((tok, key), slot) in toks.iter().zip(keys).zip(values.iter_mut()) {
        let value = tok
            .text
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| err(line_no, tok.column, format!("expected {key}=<value>")))?;
        *slot = value
            .parse()
            .map_err(|_| err(line_no, tok.column, format!("{key} is not a non-negative integer")))?;
    }
    let q = u8::try_from(values[0])
        .map_err(|_| err(line_no, toks[0].column, "alphabet size too large"))?;
    Ok(Header {
        q,
        m: values[1] as usize,
        omega: values[2] as usize,
        f: values[3] as usize,
        k: values[4] as usize,
        s: values[5] as usize,
    })
}

fn parse_word(h: &Header, line: usize, tok: &Token<'_>) -> Result<QVec> {
    if tok.text.chars().count() != h.m {
        return Err(err(
            line,
            tok.column,
            format!("'{}' does not have exactly {} digits", tok.text, h.m),
        ));
    }
    QVec::parse(h.q, tok.text).map_err(|e| err(line, tok.column, e.to_string()))
}

fn parse_entry(h: &Header, line: usize, tok: &Token<'_>) -> Result<Entry> {
    if tok.text == "*" {
        return Ok(Entry::Star);
    }
    let (word, class) = tok
        .text
        .split_once(':')
        .ok_or_else(|| err(line, tok.column, format!("'{}' is neither '*' nor word:class", tok.text)))?;
    let vector = parse_word(
        h,
        line,
        &Token {
            column: tok.column,
            text: word,
        },
    )?;
    let class = class
        .parse::<u32>()
        .map_err(|_| err(line, tok.column + word.len() + 1, format!("bad class id '{class}'")))?;
    Ok(Entry::Symbol(Label::new(vector, class)))
}

/// Parses the text format. The declared `S` must equal the number of
/// distinct labels present.
pub fn parse(text: &str) -> Result<PdaArray> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (n, magic) = lines.next().ok_or_else(|| err(1, 1, "empty input"))?;
    if magic.trim() != MAGIC {
        return Err(err(n, 1, format!("expected '{MAGIC}'")));
    }
    let (n, header_line) = lines.next().ok_or_else(|| err(2, 1, "missing parameter line"))?;
    let h = parse_header(n, header_line)?;

    let (n, cols_line) = lines.next().ok_or_else(|| err(3, 1, "missing cols line"))?;
    let toks = tokens(cols_line);
    match toks.first() {
        Some(t) if t.text == "cols:" => {}
        _ => return Err(err(n, 1, "expected 'cols:'")),
    }
    if toks.len() - 1 != h.k {
        return Err(err(n, 1, format!("expected {} column labels, found {}", h.k, toks.len() - 1)));
    }
    let cols = toks[1..]
        .iter()
        .map(|t| parse_word(&h, n, t))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(h.f);
    let mut grid = Vec::with_capacity(h.f * h.k);
    let mut last_line = n;
    for (n, line) in lines {
        last_line = n;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        if rows.len() == h.f {
            return Err(err(n, toks[0].column, format!("more than F={} rows", h.f)));
        }
        rows.push(parse_word(&h, n, &toks[0])?);
        match toks.get(1) {
            Some(t) if t.text == "|" => {}
            Some(t) => return Err(err(n, t.column, "expected '|'")),
            None => return Err(err(n, line.len() + 1, "expected '|'")),
        }
        if toks.len() - 2 != h.k {
            return Err(err(n, 1, format!("expected {} entries, found {}", h.k, toks.len() - 2)));
        }
        for t in &toks[2..] {
            grid.push(parse_entry(&h, n, t)?);
        }
    }
    if rows.len() != h.f {
        return Err(err(last_line, 1, format!("expected F={} rows, found {}", h.f, rows.len())));
    }
    let p = PdaArray::new(h.q, h.m, h.omega, rows, cols, grid)
        .map_err(|e| err(2, 1, e.to_string()))?;
    if p.symbol_count() != h.s {
        return Err(err(
            2,
            1,
            format!("declared S={} but {} distinct labels are present", h.s, p.symbol_count()),
        ));
    }
    Ok(p)
}

impl std::str::FromStr for PdaArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}
