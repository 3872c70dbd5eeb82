//! Text formats for algebras, morphisms, integer matrices and the small
//! inline values accepted on the command line.
//!
//! Algebra file:
//!
//! ```text
//! # comment
//! ring 4
//! 0 1 2 3
//! ...            (n rows of n indices: + for rings, the operation otherwise)
//!
//! 0 0 0 0        (rings only, after a blank line: the n rows of ×)
//! ...
//! ```
//!
//! The point must be neutral for the first table. If it is not at index 0
//! the loader swaps it into place, which renumbers elements; morphism files
//! refer to the renumbered indices.
//!
//! Morphism file: a header line `dom-file cod-file` (paths relative to the
//! morphism file), then `dom.size` indices separated by whitespace.
//!
//! Matrix file: `rows cols`, then `rows·cols` integers in row-major order.
//!
//! `#` starts a comment in every format. Anything left over after the last
//! expected token is an error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use galois_core::{FgAb, FiniteAlgebra, IntMatrix, Morphism, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            f.write_str(&self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

/// Lines with comments removed, numbered from 1.
fn lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            (i + 1, l.split_whitespace().collect())
        })
        .collect()
}

fn number<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError {
        line,
        msg: format!("expected a number, found `{tok}`"),
    })
}

struct Cursor<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: lines(text),
            pos: 0,
        }
    }

    fn skip_blank(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.lines.len() && self.lines[self.pos].1.is_empty() {
            self.pos += 1;
        }
        self.pos - start
    }

    fn next_line(&mut self) -> Option<(usize, Vec<&'a str>)> {
        self.skip_blank();
        let l = self.lines.get(self.pos).cloned();
        self.pos += 1;
        l
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(0, |l| l.0)
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.next_line() {
            None => Ok(()),
            Some((n, toks)) => err(n, format!("trailing content `{}`", toks.join(" "))),
        }
    }
}

fn read_table(c: &mut Cursor, n: usize) -> Result<Vec<u32>, ParseError> {
    let mut t = Vec::with_capacity(n * n);
    for r in 0..n {
        let Some((ln, toks)) = c.next_line() else {
            return err(c.last_line(), format!("expected {n} table rows, found {r}"));
        };
        if toks.len() != n {
            return err(ln, format!("expected {n} entries, found {}", toks.len()));
        }
        for tok in toks {
            let v: u32 = number(ln, tok)?;
            if v as usize >= n {
                return err(ln, format!("entry {v} outside 0..{n}"));
            }
            t.push(v);
        }
    }
    Ok(t)
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra, ParseError> {
    let mut c = Cursor::new(text);
    let Some((ln, head)) = c.next_line() else {
        return err(0, "empty algebra file");
    };
    let [kind, n] = head[..] else {
        return err(ln, "header must be `kind n`");
    };
    let sig = Signature::from_name(kind).ok_or_else(|| ParseError {
        line: ln,
        msg: format!("unknown kind `{kind}` (expected group, loop or ring)"),
    })?;
    let n: usize = number(ln, n)?;
    if n == 0 {
        return err(ln, "an algebra needs at least one element");
    }
    let mut tables = vec![read_table(&mut c, n)?];
    if sig == Signature::Ring {
        if c.skip_blank() == 0 {
            return err(
                c.lines.get(c.pos).map_or(c.last_line(), |l| l.0),
                "expected a blank line before the × table",
            );
        }
        tables.push(read_table(&mut c, n)?);
    }
    c.finish()?;
    FiniteAlgebra::from_tables(sig, tables).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })
}

pub fn write_algebra(a: &FiniteAlgebra, comment: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            let _ = writeln!(s, "# {l}");
        }
    }
    let n = a.size();
    let _ = writeln!(s, "{} {n}", a.signature());
    for (i, t) in a.basic_tables().iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        for row in t.chunks(n) {
            let row: Vec<String> = row.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
    }
    s
}

/// A morphism file before its endpoints are loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismSpec {
    pub dom: PathBuf,
    pub cod: PathBuf,
    pub map: Vec<u32>,
}

/// Parses a morphism file; endpoint paths are resolved against `base`.
pub fn parse_morphism_spec(text: &str, base: &Path) -> Result<MorphismSpec, ParseError> {
    let mut c = Cursor::new(text);
    let Some((ln, head)) = c.next_line() else {
        return err(0, "empty morphism file");
    };
    let [dom, cod] = head[..] else {
        return err(ln, "header must be `dom-file cod-file`");
    };
    let mut map = Vec::new();
    while let Some((ln, toks)) = c.next_line() {
        for tok in toks {
            map.push(number(ln, tok)?);
        }
    }
    Ok(MorphismSpec {
        dom: base.join(dom),
        cod: base.join(cod),
        map,
    })
}

pub fn morphism_from_spec(
    spec: &MorphismSpec,
    dom: Arc<FiniteAlgebra>,
    cod: Arc<FiniteAlgebra>,
) -> Result<Morphism, ParseError> {
    if spec.map.len() != dom.size() {
        return err(
            0,
            format!(
                "expected {} map values, found {}",
                dom.size(),
                spec.map.len()
            ),
        );
    }
    Morphism::new(dom, cod, spec.map.clone()).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })
}

pub fn write_morphism(dom: &str, cod: &str, f: &Morphism) -> String {
    let map: Vec<String> = f.map().iter().map(u32::to_string).collect();
    format!("{dom} {cod}\n{}\n", map.join(" "))
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix, ParseError> {
    let mut c = Cursor::new(text);
    let Some((ln, head)) = c.next_line() else {
        return err(0, "empty matrix file");
    };
    let [r, k] = head[..] else {
        return err(ln, "header must be `rows cols`");
    };
    let (rows, cols): (usize, usize) = (number(ln, r)?, number(ln, k)?);
    let mut data = Vec::with_capacity(rows * cols);
    while let Some((ln, toks)) = c.next_line() {
        for tok in toks {
            if data.len() == rows * cols {
                return err(ln, format!("trailing content `{tok}`"));
            }
            data.push(number(ln, tok)?);
        }
    }
    if data.len() != rows * cols {
        return err(
            0,
            format!("expected {} entries, found {}", rows * cols, data.len()),
        );
    }
    IntMatrix::new(rows, cols, data).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })
}

pub fn write_matrix(m: &IntMatrix) -> String {
    let mut s = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(i128::to_string).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

/// `"0,2,4,6"`, optionally wrapped in braces.
pub fn parse_subset(s: &str) -> Result<Vec<usize>, ParseError> {
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    if s.trim().is_empty() {
        return Ok(vec![0]);
    }
    s.split(',').map(|t| number(0, t.trim())).collect()
}

/// Either a comma-separated list of cyclic orders (`0` for `Z`), as in
/// `"2,2"` or `"0,0,4"`, or the display form `Z^2 x Z/4`.
pub fn parse_fgab(s: &str) -> Result<FgAb, ParseError> {
    let s = s.trim();
    if s.contains('Z') || s == "0" {
        return s.parse().map_err(|e: galois_core::Error| ParseError {
            line: 0,
            msg: e.to_string(),
        });
    }
    let orders: Vec<i128> = s
        .split(',')
        .map(|t| number(0, t.trim()))
        .collect::<Result<_, _>>()?;
    if orders.iter().any(|&d| d < 0) {
        return err(0, "cyclic orders must be non-negative");
    }
    Ok(FgAb::from_cyclic_orders(&orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_needs_blank_separator() {
        let text = "ring 2\n0 1\n1 0\n0 0\n0 1\n";
        assert!(parse_algebra(text).is_err());
        let text = "ring 2\n0 1\n1 0\n\n0 0\n0 1\n";
        assert_eq!(parse_algebra(text).unwrap().size(), 2);
    }

    #[test]
    fn comments_are_ignored() {
        let text = "# Z/2\ngroup 2 # header\n0 1\n1 0 # last row\n# done\n";
        assert_eq!(parse_algebra(text).unwrap().size(), 2);
    }

    #[test]
    fn subsets() {
        assert_eq!(parse_subset("0,2, 4").unwrap(), vec![0, 2, 4]);
        assert_eq!(parse_subset("{0,3}").unwrap(), vec![0, 3]);
        assert!(parse_subset("0,x").is_err());
    }

    #[test]
    fn fgab_inline_forms() {
        assert_eq!(parse_fgab("2,2").unwrap().to_string(), "Z/2 x Z/2");
        assert_eq!(parse_fgab("0,0").unwrap().to_string(), "Z^2");
        assert_eq!(parse_fgab("Z x Z/4").unwrap().to_string(), "Z x Z/4");
        assert!(parse_fgab("-3").is_err());
    }
}
