//! Plain-text WDFA files and the border-graph dump.
//!
//! ```text
//! #sorted
//! 3 2 2
//! ab
//! 001
//! 1 a 2
//! 2 b 3
//! ```
//!
//! Optional `#` comment lines come first; `#sorted` declares that state ids
//! are Wheeler positions. Then `n m sigma`, the alphabet, a final-state
//! bitstring and `m` edge lines `u c v` with 1-based ids. State 1 is the
//! source. Fields are separated by exactly one space, lines end in LF.

use std::fmt::Write as _;
use std::io::{self, Read, Write};

use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::automaton::Wdfa;
use crate::border::{BorderGraph, Mark};

pub const SORTED_TAG: &str = "#sorted";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Parse { line, msg: msg.into() })
}

/// A parsed WDFA file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WdfaFile {
    pub automaton: Wdfa,
    /// Whether the file carried the `#sorted` header.
    pub sorted: bool,
}

fn fields(line: &str, lineno: usize, count: usize) -> Result<Vec<&str>, FormatError> {
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != count || parts.iter().any(|p| p.is_empty()) {
        return err(lineno, format!("expected {count} fields separated by single spaces"));
    }
    Ok(parts)
}

fn number(s: &str, lineno: usize, what: &str) -> Result<usize, FormatError> {
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return err(lineno, format!("{what} is not a number: {s:?}"));
    }
    s.parse().or_else(|_| err(lineno, format!("{what} is out of range: {s}")))
}

pub fn parse_wdfa(text: &str) -> Result<WdfaFile, FormatError> {
    if text.contains('\r') {
        return err(text[..text.find('\r').unwrap()].lines().count().max(1), "CR line ending");
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l)).peekable();

    let mut sorted = false;
    while let Some(&(_, l)) = lines.peek() {
        if !l.starts_with('#') {
            break;
        }
        sorted |= l == SORTED_TAG;
        lines.next();
    }
    let mut next = |what: &str| match lines.next() {
        Some(x) => Ok(x),
        None => err(0, format!("unexpected end of file, expected {what}")),
    };

    let (ln, header) = next("header")?;
    let h = fields(header, ln, 3)?;
    let n = number(h[0], ln, "state count")?;
    let m = number(h[1], ln, "edge count")?;
    let sigma = number(h[2], ln, "alphabet size")?;
    if n == 0 {
        return err(ln, "an automaton needs at least one state");
    }

    let (ln, chars) = next("alphabet")?;
    if chars.len() != sigma {
        return err(ln, format!("alphabet has {} characters, header says {sigma}", chars.len()));
    }
    let alphabet = Alphabet::new(chars.as_bytes()).or_else(|e| err(ln, e.to_string()))?;

    let (ln, bits) = next("final-state bitstring")?;
    if bits.len() != n || !bits.bytes().all(|b| b == b'0' || b == b'1') {
        return err(ln, format!("final-state bitstring must be {n} characters of 0/1"));
    }
    let finals: Vec<bool> = bits.bytes().map(|b| b == b'1').collect();

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = next("edge line")?;
        let f = fields(line, ln, 3)?;
        let state = |s: &str| -> Result<usize, FormatError> {
            let u = number(s, ln, "state")?;
            if u == 0 || u > n {
                return err(ln, format!("state {u} outside 1..={n}"));
            }
            Ok(u - 1)
        };
        let (u, v) = (state(f[0])?, state(f[2])?);
        let c = match f[1].as_bytes() {
            [c] => alphabet.symbol(*c),
            _ => None,
        };
        let Some(c) = c else {
            return err(ln, format!("symbol {:?} is not in the alphabet", f[1]));
        };
        edges.push((u, c, v));
    }
    if let Some((ln, _)) = lines.next() {
        return err(ln, "trailing content after the last edge");
    }

    let automaton = Wdfa::from_edges(alphabet, finals, 0, edges).or_else(|e| err(0, e.to_string()))?;
    Ok(WdfaFile { automaton, sorted })
}

pub fn read_wdfa(mut r: impl Read) -> Result<WdfaFile, FormatError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_wdfa(&text)
}

/// Serializes `a`. Unless the source is state 0, it is swapped with state 0
/// so that it lands on id 1 in the file.
pub fn wdfa_to_string(a: &Wdfa, sorted: bool) -> String {
    let s = a.source();
    let id = |u: usize| {
        if u == s {
            1
        } else if u == 0 {
            s + 1
        } else {
            u + 1
        }
    };
    let n = a.num_states();
    let mut out = String::with_capacity(16 * (n + a.num_edges()));
    if sorted {
        out.push_str(SORTED_TAG);
        out.push('\n');
    }
    let _ = writeln!(out, "{} {} {}", n, a.num_edges(), a.alphabet().len());
    out.push_str(std::str::from_utf8(a.alphabet().chars()).expect("alphabet is ASCII"));
    out.push('\n');
    out.extend((0..n).map(|p| {
        let u = if p == 0 { s } else if p == s { 0 } else { p };
        if a.is_final(u) {
            '1'
        } else {
            '0'
        }
    }));
    out.push('\n');

    let mut edges: Vec<(usize, u8, usize)> = a
        .edges()
        .map(|(u, c, v)| (id(u), a.alphabet().char_of(c).expect("symbol in alphabet"), id(v)))
        .collect();
    if s != 0 {
        edges.sort_unstable();
    }
    for (u, c, v) in edges {
        let _ = writeln!(out, "{} {} {}", u, c as char, v);
    }
    out
}

pub fn write_wdfa(mut w: impl Write, a: &Wdfa, sorted: bool) -> io::Result<()> {
    w.write_all(wdfa_to_string(a, sorted).as_bytes())
}

/// The border graph as text: a `#border` header, one `i j` line per edge
/// (1-based left positions, successor pair first), and a `marks` line with
/// one character per adjacent pair: `-` not a node, `0` unmarked, `1` base,
/// `2` propagated.
pub fn border_to_string(g: &BorderGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "#border n={} nodes={} edges={}",
        g.num_pairs() + 1,
        g.num_nodes(),
        g.num_edges()
    );
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out.push_str("marks ");
    out.extend((0..g.num_pairs()).map(|i| {
        if !g.contains(i) {
            '-'
        } else {
            match g.mark(i) {
                Mark::Unmarked => '0',
                Mark::Base => '1',
                Mark::Propagated => '2',
            }
        }
    }));
    out.push('\n');
    out
}

/// Parsed form of [`border_to_string`], with 0-based pair ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderDump {
    pub num_states: usize,
    pub edges: Vec<(usize, usize)>,
    /// `None` for pairs that are not border nodes.
    pub marks: Vec<Option<Mark>>,
}

impl BorderDump {
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.marks.len()).filter(|&i| self.marks[i].is_some())
    }

    pub fn with_mark(&self, mark: Mark) -> Vec<usize> {
        self.nodes().filter(|&i| self.marks[i] == Some(mark)).collect()
    }
}

pub fn parse_border(text: &str) -> Result<BorderDump, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let Some((_, header)) = lines.next() else {
        return err(1, "empty border dump");
    };
    let n = header
        .strip_prefix("#border n=")
        .and_then(|rest| rest.split(' ').next())
        .and_then(|s| s.parse::<usize>().ok());
    let Some(num_states) = n else {
        return err(1, "expected '#border n=..' header");
    };
    let mut edges = Vec::new();
    for (ln, line) in lines {
        if let Some(marks) = line.strip_prefix("marks ") {
            if marks.len() + 1 != num_states {
                return err(ln, "marks line has the wrong length");
            }
            let mut parsed = Vec::with_capacity(marks.len());
            for c in marks.chars() {
                parsed.push(match c {
                    '-' => None,
                    '0' => Some(Mark::Unmarked),
                    '1' => Some(Mark::Base),
                    '2' => Some(Mark::Propagated),
                    _ => return err(ln, format!("unknown mark {c:?}")),
                });
            }
            return Ok(BorderDump {
                num_states,
                edges,
                marks: parsed,
            });
        }
        let f = fields(line, ln, 2)?;
        edges.push((number(f[0], ln, "pair")? - 1, number(f[1], ln, "pair")? - 1));
    }
    err(0, "missing marks line")
}
