//! Instance file formats: LOLIB matrices and 1-based weighted edge lists.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::lop::LopInstance;
use crate::maxcut::MaxCutInstance;

/// Largest vertex count accepted from an edge-list header.
pub const MAX_EDGE_LIST_VERTICES: usize = 1 << 24;
/// Largest dimension accepted from a matrix header.
pub const MAX_MATRIX_DIMENSION: usize = 1 << 15;

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A whitespace-separated token with its 1-based position.
#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

impl Token<'_> {
    fn int(&self) -> Result<i64, ParseError> {
        self.text.parse::<i64>().map_err(|_| {
            ParseError::at(
                self.line,
                self.column,
                format!("expected an integer, found {:?}", self.text),
            )
        })
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.line, self.column, message)
    }
}

fn line_tokens(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut column = 0;
    let mut start_col = 0;
    for (i, c) in line.char_indices() {
        column += 1;
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    line: line_no,
                    column: start_col,
                    text: &line[s..i],
                });
            }
        } else if start.is_none() {
            start = Some(i);
            start_col = column;
        }
    }
    if let Some(s) = start {
        out.push(Token {
            line: line_no,
            column: start_col,
            text: &line[s..],
        });
    }
    out
}

/// Position just past the last character of `text`, for end-of-input errors.
fn end_position(text: &str) -> (usize, usize) {
    let lines: Vec<&str> = text.lines().collect();
    match lines.last() {
        Some(last) => (lines.len(), last.chars().count() + 1),
        None => (1, 1),
    }
}

fn is_integer_line(tokens: &[Token<'_>]) -> bool {
    !tokens.is_empty() && tokens.iter().all(|t| t.text.parse::<i64>().is_ok())
}

/// Parses a LOLIB matrix: a name line, the dimension `n`, then `n * n`
/// integers in row-major order. Non-numeric lines between the name and the
/// dimension are skipped with a warning.
pub fn parse_lolib(text: &str) -> Result<LopInstance, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let name = match lines.next() {
        Some((_, l)) => l.trim().to_string(),
        None => return Err(ParseError::at(1, 1, "empty input: expected a name line")),
    };
    let mut header: Option<Vec<Token<'_>>> = None;
    for (no, line) in lines.by_ref() {
        let tokens = line_tokens(no, line);
        if tokens.is_empty() {
            continue;
        }
        if is_integer_line(&tokens) {
            header = Some(tokens);
            break;
        }
        warn!("skipping header line {no}: {:?}", line.trim());
    }
    let Some(header) = header else {
        let (l, c) = end_position(text);
        return Err(ParseError::at(l, c, "missing matrix dimension"));
    };
    let n_token = header[0];
    let n = n_token.int()?;
    if n <= 1 {
        return Err(n_token.error(format!("dimension must be at least 2, got {n}")));
    }
    let n = n as usize;
    if n > MAX_MATRIX_DIMENSION {
        return Err(n_token.error(format!(
            "dimension {n} exceeds the supported maximum {MAX_MATRIX_DIMENSION}"
        )));
    }
    let expected = n * n;
    let mut entries: Vec<i64> = Vec::new();
    let push = |t: Token<'_>, entries: &mut Vec<i64>| -> Result<(), ParseError> {
        if entries.len() == expected {
            return Err(t.error(format!("unexpected token {:?}: matrix already has {expected} entries", t.text)));
        }
        let v = t.int()?;
        if i32::try_from(v).is_err() {
            return Err(t.error(format!("entry {v} does not fit in 32 bits")));
        }
        entries.push(v);
        Ok(())
    };
    for &t in &header[1..] {
        push(t, &mut entries)?;
    }
    for (no, line) in lines {
        for t in line_tokens(no, line) {
            push(t, &mut entries)?;
        }
    }
    if entries.len() < expected {
        let (l, c) = end_position(text);
        return Err(ParseError::at(
            l,
            c,
            format!(
                "expected {expected} matrix entries, found {} ({} missing)",
                entries.len(),
                expected - entries.len()
            ),
        ));
    }
    LopInstance::new(name, n, entries).map_err(|e| n_token.error(e.to_string()))
}

/// Serializes in the format read by [`parse_lolib`].
pub fn write_lolib(inst: &LopInstance) -> String {
    let n = inst.n();
    let mut out = String::new();
    let _ = writeln!(out, "{}", inst.name());
    let _ = writeln!(out, "{n}");
    for row in inst.entries().chunks(n) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

/// Parses an edge list: `n m` followed by `m` lines `i j w` with 1-based
/// vertex ids. Parallel edges are merged by summing their weights.
pub fn parse_edge_list(text: &str) -> Result<MaxCutInstance, ParseError> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| line_tokens(i + 1, l))
        .filter(|t| !t.is_empty());
    let Some(header) = rows.next() else {
        return Err(ParseError::at(1, 1, "empty input: expected \"n m\""));
    };
    if header.len() != 2 {
        return Err(header[0].error(format!(
            "header must hold exactly two integers \"n m\", found {} tokens",
            header.len()
        )));
    }
    let n = header[0].int()?;
    let m = header[1].int()?;
    if n < 1 || n as u64 > MAX_EDGE_LIST_VERTICES as u64 {
        return Err(header[0].error(format!(
            "vertex count must lie in 1..={MAX_EDGE_LIST_VERTICES}, got {n}"
        )));
    }
    if m < 0 {
        return Err(header[1].error(format!("edge count must be non-negative, got {m}")));
    }
    let (n, m) = (n as usize, m as u64);
    let mut edges = Vec::new();
    let mut seen: u64 = 0;
    for row in rows {
        if seen == m {
            return Err(row[0].error(format!("more edge lines than the {m} declared")));
        }
        if row.len() != 3 {
            return Err(row[0].error(format!(
                "edge line must hold \"i j w\", found {} tokens",
                row.len()
            )));
        }
        let id = |t: &Token<'_>| -> Result<usize, ParseError> {
            let v = t.int()?;
            if v < 1 || v as u64 > n as u64 {
                return Err(t.error(format!("vertex id {v} outside 1..={n}")));
            }
            Ok(v as usize - 1)
        };
        let i = id(&row[0])?;
        let j = id(&row[1])?;
        let w = row[2].int()?;
        if i == j {
            return Err(row[0].error(format!("self-loop on vertex {}", i + 1)));
        }
        edges.push((i, j, w));
        seen += 1;
    }
    if seen < m {
        let (l, c) = end_position(text);
        return Err(ParseError::at(
            l,
            c,
            format!("declared {m} edges, found {seen}"),
        ));
    }
    MaxCutInstance::new("", n, edges).map_err(|e| ParseError::at(1, 1, e.to_string()))
}

/// Serializes in the format read by [`parse_edge_list`] (merged edges,
/// 1-based ids).
pub fn write_edge_list(inst: &MaxCutInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", inst.n(), inst.edges().len());
    for &(i, j, w) in inst.edges() {
        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, w);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Lop,
    MaxCut,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Lop => "lop",
            ProblemKind::MaxCut => "maxcut",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Lop(LopInstance),
    MaxCut(MaxCutInstance),
}

impl Instance {
    pub fn name(&self) -> &str {
        match self {
            Instance::Lop(i) => i.name(),
            Instance::MaxCut(i) => i.name(),
        }
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            Instance::Lop(_) => ProblemKind::Lop,
            Instance::MaxCut(_) => ProblemKind::MaxCut,
        }
    }

    /// One-line summary: size, entry or edge count and weight range.
    pub fn summary(&self) -> String {
        fn range(values: impl Iterator<Item = i64>) -> String {
            let mut lo = i64::MAX;
            let mut hi = i64::MIN;
            for v in values {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if lo > hi {
                "weights=none".to_string()
            } else {
                format!("weights=[{lo},{hi}]")
            }
        }
        match self {
            Instance::Lop(i) => format!(
                "lop n={} entries={} {}",
                i.n(),
                i.entries().len(),
                range(i.entries().iter().copied())
            ),
            Instance::MaxCut(g) => format!(
                "maxcut n={} edges={} {}",
                g.n(),
                g.edges().len(),
                range(g.edges().iter().map(|e| e.2))
            ),
        }
    }
}

/// Parses `text` in the format of `kind`. Edge lists are named `name`;
/// matrices keep the name from their first line unless it is blank.
pub fn parse_instance(text: &str, kind: ProblemKind, name: &str) -> Result<Instance, ParseError> {
    Ok(match kind {
        ProblemKind::Lop => {
            let inst = parse_lolib(text)?;
            if inst.name().is_empty() {
                Instance::Lop(inst.with_name(name))
            } else {
                Instance::Lop(inst)
            }
        }
        ProblemKind::MaxCut => Instance::MaxCut(parse_edge_list(text)?.with_name(name)),
    })
}

/// Reads and parses an instance file; edge lists are named by file stem.
pub fn load_instance(path: &Path, kind: ProblemKind) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_instance(&text, kind, &stem).map_err(Error::Parse)
}
