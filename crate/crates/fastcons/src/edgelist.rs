//! Edge-list graph files.
//!
//! ```text
//! # cycle on four nodes
//! N 4
//! 1 2
//! 2 3 0.5
//! 3 4
//! 4 1
//! ```
//!
//! The first non-comment line is `N <count>`; every following line is
//! `<i> <j> [weight]` with 1-based node indices and weight 1 when omitted.
//! `#` starts a comment, blank lines are ignored.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use fastcons_core::Graph;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `N <count>` header")]
    MissingHeader,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let Some(g) = graph.as_mut() else {
            graph = Some(parse_header(line, &fields)?);
            continue;
        };
        if !(2..=3).contains(&fields.len()) {
            return Err(syntax(line, format!("expected `i j [weight]`, found `{content}`")));
        }
        let node = |s: &str| -> Result<usize, ParseError> {
            let v: usize = s
                .parse()
                .map_err(|_| syntax(line, format!("`{s}` is not a node index")))?;
            if v == 0 || v > g.node_count() {
                return Err(syntax(line, format!("node {v} outside 1..={}", g.node_count())));
            }
            Ok(v - 1)
        };
        let (i, j) = (node(fields[0])?, node(fields[1])?);
        let weight = match fields.get(2) {
            Some(w) => w
                .parse::<f64>()
                .map_err(|_| syntax(line, format!("`{w}` is not a number")))?,
            None => 1.0,
        };
        g.add_edge(i, j, weight).map_err(|e| syntax(line, e.to_string()))?;
    }
    graph.ok_or(ParseError::MissingHeader)
}

fn parse_header(line: usize, fields: &[&str]) -> Result<Graph, ParseError> {
    let count = match fields {
        ["N", count] => count
            .parse::<usize>()
            .map_err(|_| syntax(line, format!("`{count}` is not a node count")))?,
        _ => return Err(syntax(line, "expected header `N <count>`")),
    };
    Graph::new(count).map_err(|e| syntax(line, e.to_string()))
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, ParseError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text)
}

/// Writes `g` so that [`parse_edge_list`] reads it back exactly; unit
/// weights are omitted.
pub fn write_edge_list(g: &Graph, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "N {}", g.node_count())?;
    for e in g.edges() {
        if e.weight == 1.0 {
            writeln!(w, "{} {}", e.i + 1, e.j + 1)?;
        } else {
            writeln!(w, "{} {} {:?}", e.i + 1, e.j + 1, e.weight)?;
        }
    }
    Ok(())
}
