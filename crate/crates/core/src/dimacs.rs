//! DIMACS edge format.
//!
//! ```text
//! c optional comments
//! p edge <n> <m>
//! e <u> <v>        (1-based, one line per edge)
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate `p` line"));
                }
                let format = fields.next();
                if format != Some("edge") && format != Some("col") {
                    return Err(Error::parse(line_no, "expected `p edge <n> <m>`"));
                }
                let n = parse_count(fields.next(), line_no, "vertex count")?;
                let m = parse_count(fields.next(), line_no, "edge count")?;
                if fields.next().is_some() {
                    return Err(Error::parse(line_no, "trailing fields after `p edge <n> <m>`"));
                }
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(Error::parse(line_no, "edge line before `p` line"));
                };
                let u = parse_count(fields.next(), line_no, "edge endpoint")?;
                let v = parse_count(fields.next(), line_no, "edge endpoint")?;
                if fields.next().is_some() {
                    return Err(Error::parse(line_no, "trailing fields after `e <u> <v>`"));
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(Error::parse(
                        line_no,
                        format!("edge index out of range 1..={n}: {u} {v}"),
                    ));
                }
                if u == v {
                    return Err(Error::parse(line_no, format!("self-loop at {u}")));
                }
                if !edges.insert((u.min(v) - 1, u.max(v) - 1)) {
                    return Err(Error::parse(line_no, format!("duplicate edge {u} {v}")));
                }
            }
            Some(other) => {
                return Err(Error::parse(line_no, format!("unknown line type {other:?}")));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing `p edge` line"))?;
    if edges.len() != m {
        return Err(Error::parse(
            text.lines().count(),
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

fn parse_count(field: Option<&str>, line: usize, what: &str) -> Result<usize> {
    field
        .ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed {what}")))
}

/// Canonical text: header, then edges in lexicographic order, LF-terminated
/// lines except the last.
pub fn write(g: &Graph) -> String {
    let mut out = format!("p edge {} {}", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        write!(out, "\ne {} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn read_file(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::invalid(format!("{}:{line}: {message}", path.display())),
        other => other,
    })
}

pub fn write_file(path: &Path, g: &Graph) -> Result<()> {
    let mut text = write(g);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
