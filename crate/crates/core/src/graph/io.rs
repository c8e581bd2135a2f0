//! Edge-list text format.
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v w     (w optional, defaults to 1.0)
//! ```

use std::io::{BufReader, Read, Write};

use super::Graph;
use crate::error::{Error, Result};

pub fn load_graph<R: Read>(source: R) -> Result<Graph> {
    let mut text = String::new();
    BufReader::new(source).read_to_string(&mut text)?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(line, "header must be \"n m\""));
    }
    let n = parse_usize(fields[0], line, "vertex count")?;
    let m = parse_usize(fields[1], line, "edge count")?;

    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        let fields: Vec<&str> = body.split_whitespace().collect();
        let (u, v, w) = match fields.as_slice() {
            [u, v] => (
                parse_usize(u, line, "vertex id")?,
                parse_usize(v, line, "vertex id")?,
                1.0,
            ),
            [u, v, w] => (
                parse_usize(u, line, "vertex id")?,
                parse_usize(v, line, "vertex id")?,
                w.parse::<f64>()
                    .map_err(|_| parse_err(line, &format!("invalid weight {w:?}")))?,
            ),
            _ => return Err(parse_err(line, "edge line must be \"u v [w]\"")),
        };
        if u >= n || v >= n {
            return Err(parse_err(
                line,
                &format!("vertex id out of range in edge ({u}, {v})"),
            ));
        }
        if w < 0.0 {
            return Err(parse_err(line, &format!("negative weight {w}")));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges)
}

pub fn save_graph<W: Write>(g: &Graph, mut sink: W) -> Result<()> {
    sink.write_all(to_edge_list(g).as_bytes())?;
    sink.flush()?;
    Ok(())
}

/// Canonical serialization: normalized `u < v` endpoints, weights in
/// shortest round-trip form.
pub fn to_edge_list(g: &Graph) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {:?}", e.u, e.v, e.w);
    }
    out
}

fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| parse_err(line, &format!("invalid {what} {s:?}")))
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}
