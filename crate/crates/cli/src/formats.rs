//! PACE-style text formats.
//!
//! Graphs (`.gr`): a header `p tw <n> <m>` (or `p edge <n> <m>`), comment
//! lines starting with `c`, then one edge per line as `<u> <v>` or
//! `e <u> <v>`. Decompositions (`.td`): a header `s td <bags> <width+1> <n>`,
//! bag lines `b <id> <v>...`, then one tree edge per line. Partitions: one
//! block per line. Vertex labels and bag ids are 1-based in every file.

use std::fs;
use std::path::Path;

use sclub_core::error::Violation;
use sclub_core::graph::{Graph, Partition};
use sclub_core::treedec::{validate, TreeDecomposition};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{source_name}:{line}: {message}")]
    Line { source_name: String, line: usize, message: String },
    #[error("{source_name}: {message}")]
    File { source_name: String, message: String },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
}

struct Lines<'a> {
    name: &'a str,
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(name: &'a str, text: &'a str) -> Self {
        Lines { name, inner: text.lines().enumerate() }
    }

    /// Next non-empty, non-comment line as (1-based line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.first() {
                None | Some(&"c") => continue,
                Some(_) => return Some((i + 1, tokens)),
            }
        }
        None
    }

    fn err(&self, line: usize, message: impl Into<String>) -> FormatError {
        FormatError::Line { source_name: self.name.to_string(), line, message: message.into() }
    }

    fn file_err(&self, message: impl Into<String>) -> FormatError {
        FormatError::File { source_name: self.name.to_string(), message: message.into() }
    }

    fn number(&self, line: usize, token: &str, what: &str) -> Result<usize, FormatError> {
        token.parse().map_err(|_| self.err(line, format!("expected {what}, found `{token}`")))
    }

    /// Parses a 1-based label in `1..=limit` and returns it 0-based.
    fn label(&self, line: usize, token: &str, limit: usize, what: &str) -> Result<usize, FormatError> {
        let x = self.number(line, token, what)?;
        if x == 0 || x > limit {
            return Err(self.err(line, format!("{what} {x} out of range 1..={limit}")));
        }
        Ok(x - 1)
    }
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError::Io(path.display().to_string(), e))
}

pub fn parse_graph(path: &Path) -> Result<Graph, FormatError> {
    parse_graph_str(&path.display().to_string(), &read(path)?)
}

pub fn parse_graph_str(name: &str, text: &str) -> Result<Graph, FormatError> {
    let mut lines = Lines::new(name, text);
    let (hline, header) = lines.next_tokens().ok_or_else(|| lines.file_err("missing header"))?;
    let (n, m) = match header.as_slice() {
        ["p", "tw" | "edge", n, m] => {
            (lines.number(hline, n, "vertex count")?, lines.number(hline, m, "edge count")?)
        }
        _ => return Err(lines.err(hline, "expected header `p tw <n> <m>`")),
    };
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    while let Some((line, tokens)) = lines.next_tokens() {
        let pair = match tokens.as_slice() {
            ["e", u, v] | [u, v] => (*u, *v),
            _ => return Err(lines.err(line, "expected an edge `<u> <v>`")),
        };
        let u = lines.label(line, pair.0, n, "vertex")?;
        let v = lines.label(line, pair.1, n, "vertex")?;
        if u == v {
            return Err(lines.err(line, format!("self-loop at vertex {}", u + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(lines.err(line, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(lines.file_err(format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, edges).map_err(|e| lines.file_err(e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

pub fn parse_td(path: &Path, g: &Graph) -> Result<TreeDecomposition, FormatError> {
    parse_td_str(&path.display().to_string(), &read(path)?, g)
}

/// Parses a decomposition and validates it against `g`.
pub fn parse_td_str(name: &str, text: &str, g: &Graph) -> Result<TreeDecomposition, FormatError> {
    let mut lines = Lines::new(name, text);
    let (hline, header) = lines.next_tokens().ok_or_else(|| lines.file_err("missing header"))?;
    let (count, size, n) = match header.as_slice() {
        ["s", "td", b, w, n] => (
            lines.number(hline, b, "bag count")?,
            lines.number(hline, w, "bag size")?,
            lines.number(hline, n, "vertex count")?,
        ),
        _ => return Err(lines.err(hline, "expected header `s td <bags> <width+1> <n>`")),
    };
    if n != g.n() {
        return Err(lines.err(hline, format!("decomposition is for {n} vertices, graph has {}", g.n())));
    }
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; count];
    let mut edges = Vec::new();
    while let Some((line, tokens)) = lines.next_tokens() {
        if tokens[0] == "b" {
            let Some(id) = tokens.get(1) else { return Err(lines.err(line, "bag line without id")) };
            let id = lines.label(line, id, count, "bag id")?;
            if bags[id].is_some() {
                return Err(lines.err(line, format!("bag {} defined twice", id + 1)));
            }
            let verts = tokens[2..]
                .iter()
                .map(|t| lines.label(line, t, n, "vertex"))
                .collect::<Result<Vec<_>, _>>()?;
            bags[id] = Some(verts);
        } else if let [a, b] = tokens.as_slice() {
            edges.push((lines.label(line, a, count, "bag id")?, lines.label(line, b, count, "bag id")?));
        } else {
            return Err(lines.err(line, "expected a bag line or a tree edge"));
        }
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| lines.file_err(format!("bag {} is missing", i + 1))))
        .collect::<Result<_, _>>()?;
    let td = TreeDecomposition::new(bags, edges);
    let largest = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    if largest != size {
        return Err(lines.err(hline, format!("header announces bag size {size}, largest bag has {largest}")));
    }
    validate(&td, g).map_err(|v| lines.file_err(describe_violation(&v)))?;
    Ok(td)
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let size = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags().len(), size, n);
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in td.edges() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

/// Violation message with 1-based labels, matching the file.
pub fn describe_violation(v: &Violation) -> String {
    match *v {
        Violation::BagVertexOutOfRange { bag, vertex } => {
            format!("bag {} contains vertex {} outside the graph", bag + 1, vertex + 1)
        }
        Violation::TreeEdgeOutOfRange(a, b) => {
            format!("tree edge {} {} references a missing bag", a + 1, b + 1)
        }
        Violation::NotAForest(a, b) => format!("bag tree has a cycle through edge {} {}", a + 1, b + 1),
        Violation::VertexNotCovered(x) => format!("vertex {} is in no bag", x + 1),
        Violation::EdgeNotCovered(a, b) => format!("edge {} {} is in no bag", a + 1, b + 1),
        Violation::Disconnected { vertex, first, second } => format!(
            "bags containing vertex {} are not connected (bags {} and {})",
            vertex + 1,
            first + 1,
            second + 1
        ),
    }
}

pub fn parse_partition(path: &Path, n: usize) -> Result<Partition, FormatError> {
    parse_partition_str(&path.display().to_string(), &read(path)?, n)
}

pub fn parse_partition_str(name: &str, text: &str, n: usize) -> Result<Partition, FormatError> {
    let mut lines = Lines::new(name, text);
    let mut blocks = Vec::new();
    while let Some((line, tokens)) = lines.next_tokens() {
        let block =
            tokens.iter().map(|t| lines.label(line, t, n, "vertex")).collect::<Result<Vec<_>, _>>()?;
        blocks.push(block);
    }
    Partition::new(n, blocks).map_err(|e| lines.file_err(e.to_string()))
}

pub fn write_partition(p: &Partition) -> String {
    let mut out = String::new();
    for block in p.blocks() {
        let labels: Vec<String> = block.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_on_three_vertices() {
        let g = parse_graph_str("t", "p tw 3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn dimacs_style_edges_and_comments() {
        let g = parse_graph_str("t", "c hello\np edge 3 2\ne 1 2\n\nc mid\ne 3 2\n").unwrap();
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn self_loop_is_rejected() {
        let err = parse_graph_str("t", "p tw 2 1\n1 1\n").unwrap_err();
        assert!(err.to_string().contains("t:2: self-loop"), "{err}");
    }

    #[test]
    fn duplicate_edge_is_rejected() {
        let err = parse_graph_str("t", "p tw 2 2\n1 2\n1 2\n").unwrap_err();
        assert!(err.to_string().contains("t:3: duplicate edge"), "{err}");
    }

    #[test]
    fn edge_count_mismatch() {
        assert!(parse_graph_str("t", "p tw 3 2\n1 2\n").is_err());
        assert!(parse_graph_str("t", "p tw 3 1\n1 4\n").is_err());
        assert!(parse_graph_str("t", "q 3 1\n").is_err());
    }

    #[test]
    fn decomposition_of_a_path() {
        let g = parse_graph_str("g", "p tw 3 2\n1 2\n2 3\n").unwrap();
        let td = parse_td_str("d", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", &g).unwrap();
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn decomposition_missing_an_edge() {
        let g = parse_graph_str("g", "p tw 3 3\n1 2\n2 3\n1 3\n").unwrap();
        let err = parse_td_str("d", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", &g).unwrap_err();
        assert!(err.to_string().contains("edge 1 3 is in no bag"), "{err}");
    }

    #[test]
    fn decomposition_with_split_occurrence() {
        let g = parse_graph_str("g", "p tw 3 1\n1 2\n").unwrap();
        let err = parse_td_str("d", "s td 3 2 3\nb 1 1 2\nb 2 3\nb 3 1\n1 2\n2 3\n", &g).unwrap_err();
        assert!(err.to_string().contains("vertex 1"), "{err}");
    }

    #[test]
    fn partition_round_trip() {
        let p = parse_partition_str("p", "1 2\n3\n", 3).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2]]);
        assert_eq!(write_partition(&p), "1 2\n3\n");
        assert!(parse_partition_str("p", "1 2\n2\n", 3).is_err());
    }
}
