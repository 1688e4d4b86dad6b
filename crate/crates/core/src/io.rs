//! DIMACS edge format and plain edge lists.
//!
//! DIMACS: a `p edge n m` header followed by `e u v` lines over vertices
//! `1..=n`; `c` lines are comments. Graphs whose vertex set is not exactly
//! `1..=n` are written with an extra `c ids ...` line listing the vertex ids,
//! which this reader honors and other readers skip as a comment.
//!
//! Edge list: one `u v` pair per line, `#` starts a comment. A line with a
//! single id declares a (possibly isolated) vertex.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::ParseError;
use crate::graph::{Graph, GraphBuilder, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Dimacs,
    Edgelist,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dimacs" => Ok(Format::Dimacs),
            "edgelist" | "edges" => Ok(Format::Edgelist),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

pub fn parse_graph(input: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::Dimacs => parse_dimacs(input),
        Format::Edgelist => parse_edgelist(input),
    }
}

pub fn serialize_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::Dimacs => write_dimacs(g),
        Format::Edgelist => write_edgelist(g),
    }
}

fn bad(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn id(tok: &str, line: usize) -> Result<VertexId, ParseError> {
    tok.parse::<VertexId>()
        .map_err(|_| bad(line, format!("invalid vertex id `{tok}`")))
}

fn push_edge(
    b: &mut GraphBuilder,
    u: VertexId,
    v: VertexId,
    line: usize,
) -> Result<(), ParseError> {
    if u == v {
        return Err(ParseError::SelfLoop { line, vertex: u });
    }
    if !b.add_edge(u, v) {
        return Err(ParseError::DuplicateEdge { line, u, v });
    }
    Ok(())
}

fn parse_dimacs(input: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut b = GraphBuilder::new();
    let mut edges = 0usize;
    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first().copied() {
            None => continue,
            Some("c") => {
                if toks.get(1) == Some(&"ids") {
                    if header.is_none() || edges > 0 {
                        return Err(bad(line, "`c ids` must directly follow the header"));
                    }
                    let list = toks[2..]
                        .iter()
                        .map(|t| id(t, line))
                        .collect::<Result<Vec<_>, _>>()?;
                    if list.len() != header.unwrap().0 {
                        return Err(bad(line, "id list length differs from header"));
                    }
                    b = GraphBuilder::new();
                    for &v in &list {
                        if b.contains(v) {
                            return Err(bad(line, format!("vertex {v} listed twice")));
                        }
                        b.add_vertex_with_id(v);
                    }
                }
            }
            Some("p") => {
                if header.is_some() {
                    return Err(bad(line, "second problem line"));
                }
                if toks.len() != 4 || toks[1] != "edge" {
                    return Err(bad(line, "expected `p edge <n> <m>`"));
                }
                let n = toks[2]
                    .parse()
                    .map_err(|_| bad(line, "invalid vertex count"))?;
                let m = toks[3]
                    .parse()
                    .map_err(|_| bad(line, "invalid edge count"))?;
                for v in 1..=n as VertexId {
                    b.add_vertex_with_id(v);
                }
                header = Some((n, m));
            }
            Some("e") => {
                if header.is_none() {
                    return Err(bad(line, "edge before problem line"));
                }
                if toks.len() != 3 {
                    return Err(bad(line, "expected `e <u> <v>`"));
                }
                let (u, v) = (id(toks[1], line)?, id(toks[2], line)?);
                for x in [u, v] {
                    if !b.contains(x) {
                        return Err(bad(line, format!("vertex {x} out of range")));
                    }
                }
                push_edge(&mut b, u, v, line)?;
                edges += 1;
            }
            Some(other) => return Err(bad(line, format!("unknown line type `{other}`"))),
        }
    }
    let Some((_, m)) = header else {
        return Err(bad(0, "missing problem line"));
    };
    if edges != m {
        return Err(bad(0, format!("header declares {m} edges, found {edges}")));
    }
    Ok(b.build())
}

fn parse_edgelist(input: &str) -> Result<Graph, ParseError> {
    let mut b = GraphBuilder::new();
    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            [v] => b.add_vertex_with_id(id(v, line)?),
            [u, v] => {
                let (u, v) = (id(u, line)?, id(v, line)?);
                b.add_vertex_with_id(u);
                b.add_vertex_with_id(v);
                push_edge(&mut b, u, v, line)?;
            }
            _ => return Err(bad(line, "expected `<u> <v>`")),
        }
    }
    Ok(b.build())
}

fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", g.n(), g.m()).unwrap();
    let canonical = g.vertices().zip(1..).all(|(v, i)| v == i);
    if !canonical {
        out.push_str("c ids");
        for v in g.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

fn write_edgelist(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        if g.degree(v) == 0 {
            writeln!(out, "{v}").unwrap();
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_path() {
        let g = parse_graph("p edge 3 2\ne 1 2\ne 2 3\n", Format::Dimacs).unwrap();
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn dimacs_single_vertex() {
        let g = parse_graph("p edge 1 0\n", Format::Dimacs).unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
    }

    #[test]
    fn edgelist_triangle() {
        let g = parse_graph("1 2\n2 3\n3 1\n", Format::Edgelist).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn writes_dimacs() {
        assert_eq!(
            serialize_graph(&Graph::complete(3), Format::Dimacs),
            "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n"
        );
        assert_eq!(
            serialize_graph(&Graph::empty(), Format::Dimacs),
            "p edge 0 0\n"
        );
        let p4 = serialize_graph(&Graph::path(4), Format::Dimacs);
        assert!(p4.starts_with("p edge 4 3\n"));
        assert_eq!(p4.lines().count(), 4);
    }

    #[test]
    fn gapped_ids_round_trip() {
        let g = Graph::path(5).without(&[2].into_iter().collect());
        for f in [Format::Dimacs, Format::Edgelist] {
            assert_eq!(parse_graph(&serialize_graph(&g, f), f).unwrap(), g);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_graph("p edge 2 2\ne 1 2\ne 2 1\n", Format::Dimacs),
            Err(ParseError::DuplicateEdge { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph("1 1\n", Format::Edgelist),
            Err(ParseError::SelfLoop { line: 1, vertex: 1 })
        ));
        assert!(matches!(
            parse_graph("p edge 2 1\ne 1 3\n", Format::Dimacs),
            Err(ParseError::Malformed { line: 2, .. })
        ));
        assert!(parse_graph("e 1 2\n", Format::Dimacs).is_err());
        assert!(parse_graph("p edge 2 3\ne 1 2\n", Format::Dimacs).is_err());
        assert!(parse_graph("1 2 3\n", Format::Edgelist).is_err());
        assert!(parse_graph("a b\n", Format::Edgelist).is_err());
    }
}
