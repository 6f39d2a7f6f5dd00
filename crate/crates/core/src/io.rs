//! Graph and pattern files.
//!
//! Text format: an `n <count>` line, then one `u v` edge per line, optionally a
//! `parts a,b | c,d` line for patterns. `#` starts a comment. Labels that are not
//! all integers in `0..n` are mapped to ids in order of first appearance. A file
//! whose first non-blank character is `{` is read as the structured form
//! [`GraphFile`].

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternGraph;

/// Structured mirror of the text format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<(Vec<usize>, Vec<usize>)>,
    /// Original label of each vertex id when the input used its own labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GraphFile {
    pub fn graph(&self) -> Result<Graph> {
        Graph::from_edges(self.n, &self.edges)
    }

    /// The pattern with the declared parts, or a computed 2-colouring.
    pub fn pattern(&self) -> Result<PatternGraph> {
        PatternGraph::from_edges(self.n, &self.edges, self.parts.clone())
    }

    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            n: g.n(),
            edges: g.edges(),
            parts: None,
            labels: None,
        }
    }

    pub fn from_pattern(p: &PatternGraph) -> Self {
        GraphFile {
            parts: Some((p.part1(), p.part2())),
            ..GraphFile::from_graph(p.graph())
        }
    }
}

pub fn parse(text: &str) -> Result<GraphFile> {
    if text.trim_start().starts_with('{') {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        file.graph()?;
        return Ok(file);
    }
    parse_text(text)
}

fn parse_text(text: &str) -> Result<GraphFile> {
    let mut n = None;
    let mut raw_edges: Vec<(usize, String, String)> = Vec::new();
    let mut raw_parts: Option<(usize, Vec<String>, Vec<String>)> = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        let first = words.next().unwrap();
        if n.is_none() {
            if first != "n" {
                return Err(Error::parse(
                    lineno,
                    "expected \"n <count>\" before any edge",
                ));
            }
            let count = words
                .next()
                .and_then(|w| w.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(lineno, "\"n\" needs a vertex count"))?;
            if words.next().is_some() {
                return Err(Error::parse(lineno, "trailing text after the vertex count"));
            }
            n = Some(count);
            continue;
        }
        if first == "parts" {
            let rest = body["parts".len()..].trim();
            let (a, b) = rest
                .split_once('|')
                .ok_or_else(|| Error::parse(lineno, "parts line needs \"a,b | c,d\""))?;
            let list = |s: &str| -> Vec<String> {
                s.split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(String::from)
                    .collect()
            };
            raw_parts = Some((lineno, list(a), list(b)));
            continue;
        }
        let second = words
            .next()
            .ok_or_else(|| Error::parse(lineno, "edge line needs two endpoints"))?;
        if words.next().is_some() {
            return Err(Error::parse(
                lineno,
                "edge line has more than two endpoints",
            ));
        }
        raw_edges.push((lineno, first.to_string(), second.to_string()));
    }
    let n = n.ok_or_else(|| Error::parse(1, "missing \"n <count>\" line"))?;

    let mut seen: Vec<&str> = Vec::new();
    for (_, a, b) in &raw_edges {
        for s in [a, b] {
            if !seen.contains(&s.as_str()) {
                seen.push(s);
            }
        }
    }
    if let Some((_, p1, p2)) = &raw_parts {
        for s in p1.iter().chain(p2) {
            if !seen.contains(&s.as_str()) {
                seen.push(s);
            }
        }
    }
    let numeric = seen.iter().all(|s| s.parse::<usize>().is_ok_and(|v| v < n));
    let mut ids: HashMap<String, usize> = HashMap::new();
    let labels = if numeric {
        None
    } else {
        if seen.len() > n {
            return Err(Error::parse(
                1,
                format!("{} distinct labels but n = {n}", seen.len()),
            ));
        }
        let mut labels: Vec<String> = seen.iter().map(|s| s.to_string()).collect();
        for (id, l) in labels.iter().enumerate() {
            ids.insert(l.clone(), id);
        }
        labels.extend((seen.len()..n).map(|v| format!("#{v}")));
        Some(labels)
    };
    let id = |s: &str| -> usize {
        if numeric {
            s.parse().unwrap()
        } else {
            ids[s]
        }
    };

    let mut edges = Vec::new();
    for (lineno, a, b) in &raw_edges {
        let (u, v) = (id(a), id(b));
        if u == v {
            return Err(Error::parse(*lineno, format!("self-loop at {a}")));
        }
        edges.push((u, v));
    }
    let parts = raw_parts.map(|(_, p1, p2)| {
        (
            p1.iter().map(|s| id(s)).collect(),
            p2.iter().map(|s| id(s)).collect(),
        )
    });
    let file = GraphFile {
        n,
        edges,
        parts,
        labels,
    };
    file.graph()?;
    Ok(file)
}

/// Text rendering with optional leading comment lines.
pub fn to_text(file: &GraphFile, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "n {}", file.n);
    for (u, v) in &file.edges {
        let _ = writeln!(out, "{u} {v}");
    }
    if let Some((a, b)) = &file.parts {
        let join = |xs: &[usize]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(out, "parts {} | {}", join(a), join(b));
    }
    out
}

pub fn pattern_text(p: &PatternGraph) -> String {
    to_text(&GraphFile::from_pattern(p), &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_text() {
        let f = parse("# square\nn 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(f.graph().unwrap().edge_count(), 4);
        assert!(f.labels.is_none());
        let p = f.pattern().unwrap();
        assert_eq!((p.part1(), p.part2()), (vec![0, 2], vec![1, 3]));
    }

    #[test]
    fn labels_are_mapped_in_order() {
        let f = parse("n 4\nx y\ny z  # comment\nparts x,z | y,w\n").unwrap();
        assert_eq!(f.labels.as_deref().unwrap(), ["x", "y", "z", "w"]);
        assert_eq!(f.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(f.parts, Some((vec![0, 2], vec![1, 3])));
    }

    #[test]
    fn errors_carry_locations() {
        assert!(matches!(parse("0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse("n 3\n0 1\n1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse("n 3\n0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse("n 2\na b\nb c\n"), Err(Error::Parse { .. })));
        let odd = parse("n 3\n0 1\n1 2\n2 0\n").unwrap().pattern();
        assert!(matches!(odd, Err(Error::NotBipartite { .. })));
    }

    #[test]
    fn structured_round_trip() {
        let f = parse("n 3\n0 1\n1 2\nparts 0,2 | 1\n").unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(parse(&json).unwrap(), f);
        assert_eq!(parse(&to_text(&f, &["note".into()])).unwrap(), f);
    }
}
