//! Text and JSON serialization of signed digraphs.
//!
//! Edge-list format, one edge per line, 1-based node numbers:
//!
//! ```text
//! # comment
//! n 3
//! 1 2 0.5     # information flows 1 -> 2, sets a_21 = 0.5
//! 2 3 -1
//! ```
//!
//! The `n` header is optional; without it the node count is the largest
//! index that appears.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::GraphError;
use crate::graph::SignedDigraph;

pub fn from_edge_list(text: &str) -> Result<SignedDigraph, GraphError> {
    let mut declared_n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize, f64)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens[0] == "n" {
            if tokens.len() != 2 || declared_n.is_some() {
                return Err(GraphError::Malformed { line });
            }
            let n = parse_index(tokens[1], line, "node count")?;
            declared_n = Some(n);
            continue;
        }
        if tokens.len() != 3 {
            return Err(GraphError::Malformed { line });
        }
        let src = parse_index(tokens[0], line, "source index")?;
        let dst = parse_index(tokens[1], line, "destination index")?;
        let weight = parse_weight(tokens[2], line)?;
        for idx in [src, dst] {
            if idx < 1 {
                return Err(GraphError::IndexOutOfRange {
                    line,
                    index: idx,
                    n: declared_n.unwrap_or(0),
                });
            }
        }
        edges.push((line, src, dst, weight));
    }

    let max_index = edges.iter().map(|e| e.1.max(e.2)).max().unwrap_or(0);
    let n = match declared_n {
        Some(n) => {
            if let Some(e) = edges.iter().find(|e| e.1 > n || e.2 > n) {
                return Err(GraphError::IndexOutOfRange {
                    line: e.0,
                    index: e.1.max(e.2),
                    n,
                });
            }
            n
        }
        None => max_index,
    };
    if n == 0 {
        return Err(GraphError::Empty);
    }

    // validate here so errors carry file line numbers
    let mut seen = vec![false; n * n];
    for &(line, src, dst, w) in &edges {
        if src == dst {
            return Err(GraphError::SelfLoop { line, node: src });
        }
        if w == 0.0 {
            return Err(GraphError::ZeroWeight { line, src, dst });
        }
        let slot = (dst - 1) * n + (src - 1);
        if seen[slot] {
            return Err(GraphError::DuplicateEdge { line, src, dst });
        }
        seen[slot] = true;
    }
    let triples: Vec<(usize, usize, f64)> = edges
        .iter()
        .map(|&(_, s, d, w)| (s - 1, d - 1, w))
        .collect();
    SignedDigraph::from_edges(n, &triples)
}

/// Writes the `n` header followed by one line per edge. Weights use the
/// shortest decimal form that parses back to the same double.
pub fn to_edge_list(g: &SignedDigraph) -> String {
    let mut out = format!("n {}\n", g.node_count());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.src + 1, e.dst + 1, e.weight));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

pub fn from_json(text: &str) -> Result<SignedDigraph, GraphError> {
    let parsed: JsonGraph =
        serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    let mut triples = Vec::with_capacity(parsed.edges.len());
    for (k, &(src, dst, w)) in parsed.edges.iter().enumerate() {
        for idx in [src, dst] {
            if idx < 1 || idx > parsed.n {
                return Err(GraphError::IndexOutOfRange {
                    line: k + 1,
                    index: idx,
                    n: parsed.n,
                });
            }
        }
        triples.push((src - 1, dst - 1, w));
    }
    let g = SignedDigraph::from_edges(parsed.n, &triples)?;
    match parsed.labels {
        Some(labels) => g.with_labels(labels),
        None => Ok(g),
    }
}

pub fn to_json(g: &SignedDigraph) -> String {
    let doc = JsonGraph {
        n: g.node_count(),
        edges: g
            .edges()
            .into_iter()
            .map(|e| (e.src + 1, e.dst + 1, e.weight))
            .collect(),
        labels: g.labels().map(<[String]>::to_vec),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}

/// SHA-256 of the canonical edge list, hex encoded.
pub fn graph_hash(g: &SignedDigraph) -> String {
    let digest = Sha256::digest(to_edge_list(g).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Accepts either format, choosing JSON when the text starts with `{`.
pub fn parse_graph(text: &str) -> Result<SignedDigraph, GraphError> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_edge_list(text)
    }
}

fn parse_index(token: &str, line: usize, what: &'static str) -> Result<usize, GraphError> {
    token.parse().map_err(|_| GraphError::Parse {
        line,
        what,
        token: token.to_string(),
    })
}

fn parse_weight(token: &str, line: usize) -> Result<f64, GraphError> {
    // accept the typographic minus sign
    let normalized = token.replace('\u{2212}', "-");
    match normalized.parse::<f64>() {
        Ok(w) if w.is_finite() => Ok(w),
        _ => Err(GraphError::Parse {
            line,
            what: "weight",
            token: token.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_infers_node_count() {
        let g = from_edge_list("1 2 3.0").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.weight(1, 0), 3.0);
    }

    #[test]
    fn header_and_comments() {
        let g = from_edge_list("# demo\nn 4\n\n1 2 -1 # trailing\n").unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.weight(1, 0), -1.0);
        assert_eq!(from_edge_list("n 3\n").unwrap().edge_count(), 0);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            from_edge_list("1 1 1.0"),
            Err(GraphError::SelfLoop { line: 1, node: 1 })
        ));
        assert!(matches!(
            from_edge_list("1 2 abc"),
            Err(GraphError::Parse { what: "weight", .. })
        ));
        assert!(matches!(
            from_edge_list("1 2 1\n1 2 2"),
            Err(GraphError::DuplicateEdge { line: 2, .. })
        ));
        assert!(matches!(
            from_edge_list("0 2 1"),
            Err(GraphError::IndexOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            from_edge_list("n 2\n1 3 1"),
            Err(GraphError::IndexOutOfRange { index: 3, n: 2, .. })
        ));
        assert!(matches!(
            from_edge_list("1 2 0"),
            Err(GraphError::ZeroWeight { .. })
        ));
        assert!(matches!(
            from_edge_list("1 2 inf"),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            from_edge_list("1 2"),
            Err(GraphError::Malformed { line: 1 })
        ));
        assert!(matches!(
            from_edge_list("# nothing"),
            Err(GraphError::Empty)
        ));
    }

    #[test]
    fn typographic_minus() {
        let g = from_edge_list("2 1 \u{2212}3.0").unwrap();
        assert_eq!(g.weight(0, 1), -3.0);
    }

    #[test]
    fn json_round_trip_with_labels() {
        let g = SignedDigraph::from_edges(3, &[(0, 1, 0.1), (2, 0, -2.5)])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let back = from_json(&to_json(&g)).unwrap();
        assert_eq!(back, g);
        assert_eq!(parse_graph(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn json_rejects_bad_index() {
        let err = from_json(r#"{"n": 2, "edges": [[1, 3, 1.0]]}"#).unwrap_err();
        assert!(matches!(err, GraphError::IndexOutOfRange { index: 3, .. }));
        assert!(matches!(from_json("{"), Err(GraphError::Json(_))));
    }
}
