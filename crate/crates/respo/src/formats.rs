//! Score output, weight tables and edge lists.

use std::collections::BTreeMap;

use respo_core::generators::Graph;
use respo_core::{Name, Rational, SupportHistogram, WeightFunction};
use serde_json::{json, Map, Value};

use crate::textio::{Diagnostic, ParseError, Severity};

/// Digits after the point in the `decimal` field.
pub const DECIMAL_DIGITS: usize = 10;

/// `{label: {"score": "p/q", "decimal": "0.1234567890"}}` in the given order.
pub fn scores_json(scores: &[(Name, Rational)]) -> String {
    let mut m = Map::new();
    for (label, s) in scores {
        m.insert(
            label.to_string(),
            json!({ "score": s.to_string(), "decimal": s.to_decimal_string(DECIMAL_DIGITS) }),
        );
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
    out.push('\n');
    out
}

pub fn scores_table(scores: &[(Name, Rational)]) -> String {
    let width = scores.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(4);
    let swidth = scores.iter().map(|(_, s)| s.to_string().len()).max().unwrap_or(0).max(5);
    let mut out = format!("{:<width$}  {:>swidth$}  decimal\n", "fact", "score");
    for (l, s) in scores {
        out.push_str(&format!(
            "{:<width$}  {:>swidth$}  {}\n",
            l.as_str(),
            s.to_string(),
            s.to_decimal_string(DECIMAL_DIGITS)
        ));
    }
    out
}

/// `{"2": 1, "3": 2}`.
pub fn histogram_json(h: &SupportHistogram) -> String {
    let m: Map<String, Value> = h.iter().map(|(k, c)| (k.to_string(), json!(c))).collect();
    serde_json::to_string(&Value::Object(m)).expect("serializable")
}

fn diag(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        diagnostics: vec![Diagnostic {
            line,
            column,
            message: msg.into(),
            severity: Severity::Error,
        }],
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Lines `n k p/q`; `k` may be `*` for every database size.
pub fn parse_weight_file(text: &str) -> Result<WeightFunction, ParseError> {
    let mut table = BTreeMap::new();
    for (ln, line) in content_lines(text) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(diag(ln, 1, "expected `n k p/q`"));
        }
        let n: usize = parts[0]
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| diag(ln, 1, "support size must be a positive integer"))?;
        let k = if parts[1] == "*" {
            None
        } else {
            Some(parts[1].parse::<usize>().map_err(|_| diag(ln, 1, "database size must be an integer or `*`"))?)
        };
        let w: Rational = parts[2].parse().map_err(|e: respo_core::Error| diag(ln, 1, e.to_string()))?;
        if table.insert((n, k), w).is_some() {
            return Err(diag(ln, 1, "duplicate entry"));
        }
    }
    if table.is_empty() {
        return Err(diag(1, 1, "weight file has no entries"));
    }
    Ok(WeightFunction::Table(table))
}

/// `ms`, `uniform`, `invsq`, or `file:<path>` (resolved by the caller).
pub fn builtin_weight(name: &str) -> Option<WeightFunction> {
    match name {
        "ms" => Some(WeightFunction::Ms),
        "uniform" => Some(WeightFunction::Uniform),
        "invsq" | "inverse-square" => Some(WeightFunction::InverseSquare),
        _ => None,
    }
}

/// Edge lists: one `u v` pair per line. A first line
/// `bipartite: A=a1,a2 B=b1,b2` declares the two sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub edges: Vec<(Name, Name)>,
    pub sides: Option<(Vec<Name>, Vec<Name>)>,
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList, ParseError> {
    let mut edges = Vec::new();
    let mut sides = None;
    for (ln, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("bipartite:") {
            if sides.is_some() || !edges.is_empty() {
                return Err(diag(ln, 1, "the bipartite header must be the first line"));
            }
            let mut a = None;
            let mut b = None;
            for part in rest.split_whitespace() {
                let (key, vals) = part
                    .split_once('=')
                    .ok_or_else(|| diag(ln, 1, "expected `A=...` and `B=...`"))?;
                let names: Vec<Name> = vals.split(',').filter(|s| !s.is_empty()).map(Name::new).collect();
                match key {
                    "A" => a = Some(names),
                    "B" => b = Some(names),
                    _ => return Err(diag(ln, 1, format!("unknown side `{key}`"))),
                }
            }
            match (a, b) {
                (Some(a), Some(b)) => sides = Some((a, b)),
                _ => return Err(diag(ln, 1, "both sides A and B are required")),
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            [u, v] => edges.push((Name::new(u), Name::new(v))),
            [u] => {
                // a lone vertex
                edges.push((Name::new(u), Name::new(u)));
            }
            _ => return Err(diag(ln, 1, "expected `u v`")),
        }
    }
    Ok(EdgeList { edges, sides })
}

impl EdgeList {
    fn vertices(&self) -> Vec<Name> {
        Graph::vertices_of(&self.edges)
    }

    fn proper_edges(&self) -> Vec<(Name, Name)> {
        self.edges.iter().filter(|(u, v)| u != v).cloned().collect()
    }

    pub fn undirected(&self) -> respo_core::Result<Graph> {
        Graph::undirected(self.vertices(), &self.proper_edges())
    }

    /// Self-loops are dropped; no simple path uses them.
    pub fn directed(&self) -> respo_core::Result<Graph> {
        Graph::directed(self.vertices(), &self.proper_edges())
    }

    pub fn bipartite(&self) -> respo_core::Result<Graph> {
        let (a, b) = self
            .sides
            .clone()
            .ok_or_else(|| respo_core::Error::Invalid("missing `bipartite:` header".into()))?;
        Graph::bipartite(a, b, &self.proper_edges())
    }
}

pub fn render_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    if let Some((a, b)) = &g.bipartition {
        let names = |ix: &[usize]| ix.iter().map(|&i| g.vertices[i].to_string()).collect::<Vec<_>>().join(",");
        out.push_str(&format!("bipartite: A={} B={}\n", names(a), names(b)));
    }
    let mut touched = vec![false; g.vertices.len()];
    for &(u, v) in &g.edges {
        touched[u] = true;
        touched[v] = true;
        out.push_str(&format!("{} {}\n", g.vertices[u], g.vertices[v]));
    }
    if g.bipartition.is_none() {
        for (i, t) in touched.iter().enumerate() {
            if !t {
                out.push_str(&format!("{}\n", g.vertices[i]));
            }
        }
    }
    out
}
