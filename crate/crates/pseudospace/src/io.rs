//! Wire formats: graph and recipe JSON, DOT export, and the query result
//! objects the command line prints. All serialization is byte-stable for a
//! fixed input: vertices ascending, edges sorted, struct field order fixed.

use crate::amalgam::BuildRecipe;
use crate::graph::{LevelGraph, VertexId};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    level: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    vertices: Vec<VertexJson>,
    edges: Vec<(usize, usize)>,
}

/// Serializes a graph; ids come out as `0..|V|-1` in order.
pub fn graph_to_json(g: &LevelGraph) -> String {
    let doc = GraphJson {
        n: g.dimension(),
        vertices: g
            .vertices()
            .map(|id| VertexJson {
                id,
                level: g.level(id),
            })
            .collect(),
        edges: g.edges(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Parses and validates graph JSON; ids must be exactly `0..|V|-1`.
pub fn graph_from_json(text: &str) -> Result<LevelGraph> {
    let doc: GraphJson =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let mut g = LevelGraph::new(doc.n)?;
    for (pos, v) in doc.vertices.iter().enumerate() {
        if v.id != pos {
            return Err(Error::Schema(format!(
                "vertex ids must be dense and ordered; found {} at position {pos}",
                v.id
            )));
        }
        g.add_vertex(v.level)?;
    }
    for &(u, v) in &doc.edges {
        g.add_edge(u, v)?;
    }
    Ok(g)
}

pub fn recipe_to_json(recipe: &BuildRecipe) -> String {
    let mut s = serde_json::to_string_pretty(recipe).expect("serializable");
    s.push('\n');
    s
}

pub fn recipe_from_json(text: &str) -> Result<BuildRecipe> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

/// DOT export: one rank per level, plain undirected edges, node names
/// `v<id>` so the id round-trips through the label.
pub fn graph_to_dot(g: &LevelGraph) -> String {
    let mut out = String::from("graph pseudospace {\n");
    for level in 0..=g.dimension() {
        let at = g.vertices_at(level);
        if at.is_empty() {
            continue;
        }
        out.push_str("  { rank=same;");
        for v in at {
            out.push_str(&format!(" v{v};"));
        }
        out.push_str(" }\n");
    }
    for v in g.vertices() {
        out.push_str(&format!("  v{v} [label=\"{}:V{}\"];\n", v, g.level(v)));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  v{u} -- v{v};\n"));
    }
    out.push_str("}\n");
    out
}

/// Recovers the edge set from DOT text produced by [`graph_to_dot`].
pub fn edges_from_dot(text: &str) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim().trim_end_matches(';');
        if let Some((a, b)) = line.split_once(" -- ") {
            if let (Some(a), Some(b)) = (a.strip_prefix('v'), b.strip_prefix('v')) {
                if let (Ok(a), Ok(b)) = (a.parse(), b.parse()) {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

/// Query result payloads with the exact key names the CLI contract fixes.
#[derive(Debug, Serialize)]
pub struct AclResult {
    pub acl: Vec<VertexId>,
}

#[derive(Debug, Serialize)]
pub struct ProjResult {
    pub proj: Vec<VertexId>,
}

#[derive(Debug, Serialize)]
pub struct IndepResult {
    pub independent: bool,
}

#[derive(Debug, Serialize)]
pub struct TypeResult {
    #[serde(rename = "type")]
    pub type_class: String,
}

#[derive(Debug, Serialize)]
pub struct NfResult {
    pub nf: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct WeylResult {
    pub weyl: Option<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{generate, Variant};
    use crate::graph::chamber_chain;

    #[test]
    fn graph_json_round_trip() {
        let (g, _) = generate(2, 14, 3, Variant::Saturated).unwrap();
        let text = graph_to_json(&g);
        let back = graph_from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(graph_to_json(&back), text);
    }

    #[test]
    fn graph_json_rejects_sparse_ids() {
        let bad = r#"{"n":1,"vertices":[{"id":1,"level":0}],"edges":[]}"#;
        assert!(graph_from_json(bad).is_err());
        let malformed = "{nope";
        assert!(graph_from_json(malformed).is_err());
    }

    #[test]
    fn recipe_json_round_trip() {
        let (_, recipe) = generate(2, 12, 9, Variant::Prime).unwrap();
        let text = recipe_to_json(&recipe);
        assert!(text.contains("\"prime\""));
        let back = recipe_from_json(&text).unwrap();
        assert_eq!(back, recipe);
    }

    #[test]
    fn dot_round_trips_edges() {
        let g = chamber_chain(3).unwrap();
        let dot = graph_to_dot(&g);
        assert_eq!(dot.matches("rank=same").count(), 4);
        assert_eq!(edges_from_dot(&dot), g.edges());
        // empty graph is still valid DOT
        let empty = LevelGraph::new(1).unwrap();
        let dot = graph_to_dot(&empty);
        assert!(dot.starts_with("graph") && dot.ends_with("}\n"));
    }

    use crate::graph::LevelGraph;
}
