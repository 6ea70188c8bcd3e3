//! Input documents: a single JSON interchange format for both kinds of
//! graph, with schema and reference errors that carry a locus.

use serde::Deserialize;
use thiserror::Error;
use treebound::{DefiningGraph, GraphOfGroups, VertexId};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("schema error at {locus}: {message}")]
    Schema { locus: String, message: String },
    #[error("unresolved reference at {locus}: `{name}`")]
    Resolve { locus: String, name: String },
}

fn schema(locus: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Schema {
        locus: locus.into(),
        message: message.into(),
    }
}

/// A parsed and resolved input document.
pub enum Document {
    GraphOfGroups { graph: GraphOfGroups, base: VertexId },
    Defining { graph: DefiningGraph },
}

/// Vertex entry: a bare name when vertex groups are infinite cyclic, or
/// `{id, order}` for a finite cyclic vertex group.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawVertex {
    Name(String),
    Finite { id: String, order: u64 },
}

impl RawVertex {
    fn name(&self) -> &str {
        match self {
            RawVertex::Name(n) => n,
            RawVertex::Finite { id, .. } => id,
        }
    }
}

#[derive(Deserialize)]
struct RawGogEdge {
    id: String,
    from: String,
    to: String,
    #[serde(default)]
    k: Option<i64>,
    #[serde(default)]
    k_rev: Option<i64>,
}

#[derive(Deserialize)]
#[serde(tag = "kind")]
enum RawDocument {
    #[serde(rename = "graph-of-groups")]
    GraphOfGroups {
        gbs: bool,
        vertices: Vec<RawVertex>,
        edges: Vec<RawGogEdge>,
        #[serde(default)]
        base: Option<String>,
    },
    #[serde(rename = "defining-graph")]
    Defining {
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
    },
}

pub fn parse_document(text: &str) -> Result<Document, InputError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
        schema(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    match raw {
        RawDocument::GraphOfGroups {
            gbs,
            vertices,
            edges,
            base,
        } => resolve_graph_of_groups(gbs, &vertices, &edges, base.as_deref()),
        RawDocument::Defining { vertices, edges } => resolve_defining(&vertices, &edges),
    }
}

fn resolve_graph_of_groups(
    gbs: bool,
    vertices: &[RawVertex],
    edges: &[RawGogEdge],
    base: Option<&str>,
) -> Result<Document, InputError> {
    if vertices.is_empty() {
        return Err(schema("vertices", "at least one vertex is required"));
    }
    let names: Vec<&str> = vertices.iter().map(RawVertex::name).collect();
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(schema(format!("vertices[{i}]"), format!("duplicate vertex `{name}`")));
        }
    }
    for (i, e) in edges.iter().enumerate() {
        for (field, end) in [("from", &e.from), ("to", &e.to)] {
            if !names.contains(&end.as_str()) {
                return Err(InputError::Resolve {
                    locus: format!("edges[{i}].{field}"),
                    name: end.clone(),
                });
            }
        }
    }
    let graph = if gbs {
        for (i, v) in vertices.iter().enumerate() {
            if matches!(v, RawVertex::Finite { .. }) {
                return Err(schema(
                    format!("vertices[{i}]"),
                    "vertex orders require \"gbs\": false",
                ));
            }
        }
        let mut resolved = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let k = e
                .k
                .ok_or_else(|| schema(format!("edges[{i}].k"), "index is required"))?;
            let k_rev = e
                .k_rev
                .ok_or_else(|| schema(format!("edges[{i}].k_rev"), "index is required"))?;
            if k == 0 {
                return Err(schema(format!("edges[{i}].k"), "index 0 is not allowed"));
            }
            if k_rev == 0 {
                return Err(schema(format!("edges[{i}].k_rev"), "index 0 is not allowed"));
            }
            resolved.push((e.id.as_str(), e.from.as_str(), e.to.as_str(), k, k_rev));
        }
        GraphOfGroups::gbs(&names, &resolved)
            .map_err(|e| schema("edges", e.to_string()))?
    } else {
        let mut with_orders = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            match v {
                RawVertex::Finite { id, order } => {
                    if *order == 0 {
                        return Err(schema(
                            format!("vertices[{i}].order"),
                            "order 0 is not allowed",
                        ));
                    }
                    with_orders.push((id.as_str(), *order));
                }
                RawVertex::Name(_) => {
                    return Err(schema(
                        format!("vertices[{i}]"),
                        "expected {\"id\", \"order\"} when \"gbs\" is false",
                    ));
                }
            }
        }
        let mut resolved = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.k.is_some() || e.k_rev.is_some() {
                return Err(schema(
                    format!("edges[{i}]"),
                    "indices k/k_rev require \"gbs\": true",
                ));
            }
            resolved.push((e.id.as_str(), e.from.as_str(), e.to.as_str()));
        }
        GraphOfGroups::trivial_edge(&with_orders, &resolved)
            .map_err(|e| schema("edges", e.to_string()))?
    };
    let base = match base {
        None => VertexId(0),
        Some(name) => graph.vertex_by_name(name).ok_or_else(|| InputError::Resolve {
            locus: "base".into(),
            name: name.to_string(),
        })?,
    };
    Ok(Document::GraphOfGroups { graph, base })
}

fn resolve_defining(
    vertices: &[String],
    edges: &[(String, String)],
) -> Result<Document, InputError> {
    for (i, name) in vertices.iter().enumerate() {
        if vertices[..i].contains(name) {
            return Err(schema(format!("vertices[{i}]"), format!("duplicate vertex `{name}`")));
        }
    }
    for (i, (a, b)) in edges.iter().enumerate() {
        for (slot, end) in [(0, a), (1, b)] {
            if !vertices.contains(end) {
                return Err(InputError::Resolve {
                    locus: format!("edges[{i}][{slot}]"),
                    name: end.clone(),
                });
            }
        }
        if a == b {
            return Err(schema(format!("edges[{i}]"), "self-loops are not allowed"));
        }
    }
    let names: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let pairs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let graph = DefiningGraph::new(&names, &pairs).map_err(|e| schema("edges", e.to_string()))?;
    Ok(Document::Defining { graph })
}
