//! Ready-made small instances used across tests, docs, and benchmarks.

use crate::graph::{DefiningGraph, GraphOfGroups};

/// One vertex, one loop with indices `(k, l)`: the Baumslag-Solitar
/// solvable/ascending family lives here as `bs(1, n)`.
pub fn bs(k: i64, l: i64) -> GraphOfGroups {
    GraphOfGroups::gbs(&["v"], &[("e", "v", "v", k, l)]).expect("valid fixture")
}

/// Circle of `indices.len()` vertices; edge `i` runs from vertex `i` to
/// vertex `i + 1` (mod n) with the given index pair.
pub fn circle(indices: &[(i64, i64)]) -> GraphOfGroups {
    let n = indices.len();
    assert!(n >= 1);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edge_names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let edges: Vec<(&str, &str, &str, i64, i64)> = (0..n)
        .map(|i| {
            (
                edge_names[i].as_str(),
                name_refs[i],
                name_refs[(i + 1) % n],
                indices[i].0,
                indices[i].1,
            )
        })
        .collect();
    GraphOfGroups::gbs(&name_refs, &edges).expect("valid fixture")
}

/// Wedge of `m` circles of length `n`, glued at a hub vertex `v`; every
/// edge carries indices `(k, k)`.
pub fn wedge_of_circles(m: usize, n: usize, k: i64) -> GraphOfGroups {
    assert!(m >= 1 && n >= 1);
    let mut vertices = vec!["v".to_string()];
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for c in 0..m {
        let mut prev = "v".to_string();
        for j in 1..n {
            let w = format!("w{c}_{j}");
            edges.push((format!("e{c}_{}", j - 1), prev.clone(), w.clone()));
            vertices.push(w.clone());
            prev = w;
        }
        edges.push((format!("e{c}_{}", n - 1), prev, "v".to_string()));
    }
    let vertex_refs: Vec<&str> = vertices.iter().map(|s| s.as_str()).collect();
    let edge_specs: Vec<(&str, &str, &str, i64, i64)> = edges
        .iter()
        .map(|(name, from, to)| (name.as_str(), from.as_str(), to.as_str(), k, k))
        .collect();
    GraphOfGroups::gbs(&vertex_refs, &edge_specs).expect("valid fixture")
}

/// Two vertices joined by one edge with indices `(k_u, k_v)`.
pub fn segment(k_u: i64, k_v: i64) -> GraphOfGroups {
    GraphOfGroups::gbs(&["u", "v"], &[("e", "u", "v", k_u, k_v)]).expect("valid fixture")
}

/// Free product of finite cyclic groups on a line of edges with trivial
/// edge groups: vertex `i` carries `Z/orders[i]`.
pub fn free_product(orders: &[u64]) -> GraphOfGroups {
    assert!(orders.len() >= 2);
    let names: Vec<String> = (0..orders.len()).map(|i| format!("v{i}")).collect();
    let vertices: Vec<(&str, u64)> = names
        .iter()
        .zip(orders)
        .map(|(n, o)| (n.as_str(), *o))
        .collect();
    let edge_names: Vec<String> = (0..orders.len() - 1).map(|i| format!("e{i}")).collect();
    let edges: Vec<(&str, &str, &str)> = (0..orders.len() - 1)
        .map(|i| {
            (
                edge_names[i].as_str(),
                names[i].as_str(),
                names[i + 1].as_str(),
            )
        })
        .collect();
    GraphOfGroups::trivial_edge(&vertices, &edges).expect("valid fixture")
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// Cycle defining graph on `n >= 3` vertices (`n == 2` gives a single
/// edge, `n <= 1` no edges).
pub fn cycle_graph(n: usize) -> DefiningGraph {
    let names = numbered(n);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut edges = Vec::new();
    if n == 2 {
        edges.push((refs[0], refs[1]));
    } else if n >= 3 {
        for i in 0..n {
            edges.push((refs[i], refs[(i + 1) % n]));
        }
    }
    DefiningGraph::new(&refs, &edges).expect("valid fixture")
}

pub fn path_graph(n: usize) -> DefiningGraph {
    let names = numbered(n);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let edges: Vec<(&str, &str)> = (1..n).map(|i| (refs[i - 1], refs[i])).collect();
    DefiningGraph::new(&refs, &edges).expect("valid fixture")
}

pub fn complete_graph(n: usize) -> DefiningGraph {
    let names = numbered(n);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((refs[i], refs[j]));
        }
    }
    DefiningGraph::new(&refs, &edges).expect("valid fixture")
}

pub fn empty_graph(n: usize) -> DefiningGraph {
    let names = numbered(n);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    DefiningGraph::new(&refs, &[]).expect("valid fixture")
}

/// Star: vertex `s0` joined to `n` outer vertices.
pub fn star_graph(n: usize) -> DefiningGraph {
    let names = numbered(n + 1);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let edges: Vec<(&str, &str)> = (1..=n).map(|i| (refs[0], refs[i])).collect();
    DefiningGraph::new(&refs, &edges).expect("valid fixture")
}
