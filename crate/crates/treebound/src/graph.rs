//! Graphs of groups with computable coset data, and simplicial defining
//! graphs for right-angled Coxeter and Artin groups.
//!
//! A graph of groups is stored as a set of directed edges closed under a
//! fixed-point-free involution `e -> reverse(e)`; `source(e)` and `range(e)`
//! are the endpoints, with `source(e) == range(reverse(e))`. Words read
//! left to right travel from the range of their first edge towards the
//! source of their last edge, so a geodesic based at `v` consists of edges
//! whose first edge has range `v`.
//!
//! Coset data lives in a backend. For every directed edge `e` the backend
//! fixes a finite left transversal of the edge subgroup image inside the
//! vertex group at `range(e)`, ordered canonically with the identity first;
//! all normal-form and boundary computations enumerate cosets in that order.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Index of a vertex in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VertexId(pub usize);

/// Index of a directed edge in declaration order. Each declared geometric
/// edge contributes two consecutive ids: the declared direction, then its
/// reverse.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// One directed edge of the underlying graph.
#[derive(Clone, Debug)]
pub struct DirectedEdge {
    /// Display name; reverse edges carry the declared name with a macron.
    pub name: String,
    /// Vertex the edge points away from when read inside a word.
    pub range: VertexId,
    /// Vertex the edge points towards when read inside a word.
    pub source: VertexId,
    /// The opposite orientation of the same geometric edge.
    pub reverse: EdgeId,
}

/// A vertex group element in the backend's encoding.
///
/// `Int` is an element of an infinite cyclic vertex group written
/// additively; `Fin` is an element of a finite cyclic vertex group, always
/// reduced modulo the group order. Identity is `Int(0)` or `Fin(0)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Token {
    Int(BigInt),
    Fin(u64),
}

impl Token {
    pub fn int(v: i64) -> Self {
        Token::Int(BigInt::from(v))
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Token::Int(v) => v.is_zero(),
            Token::Fin(v) => *v == 0,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(v) => write!(f, "{v}"),
            Token::Fin(v) => write!(f, "{v}"),
        }
    }
}

/// Coset data for the vertex and edge groups.
#[derive(Clone, Debug)]
pub enum CosetBackend {
    /// Infinite cyclic vertex and edge groups. `k[e]` is the nonzero index
    /// of the edge subgroup inside the vertex group at `range(e)`: the edge
    /// generator embeds as `k[e]` times the vertex generator, and the
    /// transversal at `e` is `0, 1, .., |k[e]| - 1`.
    Gbs { k: Vec<i64> },
    /// Finite cyclic vertex groups of the given orders with trivial edge
    /// groups; the transversal at `e` is all of the vertex group at
    /// `range(e)` in additive order.
    TrivialEdge { orders: Vec<u64> },
}

/// Problems detected while assembling a graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate name `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{0}` has index 0")]
    ZeroIndex(String),
    #[error("vertex `{0}` has group order 0")]
    ZeroOrder(String),
    #[error("edge involution broken at `{0}`")]
    BrokenInvolution(String),
    #[error("defining graphs admit no self-loops (vertex `{0}`)")]
    SelfLoop(String),
}

/// A locally finite graph of groups over one of the supported backends.
#[derive(Clone, Debug)]
pub struct GraphOfGroups {
    vertex_names: Vec<String>,
    edges: Vec<DirectedEdge>,
    backend: CosetBackend,
}

impl GraphOfGroups {
    /// Assembles a GBS graph. Each entry of `edges` is
    /// `(name, from, to, k, k_rev)`: a geometric edge whose declared
    /// direction has range `from` and source `to`, with edge-subgroup index
    /// `k` at `from` and `k_rev` at `to`. Indices are signed and nonzero.
    pub fn gbs(
        vertices: &[&str],
        edges: &[(&str, &str, &str, i64, i64)],
    ) -> Result<Self, BuildError> {
        let vertex_names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let mut k = Vec::with_capacity(edges.len() * 2);
        let mut directed = Vec::with_capacity(edges.len() * 2);
        for (i, (name, from, to, ke, krev)) in edges.iter().enumerate() {
            if *ke == 0 || *krev == 0 {
                return Err(BuildError::ZeroIndex(name.to_string()));
            }
            let range = lookup_vertex(&vertex_names, from)?;
            let source = lookup_vertex(&vertex_names, to)?;
            directed.push(DirectedEdge {
                name: name.to_string(),
                range,
                source,
                reverse: EdgeId(2 * i + 1),
            });
            directed.push(DirectedEdge {
                name: reverse_name(name),
                range: source,
                source: range,
                reverse: EdgeId(2 * i),
            });
            k.push(*ke);
            k.push(*krev);
        }
        Self::from_parts(vertex_names, directed, CosetBackend::Gbs { k })
    }

    /// Assembles a graph with finite cyclic vertex groups and trivial edge
    /// groups. `vertices` pairs each name with its group order (>= 1);
    /// `edges` is `(name, from, to)` with the same orientation convention
    /// as [`GraphOfGroups::gbs`].
    pub fn trivial_edge(
        vertices: &[(&str, u64)],
        edges: &[(&str, &str, &str)],
    ) -> Result<Self, BuildError> {
        let vertex_names: Vec<String> = vertices.iter().map(|(s, _)| s.to_string()).collect();
        let orders: Vec<u64> = vertices.iter().map(|(_, o)| *o).collect();
        for (name, order) in vertices {
            if *order == 0 {
                return Err(BuildError::ZeroOrder(name.to_string()));
            }
        }
        let mut directed = Vec::with_capacity(edges.len() * 2);
        for (i, (name, from, to)) in edges.iter().enumerate() {
            let range = lookup_vertex(&vertex_names, from)?;
            let source = lookup_vertex(&vertex_names, to)?;
            directed.push(DirectedEdge {
                name: name.to_string(),
                range,
                source,
                reverse: EdgeId(2 * i + 1),
            });
            directed.push(DirectedEdge {
                name: reverse_name(name),
                range: source,
                source: range,
                reverse: EdgeId(2 * i),
            });
        }
        Self::from_parts(vertex_names, directed, CosetBackend::TrivialEdge { orders })
    }

    /// Validates raw parts: unique names, a fixed-point-free involution
    /// compatible with endpoints, and backend data of the right shape.
    pub fn from_parts(
        vertex_names: Vec<String>,
        edges: Vec<DirectedEdge>,
        backend: CosetBackend,
    ) -> Result<Self, BuildError> {
        let mut seen = BTreeSet::new();
        for name in &vertex_names {
            if !seen.insert(name.clone()) {
                return Err(BuildError::DuplicateEdge(name.clone()));
            }
        }
        for edge in &edges {
            if !seen.insert(edge.name.clone()) {
                return Err(BuildError::DuplicateEdge(edge.name.clone()));
            }
        }
        for (i, edge) in edges.iter().enumerate() {
            let r = edge.reverse.0;
            if r >= edges.len() || r == i {
                return Err(BuildError::BrokenInvolution(edge.name.clone()));
            }
            let rev = &edges[r];
            if rev.reverse.0 != i || rev.range != edge.source || rev.source != edge.range {
                return Err(BuildError::BrokenInvolution(edge.name.clone()));
            }
            if edge.range.0 >= vertex_names.len() || edge.source.0 >= vertex_names.len() {
                return Err(BuildError::UnknownVertex(edge.name.clone()));
            }
        }
        match &backend {
            CosetBackend::Gbs { k } => {
                if k.len() != edges.len() {
                    return Err(BuildError::BrokenInvolution("index table".into()));
                }
                if let Some(i) = k.iter().position(|v| *v == 0) {
                    return Err(BuildError::ZeroIndex(edges[i].name.clone()));
                }
            }
            CosetBackend::TrivialEdge { orders } => {
                if orders.len() != vertex_names.len() {
                    return Err(BuildError::BrokenInvolution("order table".into()));
                }
                if let Some(i) = orders.iter().position(|o| *o == 0) {
                    return Err(BuildError::ZeroOrder(vertex_names[i].clone()));
                }
            }
        }
        Ok(GraphOfGroups {
            vertex_names,
            edges,
            backend,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn geometric_edge_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &DirectedEdge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &DirectedEdge)> {
        self.edges.iter().enumerate().map(|(i, e)| (EdgeId(i), e))
    }

    pub fn reverse(&self, e: EdgeId) -> EdgeId {
        self.edges[e.0].reverse
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].range
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].source
    }

    pub fn is_gbs(&self) -> bool {
        matches!(self.backend, CosetBackend::Gbs { .. })
    }

    pub fn backend(&self) -> &CosetBackend {
        &self.backend
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(VertexId)
    }

    /// Resolves an edge display name, accepting both precomposed macron
    /// vowels and combining-macron spellings for reverse edges.
    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        let wanted = normalize_macrons(name);
        self.edges
            .iter()
            .position(|e| normalize_macrons(&e.name) == wanted)
            .map(EdgeId)
    }

    /// Edges whose range is `v`, in declaration order. These are the edges
    /// a word based at `v` may start with.
    pub fn edges_into(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges()
            .filter(|(_, e)| e.range == v)
            .map(|(id, _)| id)
            .collect()
    }

    /// GBS index of the edge subgroup at `range(e)`.
    pub fn gbs_index(&self, e: EdgeId) -> Option<i64> {
        match &self.backend {
            CosetBackend::Gbs { k } => Some(k[e.0]),
            CosetBackend::TrivialEdge { .. } => None,
        }
    }

    pub fn identity(&self, v: VertexId) -> Token {
        match &self.backend {
            CosetBackend::Gbs { .. } => Token::Int(BigInt::zero()),
            CosetBackend::TrivialEdge { .. } => {
                let _ = v;
                Token::Fin(0)
            }
        }
    }

    /// Group operation in the vertex group at `v`.
    pub fn compose(&self, v: VertexId, a: &Token, b: &Token) -> Token {
        match (&self.backend, a, b) {
            (CosetBackend::Gbs { .. }, Token::Int(x), Token::Int(y)) => Token::Int(x + y),
            (CosetBackend::TrivialEdge { orders }, Token::Fin(x), Token::Fin(y)) => {
                Token::Fin((x + y) % orders[v.0])
            }
            _ => panic!("token does not belong to this backend"),
        }
    }

    pub fn invert_token(&self, v: VertexId, a: &Token) -> Token {
        match (&self.backend, a) {
            (CosetBackend::Gbs { .. }, Token::Int(x)) => Token::Int(-x),
            (CosetBackend::TrivialEdge { orders }, Token::Fin(x)) => {
                Token::Fin((orders[v.0] - x) % orders[v.0])
            }
            _ => panic!("token does not belong to this backend"),
        }
    }

    /// Size of the transversal of the edge subgroup image at `range(e)`.
    pub fn transversal_size(&self, e: EdgeId) -> u64 {
        match &self.backend {
            CosetBackend::Gbs { k } => k[e.0].unsigned_abs(),
            CosetBackend::TrivialEdge { orders } => orders[self.edges[e.0].range.0],
        }
    }

    /// The `idx`-th transversal representative at `e`; index 0 is the
    /// identity.
    pub fn transversal(&self, e: EdgeId, idx: u64) -> Token {
        debug_assert!(idx < self.transversal_size(e));
        match &self.backend {
            CosetBackend::Gbs { .. } => Token::Int(BigInt::from(idx)),
            CosetBackend::TrivialEdge { .. } => Token::Fin(idx),
        }
    }

    /// Position of a transversal representative in the canonical order, if
    /// the token is one.
    pub fn transversal_index(&self, e: EdgeId, t: &Token) -> Option<u64> {
        match (&self.backend, t) {
            (CosetBackend::Gbs { k }, Token::Int(v)) => {
                let size = BigInt::from(k[e.0].unsigned_abs());
                if v.is_negative() || *v >= size {
                    None
                } else {
                    Some(u64::try_from(v).expect("transversal index fits in u64"))
                }
            }
            (CosetBackend::TrivialEdge { .. }, Token::Fin(v)) => {
                if *v < self.transversal_size(e) {
                    Some(*v)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Writes `g = sigma * alpha_e(h)` with `sigma` the canonical
    /// transversal representative of the coset of `g`; returns
    /// `(sigma, h)` where `h` is an edge group element.
    pub fn split(&self, e: EdgeId, g: &Token) -> (Token, Token) {
        match (&self.backend, g) {
            (CosetBackend::Gbs { k }, Token::Int(v)) => {
                let ke = BigInt::from(k[e.0]);
                let size = BigInt::from(k[e.0].unsigned_abs());
                // Euclidean remainder: sigma in 0..|k|.
                let mut sigma = v % &size;
                if sigma.is_negative() {
                    sigma += &size;
                }
                let h = (v - &sigma) / &ke;
                (Token::Int(sigma), Token::Int(h))
            }
            (CosetBackend::TrivialEdge { .. }, Token::Fin(v)) => (Token::Fin(*v), Token::Fin(0)),
            _ => panic!("token does not belong to this backend"),
        }
    }

    /// Image of the edge group element `h` in the vertex group at
    /// `range(e)` under the edge embedding.
    pub fn embed(&self, e: EdgeId, h: &Token) -> Token {
        match (&self.backend, h) {
            (CosetBackend::Gbs { k }, Token::Int(v)) => Token::Int(v * BigInt::from(k[e.0])),
            (CosetBackend::TrivialEdge { .. }, Token::Fin(_)) => Token::Fin(0),
            _ => panic!("token does not belong to this backend"),
        }
    }

    /// Carries an edge group element across `e`: the image of `h` in the
    /// vertex group at `source(e)` under the embedding of the reversed
    /// edge. This is the token that crosses an edge during normalization.
    pub fn carry(&self, e: EdgeId, h: &Token) -> Token {
        self.embed(self.reverse(e), h)
    }

    /// Whether `g` lies in the image of the edge embedding at `e`.
    pub fn in_edge_image(&self, e: EdgeId, g: &Token) -> bool {
        let (sigma, _) = self.split(e, g);
        sigma.is_identity()
    }

    /// Directed edges `e` that are the only edge with range `range(e)` and
    /// have a one-element transversal. Rays cannot branch past such an
    /// edge, and several dynamical checks refuse graphs that have one.
    pub fn singular_edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for (id, edge) in self.edges() {
            let incoming = self.edges_into(edge.range);
            if incoming.len() == 1 && self.transversal_size(id) == 1 {
                out.push(id);
            }
        }
        out
    }

    pub fn is_non_singular(&self) -> bool {
        self.singular_edges().is_empty()
    }

    /// Number of connected components of the underlying graph.
    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for (_, edge) in self.edges() {
                    if edge.range.0 == u && !seen[edge.source.0] {
                        seen[edge.source.0] = true;
                        stack.push(edge.source.0);
                    }
                }
            }
        }
        components
    }

    /// First Betti number of the underlying graph: geometric edges minus
    /// vertices plus components.
    pub fn first_betti_number(&self) -> usize {
        self.geometric_edge_count() + self.component_count() - self.vertex_count()
    }
}

fn lookup_vertex(names: &[String], name: &str) -> Result<VertexId, BuildError> {
    names
        .iter()
        .position(|n| n == name)
        .map(VertexId)
        .ok_or_else(|| BuildError::UnknownVertex(name.to_string()))
}

/// Display name for the reverse of a declared edge: precomposed macron for
/// a single vowel, otherwise the name followed by a combining macron.
pub fn reverse_name(name: &str) -> String {
    match name {
        "a" => "\u{0101}".into(),
        "e" => "\u{0113}".into(),
        "i" => "\u{012b}".into(),
        "o" => "\u{014d}".into(),
        "u" => "\u{016b}".into(),
        "A" => "\u{0100}".into(),
        "E" => "\u{0112}".into(),
        "I" => "\u{012a}".into(),
        "O" => "\u{014c}".into(),
        "U" => "\u{016a}".into(),
        _ => format!("{name}\u{0304}"),
    }
}

/// Rewrites precomposed macron vowels into base letter plus combining
/// macron so that either spelling resolves to the same edge.
pub fn normalize_macrons(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\u{0101}' => out.push_str("a\u{0304}"),
            '\u{0113}' => out.push_str("e\u{0304}"),
            '\u{012b}' => out.push_str("i\u{0304}"),
            '\u{014d}' => out.push_str("o\u{0304}"),
            '\u{016b}' => out.push_str("u\u{0304}"),
            '\u{0100}' => out.push_str("A\u{0304}"),
            '\u{0112}' => out.push_str("E\u{0304}"),
            '\u{012a}' => out.push_str("I\u{0304}"),
            '\u{014c}' => out.push_str("O\u{0304}"),
            '\u{016a}' => out.push_str("U\u{0304}"),
            _ => out.push(c),
        }
    }
    out
}

/// A finite simplicial graph presenting a right-angled Coxeter or Artin
/// group: vertices are generators, edges are commuting pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl DefiningGraph {
    pub fn new(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self, BuildError> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.clone()) {
                return Err(BuildError::DuplicateEdge(name.clone()));
            }
        }
        let mut adjacency = vec![BTreeSet::new(); names.len()];
        let mut seen_edges = BTreeSet::new();
        for (a, b) in edges {
            let ia = lookup_vertex(&names, a)?.0;
            let ib = lookup_vertex(&names, b)?.0;
            if ia == ib {
                return Err(BuildError::SelfLoop(a.to_string()));
            }
            let key = (ia.min(ib), ia.max(ib));
            if !seen_edges.insert(key) {
                return Err(BuildError::DuplicateEdge(format!("{a}-{b}")));
            }
            adjacency[ia].insert(ib);
            adjacency[ib].insert(ia);
        }
        Ok(DefiningGraph { names, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    pub fn neighbors(&self, a: usize) -> &BTreeSet<usize> {
        &self.adjacency[a]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nbrs) in self.adjacency.iter().enumerate() {
            for &b in nbrs {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Graph on the same vertices whose edges are exactly the non-edges.
    pub fn complement(&self) -> DefiningGraph {
        let n = self.vertex_count();
        let mut adjacency = vec![BTreeSet::new(); n];
        for a in 0..n {
            for b in 0..n {
                if a != b && !self.adjacent(a, b) {
                    adjacency[a].insert(b);
                }
            }
        }
        DefiningGraph {
            names: self.names.clone(),
            adjacency,
        }
    }

    /// Induced subgraph on the given vertex indices (kept in their
    /// original relative order).
    pub fn induced(&self, vertices: &[usize]) -> DefiningGraph {
        let mut order: Vec<usize> = vertices.to_vec();
        order.sort_unstable();
        order.dedup();
        let rename: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let names = order.iter().map(|&i| self.names[i].clone()).collect();
        let mut adjacency = vec![BTreeSet::new(); order.len()];
        for (&old, &new) in &rename {
            for nbr in &self.adjacency[old] {
                if let Some(&n2) = rename.get(nbr) {
                    adjacency[new].insert(n2);
                }
            }
        }
        DefiningGraph { names, adjacency }
    }

    /// Connected components as sorted lists of vertex indices, ordered by
    /// their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether the graph is a join, i.e. splits as two nonempty parts with
    /// every cross pair adjacent. Equivalent to a disconnected complement.
    pub fn is_join(&self) -> bool {
        self.vertex_count() >= 2 && self.complement().components().len() > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_is_consistent() {
        let g = GraphOfGroups::gbs(&["v"], &[("e", "v", "v", 2, 3)]).unwrap();
        let e = g.edge_by_name("e").unwrap();
        let rev = g.reverse(e);
        assert_ne!(e, rev);
        assert_eq!(g.reverse(rev), e);
        assert_eq!(g.range(rev), g.source(e));
        assert_eq!(g.transversal_size(e), 2);
        assert_eq!(g.transversal_size(rev), 3);
    }

    #[test]
    fn reverse_names_resolve_in_both_spellings() {
        let g = GraphOfGroups::gbs(&["v"], &[("e", "v", "v", 2, 3)]).unwrap();
        let combining = g.edge_by_name("e\u{0304}").unwrap();
        let precomposed = g.edge_by_name("\u{0113}").unwrap();
        assert_eq!(combining, precomposed);
        assert_eq!(combining, g.reverse(g.edge_by_name("e").unwrap()));
    }

    #[test]
    fn split_is_a_euclidean_division_for_negative_indices_too() {
        for k in [-3i64, -2, 2, 3, 5] {
            let g = GraphOfGroups::gbs(&["v"], &[("e", "v", "v", k, 2)]).unwrap();
            let e = g.edge_by_name("e").unwrap();
            for v in -20..20 {
                let tok = Token::int(v);
                let (sigma, h) = g.split(e, &tok);
                let back = g.compose(VertexId(0), &sigma, &g.embed(e, &h));
                assert_eq!(back, tok, "k={k} v={v}");
                assert!(g.transversal_index(e, &sigma).is_some());
            }
        }
    }

    #[test]
    fn zero_index_is_rejected() {
        let err = GraphOfGroups::gbs(&["v"], &[("e", "v", "v", 0, 3)]).unwrap_err();
        assert_eq!(err, BuildError::ZeroIndex("e".into()));
    }

    #[test]
    fn singular_edges_are_detected() {
        // Segment with index 1 at the far end: the edge into that end is
        // the only one and has a trivial transversal.
        let g = GraphOfGroups::gbs(&["u", "v"], &[("e", "u", "v", 1, 2)]).unwrap();
        let singular = g.singular_edges();
        assert_eq!(singular, vec![g.edge_by_name("e").unwrap()]);
        let h = GraphOfGroups::gbs(&["v"], &[("e", "v", "v", 1, 1)]).unwrap();
        assert!(h.is_non_singular());
    }

    #[test]
    fn betti_numbers_of_small_graphs() {
        let loop_graph = GraphOfGroups::gbs(&["v"], &[("e", "v", "v", 1, 1)]).unwrap();
        assert_eq!(loop_graph.first_betti_number(), 1);
        let segment = GraphOfGroups::gbs(&["u", "v"], &[("e", "u", "v", 2, 2)]).unwrap();
        assert_eq!(segment.first_betti_number(), 0);
    }

    #[test]
    fn defining_graph_rejects_loops_and_duplicates() {
        assert_eq!(
            DefiningGraph::new(&["a"], &[("a", "a")]).unwrap_err(),
            BuildError::SelfLoop("a".into())
        );
        assert_eq!(
            DefiningGraph::new(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err(),
            BuildError::DuplicateEdge("b-a".into())
        );
    }

    #[test]
    fn join_detection_matches_complement_connectivity() {
        let square = DefiningGraph::new(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap();
        assert!(square.is_join());
        let pentagon = DefiningGraph::new(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")],
        )
        .unwrap();
        assert!(!pentagon.is_join());
    }
}
