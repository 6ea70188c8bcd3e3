//! Computations on locally finite graphs of groups and their Bass-Serre
//! trees: normal forms for fundamental group elements, exact dynamics on
//! the space of ends (cylinder algebra, boundary points, pushforwards),
//! dynamical certificates (minimality, unimodularity, filling witnesses,
//! north-south behaviour), and classification of right-angled Coxeter and
//! Artin groups from their defining graphs.
//!
//! Two coset backends are provided: `Gbs` (infinite cyclic vertex and edge
//! groups, indices given by nonzero integers) and `TrivialEdge` (finite
//! cyclic vertex groups, trivial edge groups, i.e. free products). Both
//! expose transversals in a fixed canonical order, which makes every word
//! computation and every boundary set computation deterministic.

#![forbid(unsafe_code)]

pub mod boundary;
pub mod classify;
pub mod dynamics;
pub mod fixtures;
pub mod graph;
pub mod report;
pub mod words;

pub use graph::{CosetBackend, DefiningGraph, DirectedEdge, EdgeId, GraphOfGroups, Token, VertexId};
pub use words::{GWord, ReducedWord};
