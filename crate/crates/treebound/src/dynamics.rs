//! Dynamical certificates for the action on the space of ends: the turn
//! graph, minimality, boundary infiniteness, unimodularity, filling
//! witnesses, subequivalence checks, and north-south contraction, plus
//! the assembled GBS classifier.

use crate::boundary::{
    extensions, image_of_cylinder, image_of_union, BoundaryError, BoundaryPoint, Cylinder,
    CylinderUnion,
};
use crate::graph::{EdgeId, GraphOfGroups, VertexId};
use crate::report::{
    citations, warning_codes, ClassificationReport, Hypothesis, Outcome, Verdict, Warning,
};
use crate::words::{self, invert, multiply, power, ReducedWord, WordError};
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynError {
    #[error("graph has singular edges: {0}")]
    SingularInput(String),
    #[error("operation requires a GBS backend")]
    NotGbs,
    #[error("hypothesis `{name}` failed: {certificate}")]
    HypothesisFailed { name: String, certificate: String },
    #[error("no witness within {candidates} candidates")]
    NotFoundWithinBound { candidates: usize },
    #[error("bound {bound} exhausted before the check succeeded")]
    BoundExceeded { bound: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

fn require_non_singular(g: &GraphOfGroups) -> Result<(), DynError> {
    let singular = g.singular_edges();
    if singular.is_empty() {
        return Ok(());
    }
    let names: Vec<&str> = singular.iter().map(|e| g.edge(*e).name.as_str()).collect();
    Err(DynError::SingularInput(names.join(", ")))
}

/// States are directed edges; `e -> f` when `f` may follow `e` inside a
/// reduced path, i.e. they are concatenable and the turn is not forced to
/// backtrack through a one-element transversal.
#[derive(Clone, Debug)]
pub struct TurnGraph {
    succ: Vec<Vec<EdgeId>>,
}

pub fn turn_graph(g: &GraphOfGroups) -> TurnGraph {
    let mut succ = Vec::with_capacity(g.edge_count());
    for (e, edge) in g.edges() {
        let mut out = Vec::new();
        for (f, fe) in g.edges() {
            if fe.range != edge.source {
                continue;
            }
            if f == g.reverse(e) && g.transversal_size(f) < 2 {
                continue;
            }
            out.push(f);
        }
        succ.push(out);
    }
    TurnGraph { succ }
}

impl TurnGraph {
    pub fn successors(&self, e: EdgeId) -> &[EdgeId] {
        &self.succ[e.0]
    }

    pub fn state_count(&self) -> usize {
        self.succ.len()
    }

    /// States reachable from `e` in one or more steps.
    pub fn can_flow_to(&self, e: EdgeId) -> BTreeSet<EdgeId> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<EdgeId> = self.succ[e.0].clone();
        while let Some(f) = stack.pop() {
            if seen.insert(f) {
                stack.extend(self.succ[f.0].iter().copied());
            }
        }
        seen
    }

    /// A cycle through states of `allowed`, if one exists, returned as the
    /// state sequence of one loop.
    fn cycle_within(&self, allowed: &BTreeSet<EdgeId>) -> Option<Vec<EdgeId>> {
        // Iterative DFS with colors; any back edge closes a cycle.
        let mut color: BTreeMap<EdgeId, u8> = BTreeMap::new();
        for &start in allowed {
            if color.contains_key(&start) {
                continue;
            }
            // The stack doubles as the gray path.
            let mut stack: Vec<(EdgeId, usize)> = vec![(start, 0)];
            color.insert(start, 1);
            while let Some(top) = stack.last_mut() {
                let (node, next) = *top;
                let succs: Vec<EdgeId> = self.succ[node.0]
                    .iter()
                    .copied()
                    .filter(|f| allowed.contains(f))
                    .collect();
                if next < succs.len() {
                    top.1 += 1;
                    let f = succs[next];
                    match color.get(&f).copied().unwrap_or(0) {
                        0 => {
                            color.insert(f, 1);
                            stack.push((f, 0));
                        }
                        1 => {
                            let pos = stack
                                .iter()
                                .position(|(x, _)| *x == f)
                                .expect("gray node is on the stack");
                            return Some(stack[pos..].iter().map(|(x, _)| *x).collect());
                        }
                        _ => {}
                    }
                } else {
                    color.insert(node, 2);
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Number of admissible weighted continuations of a state: the total
/// transversal mass at the source vertex minus the forbidden identity
/// backtrack.
pub fn weighted_out_degree(g: &GraphOfGroups, e: EdgeId) -> u64 {
    let u = g.source(e);
    let total: u64 = g.edges_into(u).iter().map(|f| g.transversal_size(*f)).sum();
    total - 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityCertificate {
    /// Cylinder direction that the trapped ray never flows back into.
    pub avoided: EdgeId,
    /// Turn-graph cycle that stays outside `can_flow_to(avoided)`.
    pub cycle: Vec<EdgeId>,
    /// A ray realizing the cycle, as point text.
    pub trapped_ray: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityVerdict {
    pub minimal: bool,
    pub certificate: Option<MinimalityCertificate>,
}

/// The end-space action is minimal exactly when no reduced ray can avoid
/// flowing into every given direction: for each state `e`, the states
/// outside `can_flow_to(e)` must not contain a turn cycle.
pub fn check_minimality(g: &GraphOfGroups) -> Result<MinimalityVerdict, DynError> {
    require_non_singular(g)?;
    let tg = turn_graph(g);
    for (e, _) in g.edges() {
        let flows = tg.can_flow_to(e);
        let outside: BTreeSet<EdgeId> = g
            .edges()
            .map(|(f, _)| f)
            .filter(|f| !flows.contains(f))
            .collect();
        if let Some(cycle) = tg.cycle_within(&outside) {
            let ray = realize_cycle(g, &cycle);
            return Ok(MinimalityVerdict {
                minimal: false,
                certificate: Some(MinimalityCertificate {
                    avoided: e,
                    cycle,
                    trapped_ray: ray,
                }),
            });
        }
    }
    Ok(MinimalityVerdict {
        minimal: true,
        certificate: None,
    })
}

/// A periodic ray running through the given turn cycle, with minimal
/// admissible tokens.
fn realize_cycle(g: &GraphOfGroups, cycle: &[EdgeId]) -> String {
    let mut steps = Vec::with_capacity(cycle.len());
    for (i, &f) in cycle.iter().enumerate() {
        let prev = cycle[(i + cycle.len() - 1) % cycle.len()];
        let idx = if g.reverse(prev) == f { 1 } else { 0 };
        steps.push((g.transversal(f, idx), f));
    }
    let base = g.range(cycle[0]);
    match BoundaryPoint::new(g, base, Vec::new(), steps) {
        Ok(p) => p.text(g),
        Err(_) => cycle
            .iter()
            .map(|f| g.edge(*f).name.clone())
            .collect::<Vec<_>>()
            .join(" "),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitenessVerdict {
    pub infinite: bool,
    /// A state with at least two weighted continuations lying on a
    /// reachable turn cycle, when the boundary is infinite.
    pub branching_state: Option<EdgeId>,
}

/// The space of ends seen from `base` is infinite exactly when some turn
/// cycle reachable from a depth-one state contains a state with at least
/// two weighted continuations.
pub fn boundary_infinite(
    g: &GraphOfGroups,
    base: VertexId,
) -> Result<InfinitenessVerdict, DynError> {
    require_non_singular(g)?;
    let tg = turn_graph(g);
    let initial: Vec<EdgeId> = g.edges_into(base);
    let mut reachable: BTreeSet<EdgeId> = initial.iter().copied().collect();
    let mut stack = initial;
    while let Some(e) = stack.pop() {
        for &f in tg.successors(e) {
            if reachable.insert(f) {
                stack.push(f);
            }
        }
    }
    for &s in &reachable {
        if weighted_out_degree(g, s) >= 2 && tg.can_flow_to(s).contains(&s) {
            return Ok(InfinitenessVerdict {
                infinite: true,
                branching_state: Some(s),
            });
        }
    }
    Ok(InfinitenessVerdict {
        infinite: false,
        branching_state: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleValue {
    /// Non-tree edge whose fundamental cycle is evaluated.
    pub edge: String,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularityReport {
    pub unimodular: bool,
    pub cycle_values: Vec<CycleValue>,
}

/// Evaluates the modular homomorphism on a fundamental cycle basis. The
/// sign convention follows [`words::modular_value`]; only the absolute
/// values decide unimodularity, which makes the verdict independent of
/// edge orientations.
pub fn check_unimodular(g: &GraphOfGroups) -> Result<UnimodularityReport, DynError> {
    if !g.is_gbs() {
        return Err(DynError::NotGbs);
    }
    let n = g.vertex_count();
    let mut potential: Vec<Option<BigRational>> = vec![None; n];
    let mut tree_pairs: BTreeSet<usize> = BTreeSet::new();
    for root in 0..n {
        if potential[root].is_some() {
            continue;
        }
        potential[root] = Some(BigRational::one());
        let mut queue = std::collections::VecDeque::from([VertexId(root)]);
        while let Some(u) = queue.pop_front() {
            let phi_u = potential[u.0].clone().expect("visited");
            for (e, edge) in g.edges() {
                if edge.range != u || potential[edge.source.0].is_some() {
                    continue;
                }
                tree_pairs.insert(e.0 / 2);
                potential[edge.source.0] = Some(&phi_u * edge_ratio(g, e));
                queue.push_back(edge.source);
            }
        }
    }
    let mut cycle_values = Vec::new();
    for pair in 0..g.geometric_edge_count() {
        if tree_pairs.contains(&pair) {
            continue;
        }
        let f = EdgeId(2 * pair);
        let phi_r = potential[g.range(f).0].clone().expect("connected scan");
        let phi_s = potential[g.source(f).0].clone().expect("connected scan");
        let value = phi_r * edge_ratio(g, f) / phi_s;
        cycle_values.push(CycleValue {
            edge: g.edge(f).name.clone(),
            value,
        });
    }
    let unimodular = cycle_values.iter().all(|c| c.value.abs() == BigRational::one());
    Ok(UnimodularityReport {
        unimodular,
        cycle_values,
    })
}

fn edge_ratio(g: &GraphOfGroups, e: EdgeId) -> BigRational {
    let ke = g.gbs_index(e).expect("gbs backend");
    let krev = g.gbs_index(g.reverse(e)).expect("gbs backend");
    BigRational::new(krev.into(), ke.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepeatablePath {
    pub path: ReducedWord,
    /// Whether the reversed last edge has a transversal of size at least
    /// two; filling witnesses need a repeatable path with this property.
    pub spread: bool,
}

/// All closed reduced paths of length `1..=max_len` whose wrap-around
/// junction stays reduced, from every start vertex, in canonical order.
pub fn find_repeatable(g: &GraphOfGroups, max_len: usize) -> Vec<RepeatablePath> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for v in 0..g.vertex_count() {
            let base = VertexId(v);
            let mut stack = vec![ReducedWord::identity(g, base)];
            collect_loops(g, base, len, &mut stack, &mut out);
        }
    }
    out
}

fn collect_loops(
    g: &GraphOfGroups,
    base: VertexId,
    len: usize,
    path_stack: &mut Vec<ReducedWord>,
    out: &mut Vec<RepeatablePath>,
) {
    let current = path_stack.last().expect("nonempty").clone();
    if current.edge_len() == len {
        if current.end(g) == base {
            let first = &current.steps()[0];
            let last_edge = current.last_edge().expect("len >= 1");
            let wraps_reduced = !(first.1 == g.reverse(last_edge) && first.0.is_identity());
            if wraps_reduced {
                let spread = g.transversal_size(g.reverse(last_edge)) >= 2;
                out.push(RepeatablePath {
                    path: current,
                    spread,
                });
            }
        }
        return;
    }
    for step in extensions(g, &current) {
        let mut gw = current.as_gword();
        gw.tail = None;
        gw.steps.push(step);
        path_stack.push(words::reduce(g, &gw));
        collect_loops(g, base, len, path_stack, out);
        path_stack.pop();
    }
}

/// Loops at `base` of exactly `len` edges, canonical order; candidates
/// for witness searches.
fn loops_of_len(g: &GraphOfGroups, base: VertexId, len: usize) -> Vec<ReducedWord> {
    if len == 0 {
        return vec![ReducedWord::identity(g, base)];
    }
    let mut out = Vec::new();
    let mut frontier = vec![ReducedWord::identity(g, base)];
    for depth in 1..=len {
        let mut next = Vec::new();
        for p in frontier {
            for step in extensions(g, &p) {
                let mut gw = p.as_gword();
                gw.tail = None;
                gw.steps.push(step);
                let q = words::reduce(g, &gw);
                if depth == len {
                    if q.end(g) == base {
                        out.push(q);
                    }
                } else {
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    out
}

#[derive(Clone, Debug)]
pub struct FillingWitness {
    pub o1: Cylinder,
    pub o2: Cylinder,
    /// Power of the repeatable path used to fill.
    pub m: usize,
    pub gamma1: ReducedWord,
    pub gamma2: ReducedWord,
    /// Nontrivial transversal token at the reversed last edge of the path.
    pub t: ReducedWord,
    pub h1: ReducedWord,
    pub h2: ReducedWord,
    /// Complement of the identity backtrack cylinder; moved into `o1`.
    pub part_a: CylinderUnion,
    /// The identity backtrack cylinder; moved into `o2`.
    pub part_b: CylinderUnion,
    pub preimage1: CylinderUnion,
    pub preimage2: CylinderUnion,
    pub candidates_tried: usize,
}

/// Searches for a two-filling witness: elements `h1, h2` such that the
/// preimages of the two target cylinders cover the whole boundary. The
/// search enumerates pairs `(m, gamma)` diagonally by `m` plus loop
/// length, so the first witness found is canonically least; `bound`
/// limits the number of candidate pairs.
pub fn construct_filling_witness(
    g: &GraphOfGroups,
    base: VertexId,
    mu: &ReducedWord,
    o1: &Cylinder,
    o2: &Cylinder,
    bound: usize,
) -> Result<FillingWitness, DynError> {
    require_non_singular(g)?;
    check_repeatable_loop(g, base, mu)?;
    let last = mu.last_edge().expect("nonempty");
    let back = g.reverse(last);
    if g.transversal_size(back) < 2 {
        return Err(DynError::HypothesisFailed {
            name: "spread".into(),
            certificate: format!(
                "reversed last edge {} has a one-element transversal",
                g.edge(back).name
            ),
        });
    }
    let minimality = check_minimality(g)?;
    if !minimality.minimal {
        let c = minimality.certificate.expect("not minimal");
        return Err(DynError::HypothesisFailed {
            name: "minimal".into(),
            certificate: format!("ray {} avoids {}", c.trapped_ray, g.edge(c.avoided).name),
        });
    }
    let target1 = CylinderUnion::from_cylinders(g, base, vec![o1.clone()]);
    let target2 = CylinderUnion::from_cylinders(g, base, vec![o2.clone()]);
    let mut candidates = 0usize;
    // found[i] = (m, gamma) for target i
    let mut found: [Option<(usize, ReducedWord)>; 2] = [None, None];
    'search: for s in 1..usize::MAX {
        for m in 1..=s {
            let mu_m = power(g, mu, m)?;
            let z_mu = Cylinder::new(mu_m.path_part(g)).map_err(DynError::from)?;
            for gamma in loops_of_len(g, base, s - m) {
                candidates += 1;
                if candidates > bound {
                    break 'search;
                }
                let image = image_of_cylinder(g, &gamma, &z_mu)?;
                if found[0].is_none() && image.is_subset(g, &target1) {
                    found[0] = Some((m, gamma.clone()));
                }
                if found[1].is_none() && image.is_subset(g, &target2) {
                    found[1] = Some((m, gamma.clone()));
                }
                if found[0].is_some() && found[1].is_some() {
                    break 'search;
                }
            }
        }
    }
    let (Some((m1, gamma1)), Some((m2, gamma2))) = (found[0].clone(), found[1].clone()) else {
        return Err(DynError::NotFoundWithinBound { candidates });
    };
    let t_token = g.transversal(back, 1);
    let t = words::reduce(
        g,
        &crate::words::GWord {
            base,
            steps: Vec::new(),
            tail: Some(t_token.clone()),
        },
    );
    let h1 = multiply(g, &gamma1, &power(g, mu, m1)?)?;
    let h2 = multiply(g, &multiply(g, &gamma2, &power(g, mu, m2)?)?, &t)?;
    let backtrack_cyl = Cylinder::new(words::reduce(
        g,
        &crate::words::GWord {
            base,
            steps: vec![(g.identity(base), back)],
            tail: None,
        },
    ))
    .map_err(DynError::from)?;
    let part_b = CylinderUnion::from_cylinders(g, base, vec![backtrack_cyl]);
    let part_a = part_b.complement(g);
    let preimage1 = image_of_cylinder(g, &invert(g, &h1), o1)?;
    let preimage2 = image_of_cylinder(g, &invert(g, &h2), o2)?;
    let witness = FillingWitness {
        o1: o1.clone(),
        o2: o2.clone(),
        m: m1.max(m2),
        gamma1,
        gamma2,
        t,
        h1,
        h2,
        part_a,
        part_b,
        preimage1,
        preimage2,
        candidates_tried: candidates,
    };
    verify_filling_witness(g, &witness)?;
    Ok(witness)
}

/// Recomputes the covering claims of a filling witness from scratch.
pub fn verify_filling_witness(g: &GraphOfGroups, w: &FillingWitness) -> Result<(), DynError> {
    let base = w.part_b.base();
    let full = CylinderUnion::full(g, base);
    let checks: [(&str, bool); 4] = [
        (
            "partition covers",
            w.part_a.union(g, &w.part_b) == full,
        ),
        ("partition disjoint", w.part_a.is_disjoint(g, &w.part_b)),
        ("A inside h1^-1 O1", w.part_a.is_subset(g, &w.preimage1)),
        ("B inside h2^-1 O2", w.part_b.is_subset(g, &w.preimage2)),
    ];
    for (name, ok) in checks {
        if !ok {
            return Err(DynError::HypothesisFailed {
                name: "filling-witness-verification".into(),
                certificate: name.into(),
            });
        }
    }
    let cover = w.preimage1.union(g, &w.preimage2);
    if cover != full {
        return Err(DynError::HypothesisFailed {
            name: "filling-witness-verification".into(),
            certificate: "preimages do not cover the boundary".into(),
        });
    }
    Ok(())
}

fn check_repeatable_loop(
    g: &GraphOfGroups,
    base: VertexId,
    mu: &ReducedWord,
) -> Result<(), DynError> {
    if !mu.is_path() || mu.edge_len() == 0 || mu.base() != base || mu.end(g) != base {
        return Err(DynError::HypothesisFailed {
            name: "repeatable-loop".into(),
            certificate: "path must be a nonempty loop at the base vertex".into(),
        });
    }
    let first = &mu.steps()[0];
    let last = mu.last_edge().expect("nonempty");
    if first.1 == g.reverse(last) && first.0.is_identity() {
        return Err(DynError::HypothesisFailed {
            name: "repeatable-loop".into(),
            certificate: "wrap-around junction backtracks".into(),
        });
    }
    Ok(())
}

/// One half of a subequivalence: finitely many cylinders covering
/// `source`, each moved by an element, with pairwise disjoint images
/// inside `target`.
#[derive(Clone, Debug)]
pub struct SubequivalenceWitness {
    pub source: CylinderUnion,
    pub target: CylinderUnion,
    pub pieces: Vec<(Cylinder, ReducedWord)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubequivalenceFailure {
    /// Part of the source is not covered by any piece.
    NotCovered { missing: String },
    /// Two piece images intersect.
    ImagesOverlap { first: usize, second: usize },
    /// A piece image leaves the target.
    ImageEscapes { piece: usize },
    /// A piece element does not end at the piece's base.
    BadElement { piece: usize },
}

impl std::fmt::Display for SubequivalenceFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubequivalenceFailure::NotCovered { missing } => {
                write!(f, "source not covered; missing {missing}")
            }
            SubequivalenceFailure::ImagesOverlap { first, second } => {
                write!(f, "images of pieces {first} and {second} overlap")
            }
            SubequivalenceFailure::ImageEscapes { piece } => {
                write!(f, "image of piece {piece} leaves the target")
            }
            SubequivalenceFailure::BadElement { piece } => {
                write!(f, "element of piece {piece} does not act on its cylinder")
            }
        }
    }
}

/// Checks a subequivalence witness exactly; on failure reports the first
/// offending check in piece order.
pub fn verify_subequivalence(
    g: &GraphOfGroups,
    w: &SubequivalenceWitness,
) -> Result<(), SubequivalenceFailure> {
    let base = w.source.base();
    let mut cover = CylinderUnion::empty(base);
    for (cyl, _) in &w.pieces {
        cover = cover.union(
            g,
            &CylinderUnion::from_cylinders(g, base, vec![cyl.clone()]),
        );
    }
    if !w.source.is_subset(g, &cover) {
        let missing = w.source.intersect(g, &cover.complement(g));
        return Err(SubequivalenceFailure::NotCovered {
            missing: missing.text(g),
        });
    }
    let mut images: Vec<CylinderUnion> = Vec::new();
    for (i, (cyl, elt)) in w.pieces.iter().enumerate() {
        let image = match image_of_cylinder(g, elt, cyl) {
            Ok(im) => im,
            Err(_) => return Err(SubequivalenceFailure::BadElement { piece: i }),
        };
        if !image.is_subset(g, &w.target) {
            return Err(SubequivalenceFailure::ImageEscapes { piece: i });
        }
        images.push(image);
    }
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if !images[i].is_disjoint(g, &images[j]) {
                return Err(SubequivalenceFailure::ImagesOverlap {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(())
}

/// A paradoxical decomposition: the source is subequivalent to two
/// disjoint parts of the target at once.
#[derive(Clone, Debug)]
pub struct ParadoxicalWitness {
    pub source: CylinderUnion,
    pub target: CylinderUnion,
    pub half1: SubequivalenceWitness,
    pub half2: SubequivalenceWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParadoxicalFailure {
    HalvesOverlap,
    HalfEscapesTarget { half: usize },
    SourceMismatch { half: usize },
    Half { half: usize, failure: SubequivalenceFailure },
}

impl std::fmt::Display for ParadoxicalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParadoxicalFailure::HalvesOverlap => write!(f, "the two targets overlap"),
            ParadoxicalFailure::HalfEscapesTarget { half } => {
                write!(f, "target of half {half} leaves the ambient target")
            }
            ParadoxicalFailure::SourceMismatch { half } => {
                write!(f, "half {half} does not start from the declared source")
            }
            ParadoxicalFailure::Half { half, failure } => write!(f, "half {half}: {failure}"),
        }
    }
}

pub fn verify_paradoxical(
    g: &GraphOfGroups,
    w: &ParadoxicalWitness,
) -> Result<(), ParadoxicalFailure> {
    for (i, half) in [&w.half1, &w.half2].into_iter().enumerate() {
        if half.source != w.source {
            return Err(ParadoxicalFailure::SourceMismatch { half: i + 1 });
        }
        if !half.target.is_subset(g, &w.target) {
            return Err(ParadoxicalFailure::HalfEscapesTarget { half: i + 1 });
        }
    }
    if !w.half1.target.is_disjoint(g, &w.half2.target) {
        return Err(ParadoxicalFailure::HalvesOverlap);
    }
    for (i, half) in [&w.half1, &w.half2].into_iter().enumerate() {
        verify_subequivalence(g, half)
            .map_err(|failure| ParadoxicalFailure::Half {
                half: i + 1,
                failure,
            })?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct NorthSouthVerdict {
    pub m: usize,
    pub attracting: BoundaryPoint,
    pub repelling: BoundaryPoint,
    pub u: CylinderUnion,
    pub v: CylinderUnion,
    /// The boundary is finite, so the contraction statement degenerates.
    pub finite_boundary: bool,
}

/// Forward limit point of a loop element: the end its positive powers
/// converge to.
pub fn forward_limit(g: &GraphOfGroups, elt: &ReducedWord) -> Result<BoundaryPoint, DynError> {
    if elt.edge_len() == 0 || !elt.is_group_element(g) {
        return Err(DynError::HypothesisFailed {
            name: "loxodromic".into(),
            certificate: "element must be a loop with at least one edge".into(),
        });
    }
    let squared = multiply(g, elt, elt)?;
    if squared.edge_len() != 2 * elt.edge_len() {
        return Err(DynError::HypothesisFailed {
            name: "loxodromic".into(),
            certificate: "the square of the element is shorter than expected".into(),
        });
    }
    // Drive the carries of elt^k for growing k; partial outputs are the
    // normal forms of the powers.
    let stream: Vec<crate::words::Step> = elt.steps().to_vec();
    let l = stream.len();
    let mut head = stream.clone();
    let mut carry = elt.tail().clone();
    let mut idx = 0usize;
    let bound = 4 * l + 4;
    let mut seen: std::collections::BTreeMap<(crate::graph::Token, usize), usize> =
        std::collections::BTreeMap::new();
    for _ in 0..=bound {
        if carry.is_identity() {
            let mut cycle = stream.clone();
            cycle.rotate_left(idx);
            return Ok(BoundaryPoint::new(g, elt.base(), head, cycle)?);
        }
        if let Some(&start) = seen.get(&(carry.clone(), idx)) {
            let cycle = head.split_off(start);
            return Ok(BoundaryPoint::new(g, elt.base(), head, cycle)?);
        }
        seen.insert((carry.clone(), idx), head.len());
        let (token, edge) = stream[idx].clone();
        let value = g.compose(g.range(edge), &carry, &token);
        let (sigma, h) = g.split(edge, &value);
        head.push((sigma, edge));
        carry = g.carry(edge, &h);
        idx = (idx + 1) % l;
    }
    Err(DynError::Boundary(BoundaryError::NonPeriodicCarry {
        junctions: bound,
    }))
}

/// Checks north-south contraction for the loop element of a repeatable
/// path: some power sends the complement of a neighborhood of the
/// repelling end inside a neighborhood of the attracting end, and the
/// inverse power does the opposite. Neighborhoods are the depth-`depth`
/// cylinders around the two ends.
pub fn verify_north_south(
    g: &GraphOfGroups,
    base: VertexId,
    mu: &ReducedWord,
    depth: usize,
    max_m: usize,
) -> Result<NorthSouthVerdict, DynError> {
    require_non_singular(g)?;
    check_repeatable_loop(g, base, mu)?;
    let attracting = BoundaryPoint::periodic(g, mu)?;
    let nu = invert(g, mu);
    let repelling = forward_limit(g, &nu)?;
    let u = if depth == 0 {
        CylinderUnion::full(g, base)
    } else {
        CylinderUnion::from_cylinders(
            g,
            base,
            vec![Cylinder::new(attracting.truncate(g, depth)).map_err(DynError::from)?],
        )
    };
    let v = if depth == 0 {
        CylinderUnion::full(g, base)
    } else {
        CylinderUnion::from_cylinders(
            g,
            base,
            vec![Cylinder::new(repelling.truncate(g, depth)).map_err(DynError::from)?],
        )
    };
    let not_v = v.complement(g);
    let not_u = u.complement(g);
    let finite = !boundary_infinite(g, base)?.infinite;
    for m in 1..=max_m {
        let gm = power(g, mu, m)?;
        let gm_inv = invert(g, &gm);
        let forward = image_of_union(g, &gm, &not_v)?;
        if !forward.is_subset(g, &u) {
            continue;
        }
        let backward = image_of_union(g, &gm_inv, &not_u)?;
        if !backward.is_subset(g, &v) {
            continue;
        }
        return Ok(NorthSouthVerdict {
            m,
            attracting,
            repelling,
            u,
            v,
            finite_boundary: finite,
        });
    }
    Err(DynError::BoundExceeded { bound: max_m })
}

/// Compact deterministic description of a graph of groups.
pub fn describe(g: &GraphOfGroups) -> String {
    let mut vertex_parts = Vec::new();
    for v in 0..g.vertex_count() {
        match g.backend() {
            crate::graph::CosetBackend::Gbs { .. } => {
                vertex_parts.push(g.vertex_name(VertexId(v)).to_string())
            }
            crate::graph::CosetBackend::TrivialEdge { orders } => vertex_parts.push(format!(
                "{}:Z/{}",
                g.vertex_name(VertexId(v)),
                orders[v]
            )),
        }
    }
    let mut edge_parts = Vec::new();
    for pair in 0..g.geometric_edge_count() {
        let e = EdgeId(2 * pair);
        let edge = g.edge(e);
        match g.gbs_index(e) {
            Some(k) => edge_parts.push(format!(
                "{}: {}->{} ({},{})",
                edge.name,
                g.vertex_name(edge.range),
                g.vertex_name(edge.source),
                k,
                g.gbs_index(g.reverse(e)).expect("gbs"),
            )),
            None => edge_parts.push(format!(
                "{}: {}->{}",
                edge.name,
                g.vertex_name(edge.range),
                g.vertex_name(edge.source),
            )),
        }
    }
    format!("[{}; {}]", vertex_parts.join(", "), edge_parts.join(", "))
}

/// Runs the full hypothesis battery for a GBS graph and reports which
/// boundary-action conclusions follow.
pub fn classify_gbs(g: &GraphOfGroups, base: VertexId) -> Result<ClassificationReport, DynError> {
    if !g.is_gbs() {
        return Err(DynError::NotGbs);
    }
    let mut warnings = vec![
        Warning {
            code: warning_codes::UNIMOD_TYPO.into(),
            message: "unimodularity compares absolute index products; a published \
                      example states the Baumslag-Solitar case as k != l where \
                      |k| != |l| is meant"
                .into(),
        },
        Warning {
            code: warning_codes::EVENTUALLY_PERIODIC_MODEL.into(),
            message: "boundary points are modeled as eventually periodic infinite \
                      reduced words; general points exist only as cylinder limits"
                .into(),
        },
    ];
    let mut hypotheses = Vec::new();
    let singular = g.singular_edges();
    if !singular.is_empty() {
        let names: Vec<&str> = singular.iter().map(|e| g.edge(*e).name.as_str()).collect();
        warnings.push(Warning {
            code: warning_codes::SINGULAR.into(),
            message: format!("singular edges: {}", names.join(", ")),
        });
        hypotheses.push(Hypothesis {
            name: "non-singular".into(),
            holds: false,
            certificate: format!("singular edges: {}", names.join(", ")),
        });
        return Ok(ClassificationReport {
            instance: describe(g),
            hypotheses,
            verdict: None,
            warnings,
            outcome: Outcome::HypothesisFailed,
        });
    }
    let infinite = boundary_infinite(g, base)?;
    hypotheses.push(Hypothesis {
        name: "infinite-boundary".into(),
        holds: infinite.infinite,
        certificate: match infinite.branching_state {
            Some(s) => format!(
                "state {} branches ({} weighted continuations) on a reachable cycle",
                g.edge(s).name,
                weighted_out_degree(g, s)
            ),
            None => "every reachable cycle is branch-free".into(),
        },
    });
    let minimality = check_minimality(g)?;
    hypotheses.push(Hypothesis {
        name: "minimal".into(),
        holds: minimality.minimal,
        certificate: match &minimality.certificate {
            None => "no direction admits a trapped cycle".into(),
            Some(c) => format!(
                "ray {} never flows into {}",
                c.trapped_ray,
                g.edge(c.avoided).name
            ),
        },
    });
    let search_len = g.geometric_edge_count() + 1;
    let repeatable = find_repeatable(g, search_len);
    let spread = repeatable.iter().find(|r| r.spread);
    hypotheses.push(Hypothesis {
        name: "spread-repeatable-path".into(),
        holds: spread.is_some(),
        certificate: match spread {
            Some(r) => format!(
                "path {} repeats with a spread turn",
                words::text::path_text(g, &r.path)
            ),
            None => format!("no spread repeatable path up to length {search_len}"),
        },
    });
    let unimod = check_unimodular(g)?;
    let q_text = if unimod.cycle_values.is_empty() {
        "no independent cycles".to_string()
    } else {
        unimod
            .cycle_values
            .iter()
            .map(|c| format!("q({}) = {}", c.edge, c.value))
            .collect::<Vec<_>>()
            .join(", ")
    };
    hypotheses.push(Hypothesis {
        name: "not-unimodular".into(),
        holds: !unimod.unimodular,
        certificate: q_text,
    });
    let dynamical = hypotheses[..3].iter().all(|h| h.holds);
    let (verdict, outcome) = if dynamical && !unimod.unimodular {
        (
            Some(Verdict {
                keys: vec![
                    "strong-boundary".into(),
                    "topologically-free".into(),
                    "kirchberg-uct".into(),
                    "cstar-simple".into(),
                ],
                text: "the end-space action is a topologically free strong boundary \
                       action; its reduced crossed product is a unital Kirchberg \
                       algebra satisfying the UCT"
                    .into(),
                citations: vec![citations::THM_C.into(), citations::THM_D.into()],
            }),
            Outcome::Established,
        )
    } else if dynamical {
        (
            Some(Verdict {
                keys: vec!["minimal-action".into(), "not-topologically-free".into()],
                text: "the graph is unimodular: the end-space action is minimal but \
                       not topologically free"
                    .into(),
                citations: vec![citations::PROP_UNIMODULAR.into()],
            }),
            Outcome::HypothesisFailed,
        )
    } else {
        (None, Outcome::HypothesisFailed)
    };
    Ok(ClassificationReport {
        instance: describe(g),
        hypotheses,
        verdict,
        warnings,
        outcome,
    })
}
