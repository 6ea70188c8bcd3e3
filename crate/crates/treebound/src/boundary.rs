//! The space of ends of the Bass-Serre tree, seen from a base vertex.
//!
//! Ends correspond to infinite reduced tree paths from the base. The
//! computable pieces are cylinders (all ends through a fixed finite
//! path), finite unions of cylinders in a canonical form, and eventually
//! periodic ends. Group elements act on all three; on cylinders the
//! action is computed exactly, not approximately: once refinement is deep
//! enough, the image of a cylinder is again a single cylinder.

use crate::graph::{GraphOfGroups, Token, VertexId};
use crate::words::{self, apply_to_path, ReducedWord, Step, WordError};
use std::collections::BTreeMap;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundaryError {
    #[error("cylinder prefixes must be tree paths (identity tail)")]
    NotAPath,
    #[error("boundary point cycle is empty")]
    EmptyCycle,
    #[error("boundary point is not reduced at step {position}")]
    BadJunction { position: usize },
    #[error("word does not end at the base of the target")]
    NotComposable,
    #[error("carry did not stabilize within {junctions} junctions; the image is not eventually periodic")]
    NonPeriodicCarry { junctions: usize },
}

impl From<WordError> for BoundaryError {
    fn from(_: WordError) -> Self {
        BoundaryError::NotComposable
    }
}

/// The set of ends through a finite reduced tree path.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cylinder {
    prefix: ReducedWord,
}

impl Cylinder {
    pub fn new(prefix: ReducedWord) -> Result<Self, BoundaryError> {
        if !prefix.is_path() {
            return Err(BoundaryError::NotAPath);
        }
        Ok(Cylinder { prefix })
    }

    /// The cylinder of the empty path: the whole boundary at `v`.
    pub fn full(g: &GraphOfGroups, v: VertexId) -> Self {
        Cylinder {
            prefix: ReducedWord::identity(g, v),
        }
    }

    pub fn prefix(&self) -> &ReducedWord {
        &self.prefix
    }

    pub fn depth(&self) -> usize {
        self.prefix.edge_len()
    }

    pub fn base(&self) -> VertexId {
        self.prefix.base()
    }

    pub fn text(&self, g: &GraphOfGroups) -> String {
        words::text::path_text(g, &self.prefix)
    }
}

/// Admissible one-step extensions of a tree path, in canonical order:
/// edges into the endpoint in declaration order, transversal
/// representatives in index order, skipping the identity backtrack.
pub fn extensions(g: &GraphOfGroups, path: &ReducedWord) -> Vec<Step> {
    debug_assert!(path.is_path());
    let end = path.end(g);
    let last = path.last_edge();
    let mut out = Vec::new();
    for f in g.edges_into(end) {
        let size = g.transversal_size(f);
        for idx in 0..size {
            if idx == 0 {
                if let Some(last_edge) = last {
                    if g.reverse(last_edge) == f {
                        continue;
                    }
                }
            }
            out.push((g.transversal(f, idx), f));
        }
    }
    out
}

fn extend(g: &GraphOfGroups, path: &ReducedWord, step: Step) -> ReducedWord {
    let mut gw = path.as_gword();
    gw.tail = None;
    gw.steps.push(step);
    // Already reduced by construction; reduce() just revalidates shape.
    words::reduce(g, &gw)
}

/// All reduced tree paths of the given depth from `base`, in canonical
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeLevel {
    pub depth: usize,
    pub paths: Vec<ReducedWord>,
}

pub fn enumerate_level(g: &GraphOfGroups, base: VertexId, depth: usize) -> TreeLevel {
    let mut paths = vec![ReducedWord::identity(g, base)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &paths {
            for step in extensions(g, p) {
                next.push(extend(g, p, step));
            }
        }
        paths = next;
    }
    TreeLevel { depth, paths }
}

/// A finite union of cylinders in canonical form: an antichain of
/// prefixes, sorted by depth then by step indices, with every complete
/// sibling family coalesced into its parent. The whole boundary is
/// represented by the complete depth-one family, never by the empty
/// prefix, so canonical forms are unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderUnion {
    base: VertexId,
    cylinders: Vec<Cylinder>,
}

impl CylinderUnion {
    pub fn empty(base: VertexId) -> Self {
        CylinderUnion {
            base,
            cylinders: Vec::new(),
        }
    }

    pub fn full(g: &GraphOfGroups, base: VertexId) -> Self {
        Self::from_cylinders(
            g,
            base,
            vec![Cylinder::full(g, base)],
        )
    }

    pub fn from_cylinders(g: &GraphOfGroups, base: VertexId, cylinders: Vec<Cylinder>) -> Self {
        let mut expanded: Vec<ReducedWord> = Vec::new();
        for c in cylinders {
            debug_assert_eq!(c.base(), base);
            if c.depth() == 0 {
                // The full boundary: its canonical form is the depth-one
                // family.
                for step in extensions(g, c.prefix()) {
                    expanded.push(extend(g, c.prefix(), step));
                }
            } else {
                expanded.push(c.prefix().clone());
            }
        }
        let mut kept = antichain(g, expanded);
        coalesce(g, &mut kept);
        sort_canonical(g, &mut kept);
        CylinderUnion {
            base,
            cylinders: kept.into_iter().map(|prefix| Cylinder { prefix }).collect(),
        }
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn is_full(&self, g: &GraphOfGroups) -> bool {
        *self == CylinderUnion::full(g, self.base)
    }

    /// Maximal prefix depth appearing in the canonical form.
    pub fn depth(&self) -> usize {
        self.cylinders.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn union(&self, g: &GraphOfGroups, other: &CylinderUnion) -> CylinderUnion {
        debug_assert_eq!(self.base, other.base);
        let mut all = self.cylinders.clone();
        all.extend(other.cylinders.iter().cloned());
        CylinderUnion::from_cylinders(g, self.base, all)
    }

    pub fn intersect(&self, g: &GraphOfGroups, other: &CylinderUnion) -> CylinderUnion {
        debug_assert_eq!(self.base, other.base);
        let mut out = Vec::new();
        for a in &self.cylinders {
            for b in &other.cylinders {
                if is_prefix(a.prefix(), b.prefix()) {
                    out.push(b.clone());
                } else if is_prefix(b.prefix(), a.prefix()) {
                    out.push(a.clone());
                }
            }
        }
        CylinderUnion::from_cylinders(g, self.base, out)
    }

    pub fn complement(&self, g: &GraphOfGroups) -> CylinderUnion {
        let mut out = CylinderUnion::full(g, self.base);
        for c in &self.cylinders {
            out = out.intersect(g, &complement_of_cylinder(g, c));
        }
        out
    }

    pub fn is_subset(&self, g: &GraphOfGroups, other: &CylinderUnion) -> bool {
        self.union(g, other) == *other
    }

    pub fn is_disjoint(&self, g: &GraphOfGroups, other: &CylinderUnion) -> bool {
        self.intersect(g, other).is_empty()
    }

    pub fn text(&self, g: &GraphOfGroups) -> String {
        if self.cylinders.is_empty() {
            return "{}".into();
        }
        let parts: Vec<String> = self
            .cylinders
            .iter()
            .map(|c| format!("Z({})", c.text(g)))
            .collect();
        parts.join(" + ")
    }
}

fn is_prefix(p: &ReducedWord, q: &ReducedWord) -> bool {
    p.base() == q.base()
        && p.edge_len() <= q.edge_len()
        && q.steps()[..p.edge_len()] == *p.steps()
}

fn step_key(g: &GraphOfGroups, step: &Step) -> (usize, u64) {
    let (token, edge) = step;
    let idx = g
        .transversal_index(*edge, token)
        .expect("cylinder prefixes carry transversal tokens");
    (edge.0, idx)
}

fn path_key(g: &GraphOfGroups, p: &ReducedWord) -> (usize, Vec<(usize, u64)>) {
    (p.edge_len(), p.steps().iter().map(|s| step_key(g, s)).collect())
}

fn sort_canonical(g: &GraphOfGroups, paths: &mut Vec<ReducedWord>) {
    paths.sort_by_key(|p| path_key(g, p));
    paths.dedup();
}

/// Keeps only prefix-minimal paths.
fn antichain(g: &GraphOfGroups, mut paths: Vec<ReducedWord>) -> Vec<ReducedWord> {
    sort_canonical(g, &mut paths);
    let mut kept: Vec<ReducedWord> = Vec::new();
    'outer: for p in paths {
        for q in &kept {
            if is_prefix(q, &p) {
                continue 'outer;
            }
        }
        kept.push(p);
    }
    kept
}

/// Replaces complete sibling families by their parent, repeatedly, but
/// never coalesces the depth-one family into the empty prefix.
fn coalesce(g: &GraphOfGroups, paths: &mut Vec<ReducedWord>) {
    loop {
        let mut by_parent: BTreeMap<(usize, Vec<(usize, u64)>), Vec<usize>> = BTreeMap::new();
        for (i, p) in paths.iter().enumerate() {
            if p.edge_len() >= 2 {
                let parent_steps = p.steps()[..p.edge_len() - 1].to_vec();
                let key = (
                    parent_steps.len(),
                    parent_steps.iter().map(|s| step_key(g, s)).collect(),
                );
                by_parent.entry(key).or_default().push(i);
            }
        }
        let mut replace: Option<Vec<usize>> = None;
        for members in by_parent.values() {
            let parent = truncate_path(g, &paths[members[0]]);
            let family = extensions(g, &parent).len();
            if members.len() == family {
                replace = Some(members.clone());
                break;
            }
        }
        let Some(members) = replace else {
            return;
        };
        let parent = truncate_path(g, &paths[members[0]]);
        let member_set: Vec<usize> = members;
        let mut next: Vec<ReducedWord> = Vec::new();
        for (i, p) in paths.drain(..).enumerate() {
            if !member_set.contains(&i) {
                next.push(p);
            }
        }
        next.push(parent);
        *paths = antichain(g, next);
    }
}

fn truncate_path(g: &GraphOfGroups, p: &ReducedWord) -> ReducedWord {
    let mut gw = p.as_gword();
    gw.tail = None;
    gw.steps.pop();
    words::reduce(g, &gw)
}

fn complement_of_cylinder(g: &GraphOfGroups, c: &Cylinder) -> CylinderUnion {
    let base = c.base();
    if c.depth() == 0 {
        return CylinderUnion::empty(base);
    }
    let mut out = Vec::new();
    let mut ancestor = ReducedWord::identity(g, base);
    for d in 0..c.depth() {
        let spine = c.prefix().steps()[d].clone();
        for step in extensions(g, &ancestor) {
            if step != spine {
                out.push(Cylinder {
                    prefix: extend(g, &ancestor, step),
                });
            }
        }
        ancestor = extend(g, &ancestor, spine);
    }
    CylinderUnion::from_cylinders(g, base, out)
}

/// Image of a cylinder under a group element (or any reduced word ending
/// at the cylinder's base). The cylinder is refined until the seam
/// cancellation no longer swallows a whole prefix; each surviving prefix
/// maps onto exactly one cylinder.
pub fn image_of_cylinder(
    g: &GraphOfGroups,
    elt: &ReducedWord,
    cyl: &Cylinder,
) -> Result<CylinderUnion, BoundaryError> {
    if elt.end(g) != cyl.base() {
        return Err(BoundaryError::NotComposable);
    }
    let mut queue: VecDeque<ReducedWord> = VecDeque::new();
    queue.push_back(cyl.prefix().clone());
    let mut out = Vec::new();
    while let Some(p) = queue.pop_front() {
        if p.edge_len() == 0 {
            for step in extensions(g, &p) {
                queue.push_back(extend(g, &p, step));
            }
            continue;
        }
        let (word, consumed) = apply_to_path(g, elt, &p)?;
        if consumed < p.edge_len() {
            out.push(Cylinder {
                prefix: word.path_part(g),
            });
        } else {
            for step in extensions(g, &p) {
                queue.push_back(extend(g, &p, step));
            }
        }
    }
    Ok(CylinderUnion::from_cylinders(g, elt.base(), out))
}

/// Image of a finite union, cylinder by cylinder.
pub fn image_of_union(
    g: &GraphOfGroups,
    elt: &ReducedWord,
    u: &CylinderUnion,
) -> Result<CylinderUnion, BoundaryError> {
    let mut out = CylinderUnion::empty(elt.base());
    for c in u.cylinders() {
        out = out.union(g, &image_of_cylinder(g, elt, c)?);
    }
    Ok(out)
}

/// An eventually periodic end: the infinite reduced path
/// `prefix . cycle . cycle . ..`, stored with a primitive cycle and the
/// shortest possible prefix, so equality of values is structural
/// equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPoint {
    base: VertexId,
    prefix: Vec<Step>,
    cycle: Vec<Step>,
}

impl BoundaryPoint {
    pub fn new(
        g: &GraphOfGroups,
        base: VertexId,
        prefix: Vec<Step>,
        cycle: Vec<Step>,
    ) -> Result<Self, BoundaryError> {
        if cycle.is_empty() {
            return Err(BoundaryError::EmptyCycle);
        }
        // Validate by unrolling two cycle copies: this exercises every
        // junction, including the wrap-around.
        let mut steps = prefix.clone();
        steps.extend(cycle.iter().cloned());
        steps.extend(cycle.iter().cloned());
        let gw = crate::words::GWord {
            base,
            steps,
            tail: None,
        };
        gw.validate(g).map_err(|e| match e {
            WordError::NotComposable { position } => BoundaryError::BadJunction { position },
            _ => BoundaryError::NotComposable,
        })?;
        let unrolled = words::reduce(g, &gw);
        if unrolled.edge_len() != prefix.len() + 2 * cycle.len()
            || unrolled.steps()[..prefix.len()] != prefix[..]
        {
            // Reduction changed the word: some token was not a
            // transversal representative or a junction backtracked.
            return Err(BoundaryError::BadJunction {
                position: first_difference(&prefix, &cycle, &unrolled),
            });
        }
        let mut prefix = prefix;
        let mut cycle = primitive_cycle(cycle);
        while let (Some(last_p), Some(last_c)) = (prefix.last(), cycle.last()) {
            if last_p == last_c {
                prefix.pop();
                cycle.rotate_right(1);
            } else {
                break;
            }
        }
        Ok(BoundaryPoint {
            base,
            prefix,
            cycle,
        })
    }

    /// The periodic end of a repeatable path: `path . path . ..`.
    pub fn periodic(g: &GraphOfGroups, path: &ReducedWord) -> Result<Self, BoundaryError> {
        if !path.is_path() {
            return Err(BoundaryError::NotAPath);
        }
        BoundaryPoint::new(g, path.base(), Vec::new(), path.steps().to_vec())
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn prefix(&self) -> &[Step] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Step] {
        &self.cycle
    }

    /// The `i`-th step of the infinite path.
    pub fn step(&self, i: usize) -> &Step {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The tree path of the first `depth` steps.
    pub fn truncate(&self, g: &GraphOfGroups, depth: usize) -> ReducedWord {
        let steps: Vec<Step> = (0..depth).map(|i| self.step(i).clone()).collect();
        words::reduce(
            g,
            &crate::words::GWord {
                base: self.base,
                steps,
                tail: None,
            },
        )
    }

    /// Whether the end passes through the given tree path.
    pub fn passes_through(&self, path: &ReducedWord) -> bool {
        path.base() == self.base
            && path
                .steps()
                .iter()
                .enumerate()
                .all(|(i, s)| self.step(i) == s)
    }

    pub fn text(&self, g: &GraphOfGroups) -> String {
        let piece = |steps: &[Step]| -> String {
            let mut parts = Vec::new();
            for (token, edge) in steps {
                parts.push(token.to_string());
                parts.push(g.edge(*edge).name.clone());
            }
            parts.join(" ")
        };
        if self.prefix.is_empty() {
            format!("({})^\u{221e}", piece(&self.cycle))
        } else {
            format!("{} ({})^\u{221e}", piece(&self.prefix), piece(&self.cycle))
        }
    }
}

fn first_difference(prefix: &[Step], cycle: &[Step], reduced: &ReducedWord) -> usize {
    let mut expected = prefix.to_vec();
    expected.extend(cycle.iter().cloned());
    expected.extend(cycle.iter().cloned());
    for (i, step) in reduced.steps().iter().enumerate() {
        if i >= expected.len() || expected[i] != *step {
            return i;
        }
    }
    reduced.edge_len()
}

/// Shortest rotation block generating the cycle.
fn primitive_cycle(cycle: Vec<Step>) -> Vec<Step> {
    let n = cycle.len();
    for p in 1..=n {
        if n % p == 0 && (0..n).all(|i| cycle[i] == cycle[i % p]) {
            return cycle[..p].to_vec();
        }
    }
    cycle
}

/// Acts on an eventually periodic end.
///
/// The element is absorbed into a long enough finite prefix; after that
/// every junction pushes exactly one step and transforms a carry that
/// stays inside an edge group image, so the output either repeats a
/// (carry, cycle position) state within `edge_len + 2 * cycle` junctions
/// and is eventually periodic, or the carries never stabilize and the
/// image is not an eventually periodic end. The second outcome is a real
/// mathematical phenomenon for vertex elements with large translation
/// part, not a failure of the implementation; it is reported as
/// [`BoundaryError::NonPeriodicCarry`].
pub fn act_on_point(
    g: &GraphOfGroups,
    elt: &ReducedWord,
    point: &BoundaryPoint,
) -> Result<BoundaryPoint, BoundaryError> {
    if elt.end(g) != point.base() {
        return Err(BoundaryError::NotComposable);
    }
    let l = point.cycle.len();
    let need = elt.edge_len() + l + 1;
    let mut copies = 1;
    while point.prefix.len() + copies * l < need {
        copies += 1;
    }
    let mut steps = point.prefix.clone();
    for _ in 0..copies {
        steps.extend(point.cycle.iter().cloned());
    }
    let path = words::reduce(
        g,
        &crate::words::GWord {
            base: point.base,
            steps,
            tail: None,
        },
    );
    let (absorbed, consumed) = apply_to_path(g, elt, &path)?;
    debug_assert!(consumed < path.edge_len());
    let mut head = absorbed.steps().to_vec();
    let mut carry = absorbed.tail().clone();
    let mut idx = 0usize;
    let bound = elt.edge_len() + 2 * l;
    let mut seen: BTreeMap<(Token, usize), usize> = BTreeMap::new();
    for _ in 0..=bound {
        if carry.is_identity() {
            let mut cycle = point.cycle.clone();
            cycle.rotate_left(idx);
            return BoundaryPoint::new(g, elt.base(), head, cycle);
        }
        if let Some(&start) = seen.get(&(carry.clone(), idx)) {
            let cycle = head.split_off(start);
            return BoundaryPoint::new(g, elt.base(), head, cycle);
        }
        seen.insert((carry.clone(), idx), head.len());
        let (token, edge) = point.cycle[idx].clone();
        let value = g.compose(g.range(edge), &carry, &token);
        let (sigma, h) = g.split(edge, &value);
        debug_assert!(
            !(sigma.is_identity()
                && head.last().map(|(_, e)| g.reverse(*e)) == Some(edge)),
            "carry mode never backtracks"
        );
        head.push((sigma, edge));
        carry = g.carry(edge, &h);
        idx = (idx + 1) % l;
    }
    Err(BoundaryError::NonPeriodicCarry { junctions: bound })
}

/// Point literal syntax: `0 e (1 e)^∞` or `(0 e)^∞`; `^inf` is accepted
/// in place of `^∞`.
pub mod text {
    use super::*;
    use crate::words::text::{parse_word, WordParseError};

    pub fn parse_point(
        g: &GraphOfGroups,
        input: &str,
        base: Option<VertexId>,
    ) -> Result<BoundaryPoint, String> {
        let trimmed = input.trim();
        let open = trimmed
            .find('(')
            .ok_or_else(|| "point literal needs a (cycle)^\u{221e} part".to_string())?;
        let close = trimmed
            .rfind(')')
            .ok_or_else(|| "unclosed cycle in point literal".to_string())?;
        let suffix = trimmed[close + 1..].trim();
        if suffix != "^\u{221e}" && suffix != "^inf" {
            return Err("cycle must be followed by ^\u{221e}".to_string());
        }
        let prefix_text = trimmed[..open].trim();
        let cycle_text = trimmed[open + 1..close].trim();
        let cycle_word = parse_path(g, cycle_text, base)?;
        let prefix_steps = if prefix_text.is_empty() {
            Vec::new()
        } else {
            parse_path(g, prefix_text, base)?.steps
        };
        let point_base = if prefix_steps.is_empty() {
            g.range(cycle_word.steps[0].1)
        } else {
            g.range(prefix_steps[0].1)
        };
        BoundaryPoint::new(g, point_base, prefix_steps, cycle_word.steps)
            .map_err(|e| e.to_string())
    }

    fn parse_path(
        g: &GraphOfGroups,
        text: &str,
        base: Option<VertexId>,
    ) -> Result<crate::words::GWord, String> {
        let gw = parse_word(g, text, base).map_err(|e: WordParseError| e.to_string())?;
        if gw.tail.is_some() {
            return Err("tree paths do not carry a tail token".to_string());
        }
        if gw.steps.is_empty() {
            return Err("cycle is empty".to_string());
        }
        Ok(gw)
    }
}
