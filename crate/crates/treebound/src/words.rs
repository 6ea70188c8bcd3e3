//! Words in the fundamental group of a graph of groups and their normal
//! forms.
//!
//! A word based at `v` is `g1 e1 g2 e2 .. gn en t` where `range(e1) = v`,
//! `source(ei) = range(e(i+1))`, each `gi` lies in the vertex group at
//! `range(ei)` and the tail `t` lies in the vertex group at `source(en)`.
//! It is reduced when every `gi` is a transversal representative and no
//! `ei . g(i+1) . e(i+1)` is a backtrack (reversed edge with identity
//! token). Reduced words are unique in their equivalence class, so
//! structural equality on [`ReducedWord`] is group element equality.

use crate::graph::{EdgeId, GraphOfGroups, Token, VertexId};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

/// One `token edge` step of a word.
pub type Step = (Token, EdgeId);

/// An unnormalized word. `tail` of `None` means the word is intended as a
/// tree path and carries an implicit identity tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWord {
    pub base: VertexId,
    pub steps: Vec<Step>,
    pub tail: Option<Token>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("step {position}: edge does not continue from the previous vertex")]
    NotComposable { position: usize },
    #[error("step {position}: token is not a vertex group element here")]
    BadToken { position: usize },
    #[error("word is not a tree path: nontrivial tail")]
    NotAPath,
    #[error("operation requires a GBS backend")]
    NotGbs,
}

impl GWord {
    pub fn validate(&self, g: &GraphOfGroups) -> Result<(), WordError> {
        let mut at = self.base;
        for (position, (token, edge)) in self.steps.iter().enumerate() {
            if g.range(*edge) != at {
                return Err(WordError::NotComposable { position });
            }
            if !token_in_vertex_group(g, at, token) {
                return Err(WordError::BadToken { position });
            }
            at = g.source(*edge);
        }
        if let Some(tail) = &self.tail {
            if !token_in_vertex_group(g, at, tail) {
                return Err(WordError::BadToken {
                    position: self.steps.len(),
                });
            }
        }
        Ok(())
    }

    /// Vertex the word ends at.
    pub fn end(&self, g: &GraphOfGroups) -> VertexId {
        match self.steps.last() {
            Some((_, e)) => g.source(*e),
            None => self.base,
        }
    }
}

fn token_in_vertex_group(g: &GraphOfGroups, v: VertexId, t: &Token) -> bool {
    match (g.backend(), t) {
        (crate::graph::CosetBackend::Gbs { .. }, Token::Int(_)) => true,
        (crate::graph::CosetBackend::TrivialEdge { orders }, Token::Fin(x)) => *x < orders[v.0],
        _ => false,
    }
}

/// A word in normal form. Tokens are transversal representatives, there
/// are no backtracks, and the tail is explicit (identity for tree paths).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedWord {
    base: VertexId,
    steps: Vec<Step>,
    tail: Token,
}

impl ReducedWord {
    pub fn identity(g: &GraphOfGroups, v: VertexId) -> Self {
        ReducedWord {
            base: v,
            steps: Vec::new(),
            tail: g.identity(v),
        }
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn tail(&self) -> &Token {
        &self.tail
    }

    pub fn edge_len(&self) -> usize {
        self.steps.len()
    }

    pub fn end(&self, g: &GraphOfGroups) -> VertexId {
        match self.steps.last() {
            Some((_, e)) => g.source(*e),
            None => self.base,
        }
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.steps.last().map(|(_, e)| *e)
    }

    /// A group element is a closed word.
    pub fn is_group_element(&self, g: &GraphOfGroups) -> bool {
        self.end(g) == self.base
    }

    /// A tree path has an identity tail.
    pub fn is_path(&self) -> bool {
        self.tail.is_identity()
    }

    pub fn as_gword(&self) -> GWord {
        GWord {
            base: self.base,
            steps: self.steps.clone(),
            tail: Some(self.tail.clone()),
        }
    }

    /// The path obtained by forgetting the tail.
    pub fn path_part(&self, g: &GraphOfGroups) -> ReducedWord {
        ReducedWord {
            base: self.base,
            steps: self.steps.clone(),
            tail: g.identity(self.end(g)),
        }
    }

    /// Checks the normal form invariants; used by tests and debug builds.
    pub fn check_invariants(&self, g: &GraphOfGroups) -> Result<(), WordError> {
        self.as_gword().validate(g)?;
        for (position, (token, edge)) in self.steps.iter().enumerate() {
            if g.transversal_index(*edge, token).is_none() {
                return Err(WordError::BadToken { position });
            }
            if position + 1 < self.steps.len() {
                let (next_token, next_edge) = &self.steps[position + 1];
                if *next_edge == g.reverse(*edge) && next_token.is_identity() {
                    return Err(WordError::NotComposable {
                        position: position + 1,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Rewrites a word to its normal form: tokens are split against their
/// edges with carries crossing towards the tail, then backtracks are
/// cancelled and the process repeats. Terminates because each
/// cancellation removes two edges; the result is independent of rewrite
/// order by uniqueness of reduced words.
pub fn reduce(g: &GraphOfGroups, word: &GWord) -> ReducedWord {
    debug_assert!(word.validate(g).is_ok());
    let mut steps = word.steps.clone();
    let mut tail = match &word.tail {
        Some(t) => t.clone(),
        None => g.identity(word.end(g)),
    };
    loop {
        // Carry cascade, left to right.
        let mut carry: Option<Token> = None;
        for (token, edge) in steps.iter_mut() {
            let value = match carry.take() {
                Some(c) => g.compose(g.range(*edge), &c, token),
                None => token.clone(),
            };
            let (sigma, h) = g.split(*edge, &value);
            *token = sigma;
            carry = Some(g.carry(*edge, &h));
        }
        if let Some(c) = carry {
            let end = match steps.last() {
                Some((_, e)) => g.source(*e),
                None => word.base,
            };
            tail = g.compose(end, &c, &tail);
        }
        // First backtrack, if any.
        let mut backtrack = None;
        for i in 0..steps.len().saturating_sub(1) {
            if steps[i + 1].1 == g.reverse(steps[i].1) && steps[i + 1].0.is_identity() {
                backtrack = Some(i);
                break;
            }
        }
        let Some(i) = backtrack else {
            return ReducedWord {
                base: word.base,
                steps,
                tail,
            };
        };
        // Cancel edges i and i+1; the token in front of the pair merges
        // into whatever follows it.
        let (kept, _) = steps[i].clone();
        steps.drain(i..=i + 1);
        if i < steps.len() {
            let at = g.range(steps[i].1);
            steps[i].0 = g.compose(at, &kept, &steps[i].0);
        } else {
            let end = match steps.last() {
                Some((_, e)) => g.source(*e),
                None => word.base,
            };
            tail = g.compose(end, &kept, &tail);
        }
    }
}

/// Product of reduced words (`a` then `b`), requiring `a` to end where
/// `b` is based.
pub fn multiply(
    g: &GraphOfGroups,
    a: &ReducedWord,
    b: &ReducedWord,
) -> Result<ReducedWord, WordError> {
    if a.end(g) != b.base {
        return Err(WordError::NotComposable {
            position: a.edge_len(),
        });
    }
    let mut steps = a.steps.clone();
    let mut tail = b.tail.clone();
    if let Some(((first_token, first_edge), rest)) = b.steps.split_first() {
        let merged = g.compose(b.base, &a.tail, first_token);
        steps.push((merged, *first_edge));
        steps.extend_from_slice(rest);
    } else {
        tail = g.compose(b.base, &a.tail, &tail);
    }
    Ok(reduce(
        g,
        &GWord {
            base: a.base,
            steps,
            tail: Some(tail),
        },
    ))
}

/// Inverse of a reduced word: the formal reversal, normalized.
pub fn invert(g: &GraphOfGroups, a: &ReducedWord) -> ReducedWord {
    let end = a.end(g);
    let mut steps: Vec<Step> = Vec::with_capacity(a.edge_len());
    let mut prev = g.invert_token(end, &a.tail);
    for (token, edge) in a.steps.iter().rev() {
        steps.push((prev, g.reverse(*edge)));
        prev = g.invert_token(g.range(*edge), token);
    }
    reduce(
        g,
        &GWord {
            base: end,
            steps,
            tail: Some(prev),
        },
    )
}

/// Power of a closed reduced word.
pub fn power(g: &GraphOfGroups, a: &ReducedWord, n: usize) -> Result<ReducedWord, WordError> {
    if !a.is_group_element(g) {
        return Err(WordError::NotComposable {
            position: a.edge_len(),
        });
    }
    let mut out = ReducedWord::identity(g, a.base());
    for _ in 0..n {
        out = multiply(g, &out, a)?;
    }
    Ok(out)
}

/// Value of the modular homomorphism on a GBS word: the product over the
/// traversed edges of `k(reverse(e)) / k(e)` as an exact rational. Only
/// its absolute value is orientation-independent; callers comparing
/// against 1 should take absolute values.
pub fn modular_value(g: &GraphOfGroups, a: &ReducedWord) -> Result<BigRational, WordError> {
    if !g.is_gbs() {
        return Err(WordError::NotGbs);
    }
    let mut q = BigRational::one();
    for (_, edge) in a.steps() {
        let ke = g.gbs_index(*edge).expect("gbs backend");
        let krev = g.gbs_index(g.reverse(*edge)).expect("gbs backend");
        q *= BigRational::new(BigInt::from(krev), BigInt::from(ke));
    }
    Ok(q)
}

/// Reduces the concatenation `a . pi` of a reduced word and a reduced
/// path, reporting how many of `pi`'s steps were consumed by backtrack
/// cancellation at the seam. Cancellation only ever eats a suffix of `a`
/// against a prefix of `pi`: once one step of `pi` survives, the running
/// carry lies in the image of the edge embedding at that step, which
/// makes later backtracks impossible. When the count is less than
/// `pi.edge_len()`, the result's tail also lies in such an image, so the
/// surviving path determines the image of the cylinder at `pi` exactly.
pub fn apply_to_path(
    g: &GraphOfGroups,
    a: &ReducedWord,
    pi: &ReducedWord,
) -> Result<(ReducedWord, usize), WordError> {
    if a.end(g) != pi.base() {
        return Err(WordError::NotComposable {
            position: a.edge_len(),
        });
    }
    debug_assert!(pi.is_path());
    let mut stack: Vec<Step> = a.steps.clone();
    let mut carry = a.tail.clone();
    let mut consumed = 0usize;
    let mut pushed = 0usize;
    for (token, edge) in pi.steps() {
        let value = g.compose(g.range(*edge), &carry, token);
        let (sigma, h) = g.split(*edge, &value);
        if pushed == 0 && sigma.is_identity() {
            if let Some(&(_, top_edge)) = stack.last() {
                if g.reverse(top_edge) == *edge {
                    // Backtrack: the pair collapses to an edge group image
                    // at range(top_edge), merged into the preceding token.
                    let (top_token, _) = stack.pop().expect("nonempty");
                    let merged = g.embed(top_edge, &h);
                    carry = g.compose(g.range(top_edge), &top_token, &merged);
                    consumed += 1;
                    continue;
                }
            }
        }
        stack.push((sigma, *edge));
        carry = g.carry(*edge, &h);
        pushed += 1;
    }
    let end = match stack.last() {
        Some((_, e)) => g.source(*e),
        None => a.base,
    };
    let _ = end;
    let out = ReducedWord {
        base: a.base,
        steps: stack,
        tail: carry,
    };
    debug_assert!(out.check_invariants(g).is_ok());
    Ok((out, consumed))
}

/// Parse and print words in the plain text syntax: whitespace-separated
/// alternating tokens and edge names, e.g. `5 e 0` (a group element with
/// tail `0`) or `0 e 1 ē` (a tree path, no tail). A bare token is a
/// vertex group element at the base vertex.
pub mod text {
    use super::*;
    use thiserror::Error;

    #[derive(Debug, Error, PartialEq, Eq)]
    pub enum WordParseError {
        #[error("empty word text")]
        Empty,
        #[error("unknown edge `{0}`")]
        UnknownEdge(String),
        #[error("expected a token before `{0}`")]
        MissingToken(String),
        #[error("cannot parse token `{0}`")]
        BadToken(String),
        #[error("word needs a base vertex")]
        MissingBase,
    }

    /// Parses word text. `base` is required only for words without edges.
    pub fn parse_word(
        g: &GraphOfGroups,
        input: &str,
        base: Option<VertexId>,
    ) -> Result<GWord, WordParseError> {
        let items: Vec<&str> = input.split_whitespace().collect();
        if items.is_empty() {
            return Err(WordParseError::Empty);
        }
        let mut steps: Vec<(Token, EdgeId)> = Vec::new();
        let mut pending: Option<Token> = None;
        for item in &items {
            if let Some(edge) = g.edge_by_name(item) {
                let token = pending
                    .take()
                    .ok_or_else(|| WordParseError::MissingToken(item.to_string()))?;
                steps.push((token, edge));
            } else {
                if pending.is_some() {
                    return Err(WordParseError::BadToken(format!(
                        "{item} (two tokens in a row)"
                    )));
                }
                pending = Some(parse_token(g, item)?);
            }
        }
        let word_base = match steps.first() {
            Some((_, e)) => g.range(*e),
            None => base.ok_or(WordParseError::MissingBase)?,
        };
        Ok(GWord {
            base: word_base,
            steps,
            tail: pending,
        })
    }

    fn parse_token(g: &GraphOfGroups, item: &str) -> Result<Token, WordParseError> {
        match g.backend() {
            crate::graph::CosetBackend::Gbs { .. } => item
                .parse::<BigInt>()
                .map(Token::Int)
                .map_err(|_| WordParseError::BadToken(item.to_string())),
            crate::graph::CosetBackend::TrivialEdge { .. } => item
                .parse::<u64>()
                .map(Token::Fin)
                .map_err(|_| WordParseError::BadToken(item.to_string())),
        }
    }

    /// Text of a word with its tail, e.g. `1 e 6`; the identity is `0`.
    pub fn word_text(g: &GraphOfGroups, w: &ReducedWord) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (token, edge) in w.steps() {
            parts.push(token.to_string());
            parts.push(g.edge(*edge).name.clone());
        }
        parts.push(w.tail().to_string());
        parts.join(" ")
    }

    /// Text of a tree path, without the identity tail, e.g. `0 e 1 ē`.
    pub fn path_text(g: &GraphOfGroups, w: &ReducedWord) -> String {
        debug_assert!(w.is_path());
        if w.steps().is_empty() {
            return format!("({})", g.vertex_name(w.base()));
        }
        let mut parts: Vec<String> = Vec::new();
        for (token, edge) in w.steps() {
            parts.push(token.to_string());
            parts.push(g.edge(*edge).name.clone());
        }
        parts.join(" ")
    }
}
