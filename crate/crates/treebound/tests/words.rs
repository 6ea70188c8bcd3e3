//! Normal-form properties: group axioms, a rewrite-order confluence
//! oracle, and the modular homomorphism.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use treebound::graph::Token;
use treebound::words::{invert, modular_value, multiply, power, reduce, GWord};
use treebound::{fixtures, GraphOfGroups, ReducedWord, VertexId};

fn random_token(rng: &mut StdRng) -> Token {
    Token::Int(BigInt::from(rng.gen_range(-40i64..=40)))
}

/// Random composable word of exactly `len` edges starting at `base`.
fn random_gword(g: &GraphOfGroups, rng: &mut StdRng, base: VertexId, len: usize) -> GWord {
    let mut steps = Vec::with_capacity(len);
    let mut at = base;
    for _ in 0..len {
        let candidates = g.edges_into(at);
        let edge = candidates[rng.gen_range(0..candidates.len())];
        steps.push((random_token(rng), edge));
        at = g.source(edge);
    }
    GWord {
        base,
        steps,
        tail: Some(random_token(rng)),
    }
}

fn random_element(
    g: &GraphOfGroups,
    rng: &mut StdRng,
    base: VertexId,
    max_len: usize,
) -> ReducedWord {
    let len = rng.gen_range(0..=max_len);
    reduce(g, &random_gword(g, rng, base, len))
}

/// Oracle reducer: applies individually valid rewrites in random order
/// until none applies. Rewrites are single-token normalization (split
/// one token, push the carry right) and single backtrack cancellation.
/// Uniqueness of the normal form predicts agreement with `reduce`.
fn scrambled_reduce(g: &GraphOfGroups, word: &GWord, rng: &mut StdRng) -> GWord {
    let mut steps = word.steps.clone();
    let mut tail = match &word.tail {
        Some(t) => t.clone(),
        None => g.identity(word.end(g)),
    };
    loop {
        let mut moves: Vec<usize> = Vec::new();
        // Move encoding: 2*j = normalize token j, 2*j+1 = cancel at j.
        for (j, (token, edge)) in steps.iter().enumerate() {
            let (sigma, _) = g.split(*edge, token);
            if sigma != *token {
                moves.push(2 * j);
            }
            if j + 1 < steps.len()
                && steps[j + 1].1 == g.reverse(*edge)
                && steps[j + 1].0.is_identity()
            {
                moves.push(2 * j + 1);
            }
        }
        let Some(&choice) = moves.get(rng.gen_range(0..moves.len().max(1))) else {
            return GWord {
                base: word.base,
                steps,
                tail: Some(tail),
            };
        };
        let j = choice / 2;
        if choice % 2 == 0 {
            let (token, edge) = steps[j].clone();
            let (sigma, h) = g.split(edge, &token);
            steps[j].0 = sigma;
            let carry = g.carry(edge, &h);
            if j + 1 < steps.len() {
                let at = g.range(steps[j + 1].1);
                steps[j + 1].0 = g.compose(at, &carry, &steps[j + 1].0);
            } else {
                let end = g.source(edge);
                tail = g.compose(end, &carry, &tail);
            }
        } else {
            let (kept, _) = steps[j].clone();
            steps.drain(j..=j + 1);
            if j < steps.len() {
                let at = g.range(steps[j].1);
                steps[j].0 = g.compose(at, &kept, &steps[j].0);
            } else {
                let end = match steps.last() {
                    Some((_, e)) => g.source(*e),
                    None => word.base,
                };
                tail = g.compose(end, &kept, &tail);
            }
        }
    }
}

fn instances() -> Vec<(&'static str, GraphOfGroups)> {
    vec![
        ("BS(2,3)", fixtures::bs(2, 3)),
        ("2-circle", fixtures::circle(&[(2, 3), (3, 2)])),
    ]
}

#[test]
fn scrambled_rewrites_agree_with_reduce() {
    for (name, g) in instances() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        for round in 0..300 {
            let len = rng.gen_range(0..=12);
            let word = random_gword(&g, &mut rng, VertexId(0), len);
            let normal = reduce(&g, &word);
            let scrambled = scrambled_reduce(&g, &word, &mut rng);
            assert_eq!(
                normal.as_gword(),
                scrambled,
                "{name}, round {round}: rewrite order changed the normal form"
            );
            normal.check_invariants(&g).expect("normal form invariants");
        }
    }
}

#[test]
fn group_axioms_hold_on_random_triples() {
    for (name, g) in instances() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0002);
        for round in 0..1000 {
            let a = random_element(&g, &mut rng, VertexId(0), 6);
            let b = random_element(&g, &mut rng, a.end(&g), 6);
            let c = random_element(&g, &mut rng, b.end(&g), 6);
            let ab = multiply(&g, &a, &b).unwrap();
            let bc = multiply(&g, &b, &c).unwrap();
            let left = multiply(&g, &ab, &c).unwrap();
            let right = multiply(&g, &a, &bc).unwrap();
            assert_eq!(left, right, "{name}, round {round}: associativity");

            let id_front = ReducedWord::identity(&g, a.base());
            let id_back = ReducedWord::identity(&g, a.end(&g));
            assert_eq!(multiply(&g, &id_front, &a).unwrap(), a, "{name}: left identity");
            assert_eq!(multiply(&g, &a, &id_back).unwrap(), a, "{name}: right identity");

            let inv = invert(&g, &a);
            assert_eq!(
                multiply(&g, &a, &inv).unwrap(),
                id_front,
                "{name}, round {round}: right inverse"
            );
            assert_eq!(
                multiply(&g, &inv, &a).unwrap(),
                id_back,
                "{name}, round {round}: left inverse"
            );
        }
    }
}

#[test]
fn powers_match_iterated_products() {
    let g = fixtures::bs(2, 3);
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for _ in 0..50 {
        // Powers need closed words; walk until the word closes up.
        let a = loop {
            let candidate = random_element(&g, &mut rng, VertexId(0), 5);
            if candidate.is_group_element(&g) {
                break candidate;
            }
        };
        let mut acc = ReducedWord::identity(&g, VertexId(0));
        for n in 0..5 {
            assert_eq!(power(&g, &a, n).unwrap(), acc);
            acc = multiply(&g, &acc, &a).unwrap();
        }
    }
}

#[test]
fn modular_value_is_a_homomorphism() {
    let g = fixtures::bs(2, 3);
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    for _ in 0..200 {
        let a = random_element(&g, &mut rng, VertexId(0), 6);
        let b = random_element(&g, &mut rng, a.end(&g), 6);
        let ab = multiply(&g, &a, &b).unwrap();
        let qa = modular_value(&g, &a).unwrap();
        let qb = modular_value(&g, &b).unwrap();
        assert_eq!(modular_value(&g, &ab).unwrap(), qa.clone() * qb);
        let inv = invert(&g, &a);
        assert_eq!(modular_value(&g, &inv).unwrap() * qa, BigRational::one());
    }
}

#[test]
fn modular_value_needs_a_gbs_backend() {
    let g = fixtures::free_product(&[2, 3]);
    let id = ReducedWord::identity(&g, VertexId(0));
    assert!(modular_value(&g, &id).is_err());
}

#[test]
fn reduce_is_idempotent_on_random_words() {
    for (name, g) in instances() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0005);
        for _ in 0..200 {
            let len = rng.gen_range(0..=10);
            let w = random_gword(&g, &mut rng, VertexId(0), len);
            let once = reduce(&g, &w);
            let twice = reduce(&g, &once.as_gword());
            assert_eq!(once, twice, "{name}: reduce must be idempotent");
        }
    }
}

#[test]
fn text_round_trips_for_random_words() {
    use treebound::words::text::{parse_word, word_text};
    for (name, g) in instances() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0006);
        for _ in 0..200 {
            let w = random_element(&g, &mut rng, VertexId(0), 8);
            let rendered = word_text(&g, &w);
            let parsed = reduce(&g, &parse_word(&g, &rendered, Some(VertexId(0))).unwrap());
            assert_eq!(parsed, w, "{name}: `{rendered}` did not round-trip");
        }
    }
}
