//! Generators for the standard families and the fixed example diagrams.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EndpointRef, Multistring};
use crate::error::DiagramError;

fn heads(prefix: &str, range: impl Iterator<Item = u32>) -> Vec<EndpointRef> {
    range.map(|k| EndpointRef::head(format!("{prefix}{k}"))).collect()
}

fn tails(prefix: &str, range: impl Iterator<Item = u32>) -> Vec<EndpointRef> {
    range.map(|k| EndpointRef::tail(format!("{prefix}{k}"))).collect()
}

/// One circle of the family, walked counterclockwise from the right side:
/// heads of the horizontal arrows, the `upper` block, heads of the vertical
/// arrows, tails of the horizontal arrows, the `lower` block, tails of the
/// vertical arrows.
fn alpha_word(
    p_prefix: &str,
    q_prefix: &str,
    p: u32,
    q: u32,
    upper: Vec<EndpointRef>,
    lower: Vec<EndpointRef>,
) -> Vec<EndpointRef> {
    let mut w = heads(p_prefix, (1..=p).rev());
    w.extend(upper);
    w.extend(heads(q_prefix, (1..=q).rev()));
    w.extend(tails(p_prefix, 1..=p));
    w.extend(lower);
    w.extend(tails(q_prefix, 1..=q));
    w
}

/// The 1-string with `p` parallel left-to-right arrows `gp1..` and `q`
/// parallel bottom-to-top arrows `gq1..`.
pub fn gen_alpha(p: u32, q: u32) -> Multistring {
    let w = alpha_word("gp", "gq", p, q, Vec::new(), Vec::new());
    Multistring::from_words(vec![w]).expect("generated diagram is valid")
}

/// Two circles carrying `alpha(p1, q1)` (arrows `gp*`, `gq*`) and
/// `alpha(p2, q2)` (arrows `hp*`, `hq*`), joined by `r` arrows `x*` from the
/// first circle to the second and `s` arrows `y*` from the second to the
/// first.
pub fn gen_beta(p1: u32, q1: u32, p2: u32, q2: u32, r: u32, s: u32) -> Multistring {
    let first = alpha_word("gp", "gq", p1, q1, tails("x", 1..=r), heads("y", 1..=s));
    let second = alpha_word("hp", "hq", p2, q2, heads("x", (1..=r).rev()), tails("y", (1..=s).rev()));
    Multistring::from_words(vec![first, second]).expect("generated diagram is valid")
}

/// The 2-string whose woven matrix reduces to the trivial primitive.
pub fn fixture_sigma() -> Multistring {
    super::parse_multistring(
        "circle: x4+ x1- x2- x3+\n\
         circle: g1+ x1+ g1- x4- x3- g2- x2+ g2+\n",
    )
    .expect("fixture parses")
}

/// The 3-string whose woven matrix is already primitive.
pub fn fixture_tau() -> Multistring {
    super::parse_multistring(
        "circle: x1- x2+\n\
         circle: g2- x5+ x6+ x1+ g2+ x2- x3- x4-\n\
         circle: x4+ g3+ x6- x3+ g3- x5-\n",
    )
    .expect("fixture parses")
}

/// A random `n`-string with exactly `m` arrows `a1..am`.
///
/// Scheme (ChaCha8 seeded with `seed`): the `2m` endpoint tokens
/// `a1+ a1- a2+ ...` are shuffled, then each token in shuffled order is
/// appended to a circle drawn uniformly from `0..n`. Circles may stay empty
/// and the result need not be connected.
pub fn random_multistring(n: usize, m: usize, seed: u64) -> Result<Multistring, DiagramError> {
    if n == 0 {
        return Err(DiagramError::Malformed("a multistring needs at least one circle".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tokens: Vec<EndpointRef> = (1..=m)
        .flat_map(|k| [EndpointRef::tail(format!("a{k}")), EndpointRef::head(format!("a{k}"))])
        .collect();
    tokens.shuffle(&mut rng);
    let mut words = vec![Vec::new(); n];
    for t in tokens {
        words[rng.gen_range(0..n)].push(t);
    }
    Multistring::from_words(words)
}
