//! Rewriting free star-words into normal form.
//!
//! Each rule replaces an adjacent letter pair:
//!
//! | redex              | replacement                                            |
//! |--------------------|--------------------------------------------------------|
//! | `z_j z_i`, `j > i`  | `q⁻¹ z_i z_j`                                          |
//! | `z_j* z_i*`, `j > i`| `q z_i* z_j*`                                          |
//! | `z_i* z_j`, `i ≠ j` | `q z_j z_i*`                                           |
//! | `z_i* z_i`          | `q² z_i z_i* + (1−q²)·1 − Σ_{k>i} (1−q²) z_k z_k*`      |
//!
//! Termination: order words by the triple (length, number of position pairs
//! with a starred letter before an unstarred one, number of index inversions
//! inside the unstarred and starred blocks), compared lexicographically.
//! The first two rules keep the length and the star/unstar count and remove
//! exactly one block inversion. The third removes exactly one star/unstar
//! pair. In the fourth, the `z_i z_i*` and `z_k z_k*` terms remove one
//! star/unstar pair (the swapped positions) while every outside letter sees
//! one starred and one unstarred letter as before, and the constant term is
//! shorter. Every produced word is strictly smaller, so the multiset
//! extension of this well-founded order strictly decreases at every step.

use std::collections::BTreeMap;

use super::{validate_star_q, StarExpr, StarLetter, StarMonomial, StarPolynomial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{Flavor, MultiIndex};

/// Which redex to contract first. Both strategies reach the same normal
/// form; the pair exists so that confluence can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RewriteStrategy {
    #[default]
    LeftmostFirst,
    RightmostFirst,
}

struct Rules<S> {
    q: S,
    q_inv: S,
    q_sq: S,
    one_minus_q_sq: S,
}

fn is_redex(a: StarLetter, b: StarLetter) -> bool {
    match (a.starred, b.starred) {
        (false, false) | (true, true) => a.index > b.index,
        (true, false) => true,
        (false, true) => false,
    }
}

fn find_redex(word: &[StarLetter], strategy: RewriteStrategy) -> Option<usize> {
    let mut positions = 0..word.len().saturating_sub(1);
    match strategy {
        RewriteStrategy::LeftmostFirst => positions.find(|&p| is_redex(word[p], word[p + 1])),
        RewriteStrategy::RightmostFirst => positions.rfind(|&p| is_redex(word[p], word[p + 1])),
    }
}

impl<S: Scalar> Rules<S> {
    fn new(q: &S) -> Result<Self> {
        let q_inv = q.inv().ok_or(Error::ZeroQ)?;
        let q_sq = q.clone() * q.clone();
        Ok(Rules { q: q.clone(), q_inv, one_minus_q_sq: S::one() - q_sq.clone(), q_sq })
    }

    /// Replacement terms for the redex at `p` as `(word, factor)` pairs.
    fn contract(&self, word: &[StarLetter], p: usize, n: usize) -> Vec<(Vec<StarLetter>, S)> {
        let (a, b) = (word[p], word[p + 1]);
        let splice = |middle: &[StarLetter]| -> Vec<StarLetter> {
            let mut w = Vec::with_capacity(word.len());
            w.extend_from_slice(&word[..p]);
            w.extend_from_slice(middle);
            w.extend_from_slice(&word[p + 2..]);
            w
        };
        match (a.starred, b.starred) {
            (false, false) => vec![(splice(&[b, a]), self.q_inv.clone())],
            (true, true) => vec![(splice(&[b, a]), self.q.clone())],
            (true, false) if a.index != b.index => vec![(splice(&[b, a]), self.q.clone())],
            (true, false) => {
                let i = a.index;
                let mut out = Vec::with_capacity(n - i + 2);
                out.push((splice(&[StarLetter::z(i), StarLetter::zstar(i)]), self.q_sq.clone()));
                out.push((splice(&[]), self.one_minus_q_sq.clone()));
                for k in i + 1..=n {
                    out.push((
                        splice(&[StarLetter::z(k), StarLetter::zstar(k)]),
                        -self.one_minus_q_sq.clone(),
                    ));
                }
                out
            }
            (false, true) => unreachable!("not a redex"),
        }
    }
}

fn monomial_of(word: &[StarLetter], n: usize) -> StarMonomial {
    let mut z = vec![0i64; n];
    let mut zs = vec![0i64; n];
    for l in word {
        if l.starred {
            zs[l.index - 1] += 1;
        } else {
            z[l.index - 1] += 1;
        }
    }
    StarMonomial {
        z: MultiIndex::new(z, Flavor::Affine).expect("nonnegative"),
        zstar: MultiIndex::new(zs, Flavor::Affine).expect("nonnegative"),
    }
}

pub fn star_normal_order<S: Scalar>(expr: &StarExpr<S>, q: &S) -> Result<StarPolynomial<S>> {
    star_normal_order_with(expr, q, RewriteStrategy::default())
}

pub fn star_normal_order_with<S: Scalar>(
    expr: &StarExpr<S>,
    q: &S,
    strategy: RewriteStrategy,
) -> Result<StarPolynomial<S>> {
    validate_star_q(q)?;
    let n = expr.alphabet();
    let rules = Rules::new(q)?;
    let mut out = StarPolynomial::zero(n, q.clone())?;

    let mut pending: BTreeMap<Vec<StarLetter>, S> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<Vec<StarLetter>, S>, w: Vec<StarLetter>, c: S| {
        if c.is_zero() {
            return;
        }
        let slot = pending.entry(w).or_insert_with(S::zero);
        *slot = slot.clone() + c;
    };
    for (w, c) in expr.terms() {
        if w.iter().any(|l| l.index == 0 || l.index > n) {
            return Err(Error::Malformed(format!("letter outside alphabet 1..={n}")));
        }
        push(&mut pending, w.clone(), c.clone());
    }

    // Longest words first: every rule keeps or shrinks the length, so terms
    // meet their siblings in the map before being contracted again.
    while let Some((word, c)) = pending.pop_last_by_len() {
        if c.is_zero() {
            continue;
        }
        match find_redex(&word, strategy) {
            None => out.accumulate(monomial_of(&word, n), c),
            Some(p) => {
                for (w, factor) in rules.contract(&word, p, n) {
                    push(&mut pending, w, c.clone() * factor);
                }
            }
        }
    }
    Ok(out)
}

trait PopLongest<V> {
    fn pop_last_by_len(&mut self) -> Option<(Vec<StarLetter>, V)>;
}

impl<V> PopLongest<V> for BTreeMap<Vec<StarLetter>, V> {
    fn pop_last_by_len(&mut self) -> Option<(Vec<StarLetter>, V)> {
        let key = self.keys().max_by_key(|w| w.len())?.clone();
        self.remove_entry(&key)
    }
}
