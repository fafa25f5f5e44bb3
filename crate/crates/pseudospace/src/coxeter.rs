//! Word calculus for the right-angled Coxeter group
//! `W = <t_0..t_n : t_i^2 = (t_i t_k)^2 = 1, |k-i| >= 2>`.
//!
//! Every generator is an involution and distant generators commute, so the
//! word problem is solved by deletion: a word is reduced iff it contains no
//! pair of equal letters separated only by letters commuting with them
//! (Tits). The canonical form is shortlex via leftmost-greedy extraction of
//! the smallest front-movable letter, which makes golden outputs stable.
//!
//! The group is infinite; oracles in the tests work on bounded balls with
//! normal-form deduplication, never on a materialized group.

use crate::{Error, Result};
use std::collections::BTreeSet;

/// A word in the generators `t_0..t_n`, letter `i` denoting `t_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxWord {
    dim: usize,
    letters: Vec<usize>,
}

/// Do `t_i` and `t_k` commute?
pub fn commutes(i: usize, k: usize) -> bool {
    i.abs_diff(k) >= 2
}

impl CoxWord {
    pub fn new(dim: usize, letters: Vec<usize>) -> Result<Self> {
        for &l in &letters {
            if l > dim {
                return Err(Error::LetterOutOfRange { letter: l, dim });
            }
        }
        Ok(CoxWord { dim, letters })
    }

    pub fn identity(dim: usize) -> Self {
        CoxWord {
            dim,
            letters: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: usize) -> Result<()> {
        if letter > self.dim {
            return Err(Error::LetterOutOfRange {
                letter,
                dim: self.dim,
            });
        }
        self.letters.push(letter);
        Ok(())
    }

    pub fn concat(&self, other: &CoxWord) -> Result<CoxWord> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(CoxWord {
            dim: self.dim,
            letters,
        })
    }

    /// Since every generator is an involution, the reverse word is the
    /// group inverse.
    pub fn inverse(&self) -> CoxWord {
        CoxWord {
            dim: self.dim,
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// Deletes one cancellable pair if any exists: two equal letters with
    /// only commuting letters in between.
    fn delete_step(letters: &mut Vec<usize>) -> bool {
        for p in 0..letters.len() {
            let x = letters[p];
            for q in (p + 1)..letters.len() {
                if letters[q] == x {
                    letters.remove(q);
                    letters.remove(p);
                    return true;
                }
                if !commutes(letters[q], x) {
                    break;
                }
            }
        }
        false
    }

    /// Canonical normal form: fully deletion-reduced, then shortlex by
    /// leftmost-greedy extraction of the smallest letter that commutes past
    /// everything before it.
    pub fn normal_form(&self) -> CoxWord {
        let mut letters = self.letters.clone();
        while Self::delete_step(&mut letters) {}
        let mut out = Vec::with_capacity(letters.len());
        while !letters.is_empty() {
            let mut best: Option<usize> = None;
            for p in 0..letters.len() {
                if letters[..p].iter().all(|&q| commutes(q, letters[p])) {
                    match best {
                        Some(b) if letters[b] <= letters[p] => {}
                        _ => best = Some(p),
                    }
                }
            }
            let p = best.expect("front letter always exists");
            out.push(letters.remove(p));
        }
        CoxWord {
            dim: self.dim,
            letters: out,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.normal_form().len() == self.len()
    }

    pub fn equal(&self, other: &CoxWord) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self.normal_form().letters == other.normal_form().letters)
    }

    /// Letters that can start a reduced expression of this word, i.e. the
    /// left descent set. The word should be reduced.
    pub fn front_letters(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for p in 0..self.letters.len() {
            if self.letters[..p].iter().all(|&q| commutes(q, self.letters[p])) {
                out.insert(self.letters[p]);
            }
        }
        out
    }

    /// Strips the front-movable letter at the first position whose letter
    /// value is `l`. The word must be reduced.
    fn strip_front(&mut self, l: usize) {
        for p in 0..self.letters.len() {
            if self.letters[p] == l
                && self.letters[..p].iter().all(|&q| commutes(q, l))
            {
                self.letters.remove(p);
                return;
            }
        }
        unreachable!("letter {l} is not front-movable");
    }

    /// The minimal-length representative of the double coset
    /// `<t_k : k != excluded_left> w <t_k : k != excluded_right>`.
    ///
    /// Iterates to a fixpoint: strip any possible first letter other than
    /// `excluded_left`, mirror on the right, repeat.
    pub fn min_double_coset_rep(
        &self,
        excluded_left: usize,
        excluded_right: usize,
    ) -> Result<CoxWord> {
        if excluded_left > self.dim {
            return Err(Error::LetterOutOfRange {
                letter: excluded_left,
                dim: self.dim,
            });
        }
        if excluded_right > self.dim {
            return Err(Error::LetterOutOfRange {
                letter: excluded_right,
                dim: self.dim,
            });
        }
        let mut w = self.normal_form();
        loop {
            let mut changed = false;
            loop {
                let strippable: Vec<usize> = w
                    .front_letters()
                    .into_iter()
                    .filter(|&l| l != excluded_left)
                    .collect();
                match strippable.first() {
                    Some(&l) => {
                        w.strip_front(l);
                        changed = true;
                    }
                    None => break,
                }
            }
            loop {
                let mut rev = w.inverse();
                let strippable: Vec<usize> = rev
                    .front_letters()
                    .into_iter()
                    .filter(|&l| l != excluded_right)
                    .collect();
                match strippable.first() {
                    Some(&l) => {
                        rev.strip_front(l);
                        w = rev.inverse();
                        changed = true;
                    }
                    None => break,
                }
            }
            if !changed {
                break;
            }
        }
        Ok(w.normal_form())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(dim: usize, letters: &[usize]) -> CoxWord {
        CoxWord::new(dim, letters.to_vec()).unwrap()
    }

    /// Exhaustive rewriting oracle: the closure of a word under adjacent
    /// commutations and square deletions/insertions is infinite, so the
    /// oracle only applies deletions and commutations (length never grows)
    /// and returns the set of minimal words reachable.
    fn oracle_minimal(word: &CoxWord) -> BTreeSet<Vec<usize>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![word.letters().to_vec()];
        seen.insert(word.letters().to_vec());
        let mut min_len = word.len();
        while let Some(cur) = stack.pop() {
            min_len = min_len.min(cur.len());
            for p in 0..cur.len().saturating_sub(1) {
                if cur[p] == cur[p + 1] {
                    let mut next = cur.clone();
                    next.remove(p + 1);
                    next.remove(p);
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                } else if commutes(cur[p], cur[p + 1]) {
                    let mut next = cur.clone();
                    next.swap(p, p + 1);
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
        seen.into_iter().filter(|v| v.len() == min_len).collect()
    }

    #[test]
    fn commutation_rule() {
        assert!(commutes(0, 2));
        assert!(!commutes(3, 4));
        assert!(!commutes(5, 5));
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(w(2, &[0, 0]).normal_form().letters(), &[] as &[usize]);
        assert_eq!(w(2, &[2, 0]).normal_form().letters(), &[0, 2]);
        assert_eq!(w(2, &[0, 1, 0]).normal_form().letters(), &[0, 1, 0]);
        assert_eq!(w(2, &[0, 2, 0]).normal_form().letters(), &[2]);
        assert!(!w(2, &[0, 2, 0]).is_reduced());
        assert!(w(0, &[]).is_reduced());
        assert!(!w(2, &[1, 1]).is_reduced());
    }

    #[test]
    fn equality_examples() {
        assert!(w(2, &[0, 2]).equal(&w(2, &[2, 0])).unwrap());
        assert!(!w(2, &[0, 1]).equal(&w(2, &[1, 0])).unwrap());
        let v = w(3, &[0, 1, 3]);
        assert!(v.equal(&v.concat(&w(3, &[2, 2])).unwrap()).unwrap());
        assert!(w(2, &[]).equal(&w(3, &[])).is_err());
    }

    #[test]
    fn normal_form_agrees_with_rewriting_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let dim = rng.random_range(1..=4);
            let len = rng.random_range(0..=8);
            let letters: Vec<usize> = (0..len).map(|_| rng.random_range(0..=dim)).collect();
            let word = w(dim, &letters);
            let nf = word.normal_form();
            let minimal = oracle_minimal(&word);
            // The shortest deletion-reachable words have the nf's length, and
            // the nf is one of them.
            let min_len = minimal.iter().next().map_or(0, |v| v.len());
            assert_eq!(nf.len(), min_len, "word {letters:?}");
            assert!(minimal.contains(nf.letters()), "word {letters:?}");
            // All of them share the same normal form.
            for m in &minimal {
                assert_eq!(
                    w(dim, m).normal_form().letters(),
                    nf.letters(),
                    "word {letters:?}"
                );
            }
        }
    }

    #[test]
    fn involution_reverse_is_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let dim = rng.random_range(1..=5);
            let len = rng.random_range(0..=10);
            let letters: Vec<usize> = (0..len).map(|_| rng.random_range(0..=dim)).collect();
            let word = w(dim, &letters);
            let prod = word.concat(&word.inverse()).unwrap();
            assert!(prod.normal_form().is_empty());
            let nf = word.normal_form();
            assert_eq!(nf.normal_form(), nf);
            assert!(nf.len() <= word.len());
        }
    }

    #[test]
    fn double_coset_examples() {
        // w = [i], both parabolics exclude i: nothing strips.
        let v = w(3, &[2]);
        assert_eq!(v.min_double_coset_rep(2, 2).unwrap().letters(), &[2]);
        // A letter allowed in a parabolic strips away.
        let v = w(3, &[1]);
        assert_eq!(v.min_double_coset_rep(0, 0).unwrap().letters(), &[] as &[usize]);
        // Mixed case.
        let v = w(3, &[0, 1, 2]);
        let rep = v.min_double_coset_rep(1, 1).unwrap();
        assert_eq!(rep.letters(), &[1]);
    }
}
