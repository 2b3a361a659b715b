//! Test-side reference oracle.
//!
//! A deliberately naive, memo-free implementation of the rewrite closure and
//! the operations derived from it. It shares no code with the engine under
//! test: rules are re-derived from the presentation, the closure is a plain
//! breadth-first walk over `BTreeSet`s, and everything downstream (canonical
//! forms, divisors, reducedness, heads) is recomputed from scratch on every
//! call. Slow on purpose; only ever fed small words.

use std::collections::{BTreeSet, VecDeque};

use garside::{ArtinPresentation, Atom};

fn alternating(a: Atom, b: Atom, m: u32) -> Vec<Atom> {
    (0..m).map(|i| if i % 2 == 0 { a } else { b }).collect()
}

/// Every word reachable from `word` by single relation replacements.
pub fn naive_class(pres: &ArtinPresentation, word: &[Atom]) -> BTreeSet<Vec<Atom>> {
    let mut rules: Vec<(Vec<Atom>, Vec<Atom>)> = Vec::new();
    for a in pres.atoms() {
        for b in pres.atoms() {
            if b <= a {
                continue;
            }
            if let Some(m) = pres.coxeter(a, b) {
                let lhs = alternating(a, b, m);
                let rhs = alternating(b, a, m);
                rules.push((lhs.clone(), rhs.clone()));
                rules.push((rhs, lhs));
            }
        }
    }
    let mut seen: BTreeSet<Vec<Atom>> = BTreeSet::new();
    seen.insert(word.to_vec());
    let mut queue: VecDeque<Vec<Atom>> = VecDeque::new();
    queue.push_back(word.to_vec());
    while let Some(current) = queue.pop_front() {
        for (lhs, rhs) in &rules {
            if current.len() < lhs.len() {
                continue;
            }
            for i in 0..=(current.len() - lhs.len()) {
                if &current[i..i + lhs.len()] == lhs.as_slice() {
                    let mut next = current.clone();
                    next.splice(i..i + lhs.len(), rhs.iter().copied());
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    seen
}

/// Least member of the class: the reference canonical form.
pub fn naive_canonical(pres: &ArtinPresentation, word: &[Atom]) -> Vec<Atom> {
    naive_class(pres, word)
        .into_iter()
        .next()
        .expect("class contains the word itself")
}

/// Canonical forms of all prefixes of all class members.
pub fn naive_left_divisors(pres: &ArtinPresentation, word: &[Atom]) -> BTreeSet<Vec<Atom>> {
    let mut divisors = BTreeSet::new();
    for w in naive_class(pres, word) {
        for k in 0..=w.len() {
            divisors.insert(naive_canonical(pres, &w[..k]));
        }
    }
    divisors
}

/// No member of the class exposes a square.
pub fn naive_is_reduced(pres: &ArtinPresentation, word: &[Atom]) -> bool {
    naive_class(pres, word)
        .iter()
        .all(|w| w.windows(2).all(|pair| pair[0] != pair[1]))
}

/// Maximal reduced left divisor, by direct filtering.
pub fn naive_alpha(pres: &ArtinPresentation, word: &[Atom]) -> Vec<Atom> {
    let reduced: Vec<Vec<Atom>> = naive_left_divisors(pres, word)
        .into_iter()
        .filter(|d| naive_is_reduced(pres, d))
        .collect();
    let max_len = reduced.iter().map(Vec::len).max().unwrap_or(0);
    let top: Vec<&Vec<Atom>> = reduced.iter().filter(|d| d.len() == max_len).collect();
    assert_eq!(top.len(), 1, "oracle: maximal reduced divisor not unique");
    top[0].clone()
}
