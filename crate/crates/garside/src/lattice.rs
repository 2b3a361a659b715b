//! Divisibility lattice: least common multiples of atom sets, gcds, the
//! reduced-element census, the Garside element and the head function α.
//!
//! In an Artin monoid every finite set of elements has a greatest common
//! left divisor, and a set of atoms has a least common right multiple
//! `Δ(T)` exactly when it has any common right multiple. The uniqueness
//! statements behind gcd and α are theorems, so the implementations assert
//! them at runtime and abort on violation; those asserts double as
//! self-tests of the engine.

use std::collections::BTreeSet;

use crate::engine::{alternating, Budget, DeltaMemo, Element, Engine};
use crate::error::{Error, Result};
use crate::presentation::Atom;

/// Result of an lcm computation for an atom set.
///
/// `NoLcm` is only produced from complete evidence (a pair of atoms with an
/// infinite Coxeter entry has no common multiple at all); an inconclusive
/// census surfaces as `Error::BudgetExceeded` instead, never as `NoLcm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaOutcome {
    Lcm(Element),
    NoLcm,
}

/// Breadth-first census of reduced elements, graded by length.
///
/// `complete` is true when the enumeration closed on its own: some level was
/// empty, or no element of the last level admits a reduced right extension.
/// In that case the listing is all of the reduced elements.
#[derive(Debug, Clone)]
pub struct ReducedCensus {
    pub by_length: Vec<Vec<Element>>,
    pub complete: bool,
}

impl ReducedCensus {
    pub fn total(&self) -> usize {
        self.by_length.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> {
        self.by_length.iter().flatten()
    }

    pub fn max_length(&self) -> usize {
        self.by_length.len().saturating_sub(1)
    }
}

impl Engine {
    /// Least common right multiple `Δ(T)` of a nonempty set of atoms.
    ///
    /// Rank 2 is read off the presentation: `Δ({a,b}) = [a,b>^m` when `m` is
    /// finite, and no common multiple exists when `m = ∞`. Larger sets are
    /// decided by running the reduced census over the sub-alphabet `T`; when
    /// it closes, its unique longest element is `Δ(T)`.
    pub fn delta_of_atoms(&self, atoms: &[Atom], budget: &Budget) -> Result<DeltaOutcome> {
        let set: BTreeSet<Atom> = atoms.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::Precondition(
                "Δ(T) needs a nonempty atom set".into(),
            ));
        }
        let key: Vec<Atom> = set.iter().copied().collect();
        if let Some(memo) = self.cache.borrow().delta.get(&key) {
            return Ok(match memo {
                DeltaMemo::Lcm(e) => DeltaOutcome::Lcm(e.clone()),
                DeltaMemo::NoLcm => DeltaOutcome::NoLcm,
            });
        }
        let outcome = self.delta_uncached(&key, budget)?;
        self.cache.borrow_mut().delta.insert(
            key,
            match &outcome {
                DeltaOutcome::Lcm(e) => DeltaMemo::Lcm(e.clone()),
                DeltaOutcome::NoLcm => DeltaMemo::NoLcm,
            },
        );
        Ok(outcome)
    }

    fn delta_uncached(&self, atoms: &[Atom], budget: &Budget) -> Result<DeltaOutcome> {
        match atoms {
            [a] => Ok(DeltaOutcome::Lcm(self.atom_element(*a))),
            [a, b] => match self.presentation().coxeter(*a, *b) {
                Some(m) => {
                    let lcm = self.canonical(&alternating(*a, *b, m), budget)?;
                    Ok(DeltaOutcome::Lcm(lcm))
                }
                None => Ok(DeltaOutcome::NoLcm),
            },
            _ => {
                let census = self.reduced_census_over(atoms, budget.max_length, budget)?;
                if !census.complete {
                    return Err(Error::BudgetExceeded(format!(
                        "reduced census over {{{}}} did not close by length {}",
                        self.presentation().word_string(atoms),
                        budget.max_length
                    )));
                }
                let top_level = census
                    .by_length
                    .last()
                    .expect("census has at least the identity level");
                assert_eq!(
                    top_level.len(),
                    1,
                    "internal consistency violation: closed census has {} maximal elements",
                    top_level.len()
                );
                let delta = top_level[0].clone();
                for &a in atoms {
                    let atom = self.atom_element(a);
                    assert!(
                        self.left_divides(&atom, &delta, budget)?,
                        "internal consistency violation: an atom does not divide its Δ(T)"
                    );
                }
                Ok(DeltaOutcome::Lcm(delta))
            }
        }
    }

    /// Least common right multiple of `divisors` computed inside the divisor
    /// lattice of `u`. Every element of `divisors` must left-divide `u`, so
    /// `u` witnesses a common multiple and the least one exists.
    pub fn lcm_within(
        &self,
        divisors: &[Element],
        u: &Element,
        budget: &Budget,
    ) -> Result<Element> {
        for d in divisors {
            if !self.left_divides(d, u, budget)? {
                return Err(Error::Precondition(format!(
                    "lcm_within: `{}` does not left-divide `{}`",
                    self.presentation().word_string(d.letters()),
                    self.presentation().word_string(u.letters())
                )));
            }
        }
        let candidates = self.left_divisors(u, budget)?;
        let mut best: Option<&Element> = None;
        let mut ties = 0usize;
        for c in candidates.iter() {
            let mut common = true;
            for d in divisors {
                if !self.left_divides(d, c, budget)? {
                    common = false;
                    break;
                }
            }
            if !common {
                continue;
            }
            match best {
                None => {
                    best = Some(c);
                    ties = 1;
                }
                Some(b) if c.length() < b.length() => {
                    best = Some(c);
                    ties = 1;
                }
                Some(b) if c.length() == b.length() => ties += 1,
                _ => {}
            }
        }
        let best = best.expect("u itself is a common multiple");
        assert_eq!(
            ties, 1,
            "internal consistency violation: minimal common multiple is not unique"
        );
        Ok(best.clone())
    }

    /// Greatest common left divisor of `a` and `b`.
    pub fn gcd_left(&self, a: &Element, b: &Element, budget: &Budget) -> Result<Element> {
        let da = self.left_divisors(a, budget)?;
        let db = self.left_divisors(b, budget)?;
        let common: Vec<&Element> = da.intersection(&db).collect();
        let max_len = common.iter().map(|c| c.length()).max().unwrap_or(0);
        let top: Vec<&&Element> = common.iter().filter(|c| c.length() == max_len).collect();
        assert_eq!(
            top.len(),
            1,
            "internal consistency violation: maximal common divisor is not unique"
        );
        let gcd = (*top[0]).clone();
        for c in &common {
            assert!(
                self.left_divides(c, &gcd, budget)?,
                "internal consistency violation: a common divisor does not divide the gcd"
            );
        }
        Ok(gcd)
    }

    /// Census of all reduced elements up to `max_len`, by right extension.
    pub fn enumerate_reduced(&self, max_len: usize, budget: &Budget) -> Result<ReducedCensus> {
        let atoms: Vec<Atom> = self.presentation().atoms().collect();
        self.reduced_census_over(&atoms, max_len, budget)
    }

    /// Census restricted to a sub-alphabet. Words over a subset of the atoms
    /// can only be rewritten inside that subset, so membership, divisibility
    /// and reducedness agree with the submonoid generated by it.
    pub(crate) fn reduced_census_over(
        &self,
        alphabet: &[Atom],
        max_len: usize,
        budget: &Budget,
    ) -> Result<ReducedCensus> {
        let mut by_length: Vec<Vec<Element>> = vec![vec![Element::identity()]];
        let mut total = 1usize;
        let mut complete = false;
        for _ in 0..max_len {
            let mut next = BTreeSet::new();
            for u in by_length.last().unwrap() {
                for &s in alphabet {
                    let mut word = u.letters().to_vec();
                    word.push(s);
                    let ext = self.canonical(&word, budget)?;
                    if self.is_reduced(&ext, budget)? {
                        next.insert(ext);
                    }
                }
            }
            if next.is_empty() {
                complete = true;
                break;
            }
            total += next.len();
            if total > budget.max_class_size {
                return Err(Error::BudgetExceeded(format!(
                    "reduced census grew past {} elements",
                    budget.max_class_size
                )));
            }
            by_length.push(next.into_iter().collect());
        }
        if !complete {
            // The census filled all levels; it is still complete when the
            // last level has no reduced extension at all.
            complete = true;
            'outer: for u in by_length.last().unwrap() {
                for &s in alphabet {
                    let mut word = u.letters().to_vec();
                    word.push(s);
                    let ext = self.canonical(&word, budget)?;
                    if self.is_reduced(&ext, budget)? {
                        complete = false;
                        break 'outer;
                    }
                }
            }
        }
        Ok(ReducedCensus {
            by_length,
            complete,
        })
    }

    /// The Garside element `Δ(S)` when the whole atom set has an lcm.
    ///
    /// When it exists, it is balanced (left and right divisor sets agree)
    /// and every atom divides it; both are theorem-backed and asserted.
    pub fn garside_element(&self, budget: &Budget) -> Result<Option<Element>> {
        let atoms: Vec<Atom> = self.presentation().atoms().collect();
        match self.delta_of_atoms(&atoms, budget)? {
            DeltaOutcome::NoLcm => Ok(None),
            DeltaOutcome::Lcm(delta) => {
                let left = self.left_divisors(&delta, budget)?;
                let right = self.right_divisors(&delta, budget)?;
                assert_eq!(
                    *left, *right,
                    "internal consistency violation: Garside element is not balanced"
                );
                for a in self.presentation().atoms() {
                    assert!(
                        self.left_divides(&self.atom_element(a), &delta, budget)?,
                        "internal consistency violation: an atom does not divide Δ"
                    );
                }
                Ok(Some(delta))
            }
        }
    }

    /// The head `α(u)`: the maximal reduced left divisor of `u`.
    ///
    /// Computed literally from the definition: filter the left divisors by
    /// reducedness and take the maximum. Uniqueness of the maximum and the
    /// fact that it is divided by every reduced divisor are theorems; both
    /// are asserted.
    pub fn alpha(&self, u: &Element, budget: &Budget) -> Result<Element> {
        if u.length() <= 1 {
            return Ok(u.clone());
        }
        if let Some(a) = self.cache.borrow().alpha.get(u.letters()) {
            return Ok(a.clone());
        }
        let divisors = self.left_divisors(u, budget)?;
        let mut reduced = Vec::new();
        for d in divisors.iter() {
            if self.is_reduced(d, budget)? {
                reduced.push(d.clone());
            }
        }
        let max_len = reduced.iter().map(Element::length).max().unwrap_or(0);
        let top: Vec<&Element> = reduced.iter().filter(|d| d.length() == max_len).collect();
        assert_eq!(
            top.len(),
            1,
            "internal consistency violation: maximal reduced divisor is not unique"
        );
        let head = top[0].clone();
        for d in &reduced {
            assert!(
                self.left_divides(d, &head, budget)?,
                "internal consistency violation: a reduced divisor does not divide α(u)"
            );
        }
        self.cache
            .borrow_mut()
            .alpha
            .insert(u.letters().to_vec(), head.clone());
        Ok(head)
    }

    /// Head of a product `f_1 ⋯ f_n` evaluated by folding the functional
    /// equation of α from the right: `α(f·r) = α(f·α(r))`.
    ///
    /// Every intermediate stays short (one factor times a reduced element),
    /// so long products can be headed without ever materializing the braid
    /// class of the full product. The fold and the plain definition agree;
    /// the property suite checks this on random inputs.
    pub fn alpha_product(&self, factors: &[Element], budget: &Budget) -> Result<Element> {
        let mut head = Element::identity();
        for f in factors.iter().rev() {
            let partial = self.multiply(f, &head, budget)?;
            head = self.alpha(&partial, budget)?;
        }
        Ok(head)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::ArtinPresentation;

    fn dihedral(m: u32) -> ArtinPresentation {
        ArtinPresentation::new(&["s", "t"], &[("s", "t", m)]).unwrap()
    }

    fn elem(e: &Engine, text: &str) -> Element {
        e.element(text, &Budget::default()).unwrap()
    }

    #[test]
    fn delta_of_pair() {
        let e = Engine::new(&dihedral(3));
        let b = Budget::default();
        let p = e.presentation();
        let st: Vec<Atom> = p.atoms().collect();
        match e.delta_of_atoms(&st, &b).unwrap() {
            DeltaOutcome::Lcm(d) => assert_eq!(p.word_string(d.letters()), "s t s"),
            DeltaOutcome::NoLcm => panic!("Δ must exist for m=3"),
        }
    }

    #[test]
    fn delta_of_free_pair_has_no_lcm() {
        let pres = ArtinPresentation::new(&["s", "t"], &[]).unwrap();
        let e = Engine::new(&pres);
        let atoms: Vec<Atom> = pres.atoms().collect();
        assert_eq!(
            e.delta_of_atoms(&atoms, &Budget::default()).unwrap(),
            DeltaOutcome::NoLcm
        );
    }

    #[test]
    fn delta_of_singleton() {
        let e = Engine::new(&dihedral(3));
        let p = e.presentation();
        let s = p.atom("s").unwrap();
        match e.delta_of_atoms(&[s], &Budget::default()).unwrap() {
            DeltaOutcome::Lcm(d) => assert_eq!(p.word_string(d.letters()), "s"),
            _ => panic!(),
        }
    }

    #[test]
    fn delta_of_triple_by_census() {
        // Type A3: s—u—t chain with m(s,u)=m(t,u)=3, m(s,t)=2. |W|=24, ℓ(Δ)=6.
        let pres = ArtinPresentation::new(
            &["s", "t", "u"],
            &[("s", "t", 2), ("s", "u", 3), ("t", "u", 3)],
        )
        .unwrap();
        let e = Engine::new(&pres);
        let atoms: Vec<Atom> = pres.atoms().collect();
        match e.delta_of_atoms(&atoms, &Budget::default()).unwrap() {
            DeltaOutcome::Lcm(d) => assert_eq!(d.length(), 6),
            DeltaOutcome::NoLcm => panic!("spherical type must have Δ"),
        }
    }

    #[test]
    fn lcm_within_examples() {
        let b = Budget::default();
        let free_ab = ArtinPresentation::new(&["a", "b"], &[("a", "b", 2)]).unwrap();
        let e = Engine::new(&free_ab);
        let abab = elem(&e, "a b a b");
        let a = elem(&e, "a");
        let bb = elem(&e, "b");
        let lcm = e.lcm_within(&[a, bb], &abab, &b).unwrap();
        assert_eq!(free_ab.word_string(lcm.letters()), "a b");

        let e3 = Engine::new(&dihedral(3));
        let sts = elem(&e3, "s t s");
        let s = elem(&e3, "s");
        let t = elem(&e3, "t");
        let lcm = e3.lcm_within(&[s, t], &sts, &b).unwrap();
        assert_eq!(lcm, sts);
        assert_eq!(e3.lcm_within(&[sts.clone()], &sts, &b).unwrap(), sts);
    }

    #[test]
    fn lcm_within_rejects_non_divisors() {
        let e = Engine::new(&dihedral(9));
        let b = Budget::default();
        let t = elem(&e, "t");
        let sts = elem(&e, "s t s");
        assert!(matches!(
            e.lcm_within(&[t], &sts, &b),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gcd_left_examples() {
        let e = Engine::new(&dihedral(3));
        let b = Budget::default();
        let st = elem(&e, "s t");
        let ts = elem(&e, "t s");
        assert!(e.gcd_left(&st, &ts, &b).unwrap().is_identity());
        assert_eq!(e.gcd_left(&st, &st, &b).unwrap(), st);
        let sts = elem(&e, "s t s");
        assert_eq!(e.gcd_left(&sts, &st, &b).unwrap(), st);
    }

    #[test]
    fn census_dihedral_m3() {
        let e = Engine::new(&dihedral(3));
        let census = e.enumerate_reduced(8, &Budget::default()).unwrap();
        let sizes: Vec<usize> = census.by_length.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 1]);
        assert!(census.complete);
        assert_eq!(census.total(), 6);
    }

    #[test]
    fn census_free_monoid_never_closes() {
        let pres = ArtinPresentation::new(&["s", "t"], &[]).unwrap();
        let e = Engine::new(&pres);
        let census = e.enumerate_reduced(5, &Budget::default()).unwrap();
        let sizes: Vec<usize> = census.by_length.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 2, 2]);
        assert!(!census.complete);
    }

    #[test]
    fn census_free_abelian_pair() {
        let pres = ArtinPresentation::new(&["a", "b"], &[("a", "b", 2)]).unwrap();
        let e = Engine::new(&pres);
        let census = e.enumerate_reduced(8, &Budget::default()).unwrap();
        let sizes: Vec<usize> = census.by_length.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 1]);
        assert!(census.complete);
    }

    #[test]
    fn census_level_zero_is_identity() {
        let e = Engine::new(&dihedral(5));
        let census = e.enumerate_reduced(3, &Budget::default()).unwrap();
        assert_eq!(census.by_length[0], vec![Element::identity()]);
        assert!(!census.complete);
    }

    #[test]
    fn garside_element_examples() {
        let b = Budget::default();
        let e3 = Engine::new(&dihedral(3));
        let d3 = e3.garside_element(&b).unwrap().unwrap();
        assert_eq!(d3.length(), 3);

        let e9 = Engine::new(&dihedral(9));
        let d9 = e9.garside_element(&b).unwrap().unwrap();
        assert_eq!(d9.length(), 9);
        assert_eq!(
            e9.presentation().word_string(d9.letters()),
            "s t s t s t s t s"
        );

        let free = ArtinPresentation::new(&["s", "t"], &[]).unwrap();
        let ef = Engine::new(&free);
        assert_eq!(ef.garside_element(&b).unwrap(), None);
    }

    #[test]
    fn alpha_examples() {
        let e = Engine::new(&dihedral(3));
        let b = Budget::default();
        let ss = elem(&e, "s s");
        let alpha = e.alpha(&ss, &b).unwrap();
        assert_eq!(e.presentation().word_string(alpha.letters()), "s");

        let sts = elem(&e, "s t s");
        assert_eq!(e.alpha(&sts, &b).unwrap(), sts);

        let stss = elem(&e, "s t s s");
        assert_eq!(e.alpha(&stss, &b).unwrap(), sts);
    }

    #[test]
    fn alpha_product_agrees_with_direct_alpha() {
        let e = Engine::new(&dihedral(3));
        let b = Budget::default();
        for (x, y) in [("s t", "s s"), ("s", "t s"), ("s t s", "t t")] {
            let u = elem(&e, x);
            let v = elem(&e, y);
            let direct = e.alpha(&e.multiply(&u, &v, &b).unwrap(), &b).unwrap();
            let folded = e.alpha_product(&[u, v], &b).unwrap();
            assert_eq!(direct, folded);
        }
        assert!(e.alpha_product(&[], &b).unwrap().is_identity());
    }
}
