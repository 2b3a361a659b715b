//! Greedy and Foata normal forms.
//!
//! The greedy form peels off the head α repeatedly: `u = u_1 ⋯ u_n` with
//! `u_i = α(u_i ⋯ u_n)`. Normality is local — a sequence is greedy iff every
//! adjacent pair is.
//!
//! The Foata form peels off, at each step, the least common multiple of all
//! atoms dividing what is left. That lcm is computed inside the divisor
//! lattice of the remaining suffix (where it always exists, the suffix being
//! a common multiple); whenever the global `Δ(D)` of the dividing atom set is
//! itself computable, the two are asserted equal.

use std::fmt;
use std::sync::Arc;

use crate::engine::{Budget, Element, Engine};
use crate::error::Result;
use crate::lattice::DeltaOutcome;
use crate::presentation::ArtinPresentation;

/// Greedy normal form: a sequence of reduced factors, empty for the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyNF {
    pub factors: Vec<Element>,
}

/// Foata normal form: each factor is the lcm of the atoms dividing the
/// corresponding suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoataNF {
    pub factors: Vec<Element>,
}

impl GreedyNF {
    /// Number of factors, the greedy length `|u|_1`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl FoataNF {
    /// Number of factors, the Foata length `|u|_2`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Renders factors as `(s.t.s | s)`: factors separated by `|`, letters by `.`.
pub fn format_factors(pres: &ArtinPresentation, factors: &[Element]) -> String {
    let parts: Vec<String> = factors
        .iter()
        .map(|f| {
            f.letters()
                .iter()
                .map(|&a| pres.atom_name(a))
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect();
    format!("({})", parts.join(" | "))
}

/// Wrapper tying factors to a presentation for display.
pub struct DisplayFactors<'a>(pub &'a ArtinPresentation, pub &'a [Element]);

impl fmt::Display for DisplayFactors<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_factors(self.0, self.1))
    }
}

impl Engine {
    /// Greedy normal form of `u`; the empty sequence for the identity.
    pub fn greedy_nf(&self, u: &Element, budget: &Budget) -> Result<GreedyNF> {
        Ok(GreedyNF {
            factors: self.greedy_factors(u, budget)?.to_vec(),
        })
    }

    fn greedy_factors(&self, u: &Element, budget: &Budget) -> Result<Arc<Vec<Element>>> {
        if u.is_identity() {
            return Ok(Arc::new(Vec::new()));
        }
        if let Some(fs) = self.cache.borrow().greedy.get(u.letters()) {
            return Ok(Arc::clone(fs));
        }
        let head = self.alpha(u, budget)?;
        debug_assert!(!head.is_identity());
        let rest = self.left_quotient(&head, u, budget)?;
        let tail = self.greedy_factors(&rest, budget)?;
        let mut factors = Vec::with_capacity(1 + tail.len());
        factors.push(head);
        factors.extend_from_slice(&tail);
        let factors = Arc::new(factors);
        self.cache
            .borrow_mut()
            .greedy
            .insert(u.letters().to_vec(), Arc::clone(&factors));
        Ok(factors)
    }

    /// Is `(u1, u2)` a greedy pair: both reduced, `u2 ≠ 1`, and `α(u1·u2) = u1`?
    pub fn is_greedy_pair(&self, u1: &Element, u2: &Element, budget: &Budget) -> Result<bool> {
        if u2.is_identity() {
            return Ok(false);
        }
        if !self.is_reduced(u1, budget)? || !self.is_reduced(u2, budget)? {
            return Ok(false);
        }
        let product = self.multiply(u1, u2, budget)?;
        Ok(self.alpha(&product, budget)? == *u1)
    }

    /// Local normality check: no factor is the identity, every factor is
    /// reduced, and every adjacent pair is greedy. Equivalent to the factor
    /// sequence being the greedy normal form of its product.
    pub fn local_greedy_check(&self, factors: &[Element], budget: &Budget) -> Result<bool> {
        for f in factors {
            if f.is_identity() || !self.is_reduced(f, budget)? {
                return Ok(false);
            }
        }
        for pair in factors.windows(2) {
            if !self.is_greedy_pair(&pair[0], &pair[1], budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Foata normal form of `u`; the empty sequence for the identity.
    pub fn foata_nf(&self, u: &Element, budget: &Budget) -> Result<FoataNF> {
        Ok(FoataNF {
            factors: self.foata_factors(u, budget)?.to_vec(),
        })
    }

    fn foata_factors(&self, u: &Element, budget: &Budget) -> Result<Arc<Vec<Element>>> {
        if u.is_identity() {
            return Ok(Arc::new(Vec::new()));
        }
        if let Some(fs) = self.cache.borrow().foata.get(u.letters()) {
            return Ok(Arc::clone(fs));
        }
        let dividing = self.dividing_atoms(u, budget)?;
        debug_assert!(!dividing.is_empty());
        let divisor_elems: Vec<Element> =
            dividing.iter().map(|&a| self.atom_element(a)).collect();
        let factor = self.lcm_within(&divisor_elems, u, budget)?;
        assert!(
            !factor.is_identity(),
            "internal consistency violation: Foata factor of a nontrivial element is 1"
        );
        // Cross-check against the global lcm whenever it is computable.
        match self.delta_of_atoms(&dividing, budget) {
            Ok(DeltaOutcome::Lcm(delta)) => assert_eq!(
                factor, delta,
                "internal consistency violation: suffix lcm differs from Δ(D)"
            ),
            Ok(DeltaOutcome::NoLcm) => panic!(
                "internal consistency violation: atoms with a common multiple but no lcm"
            ),
            Err(_) => {} // census out of budget: skip the cross-check
        }
        let rest = self.left_quotient(&factor, u, budget)?;
        let tail = self.foata_factors(&rest, budget)?;
        let mut factors = Vec::with_capacity(1 + tail.len());
        factors.push(factor);
        factors.extend_from_slice(&tail);
        let factors = Arc::new(factors);
        self.cache
            .borrow_mut()
            .foata
            .insert(u.letters().to_vec(), Arc::clone(&factors));
        Ok(factors)
    }
}
