//! The word problem engine.
//!
//! Because every defining relation `[a,b>^m = [b,a>^m` preserves word length,
//! the set of words representing a fixed element — its *braid class* — is
//! finite: it is the closure of any one word under replacing an alternating
//! factor by its flipped twin. The engine decides everything (equality,
//! divisibility, quotients, reducedness) by enumerating braid classes
//! exhaustively and memoizing per canonical form. This is an oracle built for
//! desk-scale inputs, not a polynomial-time decision procedure; budgets turn
//! blow-ups into explicit resource errors instead of wrong answers.
//!
//! The canonical representative of a class is its lexicographically least
//! word under atom declaration order, which makes element equality a plain
//! word comparison.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presentation::{ArtinPresentation, Atom};

/// Resource caps for class enumeration and length-bounded searches.
///
/// `max_class_size` caps the number of words enumerated per braid class;
/// `max_length` caps element length in open-ended searches (censuses,
/// alternation searches, image growth). Exceeding either yields
/// [`Error::BudgetExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_class_size: usize,
    pub max_length: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_class_size: 200_000,
            max_length: 16,
        }
    }
}

impl Budget {
    pub fn new(max_class_size: usize, max_length: usize) -> Result<Self> {
        if max_class_size == 0 || max_length == 0 {
            return Err(Error::Precondition("budgets must be positive".into()));
        }
        Ok(Budget {
            max_class_size,
            max_length,
        })
    }
}

/// An element of the monoid, held as the canonical (lexicographically least)
/// word of its braid class. Two elements are equal iff their words agree.
///
/// The order on elements is graded: first by length, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    letters: Vec<Atom>,
}

impl Element {
    pub(crate) fn from_canonical(letters: Vec<Atom>) -> Element {
        Element { letters }
    }

    pub fn identity() -> Element {
        Element {
            letters: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The length over the atoms. Relations preserve length, so this is a
    /// class invariant and additive under multiplication.
    pub fn length(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Atom] {
        &self.letters
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.length()
            .cmp(&other.length())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Element {
    /// Displays raw atom indices; use [`ArtinPresentation::word_string`] for
    /// named output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.letters
                .iter()
                .map(|a| a.index().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )
    }
}

/// One rewriting rule: replace `lhs` by `rhs` anywhere in a word. Rules come
/// in mirror pairs, so closure under them is symmetric.
struct Rule {
    lhs: Vec<Atom>,
    rhs: Vec<Atom>,
}

/// The alternating product `[a,b>^m = aba…` with `m` letters.
pub(crate) fn alternating(a: Atom, b: Atom, m: u32) -> Vec<Atom> {
    (0..m).map(|i| if i % 2 == 0 { a } else { b }).collect()
}

pub(crate) enum DeltaMemo {
    Lcm(Element),
    NoLcm,
}

#[derive(Default)]
pub(crate) struct Cache {
    /// Any word ever enumerated, mapped to the canonical word of its class.
    canon: HashMap<Vec<Atom>, Vec<Atom>>,
    /// Canonical word to the full sorted class.
    class: HashMap<Vec<Atom>, Arc<Vec<Vec<Atom>>>>,
    divisors: HashMap<Vec<Atom>, Arc<BTreeSet<Element>>>,
    right_divisors: HashMap<Vec<Atom>, Arc<BTreeSet<Element>>>,
    reduced: HashMap<Vec<Atom>, bool>,
    pub(crate) alpha: HashMap<Vec<Atom>, Element>,
    pub(crate) greedy: HashMap<Vec<Atom>, Arc<Vec<Element>>>,
    pub(crate) foata: HashMap<Vec<Atom>, Arc<Vec<Element>>>,
    pub(crate) delta: BTreeMap<Vec<Atom>, DeltaMemo>,
}

/// Word-problem oracle for one presentation.
///
/// All operations are pure functions of `(presentation, inputs, budget)`;
/// the interior cache only memoizes. The cache is not synchronized, so share
/// an `Engine` within one thread and give each worker its own instance.
pub struct Engine {
    pres: ArtinPresentation,
    rules: Vec<Rule>,
    pub(crate) cache: RefCell<Cache>,
}

impl Engine {
    pub fn new(pres: &ArtinPresentation) -> Engine {
        let mut rules = Vec::new();
        for a in pres.atoms() {
            for b in pres.atoms() {
                if b <= a {
                    continue;
                }
                if let Some(m) = pres.coxeter(a, b) {
                    let lhs = alternating(a, b, m);
                    let rhs = alternating(b, a, m);
                    rules.push(Rule {
                        lhs: lhs.clone(),
                        rhs: rhs.clone(),
                    });
                    rules.push(Rule { lhs: rhs, rhs: lhs });
                }
            }
        }
        Engine {
            pres: pres.clone(),
            rules,
            cache: RefCell::new(Cache::default()),
        }
    }

    pub fn presentation(&self) -> &ArtinPresentation {
        &self.pres
    }

    /// The full braid class of `word`: every word reachable by replacing an
    /// alternating factor `[a,b>^m` with `[b,a>^m`. Sorted, so the first
    /// entry is the canonical form.
    pub fn braid_class(&self, word: &[Atom], budget: &Budget) -> Result<Arc<Vec<Vec<Atom>>>> {
        {
            let cache = self.cache.borrow();
            if let Some(canon) = cache.canon.get(word) {
                if let Some(class) = cache.class.get(canon) {
                    return Ok(Arc::clone(class));
                }
            }
        }
        let mut seen: HashSet<Vec<Atom>> = HashSet::new();
        seen.insert(word.to_vec());
        let mut queue: VecDeque<Vec<Atom>> = VecDeque::new();
        queue.push_back(word.to_vec());
        while let Some(current) = queue.pop_front() {
            for rule in &self.rules {
                let m = rule.lhs.len();
                if current.len() < m {
                    continue;
                }
                for i in 0..=(current.len() - m) {
                    if current[i..i + m] == rule.lhs[..] {
                        let mut next = current.clone();
                        next[i..i + m].copy_from_slice(&rule.rhs);
                        if !seen.contains(&next) {
                            if seen.len() >= budget.max_class_size {
                                return Err(Error::BudgetExceeded(format!(
                                    "braid class of a word of length {} grew past {} words",
                                    word.len(),
                                    budget.max_class_size
                                )));
                            }
                            seen.insert(next.clone());
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        let mut class: Vec<Vec<Atom>> = seen.into_iter().collect();
        class.sort_unstable();
        let canon = class[0].clone();
        let class = Arc::new(class);
        let mut cache = self.cache.borrow_mut();
        for w in class.iter() {
            cache.canon.insert(w.clone(), canon.clone());
        }
        cache.class.insert(canon, Arc::clone(&class));
        Ok(class)
    }

    /// Canonical representative of the word's class, with its length.
    pub fn canonical(&self, word: &[Atom], budget: &Budget) -> Result<Element> {
        if word.len() <= 1 {
            return Ok(Element::from_canonical(word.to_vec()));
        }
        {
            let cache = self.cache.borrow();
            if let Some(canon) = cache.canon.get(word) {
                return Ok(Element::from_canonical(canon.clone()));
            }
        }
        let class = self.braid_class(word, budget)?;
        Ok(Element::from_canonical(class[0].clone()))
    }

    /// Parses a space-separated word and canonicalizes it.
    pub fn element(&self, text: &str, budget: &Budget) -> Result<Element> {
        let word = self.pres.parse_word(text)?;
        self.canonical(&word, budget)
    }

    pub fn atom_element(&self, a: Atom) -> Element {
        Element::from_canonical(vec![a])
    }

    /// Element equality; elements are canonical so this is word identity.
    pub fn equal(&self, u: &Element, v: &Element) -> bool {
        u == v
    }

    /// The product `u · v`. Lengths add.
    pub fn multiply(&self, u: &Element, v: &Element, budget: &Budget) -> Result<Element> {
        if u.is_identity() {
            return Ok(v.clone());
        }
        if v.is_identity() {
            return Ok(u.clone());
        }
        let mut word = Vec::with_capacity(u.length() + v.length());
        word.extend_from_slice(u.letters());
        word.extend_from_slice(v.letters());
        let product = self.canonical(&word, budget)?;
        debug_assert_eq!(product.length(), u.length() + v.length());
        Ok(product)
    }

    /// Product of a sequence of elements, folded left to right.
    pub fn product(&self, factors: &[Element], budget: &Budget) -> Result<Element> {
        let mut acc = Element::identity();
        for f in factors {
            acc = self.multiply(&acc, f, budget)?;
        }
        Ok(acc)
    }

    /// Does `v` left-divide `u`, i.e. is there `c` with `u = v · c`?
    pub fn left_divides(&self, v: &Element, u: &Element, budget: &Budget) -> Result<bool> {
        if v.is_identity() {
            return Ok(true);
        }
        if v.length() > u.length() {
            return Ok(false);
        }
        if v.length() == u.length() {
            return Ok(v == u);
        }
        if let Some(divs) = self.cache.borrow().divisors.get(u.letters()) {
            return Ok(divs.contains(v));
        }
        let class = self.braid_class(u.letters(), budget)?;
        let k = v.length();
        let mut tried: HashSet<&[Atom]> = HashSet::new();
        for w in class.iter() {
            let prefix = &w[..k];
            if tried.insert(prefix) && self.canonical(prefix, budget)? == *v {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The unique `c` with `u = v · c`. Uniqueness is left cancellativity.
    pub fn left_quotient(&self, v: &Element, u: &Element, budget: &Budget) -> Result<Element> {
        if v.is_identity() {
            return Ok(u.clone());
        }
        if v.length() <= u.length() {
            let class = self.braid_class(u.letters(), budget)?;
            let k = v.length();
            let mut tried: HashSet<&[Atom]> = HashSet::new();
            for w in class.iter() {
                let prefix = &w[..k];
                if tried.insert(prefix) && self.canonical(prefix, budget)? == *v {
                    return self.canonical(&w[k..], budget);
                }
            }
        }
        Err(Error::NotADivisor {
            divisor: self.pres.word_string(v.letters()),
            of: self.pres.word_string(u.letters()),
            side: "left",
        })
    }

    /// Does `v` right-divide `u`, i.e. is there `c` with `u = c · v`?
    pub fn right_divides(&self, v: &Element, u: &Element, budget: &Budget) -> Result<bool> {
        if v.is_identity() {
            return Ok(true);
        }
        if v.length() > u.length() {
            return Ok(false);
        }
        if v.length() == u.length() {
            return Ok(v == u);
        }
        if let Some(divs) = self.cache.borrow().right_divisors.get(u.letters()) {
            return Ok(divs.contains(v));
        }
        let class = self.braid_class(u.letters(), budget)?;
        let k = u.length() - v.length();
        let mut tried: HashSet<&[Atom]> = HashSet::new();
        for w in class.iter() {
            let suffix = &w[k..];
            if tried.insert(suffix) && self.canonical(suffix, budget)? == *v {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The unique `c` with `u = c · v`.
    pub fn right_quotient(&self, v: &Element, u: &Element, budget: &Budget) -> Result<Element> {
        if v.is_identity() {
            return Ok(u.clone());
        }
        if v.length() <= u.length() {
            let class = self.braid_class(u.letters(), budget)?;
            let k = u.length() - v.length();
            let mut tried: HashSet<&[Atom]> = HashSet::new();
            for w in class.iter() {
                let suffix = &w[k..];
                if tried.insert(suffix) && self.canonical(suffix, budget)? == *v {
                    return self.canonical(&w[..k], budget);
                }
            }
        }
        Err(Error::NotADivisor {
            divisor: self.pres.word_string(v.letters()),
            of: self.pres.word_string(u.letters()),
            side: "right",
        })
    }

    /// All left divisors of `u`: canonical forms of prefixes of every word
    /// in its braid class. Contains the identity and `u` itself.
    pub fn left_divisors(&self, u: &Element, budget: &Budget) -> Result<Arc<BTreeSet<Element>>> {
        if let Some(divs) = self.cache.borrow().divisors.get(u.letters()) {
            return Ok(Arc::clone(divs));
        }
        let class = self.braid_class(u.letters(), budget)?;
        let mut raw: HashSet<&[Atom]> = HashSet::new();
        let mut divisors = BTreeSet::new();
        for w in class.iter() {
            for k in 0..=w.len() {
                let prefix = &w[..k];
                if raw.insert(prefix) {
                    divisors.insert(self.canonical(prefix, budget)?);
                }
            }
        }
        let divisors = Arc::new(divisors);
        self.cache
            .borrow_mut()
            .divisors
            .insert(u.letters().to_vec(), Arc::clone(&divisors));
        Ok(divisors)
    }

    /// All right divisors of `u` (canonical forms of suffixes of class words).
    pub fn right_divisors(&self, u: &Element, budget: &Budget) -> Result<Arc<BTreeSet<Element>>> {
        if let Some(divs) = self.cache.borrow().right_divisors.get(u.letters()) {
            return Ok(Arc::clone(divs));
        }
        let class = self.braid_class(u.letters(), budget)?;
        let mut raw: HashSet<&[Atom]> = HashSet::new();
        let mut divisors = BTreeSet::new();
        for w in class.iter() {
            for k in 0..=w.len() {
                let suffix = &w[k..];
                if raw.insert(suffix) {
                    divisors.insert(self.canonical(suffix, budget)?);
                }
            }
        }
        let divisors = Arc::new(divisors);
        self.cache
            .borrow_mut()
            .right_divisors
            .insert(u.letters().to_vec(), Arc::clone(&divisors));
        Ok(divisors)
    }

    /// Left divisors of `u` of length exactly `n`.
    pub fn prefixes_of_length(
        &self,
        u: &Element,
        n: usize,
        budget: &Budget,
    ) -> Result<BTreeSet<Element>> {
        if n > u.length() {
            return Ok(BTreeSet::new());
        }
        let divisors = self.left_divisors(u, budget)?;
        Ok(divisors
            .iter()
            .filter(|d| d.length() == n)
            .cloned()
            .collect())
    }

    /// Tits' criterion: an element is reduced iff no word of its braid class
    /// contains two equal adjacent letters.
    pub fn is_reduced(&self, u: &Element, budget: &Budget) -> Result<bool> {
        if u.length() <= 1 {
            return Ok(true);
        }
        if let Some(&r) = self.cache.borrow().reduced.get(u.letters()) {
            return Ok(r);
        }
        let class = self.braid_class(u.letters(), budget)?;
        let reduced = !class
            .iter()
            .any(|w| w.windows(2).any(|pair| pair[0] == pair[1]));
        self.cache
            .borrow_mut()
            .reduced
            .insert(u.letters().to_vec(), reduced);
        Ok(reduced)
    }

    /// The set of atoms occurring in `u`. Only trace-monoid relations
    /// preserve the letter multiset, so this is restricted to trace monoids.
    pub fn support(&self, u: &Element) -> Result<BTreeSet<Atom>> {
        if !self.pres.classify().is_trace {
            return Err(Error::NotATraceMonoid);
        }
        Ok(u.letters().iter().copied().collect())
    }

    /// Atoms dividing `u` on the left (first letters across the class).
    pub fn dividing_atoms(&self, u: &Element, budget: &Budget) -> Result<Vec<Atom>> {
        if u.is_identity() {
            return Ok(Vec::new());
        }
        let class = self.braid_class(u.letters(), budget)?;
        let set: BTreeSet<Atom> = class.iter().map(|w| w[0]).collect();
        Ok(set.into_iter().collect())
    }

}
