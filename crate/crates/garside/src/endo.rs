//! Endomorphisms: validation, the atom partition, the letter-erasing
//! projection, generators of the fixed- and periodic-point submonoids,
//! derived presentations for them, and the head-based contraction test.
//!
//! An endomorphism is given by a total mapping atom → element and is
//! accepted only if it sends the two sides of every defining relation to the
//! same element.
//!
//! The submonoid of fixed points is computed structurally. When no atom is
//! ever killed (case I), the periodic atoms carry a permutation action and
//! the fixed submonoid is generated by the lcms `Δ(B)` of those orbits `B`
//! that admit one. When some atom dies (case II), the killed atoms are
//! projected away, the analysis runs on the surviving sub-presentation, and
//! the resulting generators are pushed forward through `φ^n` where `n` is
//! the maximal kill depth. Periodic points reduce to fixed points of
//! `φ^(p·n)` with `p = |S|!`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::engine::{alternating, Budget, Element, Engine};
use crate::error::{Error, Result};
use crate::lattice::DeltaOutcome;
use crate::metrics::CounterexamplePair;
use crate::presentation::{ArtinPresentation, Atom};
use crate::sample::{random_word, SplitMix64};

/// A validated endomorphism: one image per atom, relations preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    images: Vec<Element>,
}

impl Endomorphism {
    /// Parses the `map <atom> => <word>` file format. Every atom must be
    /// mapped exactly once; an empty right side means the identity.
    pub fn parse(engine: &Engine, text: &str, budget: &Budget) -> Result<Endomorphism> {
        let pres = engine.presentation();
        let mut images: Vec<Option<Element>> = vec![None; pres.rank()];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            if fields.next() != Some("map") {
                return Err(Error::EndoSyntax(format!(
                    "line {}: expected `map <atom> => <word>`",
                    lineno + 1
                )));
            }
            let atom_name = fields.next().ok_or_else(|| {
                Error::EndoSyntax(format!("line {}: missing atom", lineno + 1))
            })?;
            if fields.next() != Some("=>") {
                return Err(Error::EndoSyntax(format!(
                    "line {}: expected `=>` after the atom",
                    lineno + 1
                )));
            }
            let atom = pres.atom(atom_name)?;
            let word: Vec<Atom> = fields
                .map(|name| pres.atom(name))
                .collect::<Result<_>>()?;
            let image = engine.canonical(&word, budget)?;
            if images[atom.index()].replace(image).is_some() {
                return Err(Error::DuplicateAtomImage(atom_name.to_owned()));
            }
        }
        for (a, img) in pres.atoms().zip(images.iter()) {
            if img.is_none() {
                return Err(Error::MissingAtomImage(pres.atom_name(a).to_owned()));
            }
        }
        Endomorphism::new(engine, images.into_iter().flatten().collect(), budget)
    }

    /// Builds and validates an endomorphism from per-atom images.
    pub fn new(engine: &Engine, images: Vec<Element>, budget: &Budget) -> Result<Endomorphism> {
        let pres = engine.presentation();
        assert_eq!(images.len(), pres.rank(), "one image per atom");
        let phi = Endomorphism { images };
        for a in pres.atoms() {
            for b in pres.atoms() {
                if b <= a {
                    continue;
                }
                if let Some(m) = pres.coxeter(a, b) {
                    let lhs = phi.apply_word(&alternating(a, b, m));
                    let rhs = phi.apply_word(&alternating(b, a, m));
                    let violated = if lhs.len() != rhs.len() {
                        true
                    } else {
                        engine.canonical(&lhs, budget)? != engine.canonical(&rhs, budget)?
                    };
                    if violated {
                        return Err(Error::RelationViolated {
                            a: pres.atom_name(a).to_owned(),
                            b: pres.atom_name(b).to_owned(),
                        });
                    }
                }
            }
        }
        Ok(phi)
    }

    /// For internally constructed maps (powers of a validated morphism).
    pub(crate) fn from_images_unchecked(images: Vec<Element>) -> Endomorphism {
        Endomorphism { images }
    }

    pub fn image(&self, a: Atom) -> &Element {
        &self.images[a.index()]
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Letterwise substitution, no canonicalization.
    fn apply_word(&self, word: &[Atom]) -> Vec<Atom> {
        let mut out = Vec::new();
        for &a in word {
            out.extend_from_slice(self.images[a.index()].letters());
        }
        out
    }

    /// `φ^k(u)`: apply letterwise and canonicalize, `k` times. Iterates are
    /// cycle-compressed, so huge exponents cost at most one period.
    pub fn apply(&self, engine: &Engine, u: &Element, k: u64, budget: &Budget) -> Result<Element> {
        self.power_image(engine, u, k, budget, None)
    }

    /// Like [`Self::apply`], but with an optional cap on intermediate image
    /// lengths (used where growth must fail loudly instead of expensively).
    fn power_image(
        &self,
        engine: &Engine,
        start: &Element,
        exponent: u64,
        budget: &Budget,
        length_cap: Option<usize>,
    ) -> Result<Element> {
        if exponent == 0 {
            return Ok(start.clone());
        }
        let mut trajectory: Vec<Element> = vec![start.clone()];
        let mut first_seen: HashMap<Vec<Atom>, usize> = HashMap::new();
        first_seen.insert(start.letters().to_vec(), 0);
        while (trajectory.len() as u64) <= exponent {
            let word = self.apply_word(trajectory.last().unwrap().letters());
            if let Some(cap) = length_cap {
                if word.len() > cap {
                    return Err(Error::BudgetExceeded(format!(
                        "image of `{}` grew to length {} (cap {}) while iterating an endomorphism",
                        engine.presentation().word_string(start.letters()),
                        word.len(),
                        cap
                    )));
                }
            }
            let next = engine.canonical(&word, budget)?;
            if let Some(&first) = first_seen.get(next.letters()) {
                let period = trajectory.len() - first;
                let index = first + ((exponent as usize - first) % period);
                return Ok(trajectory[index].clone());
            }
            first_seen.insert(next.letters().to_vec(), trajectory.len());
            trajectory.push(next);
        }
        Ok(trajectory[exponent as usize].clone())
    }

    /// `α(φ(w))`, evaluated by heading the product of the letter images with
    /// the folded α. The braid class of the full image is never built, so
    /// this stays cheap even when `φ(w)` itself is far past any class budget.
    pub fn alpha_of_image(
        &self,
        engine: &Engine,
        w: &Element,
        budget: &Budget,
    ) -> Result<Element> {
        let factors: Vec<Element> = w
            .letters()
            .iter()
            .map(|&a| self.images[a.index()].clone())
            .collect();
        engine.alpha_product(&factors, budget)
    }

    pub fn serialize(&self, pres: &ArtinPresentation) -> String {
        let mut out = String::new();
        for a in pres.atoms() {
            out.push_str(&format!(
                "map {} => {}\n",
                pres.atom_name(a),
                pres.word_string(self.images[a.index()].letters())
            ));
        }
        out
    }
}

/// Partition of the atoms under an endomorphism: `s1` eventually dies,
/// `s2` survives, `s0` is periodic. `n_phi` is the maximal kill depth
/// (1 when nothing dies) and `p = |S|!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomPartition {
    pub s0: Vec<Atom>,
    pub s1: Vec<Atom>,
    pub s2: Vec<Atom>,
    pub n_phi: usize,
    pub p: u64,
}

/// Computes the atom partition.
///
/// Kill depths come from a fixpoint on the letter-dependency graph: an atom
/// dies at depth `1 + max(depth of the letters of its image)`. A dying atom
/// yields a strictly decreasing chain of distinct atoms, so depths are
/// bounded by `|S|` and the fixpoint needs at most `|S|` rounds.
///
/// Periodic atoms: when nothing dies, image lengths never shrink, so an atom
/// is periodic iff the walk `s → φ(s) → …` stays atomic and returns to `s`;
/// that is decided in at most `|S|` steps. Otherwise `s0` is read off as the
/// fixed atoms of `φ^(p·n)`, with iterates cycle-compressed and their length
/// capped by the budget.
pub fn atom_partition(
    engine: &Engine,
    phi: &Endomorphism,
    budget: &Budget,
) -> Result<AtomPartition> {
    let pres = engine.presentation();
    let rank = pres.rank();
    let mut depth: Vec<Option<usize>> = vec![None; rank];
    loop {
        let mut changed = false;
        for a in pres.atoms() {
            if depth[a.index()].is_some() {
                continue;
            }
            let mut worst = Some(0usize);
            for &x in phi.image(a).letters() {
                match depth[x.index()] {
                    Some(d) => worst = worst.map(|w| w.max(d)),
                    None => {
                        worst = None;
                        break;
                    }
                }
            }
            if let Some(w) = worst {
                depth[a.index()] = Some(w + 1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let s1: Vec<Atom> = pres.atoms().filter(|a| depth[a.index()].is_some()).collect();
    let s2: Vec<Atom> = pres.atoms().filter(|a| depth[a.index()].is_none()).collect();
    let n_phi = s1
        .iter()
        .filter_map(|a| depth[a.index()])
        .max()
        .unwrap_or(1);
    debug_assert!(n_phi <= rank, "kill depth exceeds the atom count");
    let p = factorial(rank as u64)?;
    let s0 = if s1.is_empty() {
        periodic_atoms_by_walk(phi, &pres.atoms().collect::<Vec<_>>())
    } else {
        let exponent = p
            .checked_mul(n_phi as u64)
            .ok_or_else(|| Error::Precondition("p·n overflows".into()))?;
        let mut s0 = Vec::new();
        for a in pres.atoms() {
            let start = engine.atom_element(a);
            let image = phi
                .power_image(engine, &start, exponent, budget, Some(budget.max_length))
                .map_err(|e| match e {
                    Error::BudgetExceeded(msg) => Error::BudgetExceeded(format!(
                        "periodicity check for atom `{}`: {msg}",
                        pres.atom_name(a)
                    )),
                    other => other,
                })?;
            if image == start {
                s0.push(a);
            }
        }
        s0
    };
    Ok(AtomPartition {
        s0,
        s1,
        s2,
        n_phi,
        p,
    })
}

fn factorial(n: u64) -> Result<u64> {
    let mut out = 1u64;
    for k in 2..=n {
        out = out
            .checked_mul(k)
            .ok_or_else(|| Error::Precondition(format!("{n}! overflows a 64-bit integer")))?;
    }
    Ok(out)
}

/// Atoms of `alphabet` whose forward orbit under `image` stays atomic and
/// returns. Only valid when no atom of the alphabet is ever killed, since
/// then image lengths never shrink and a non-atomic iterate can never come
/// back down to an atom.
fn periodic_atoms_by_walk<F: ImageFn>(image: F, alphabet: &[Atom]) -> Vec<Atom> {
    let mut s0 = Vec::new();
    for &s in alphabet {
        let mut cur = s;
        let mut periodic = false;
        for _ in 0..alphabet.len() {
            let img = image.image_of(cur);
            if img.length() != 1 {
                break;
            }
            cur = img.letters()[0];
            if cur == s {
                periodic = true;
                break;
            }
        }
        if periodic {
            s0.push(s);
        }
    }
    s0
}

/// Anything that maps atoms to elements (a full endomorphism, or its
/// projected restriction to the surviving atoms).
trait ImageFn {
    fn image_of(&self, a: Atom) -> &Element;
}

impl ImageFn for Endomorphism {
    fn image_of(&self, a: Atom) -> &Element {
        self.image(a)
    }
}

impl<F: ImageFn + ?Sized> ImageFn for &F {
    fn image_of(&self, a: Atom) -> &Element {
        (*self).image_of(a)
    }
}

struct SubImages<'a> {
    images: &'a [Option<Element>],
}

impl ImageFn for SubImages<'_> {
    fn image_of(&self, a: Atom) -> &Element {
        self.images[a.index()]
            .as_ref()
            .expect("image requested outside the sub-alphabet")
    }
}

/// The letter-erasing projection onto a subset of the atoms.
///
/// Construction verifies well-definedness on every defining relation; the
/// erased sides must agree as elements or the map is no morphism at all.
#[derive(Debug, Clone)]
pub struct Projection {
    keep: Vec<bool>,
}

impl Projection {
    pub fn onto(engine: &Engine, kept: &[Atom], budget: &Budget) -> Result<Projection> {
        let pres = engine.presentation();
        let mut keep = vec![false; pres.rank()];
        for &a in kept {
            keep[a.index()] = true;
        }
        let proj = Projection { keep };
        for a in pres.atoms() {
            for b in pres.atoms() {
                if b <= a {
                    continue;
                }
                if let Some(m) = pres.coxeter(a, b) {
                    let lhs = proj.erase(&alternating(a, b, m));
                    let rhs = proj.erase(&alternating(b, a, m));
                    let agree = if lhs.len() != rhs.len() {
                        false
                    } else {
                        engine.canonical(&lhs, budget)? == engine.canonical(&rhs, budget)?
                    };
                    if !agree {
                        return Err(Error::ProjectionIllDefined {
                            a: pres.atom_name(a).to_owned(),
                            b: pres.atom_name(b).to_owned(),
                        });
                    }
                }
            }
        }
        Ok(proj)
    }

    fn erase(&self, word: &[Atom]) -> Vec<Atom> {
        word.iter()
            .copied()
            .filter(|a| self.keep[a.index()])
            .collect()
    }

    pub fn apply(&self, engine: &Engine, u: &Element, budget: &Budget) -> Result<Element> {
        engine.canonical(&self.erase(u.letters()), budget)
    }
}

/// `π(u)` for the projection that forgets the killed atoms of `phi`.
pub fn project_pi(
    engine: &Engine,
    partition: &AtomPartition,
    u: &Element,
    budget: &Budget,
) -> Result<Element> {
    let proj = Projection::onto(engine, &partition.s2, budget)?;
    proj.apply(engine, u, budget)
}

/// Which structural case produced a fixed-point report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixCase {
    /// No atom dies; the orbit analysis runs directly.
    I,
    /// Some atoms die; the analysis runs on the surviving sub-presentation
    /// and the generators are pushed forward through `φ^n`.
    II,
}

impl fmt::Display for FixCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixCase::I => write!(f, "I"),
            FixCase::II => write!(f, "II"),
        }
    }
}

/// Generators of a fixed- or periodic-point submonoid.
///
/// `sigma` lists the contributing orbits with their lcms. `exhausted` is
/// true when every orbit's lcm decision completed within budget, i.e. the
/// generator list is provably complete.
#[derive(Debug, Clone)]
pub struct FixReport {
    pub case: FixCase,
    pub generators: Vec<Element>,
    pub sigma: Vec<(Vec<Atom>, Element)>,
    pub exhausted: bool,
}

impl FixReport {
    pub fn to_json(&self, pres: &ArtinPresentation) -> Value {
        json!({
            "case": self.case.to_string(),
            "exhausted": self.exhausted,
            "sigma": self.sigma.iter().map(|(orbit, delta)| json!({
                "orbit": orbit.iter().map(|&a| pres.atom_name(a)).collect::<Vec<_>>(),
                "delta": pres.word_string(delta.letters()),
            })).collect::<Vec<_>>(),
            "generators": self.generators.iter()
                .map(|g| pres.word_string(g.letters()))
                .collect::<Vec<_>>(),
        })
    }
}

/// Orbit analysis for an endomorphism that kills nothing on `alphabet`:
/// finds the periodic atoms, walks their orbits, and collects `Δ(B)` per
/// orbit that admits one. Returns the orbit list and the exhaustiveness flag.
fn orbit_generators<F: ImageFn>(
    engine: &Engine,
    image: F,
    alphabet: &[Atom],
    budget: &Budget,
) -> Result<(Vec<(Vec<Atom>, Element)>, bool)> {
    let s0 = periodic_atoms_by_walk(&image, alphabet);
    let s0_set: BTreeSet<Atom> = s0.iter().copied().collect();
    let mut sigma = Vec::new();
    let mut exhausted = true;
    let mut visited: BTreeSet<Atom> = BTreeSet::new();
    for &s in &s0 {
        if visited.contains(&s) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = s;
        loop {
            orbit.push(cur);
            visited.insert(cur);
            let img = image.image_of(cur);
            assert_eq!(
                img.length(),
                1,
                "internal consistency violation: periodic atom with non-atomic image"
            );
            cur = img.letters()[0];
            assert!(
                s0_set.contains(&cur),
                "internal consistency violation: the periodic atoms are not stable"
            );
            if cur == s {
                break;
            }
        }
        orbit.sort();
        match engine.delta_of_atoms(&orbit, budget) {
            Ok(DeltaOutcome::Lcm(delta)) => sigma.push((orbit, delta)),
            Ok(DeltaOutcome::NoLcm) => {} // decided: this orbit has no common multiple
            Err(Error::BudgetExceeded(_)) => exhausted = false,
            Err(other) => return Err(other),
        }
    }
    sigma.sort_by(|a, b| a.0.cmp(&b.0));
    Ok((sigma, exhausted))
}

/// Generators of the fixed-point submonoid of `phi`.
pub fn fix_generators(engine: &Engine, phi: &Endomorphism, budget: &Budget) -> Result<FixReport> {
    let pres = engine.presentation();
    let partition = atom_partition(engine, phi, budget)?;
    if partition.s1.is_empty() {
        let alphabet: Vec<Atom> = pres.atoms().collect();
        let (sigma, exhausted) = orbit_generators(engine, phi, &alphabet, budget)?;
        let mut generators: Vec<Element> = sigma.iter().map(|(_, d)| d.clone()).collect();
        generators.sort();
        Ok(FixReport {
            case: FixCase::I,
            generators,
            sigma,
            exhausted,
        })
    } else {
        let proj = Projection::onto(engine, &partition.s2, budget)?;
        let mut sub_images: Vec<Option<Element>> = vec![None; pres.rank()];
        for &s in &partition.s2 {
            let img = proj.apply(engine, phi.image(s), budget)?;
            assert!(
                !img.is_identity(),
                "internal consistency violation: an atom of the projected endomorphism dies"
            );
            sub_images[s.index()] = Some(img);
        }
        let sub = SubImages {
            images: &sub_images,
        };
        let (sigma, exhausted) = orbit_generators(engine, &sub, &partition.s2, budget)?;
        let mut generators = Vec::with_capacity(sigma.len());
        for (_, delta) in &sigma {
            generators.push(phi.power_image(
                engine,
                delta,
                partition.n_phi as u64,
                budget,
                None,
            )?);
        }
        generators.sort();
        debug_assert!(
            generators.windows(2).all(|w| w[0] != w[1]),
            "generators must be pairwise distinct"
        );
        Ok(FixReport {
            case: FixCase::II,
            generators,
            sigma,
            exhausted,
        })
    }
}

/// Generators of the periodic-point submonoid: the fixed points of
/// `φ^(p·n)`, computed by raising the endomorphism to that power.
pub fn per_generators(engine: &Engine, phi: &Endomorphism, budget: &Budget) -> Result<FixReport> {
    let pres = engine.presentation();
    let partition = atom_partition(engine, phi, budget)?;
    let exponent = partition
        .p
        .checked_mul(partition.n_phi as u64)
        .ok_or_else(|| Error::Precondition("p·n overflows".into()))?;
    let mut images = Vec::with_capacity(pres.rank());
    for a in pres.atoms() {
        let image = phi
            .power_image(
                engine,
                &engine.atom_element(a),
                exponent,
                budget,
                Some(budget.max_length),
            )
            .map_err(|e| match e {
                Error::BudgetExceeded(msg) => Error::BudgetExceeded(format!(
                    "raising the endomorphism to power {exponent} on atom `{}`: {msg}",
                    pres.atom_name(a)
                )),
                other => other,
            })?;
        images.push(image);
    }
    let psi = Endomorphism::from_images_unchecked(images);
    fix_generators(engine, &psi, budget)
}

/// An Artin presentation derived for a fixed-point submonoid, plus the
/// generator pairs whose alternation search ran out of length budget.
/// Entries for those pairs are `∞` as *evidence of absence within budget*,
/// not a proof that no finite entry exists.
#[derive(Debug, Clone)]
pub struct FixPresentation {
    pub presentation: ArtinPresentation,
    pub generators: Vec<Element>,
    pub unresolved: Vec<(usize, usize)>,
}

impl FixPresentation {
    pub fn to_json(&self, pres: &ArtinPresentation) -> Value {
        json!({
            "presentation": self.presentation.serialize(),
            "generators": self.generators.iter()
                .map(|g| pres.word_string(g.letters()))
                .collect::<Vec<_>>(),
            "unresolved": self.unresolved,
        })
    }
}

/// Derives an Artin presentation on the report's generators by searching,
/// for every generator pair, the least `m ≥ 2` with
/// `[g,h>^m = [h,g>^m`. Pairs whose products outgrow the length budget
/// before meeting are reported as unresolved.
pub fn fix_presentation(
    engine: &Engine,
    report: &FixReport,
    budget: &Budget,
) -> Result<FixPresentation> {
    if !report.exhausted {
        return Err(Error::Precondition(
            "the generator list may be incomplete (a Δ(B) decision hit its budget)".into(),
        ));
    }
    let pres = engine.presentation();
    let gens = &report.generators;
    let mut names: Vec<String> = gens
        .iter()
        .map(|g| {
            g.letters()
                .iter()
                .map(|&a| pres.atom_name(a))
                .collect::<Vec<_>>()
                .join("_")
        })
        .collect();
    let unique: BTreeSet<&String> = names.iter().collect();
    if unique.len() != names.len() || names.iter().any(|n| n.contains('#')) {
        names = (0..gens.len()).map(|i| format!("g{i}")).collect();
    }
    let mut entries: Vec<(usize, usize, u32)> = Vec::new();
    let mut unresolved = Vec::new();
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            match least_alternation(engine, &gens[i], &gens[j], budget)? {
                Some(m) => entries.push((i, j, m)),
                None => unresolved.push((i, j)),
            }
        }
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let entry_refs: Vec<(&str, &str, u32)> = entries
        .iter()
        .map(|&(i, j, m)| (name_refs[i], name_refs[j], m))
        .collect();
    let presentation = ArtinPresentation::new(&name_refs, &entry_refs)?;
    Ok(FixPresentation {
        presentation,
        generators: gens.clone(),
        unresolved,
    })
}

/// Least `m ≥ 2` with `[g,h>^m = [h,g>^m`, or `None` once the products
/// outgrow the length budget.
fn least_alternation(
    engine: &Engine,
    g: &Element,
    h: &Element,
    budget: &Budget,
) -> Result<Option<u32>> {
    let mut left = g.clone(); // [g,h>^m
    let mut right = h.clone(); // [h,g>^m
    let mut m = 1u32;
    loop {
        m += 1;
        let (lt, rt) = if m % 2 == 1 { (g, h) } else { (h, g) };
        if left.length() + lt.length() > budget.max_length {
            return Ok(None);
        }
        left = match engine.multiply(&left, lt, budget) {
            Ok(e) => e,
            Err(Error::BudgetExceeded(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        right = match engine.multiply(&right, rt, budget) {
            Ok(e) => e,
            Err(Error::BudgetExceeded(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if left == right {
            return Ok(Some(m));
        }
    }
}

/// Outcome of the head-based contraction test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionOutcome {
    /// Every reduced pair was checked against a complete census; this
    /// decides contraction for the greedy metric.
    HoldsExhaustive,
    /// No violation among reduced elements up to the given length, but the
    /// census did not close there.
    HoldsUpToBound(usize),
    /// A reduced pair with `α(uv) = u` but `α(φ(uv)) ≠ α(φ(u))`.
    Counterexample(Element, Element),
}

#[derive(Debug, Clone)]
pub struct ContractionVerdict {
    pub outcome: ContractionOutcome,
    pub pairs_checked: u64,
}

impl ContractionVerdict {
    pub fn holds(&self) -> bool {
        !matches!(self.outcome, ContractionOutcome::Counterexample(..))
    }

    pub fn to_json(&self, pres: &ArtinPresentation) -> Value {
        let mut v = match &self.outcome {
            ContractionOutcome::HoldsExhaustive => json!({"outcome": "holds-exhaustive"}),
            ContractionOutcome::HoldsUpToBound(l) => {
                json!({"outcome": "holds-up-to-bound", "bound": l})
            }
            ContractionOutcome::Counterexample(u, v) => json!({
                "outcome": "counterexample",
                "u": pres.word_string(u.letters()),
                "v": pres.word_string(v.letters()),
            }),
        };
        v["pairs_checked"] = json!(self.pairs_checked);
        v
    }
}

/// Checks the head criterion `α(uv) = u ⇒ α(φ(uv)) = α(φ(u))` over all
/// ordered pairs of reduced elements up to length `bound`, in order of total
/// length then graded-lexicographically, reporting the first failure.
///
/// When the reduced census is complete the answer is exhaustive and decides
/// whether `φ` contracts the greedy metric.
pub fn contraction_check(
    engine: &Engine,
    phi: &Endomorphism,
    bound: usize,
    budget: &Budget,
) -> Result<ContractionVerdict> {
    let census = engine.enumerate_reduced(bound, budget)?;
    let elements: Vec<&Element> = census.iter().collect();
    let mut pairs: Vec<(&Element, &Element)> = Vec::with_capacity(elements.len().pow(2));
    for &u in &elements {
        for &v in &elements {
            pairs.push((u, v));
        }
    }
    pairs.sort_by(|(u1, v1), (u2, v2)| {
        (u1.length() + v1.length())
            .cmp(&(u2.length() + v2.length()))
            .then_with(|| u1.cmp(u2))
            .then_with(|| v1.cmp(v2))
    });
    let mut pairs_checked = 0u64;
    for (u, v) in pairs {
        let uv = engine.multiply(u, v, budget)?;
        if engine.alpha(&uv, budget)? != *u {
            continue;
        }
        pairs_checked += 1;
        let lhs = phi.alpha_of_image(engine, &uv, budget)?;
        let rhs = phi.alpha_of_image(engine, u, budget)?;
        if lhs != rhs {
            return Ok(ContractionVerdict {
                outcome: ContractionOutcome::Counterexample(u.clone(), v.clone()),
                pairs_checked,
            });
        }
    }
    let outcome = if census.complete {
        ContractionOutcome::HoldsExhaustive
    } else {
        ContractionOutcome::HoldsUpToBound(census.max_length())
    };
    Ok(ContractionVerdict {
        outcome,
        pairs_checked,
    })
}

/// Sampled agreement report for the four equivalent head conditions.
#[derive(Debug, Clone)]
pub struct ClauseReport {
    pub clause: &'static str,
    pub premises: u64,
    pub violations: u64,
    pub counterexamples: Vec<CounterexamplePair>,
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub verdict: ContractionVerdict,
    pub clauses: Vec<ClauseReport>,
    pub skipped_budget: u64,
    /// False when the exhaustive verdict says the criterion holds but a
    /// sampled clause still found a violation (which would be a bug).
    pub consistent: bool,
}

impl CrosscheckReport {
    pub fn clean(&self) -> bool {
        self.consistent && self.clauses.iter().all(|c| c.violations == 0)
    }

    pub fn to_json(&self, pres: &ArtinPresentation) -> Value {
        json!({
            "verdict": self.verdict.to_json(pres),
            "clauses": self.clauses.iter().map(|c| json!({
                "clause": c.clause,
                "premises": c.premises,
                "violations": c.violations,
                "counterexamples": c.counterexamples.iter()
                    .map(|cx| json!({"u": cx.u, "v": cx.v}))
                    .collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "skipped_budget": self.skipped_budget,
            "consistent": self.consistent,
        })
    }
}

/// Samples random pairs up to length `bound` and evaluates three pointwise
/// forms of the head condition:
///
/// * (i)  `α(uv) = α(u) ⇒ α(φ(uv)) = α(φ(u))`
/// * (ii) `α(uv) = u   ⇒ α(φ(uv)) = α(φ(u))`
/// * (iv) `α(φ(u)) = α(φ(α(u)))`
///
/// The results are compared with [`contraction_check`] at the same bound:
/// with an exhaustive verdict the clauses must agree with it.
pub fn lemma13_crosscheck(
    engine: &Engine,
    phi: &Endomorphism,
    bound: usize,
    samples: u64,
    seed: u64,
    budget: &Budget,
) -> Result<CrosscheckReport> {
    let pres = engine.presentation();
    let verdict = contraction_check(engine, phi, bound, budget)?;
    let mut clauses = [
        ClauseReport {
            clause: "(i)",
            premises: 0,
            violations: 0,
            counterexamples: Vec::new(),
        },
        ClauseReport {
            clause: "(ii)",
            premises: 0,
            violations: 0,
            counterexamples: Vec::new(),
        },
        ClauseReport {
            clause: "(iv)",
            premises: 0,
            violations: 0,
            counterexamples: Vec::new(),
        },
    ];
    let mut rng = SplitMix64::new(seed);
    let mut skipped = 0u64;
    for _ in 0..samples {
        let uw = random_word(&mut rng, pres, bound);
        let vw = random_word(&mut rng, pres, bound);
        let mut eval = || -> Result<()> {
            let u = engine.canonical(&uw, budget)?;
            let v = engine.canonical(&vw, budget)?;
            let uv = engine.multiply(&u, &v, budget)?;
            let alpha_u = engine.alpha(&u, budget)?;
            let alpha_uv = engine.alpha(&uv, budget)?;
            let head_u = phi.alpha_of_image(engine, &u, budget)?;
            let pair = CounterexamplePair {
                u: pres.word_string(u.letters()),
                v: pres.word_string(v.letters()),
            };
            if alpha_uv == alpha_u {
                clauses[0].premises += 1;
                let head_uv = phi.alpha_of_image(engine, &uv, budget)?;
                if head_uv != head_u {
                    clauses[0].violations += 1;
                    clauses[0].counterexamples.push(pair.clone());
                }
            }
            if alpha_uv == u {
                clauses[1].premises += 1;
                let head_uv = phi.alpha_of_image(engine, &uv, budget)?;
                if head_uv != head_u {
                    clauses[1].violations += 1;
                    clauses[1].counterexamples.push(pair.clone());
                }
            }
            clauses[2].premises += 1;
            let head_alpha_u = phi.alpha_of_image(engine, &alpha_u, budget)?;
            if head_u != head_alpha_u {
                clauses[2].violations += 1;
                clauses[2].counterexamples.push(pair);
            }
            Ok(())
        };
        match eval() {
            Ok(()) => {}
            Err(Error::BudgetExceeded(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let any_violation = clauses.iter().any(|c| c.violations > 0);
    let consistent = !(matches!(verdict.outcome, ContractionOutcome::HoldsExhaustive)
        && any_violation);
    Ok(CrosscheckReport {
        verdict,
        clauses: clauses.into(),
        skipped_budget: skipped,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::ArtinPresentation;

    fn engine(text: &str) -> Engine {
        Engine::new(&ArtinPresentation::parse(text).unwrap())
    }

    fn endo(e: &Engine, text: &str) -> Endomorphism {
        Endomorphism::parse(e, text, &Budget::default()).unwrap()
    }

    fn elem(e: &Engine, text: &str) -> Element {
        e.element(text, &Budget::default()).unwrap()
    }

    fn gen_strings(e: &Engine, report: &FixReport) -> Vec<String> {
        report
            .generators
            .iter()
            .map(|g| e.presentation().word_string(g.letters()))
            .collect()
    }

    // The running examples.
    const DIHEDRAL9: &str = "atoms s t\nm s t 9\n";
    const TRIANGLE: &str = "atoms s t u\nm s t 2\nm s u 3\nm t u 3\n";
    const KILLER: &str = "atoms a b c\nm a b 4\nm a c 2\n";

    #[test]
    fn parse_accepts_the_dihedral_tripler() {
        let e = engine(DIHEDRAL9);
        let phi = endo(&e, "map s => s t s\nmap t => t s t\n");
        assert_eq!(phi.image(e.presentation().atom("s").unwrap()).length(), 3);
    }

    #[test]
    fn parse_accepts_a_killing_swap() {
        let e = engine(KILLER);
        let phi = endo(&e, "map a => b\nmap b => a\nmap c =>\n");
        assert!(phi
            .image(e.presentation().atom("c").unwrap())
            .is_identity());
    }

    #[test]
    fn parse_rejects_relation_violation() {
        let e = engine("atoms s t\nm s t 3\n");
        let err = Endomorphism::parse(&e, "map s => s\nmap t => s s\n", &Budget::default())
            .unwrap_err();
        assert!(matches!(err, Error::RelationViolated { .. }));
    }

    #[test]
    fn parse_rejects_missing_and_duplicate_atoms() {
        let e = engine("atoms s t\nm s t 3\n");
        let b = Budget::default();
        assert!(matches!(
            Endomorphism::parse(&e, "map s => s\n", &b),
            Err(Error::MissingAtomImage(_))
        ));
        assert!(matches!(
            Endomorphism::parse(&e, "map s => s\nmap s => t\nmap t => t\n", &b),
            Err(Error::DuplicateAtomImage(_))
        ));
        assert!(matches!(
            Endomorphism::parse(&e, "map s => x\nmap t => t\n", &b),
            Err(Error::UnknownAtom(_))
        ));
    }

    #[test]
    fn apply_powers() {
        let e = engine(KILLER);
        let b = Budget::default();
        let phi = endo(&e, "map a => b\nmap b => a\nmap c =>\n");
        let u = elem(&e, "a b a b");
        assert_eq!(phi.apply(&e, &u, 0, &b).unwrap(), u);
        // abab = baba is fixed by the swap.
        assert_eq!(phi.apply(&e, &u, 1, &b).unwrap(), u);

        let e9 = engine(DIHEDRAL9);
        let tripler = endo(&e9, "map s => s t s\nmap t => t s t\n");
        let s = elem(&e9, "s");
        let sq = tripler.apply(&e9, &s, 2, &b).unwrap();
        assert_eq!(sq, elem(&e9, "s t s t s t s t s"));
        // Huge exponents terminate through cycle compression.
        let idempotent = endo(&e9, "map s => s\nmap t => t\n");
        assert_eq!(idempotent.apply(&e9, &s, 1_000_000_007, &b).unwrap(), s);
    }

    #[test]
    fn partition_of_the_killing_swap() {
        let e = engine(KILLER);
        let phi = endo(&e, "map a => b\nmap b => a\nmap c =>\n");
        let part = atom_partition(&e, &phi, &Budget::default()).unwrap();
        let p = e.presentation();
        let names = |atoms: &[Atom]| -> Vec<&str> {
            atoms.iter().map(|&a| p.atom_name(a)).collect()
        };
        assert_eq!(names(&part.s1), vec!["c"]);
        assert_eq!(names(&part.s2), vec!["a", "b"]);
        assert_eq!(names(&part.s0), vec!["a", "b"]);
        assert_eq!(part.n_phi, 1);
        assert_eq!(part.p, 6);
    }

    #[test]
    fn partition_of_identity_and_tripler() {
        let e = engine(DIHEDRAL9);
        let b = Budget::default();
        let id = endo(&e, "map s => s\nmap t => t\n");
        let part = atom_partition(&e, &id, &b).unwrap();
        assert!(part.s1.is_empty());
        assert_eq!(part.s0.len(), 2);
        assert_eq!(part.n_phi, 1);

        let tripler = endo(&e, "map s => s t s\nmap t => t s t\n");
        let part = atom_partition(&e, &tripler, &b).unwrap();
        assert!(part.s1.is_empty());
        assert!(part.s0.is_empty());
    }

    #[test]
    fn deep_kill_chain_depth() {
        // a -> b -> c -> 1 under phi, so a dies at depth 3.
        let e = engine("atoms a b c\n");
        let phi = endo(&e, "map a => b\nmap b => c\nmap c =>\n");
        let part = atom_partition(&e, &phi, &Budget::default()).unwrap();
        assert_eq!(part.s1.len(), 3);
        assert_eq!(part.n_phi, 3);
        assert!(part.s2.is_empty());
    }

    #[test]
    fn projection_erases_killed_atoms() {
        let e = engine(KILLER);
        let b = Budget::default();
        let phi = endo(&e, "map a => b\nmap b => a\nmap c =>\n");
        let part = atom_partition(&e, &phi, &b).unwrap();
        let ac = elem(&e, "a c");
        let pi = project_pi(&e, &part, &ac, &b).unwrap();
        assert_eq!(pi, elem(&e, "a"));
    }

    #[test]
    fn projection_is_identity_when_nothing_dies() {
        let e = engine(DIHEDRAL9);
        let b = Budget::default();
        let all: Vec<Atom> = e.presentation().atoms().collect();
        let proj = Projection::onto(&e, &all, &b).unwrap();
        let u = elem(&e, "s t s");
        assert_eq!(proj.apply(&e, &u, &b).unwrap(), u);
    }

    #[test]
    fn standalone_projection_can_be_ill_defined() {
        // Erasing s maps sts -> t but tst -> tt.
        let e = engine("atoms s t\nm s t 3\n");
        let t = e.presentation().atom("t").unwrap();
        let err = Projection::onto(&e, &[t], &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::ProjectionIllDefined { .. }));

        // With an even entry the same erasure is fine.
        let e4 = engine("atoms s t\nm s t 4\n");
        let t4 = e4.presentation().atom("t").unwrap();
        assert!(Projection::onto(&e4, &[t4], &Budget::default()).is_ok());
    }

    #[test]
    fn fix_generators_triangle_swap() {
        let e = engine(TRIANGLE);
        let phi = endo(&e, "map s => t\nmap t => s\nmap u => u\n");
        let report = fix_generators(&e, &phi, &Budget::default()).unwrap();
        assert_eq!(report.case, FixCase::I);
        assert!(report.exhausted);
        assert_eq!(gen_strings(&e, &report), vec!["u", "s t"]);
        let orbits: Vec<Vec<&str>> = report
            .sigma
            .iter()
            .map(|(o, _)| o.iter().map(|&a| e.presentation().atom_name(a)).collect())
            .collect();
        assert_eq!(orbits, vec![vec!["s", "t"], vec!["u"]]);
    }

    #[test]
    fn fix_generators_killing_swap() {
        let e = engine(KILLER);
        let phi = endo(&e, "map a => b\nmap b => a\nmap c =>\n");
        let report = fix_generators(&e, &phi, &Budget::default()).unwrap();
        assert_eq!(report.case, FixCase::II);
        assert!(report.exhausted);
        assert_eq!(gen_strings(&e, &report), vec!["a b a b"]);
    }

    #[test]
    fn fix_generators_identity_returns_atoms() {
        let e = engine(TRIANGLE);
        let phi = endo(&e, "map s => s\nmap t => t\nmap u => u\n");
        let report = fix_generators(&e, &phi, &Budget::default()).unwrap();
        assert_eq!(gen_strings(&e, &report), vec!["s", "t", "u"]);
        assert!(report.exhausted);
    }

    #[test]
    fn fix_generators_are_fixed() {
        let e = engine(TRIANGLE);
        let b = Budget::default();
        let phi = endo(&e, "map s => t\nmap t => s\nmap u => u\n");
        let report = fix_generators(&e, &phi, &b).unwrap();
        for g in &report.generators {
            assert_eq!(phi.apply(&e, g, 1, &b).unwrap(), *g);
        }
    }

    #[test]
    fn per_generators_examples() {
        let b = Budget::default();
        let e = engine(TRIANGLE);
        let phi = endo(&e, "map s => t\nmap t => s\nmap u => u\n");
        let report = per_generators(&e, &phi, &b).unwrap();
        assert_eq!(gen_strings(&e, &report), vec!["s", "t", "u"]);

        let ek = engine(KILLER);
        let swap = endo(&ek, "map a => b\nmap b => a\nmap c =>\n");
        let report = per_generators(&ek, &swap, &b).unwrap();
        assert_eq!(gen_strings(&ek, &report), vec!["a", "b"]);
        for g in &report.generators {
            let part = atom_partition(&ek, &swap, &b).unwrap();
            let pn = part.p * part.n_phi as u64;
            assert_eq!(swap.apply(&ek, g, pn, &b).unwrap(), *g);
        }
    }

    #[test]
    fn fix_presentation_of_the_folded_triangle() {
        // The triangle swap fixes ⟨u, st⟩ and the derived matrix entry is 4.
        let e = engine(TRIANGLE);
        let b = Budget::default();
        let phi = endo(&e, "map s => t\nmap t => s\nmap u => u\n");
        let report = fix_generators(&e, &phi, &b).unwrap();
        let fp = fix_presentation(&e, &report, &b).unwrap();
        assert!(fp.unresolved.is_empty());
        assert_eq!(fp.presentation.serialize(), "atoms u s_t\nm u s_t 4\n");
    }

    #[test]
    fn fix_presentation_single_generator_is_free() {
        let e = engine(KILLER);
        let b = Budget::default();
        let phi = endo(&e, "map a => b\nmap b => a\nmap c =>\n");
        let report = fix_generators(&e, &phi, &b).unwrap();
        let fp = fix_presentation(&e, &report, &b).unwrap();
        assert_eq!(fp.presentation.rank(), 1);
        assert_eq!(fp.presentation.serialize(), "atoms a_b_a_b\n");
    }

    #[test]
    fn contraction_fails_for_the_tripler() {
        // The tripler does NOT contract the greedy metric: α(s·sts) = s, yet
        // α(φ(s·sts)) = Δ while α(φ(s)) = sts. Hand check: φ(ssts) equals
        // sts·sts·tst·sts whose class contains the 12-letter alternating
        // word, so Δ divides it. The smallest failing pair in enumeration
        // order is (s, sts).
        let e = engine(DIHEDRAL9);
        let phi = endo(&e, "map s => s t s\nmap t => t s t\n");
        let verdict = contraction_check(&e, &phi, 9, &Budget::default()).unwrap();
        let p = e.presentation();
        match &verdict.outcome {
            ContractionOutcome::Counterexample(u, v) => {
                assert_eq!(p.word_string(u.letters()), "s");
                assert_eq!(p.word_string(v.letters()), "s t s");
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn tripler_foata_head_table_on_delta_powers() {
        // The finite Foata-head check that genuinely holds for the tripler:
        // over X₂ = {s, t, Δ}, whenever the first Foata factor of uv is u,
        // the first Foata factors of φ(uv) and φ(u) agree — even though the
        // map contracts neither the Foata nor the greedy metric.
        //
        // The first Foata factor of an image is Δ(D) for D the atoms
        // dividing it, and an atom divides w iff it divides α(w); heading
        // the image through the fold keeps Δ-power images tractable.
        let e = engine(DIHEDRAL9);
        let b = Budget::default();
        let phi = endo(&e, "map s => s t s\nmap t => t s t\n");
        let head2 = |u: &Element| -> Element {
            e.foata_nf(u, &b).unwrap().factors[0].clone()
        };
        let head2_of_image = |u: &Element| -> Element {
            let alpha = phi.alpha_of_image(&e, u, &b).unwrap();
            let dividing = e.dividing_atoms(&alpha, &b).unwrap();
            match e.delta_of_atoms(&dividing, &b).unwrap() {
                DeltaOutcome::Lcm(d) => d,
                DeltaOutcome::NoLcm => panic!("dividing atoms always have an lcm"),
            }
        };
        let delta = elem(&e, "s t s t s t s t s");
        let x2 = [elem(&e, "s"), elem(&e, "t"), delta];
        let mut premise_pairs = 0;
        for u in &x2 {
            for v in &x2 {
                let uv = e.multiply(u, v, &b).unwrap();
                if head2(&uv) == *u {
                    premise_pairs += 1;
                    assert_eq!(head2_of_image(&uv), head2_of_image(u));
                }
            }
        }
        assert_eq!(premise_pairs, 7);
    }

    #[test]
    fn contraction_counterexample_in_the_free_monoid() {
        let e = engine("atoms a b\n");
        let phi = endo(&e, "map a => a b\nmap b => b\n");
        let verdict = contraction_check(&e, &phi, 4, &Budget::default()).unwrap();
        let p = e.presentation();
        match verdict.outcome {
            ContractionOutcome::Counterexample(u, v) => {
                assert_eq!(p.word_string(u.letters()), "a");
                assert_eq!(p.word_string(v.letters()), "a");
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn contraction_holds_for_identity() {
        let e = engine("atoms s t\nm s t 3\n");
        let phi = endo(&e, "map s => s\nmap t => t\n");
        let verdict = contraction_check(&e, &phi, 5, &Budget::default()).unwrap();
        assert_eq!(verdict.outcome, ContractionOutcome::HoldsExhaustive);
    }

    #[test]
    fn crosscheck_agrees_with_verdicts() {
        let b = Budget::default();
        let e = engine(DIHEDRAL9);
        let tripler = endo(&e, "map s => s t s\nmap t => t s t\n");
        let report = lemma13_crosscheck(&e, &tripler, 5, 60, 11, &b).unwrap();
        // The tripler fails the head criterion; sampling may or may not hit
        // a witness, but it must never contradict an exhaustive verdict.
        assert!(!report.verdict.holds());
        assert!(report.consistent);

        let ef = engine("atoms a b\n");
        let bad = endo(&ef, "map a => a b\nmap b => b\n");
        let report = lemma13_crosscheck(&ef, &bad, 4, 80, 11, &b).unwrap();
        assert!(!report.verdict.holds());
        assert!(report.consistent);
    }

    #[test]
    fn crosscheck_finds_clause_iv_witness_in_free_monoid() {
        // α(φ(aa)) = abab but α(φ(α(aa))) = α(φ(a)) = ab; a seed whose
        // sample stream contains `a a` pins the witness deterministically.
        let e = engine("atoms a b\n");
        let b = Budget::default();
        let bad = endo(&e, "map a => a b\nmap b => b\n");
        let mut found = None;
        for seed in 0..64 {
            let mut rng = SplitMix64::new(seed);
            let stream: Vec<Vec<Atom>> = (0..160)
                .map(|_| random_word(&mut rng, e.presentation(), 4))
                .collect();
            // u-words sit at even stream positions; any u starting `a a`
            // witnesses the clause (iv) failure.
            if stream
                .iter()
                .step_by(2)
                .any(|w| w.len() >= 2 && w[0].index() == 0 && w[1].index() == 0)
            {
                found = Some(seed);
                break;
            }
        }
        let seed = found.expect("some small seed samples a u starting `a a`");
        let report = lemma13_crosscheck(&e, &bad, 4, 80, seed, &b).unwrap();
        let iv = &report.clauses[2];
        assert!(iv.violations > 0);
    }

    #[test]
    fn crosscheck_identity_clause_iv_trivial() {
        let e = engine("atoms s t\nm s t 3\n");
        let id = endo(&e, "map s => s\nmap t => t\n");
        let report = lemma13_crosscheck(&e, &id, 4, 40, 5, &Budget::default()).unwrap();
        assert!(report.clean());
        assert_eq!(report.clauses[2].violations, 0);
    }
}
