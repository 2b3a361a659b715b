//! Three ultrametrics on the monoid and a seeded fuzzer for the
//! inequalities between them.
//!
//! Each metric compares a normal-form-like expansion of two elements and
//! measures the longest common prefix `r`; the distance is `2^(-r)` with
//! `2^(-∞) = 0`:
//!
//! * `d1` — greedy normal form factors,
//! * `d2` — Foata normal form factors,
//! * `d3` — sets of length-`n` prefixes (left divisors), largest `n` with
//!   identical sets.
//!
//! Distances are never materialized as floats. Every comparison, including
//! power laws like `d2^p ≤ 2^p · d3`, is rewritten as an exact integer
//! constraint on the exponents.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::{Budget, Element, Engine};
use crate::error::{Error, Result};
use crate::presentation::ArtinPresentation;
use crate::sample::{random_word, SplitMix64};

/// Longest-common-prefix rank; infinite exactly when the elements coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub fn is_infinite(self) -> bool {
        matches!(self, Rank::Infinite)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Rank::Finite(k) => Some(k),
            Rank::Infinite => None,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(k) => write!(f, "{k}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

/// A dyadic distance `2^(-exponent)`, stored by its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicDistance {
    pub exponent: Rank,
}

impl DyadicDistance {
    pub fn is_zero(self) -> bool {
        self.exponent.is_infinite()
    }
}

impl PartialOrd for DyadicDistance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicDistance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Larger exponent = smaller distance.
        other.exponent.cmp(&self.exponent)
    }
}

impl fmt::Display for DyadicDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            Rank::Infinite => write!(f, "0"),
            Rank::Finite(k) => write!(f, "2^-{k}"),
        }
    }
}

/// Which of the three metrics to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Greedy,
    Foata,
    Prefix,
}

impl Metric {
    pub fn index(self) -> u8 {
        match self {
            Metric::Greedy => 1,
            Metric::Foata => 2,
            Metric::Prefix => 3,
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d1" | "1" => Ok(Metric::Greedy),
            "d2" | "2" => Ok(Metric::Foata),
            "d3" | "3" => Ok(Metric::Prefix),
            other => Err(Error::Precondition(format!(
                "unknown metric `{other}` (expected d1, d2 or d3)"
            ))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.index())
    }
}

impl Engine {
    /// The rank `r_i(u, v)` for the chosen metric.
    pub fn rank(&self, metric: Metric, u: &Element, v: &Element, budget: &Budget) -> Result<Rank> {
        if u == v {
            return Ok(Rank::Infinite);
        }
        match metric {
            Metric::Greedy => {
                let fu = self.greedy_nf(u, budget)?.factors;
                let fv = self.greedy_nf(v, budget)?.factors;
                Ok(Rank::Finite(common_prefix(&fu, &fv)))
            }
            Metric::Foata => {
                let fu = self.foata_nf(u, budget)?.factors;
                let fv = self.foata_nf(v, budget)?.factors;
                Ok(Rank::Finite(common_prefix(&fu, &fv)))
            }
            Metric::Prefix => {
                // Prefix-set agreement is monotone in n, so scan upward and
                // stop at the first mismatch.
                let limit = u.length().min(v.length()) + 1;
                let mut r = 0u64;
                for n in 1..=limit {
                    if self.prefixes_of_length(u, n, budget)?
                        == self.prefixes_of_length(v, n, budget)?
                    {
                        r = n as u64;
                    } else {
                        return Ok(Rank::Finite(r));
                    }
                }
                // Unreachable for u ≠ v: the level min(ℓu, ℓv)+1 always
                // separates (one side is empty or {u} ≠ {v}).
                unreachable!("prefix sets of distinct elements must diverge");
            }
        }
    }

    /// The distance `d_i(u, v) = 2^(-r_i(u, v))`.
    pub fn dist(
        &self,
        metric: Metric,
        u: &Element,
        v: &Element,
        budget: &Budget,
    ) -> Result<DyadicDistance> {
        Ok(DyadicDistance {
            exponent: self.rank(metric, u, v, budget)?,
        })
    }
}

fn common_prefix(a: &[Element], b: &[Element]) -> u64 {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count() as u64
}

/// One verified law with its sample tally.
#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub law: String,
    pub samples: u64,
    pub violations: u64,
    pub counterexamples: Vec<CounterexamplePair>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexamplePair {
    pub u: String,
    pub v: String,
}

/// Outcome of the metric-inequality fuzzer.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub laws: Vec<LawReport>,
    /// Pairs skipped because a rank computation ran out of budget.
    pub skipped_budget: u64,
}

impl InequalityReport {
    pub fn total_violations(&self) -> u64 {
        self.laws.iter().map(|l| l.violations).sum()
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Law {
    /// `d3 ≤ d1`, i.e. `r1 ≤ r3`. Holds in every presentation.
    D3LeD1,
    /// `d2 ≤ d1`, i.e. `r1 ≤ r2`. Holds in every presentation.
    D2LeD1,
    /// Trace monoids: `d3 ≤ d2`, i.e. `r2 ≤ r3`.
    D3LeD2,
    /// Trace monoids: `d2^p ≤ 2^p d3`, i.e. `p·r2 + p ≥ r3` with `p = |S|`.
    D2PowP { p: u64 },
    /// Free abelian monoids: `r1 = r2 = r3`.
    AbelianAllEqual,
    /// Free monoids: `r2 = r3`.
    FreeD2EqD3,
    /// Garside monoids: `d1^l ≤ 2^l d3`, i.e. `l·r1 + l ≥ r3` with `l = ℓ(Δ)`.
    GarsidePowL { l: u64 },
}

impl Law {
    fn name(self) -> String {
        match self {
            Law::D3LeD1 => "d3_le_d1".into(),
            Law::D2LeD1 => "d2_le_d1".into(),
            Law::D3LeD2 => "d3_le_d2".into(),
            Law::D2PowP { p } => format!("d2^{p}_le_2^{p}_d3"),
            Law::AbelianAllEqual => "d1_eq_d2_eq_d3".into(),
            Law::FreeD2EqD3 => "d2_eq_d3".into(),
            Law::GarsidePowL { l } => format!("d1^{l}_le_2^{l}_d3"),
        }
    }

    fn holds(self, r1: Rank, r2: Rank, r3: Rank) -> bool {
        match self {
            Law::D3LeD1 => r1 <= r3,
            Law::D2LeD1 => r1 <= r2,
            Law::D3LeD2 => r2 <= r3,
            Law::D2PowP { p } => affine_dominates(p, r2, p, r3),
            Law::AbelianAllEqual => r1 == r2 && r2 == r3,
            Law::FreeD2EqD3 => r2 == r3,
            Law::GarsidePowL { l } => affine_dominates(l, r1, l, r3),
        }
    }
}

/// Is `a·r + c ≥ s`, with infinite ranks dominating every finite value?
fn affine_dominates(a: u64, r: Rank, c: u64, s: Rank) -> bool {
    match (r, s) {
        (Rank::Infinite, _) => true,
        (Rank::Finite(_), Rank::Infinite) => false,
        (Rank::Finite(r), Rank::Finite(s)) => a * r + c >= s,
    }
}

/// Draws `samples` seeded word pairs and checks every metric inequality that
/// applies to the presentation, as exact exponent constraints.
///
/// The sample list is generated up front from the seed alone, so the outcome
/// is byte-identical for any number of worker threads; `jobs` only shards the
/// evaluation work.
pub fn verify_inequalities(
    pres: &ArtinPresentation,
    samples: u64,
    max_len: usize,
    seed: u64,
    budget: &Budget,
    jobs: usize,
) -> InequalityReport {
    let class = pres.classify();
    let mut laws = vec![Law::D3LeD1, Law::D2LeD1];
    if class.is_trace {
        laws.push(Law::D3LeD2);
        laws.push(Law::D2PowP {
            p: pres.rank() as u64,
        });
    }
    if class.is_free_abelian {
        laws.push(Law::AbelianAllEqual);
    }
    if class.is_free {
        laws.push(Law::FreeD2EqD3);
    }
    {
        let probe = Engine::new(pres);
        if let Ok(Some(delta)) = probe.garside_element(budget) {
            laws.push(Law::GarsidePowL {
                l: delta.length() as u64,
            });
        }
    }

    let mut rng = SplitMix64::new(seed);
    let pairs: Vec<(Vec<_>, Vec<_>)> = (0..samples)
        .map(|_| {
            (
                random_word(&mut rng, pres, max_len),
                random_word(&mut rng, pres, max_len),
            )
        })
        .collect();

    // (u, v, r1, r2, r3) per pair, None when the pair ran out of budget.
    type PairRanks = Option<(String, String, Rank, Rank, Rank)>;
    let evaluate = |engine: &Engine, pair: &(Vec<_>, Vec<_>)| -> PairRanks {
        let compute = || -> Result<(String, String, Rank, Rank, Rank)> {
            let u = engine.canonical(&pair.0, budget)?;
            let v = engine.canonical(&pair.1, budget)?;
            let r1 = engine.rank(Metric::Greedy, &u, &v, budget)?;
            let r2 = engine.rank(Metric::Foata, &u, &v, budget)?;
            let r3 = engine.rank(Metric::Prefix, &u, &v, budget)?;
            Ok((
                pres.word_string(u.letters()),
                pres.word_string(v.letters()),
                r1,
                r2,
                r3,
            ))
        };
        compute().ok()
    };

    let results: Vec<PairRanks> = if jobs <= 1 {
        let engine = Engine::new(pres);
        pairs.iter().map(|p| evaluate(&engine, p)).collect()
    } else {
        let chunk = pairs.len().div_ceil(jobs).max(1);
        let mut results = vec![None; pairs.len()];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (slot, work) in results.chunks_mut(chunk).zip(pairs.chunks(chunk)) {
                handles.push(scope.spawn(move || {
                    let engine = Engine::new(pres);
                    for (out, pair) in slot.iter_mut().zip(work) {
                        *out = evaluate(&engine, pair);
                    }
                }));
            }
            for h in handles {
                h.join().expect("fuzz worker panicked");
            }
        });
        results
    };

    let mut skipped = 0u64;
    let mut reports: Vec<LawReport> = laws
        .iter()
        .map(|law| LawReport {
            law: law.name(),
            samples: 0,
            violations: 0,
            counterexamples: Vec::new(),
        })
        .collect();
    for ranks in &results {
        match ranks {
            None => skipped += 1,
            Some((u, v, r1, r2, r3)) => {
                for (law, report) in laws.iter().zip(reports.iter_mut()) {
                    report.samples += 1;
                    if !law.holds(*r1, *r2, *r3) {
                        report.violations += 1;
                        report.counterexamples.push(CounterexamplePair {
                            u: u.clone(),
                            v: v.clone(),
                        });
                    }
                }
            }
        }
    }
    InequalityReport {
        laws: reports,
        skipped_budget: skipped,
    }
}
