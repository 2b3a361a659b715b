//! Artin monoid presentations.
//!
//! A presentation is an ordered list of atoms together with a Coxeter matrix
//! `(m_ab)`: for every unordered pair of distinct atoms, an entry `m >= 2` or
//! infinity. The monoid is generated by the atoms subject to the relation
//! `[a,b>^m = [b,a>^m` for every finite entry, where `[a,b>^m` is the
//! alternating product `aba…` with `m` letters. All relations preserve word
//! length, which is what makes the exhaustive word-problem engine possible.
//!
//! Infinite entries are never stored: absence of a pair in the matrix (and in
//! the file format) means `m = ∞`.
//!
//! # File format
//!
//! UTF-8, line oriented, `#` starts a comment. The first content line must
//! declare the atoms; every following line adds one finite matrix entry:
//!
//! ```text
//! atoms s t u
//! m s t 3
//! m s u 2
//! ```
//!
//! Omitted pairs (here `t u`) get `m = ∞`. Atom names are ASCII identifiers
//! and words are space-separated atom names, so multi-character atom names
//! parse unambiguously.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a generator in its presentation's atom list.
///
/// Declaration order doubles as the total order on atoms, which in turn
/// defines the lexicographic order used for canonical words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u8);

impl Atom {
    pub(crate) fn new(index: usize) -> Atom {
        debug_assert!(index < 256);
        Atom(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Coarse classification of a presentation by its finite Coxeter entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresentationClass {
    /// Every finite entry is 2, i.e. all relations are commutations.
    pub is_trace: bool,
    /// No finite entries at all.
    pub is_free: bool,
    /// Every pair has entry 2.
    pub is_free_abelian: bool,
}

/// A validated Artin presentation: atom names plus the Coxeter matrix.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinPresentation {
    atoms: Vec<String>,
    index: HashMap<String, Atom>,
    /// Symmetric matrix, row-major `rank * rank`; `None` means infinity.
    /// The diagonal is unused (by convention `m_aa = 1` and is never stored).
    matrix: Vec<Option<u32>>,
}

impl ArtinPresentation {
    /// Builds a presentation from atom names and finite entries `(a, b, m)`.
    pub fn new<S: AsRef<str>>(atoms: &[S], entries: &[(&str, &str, u32)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::PresentationSyntax("empty atom list".into()));
        }
        if atoms.len() > 255 {
            return Err(Error::PresentationSyntax(format!(
                "too many atoms ({}, at most 255 supported)",
                atoms.len()
            )));
        }
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(atoms.len());
        for (i, name) in atoms.iter().enumerate() {
            let name = name.as_ref();
            if name.is_empty() || !name.bytes().all(|b| b.is_ascii_graphic() && b != b'#') {
                return Err(Error::PresentationSyntax(format!(
                    "atom name `{name}` is not a printable ASCII identifier"
                )));
            }
            if index.insert(name.to_owned(), Atom::new(i)).is_some() {
                return Err(Error::DuplicateAtom(name.to_owned()));
            }
            names.push(name.to_owned());
        }
        let rank = names.len();
        let mut pres = ArtinPresentation {
            atoms: names,
            index,
            matrix: vec![None; rank * rank],
        };
        for &(a, b, m) in entries {
            let a_atom = pres.atom(a)?;
            let b_atom = pres.atom(b)?;
            pres.set_entry(a, b, a_atom, b_atom, m)?;
        }
        Ok(pres)
    }

    fn set_entry(&mut self, a: &str, b: &str, a_atom: Atom, b_atom: Atom, m: u32) -> Result<()> {
        if a_atom == b_atom {
            return Err(Error::PresentationSyntax(format!(
                "entry m({a},{b}) on the diagonal (the diagonal is implicit)"
            )));
        }
        if m < 2 {
            return Err(Error::EntryTooSmall {
                a: a.to_owned(),
                b: b.to_owned(),
                m: m as i64,
            });
        }
        let rank = self.atoms.len();
        let cell = a_atom.index() * rank + b_atom.index();
        if let Some(first) = self.matrix[cell] {
            if first != m {
                return Err(Error::ConflictingEntry {
                    a: a.to_owned(),
                    b: b.to_owned(),
                    first,
                    second: m,
                });
            }
            return Ok(());
        }
        self.matrix[cell] = Some(m);
        self.matrix[b_atom.index() * rank + a_atom.index()] = Some(m);
        Ok(())
    }

    /// Parses the line-oriented file format described in the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut atoms: Option<Vec<&str>> = None;
        let mut entries: Vec<(&str, &str, u32)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let keyword = fields.next().unwrap();
            match keyword {
                "atoms" => {
                    if atoms.is_some() {
                        return Err(Error::PresentationSyntax(format!(
                            "line {}: repeated `atoms` line",
                            lineno + 1
                        )));
                    }
                    let listed: Vec<&str> = fields.collect();
                    if listed.is_empty() {
                        return Err(Error::PresentationSyntax(format!(
                            "line {}: `atoms` declares nothing",
                            lineno + 1
                        )));
                    }
                    atoms = Some(listed);
                }
                "m" => {
                    if atoms.is_none() {
                        return Err(Error::PresentationSyntax(format!(
                            "line {}: `m` entry before the `atoms` line",
                            lineno + 1
                        )));
                    }
                    let (a, b, k) = match (fields.next(), fields.next(), fields.next()) {
                        (Some(a), Some(b), Some(k)) => (a, b, k),
                        _ => {
                            return Err(Error::PresentationSyntax(format!(
                                "line {}: expected `m <a> <b> <k>`",
                                lineno + 1
                            )))
                        }
                    };
                    if fields.next().is_some() {
                        return Err(Error::PresentationSyntax(format!(
                            "line {}: trailing tokens after `m {a} {b} {k}`",
                            lineno + 1
                        )));
                    }
                    let m: i64 = k.parse().map_err(|_| {
                        Error::PresentationSyntax(format!(
                            "line {}: `{k}` is not an integer",
                            lineno + 1
                        ))
                    })?;
                    if m < 2 {
                        return Err(Error::EntryTooSmall {
                            a: a.to_owned(),
                            b: b.to_owned(),
                            m,
                        });
                    }
                    entries.push((a, b, m as u32));
                }
                other => {
                    return Err(Error::PresentationSyntax(format!(
                        "line {}: unknown keyword `{other}`",
                        lineno + 1
                    )));
                }
            }
        }
        let atoms = atoms.ok_or_else(|| {
            Error::PresentationSyntax("missing `atoms` line".into())
        })?;
        ArtinPresentation::new(&atoms, &entries)
    }

    /// Serializes back to the file format. `parse ∘ serialize` is the
    /// identity on valid presentations.
    pub fn serialize(&self) -> String {
        let mut out = String::from("atoms");
        for name in &self.atoms {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for i in 0..self.rank() {
            for j in (i + 1)..self.rank() {
                if let Some(m) = self.matrix[i * self.rank() + j] {
                    out.push_str(&format!("m {} {} {}\n", self.atoms[i], self.atoms[j], m));
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.rank()).map(Atom::new)
    }

    pub fn atom_name(&self, a: Atom) -> &str {
        &self.atoms[a.index()]
    }

    /// Looks an atom up by name.
    pub fn atom(&self, name: &str) -> Result<Atom> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAtom(name.to_owned()))
    }

    /// The Coxeter entry for two distinct atoms; `None` means infinity.
    pub fn coxeter(&self, a: Atom, b: Atom) -> Option<u32> {
        debug_assert_ne!(a, b, "the diagonal of the Coxeter matrix is implicit");
        self.matrix[a.index() * self.rank() + b.index()]
    }

    /// Parses a space-separated word; the empty string is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Atom>> {
        text.split_whitespace().map(|name| self.atom(name)).collect()
    }

    /// Renders a word as space-separated atom names; identity is "".
    pub fn word_string(&self, word: &[Atom]) -> String {
        word.iter()
            .map(|&a| self.atom_name(a))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn classify(&self) -> PresentationClass {
        let rank = self.rank();
        let mut finite = Vec::new();
        let mut pairs = 0usize;
        for i in 0..rank {
            for j in (i + 1)..rank {
                pairs += 1;
                if let Some(m) = self.matrix[i * rank + j] {
                    finite.push(m);
                }
            }
        }
        PresentationClass {
            is_trace: finite.iter().all(|&m| m == 2),
            is_free: finite.is_empty(),
            is_free_abelian: finite.len() == pairs && finite.iter().all(|&m| m == 2),
        }
    }
}

impl fmt::Display for ArtinPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dihedral() {
        let p = ArtinPresentation::parse("atoms s t\nm s t 3\n").unwrap();
        assert_eq!(p.rank(), 2);
        let (s, t) = (p.atom("s").unwrap(), p.atom("t").unwrap());
        assert_eq!(p.coxeter(s, t), Some(3));
        assert_eq!(p.coxeter(t, s), Some(3));
    }

    #[test]
    fn omitted_pairs_are_infinite() {
        let p = ArtinPresentation::parse("atoms a b c\nm a b 4\nm a c 2\n").unwrap();
        let (b, c) = (p.atom("b").unwrap(), p.atom("c").unwrap());
        assert_eq!(p.coxeter(b, c), None);
    }

    #[test]
    fn rejects_entry_below_two() {
        let err = ArtinPresentation::parse("atoms s t\nm s t 1\n").unwrap_err();
        assert!(matches!(err, Error::EntryTooSmall { .. }));
    }

    #[test]
    fn rejects_duplicate_atom() {
        let err = ArtinPresentation::parse("atoms s s\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateAtom(_)));
    }

    #[test]
    fn rejects_unknown_atom_in_entry() {
        let err = ArtinPresentation::parse("atoms s t\nm s x 3\n").unwrap_err();
        assert!(matches!(err, Error::UnknownAtom(_)));
    }

    #[test]
    fn rejects_conflicting_entries() {
        let err = ArtinPresentation::parse("atoms s t\nm s t 3\nm t s 4\n").unwrap_err();
        assert!(matches!(err, Error::ConflictingEntry { .. }));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let p = ArtinPresentation::parse("# dihedral\n\natoms s t # two atoms\nm s t 5\n").unwrap();
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn serialize_round_trips() {
        let text = "atoms s t u\nm s t 2\nm s u 3\nm t u 3\n";
        let p = ArtinPresentation::parse(text).unwrap();
        assert_eq!(ArtinPresentation::parse(&p.serialize()).unwrap(), p);
    }

    #[test]
    fn classify_free_abelian() {
        let p = ArtinPresentation::new(&["a", "b"], &[("a", "b", 2)]).unwrap();
        let c = p.classify();
        assert!(c.is_free_abelian && c.is_trace && !c.is_free);
    }

    #[test]
    fn classify_free() {
        let p = ArtinPresentation::new(&["a", "b"], &[]).unwrap();
        let c = p.classify();
        assert!(c.is_free && c.is_trace && !c.is_free_abelian);
    }

    #[test]
    fn classify_dihedral_is_neither() {
        let p = ArtinPresentation::new(&["s", "t"], &[("s", "t", 3)]).unwrap();
        let c = p.classify();
        assert!(!c.is_trace && !c.is_free && !c.is_free_abelian);
    }

    #[test]
    fn classification_implications_hold() {
        for text in [
            "atoms a\n",
            "atoms a b\nm a b 2\n",
            "atoms a b c\nm a b 2\n",
            "atoms a b\n",
        ] {
            let c = ArtinPresentation::parse(text).unwrap().classify();
            assert!(!c.is_free_abelian || c.is_trace);
            assert!(!c.is_free || c.is_trace);
        }
    }

    #[test]
    fn word_parsing_round_trips() {
        let p = ArtinPresentation::new(&["s", "t"], &[("s", "t", 3)]).unwrap();
        let w = p.parse_word("s t s").unwrap();
        assert_eq!(p.word_string(&w), "s t s");
        assert!(p.parse_word("").unwrap().is_empty());
        assert!(p.parse_word("s x").is_err());
    }
}
