//! Crate-wide error type.
//!
//! Resource limits (`BudgetExceeded`) are kept distinct from mathematical
//! answers: an operation either returns an exact result or reports that it
//! ran out of budget, never a guess. Violations of theorem-backed internal
//! invariants (uniqueness of gcd maxima, balance of the Garside element, …)
//! are not represented here; they abort via `panic!` because they can only
//! mean a bug in the engine itself.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed presentation file (missing `atoms` line, bad integer, …).
    #[error("presentation: {0}")]
    PresentationSyntax(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("m({a},{b}) = {m}: off-diagonal Coxeter entries must be at least 2")]
    EntryTooSmall { a: String, b: String, m: i64 },
    #[error("conflicting entries for m({a},{b}): {first} and then {second}")]
    ConflictingEntry {
        a: String,
        b: String,
        first: u32,
        second: u32,
    },

    /// Malformed endomorphism file.
    #[error("endomorphism: {0}")]
    EndoSyntax(String),
    #[error("atom `{0}` has no image")]
    MissingAtomImage(String),
    #[error("atom `{0}` is mapped more than once")]
    DuplicateAtomImage(String),
    /// The images do not satisfy the defining relation on the named pair.
    #[error("images violate the relation on `{a}`, `{b}`")]
    RelationViolated { a: String, b: String },

    /// A search or enumeration hit a resource cap. This signals a limit of
    /// the computation, never a mathematical fact.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("`{divisor}` does not {side}-divide `{of}`")]
    NotADivisor {
        divisor: String,
        of: String,
        side: &'static str,
    },
    #[error("support is only defined in trace monoids")]
    NotATraceMonoid,
    /// The letter-erasing map sends the two sides of a defining relation to
    /// different elements, so it does not induce a morphism.
    #[error("projection is ill-defined on the relation for `{a}`, `{b}`")]
    ProjectionIllDefined { a: String, b: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code used by the command line tool: 2 for resource limits,
    /// 3 for invalid input or unmet preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) => 2,
            _ => 3,
        }
    }
}
