//! Exact, finite-scale kernel for quantale-enriched category theory: the
//! V-matrix quantaloid, topological theories with their lax extensions,
//! T-categories and T-functors, distributors with Kleisli convolution,
//! classes Φ of distributors, Φ-presheaf completions, and the audit
//! machinery that checks injectivity/cocompleteness equivalences by
//! exhaustive search on small carriers.

// Dense index loops over parallel tables are the house style of this
// matrix kernel; the iterator rewrites clippy suggests obscure them.
#![allow(clippy::needless_range_loop)]

pub mod completion;
pub mod distributor;
pub mod enumerate;
pub mod instances;
pub mod phiclass;
pub mod quantale;
pub mod report;
pub mod tcategory;
pub mod theory;
pub mod vmatrix;

use thiserror::Error as ThisError;

pub use completion::{
    cocomplete_check, cocomplete_check_with, cocontinuous_check, colimit, covariant_presheaf_cat,
    inverse_image, kan_check, kz_audit, phi_functor, presheaf_cat, split_fork_audit, sup_phi,
    yoneda, yoneda_phi, CocompleteRecord, CovariantPresheafCategory, InjectivityUniverse,
    PresheafCategory, SupOutcome, SupSearch,
};
pub use distributor::Distributor;
pub use phiclass::{ar_factorize, LimitKind, PhiClass};
pub use quantale::{Quantale, Value};
pub use report::{AuditEntry, AuditReport};
pub use tcategory::{adjoint_pair, TCategory, TFunctor};
pub use theory::{Monad, MonadKind, Theory};
pub use vmatrix::{compose, right_extension, right_lifting, FinSet, SetFun, VMatrix};

/// Enumeration caps for the audit machinery. Every cap is overridable; the
/// defaults keep all audits within desk-scale runtimes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Maximum carrier size for enumerated T-categories.
    pub carrier: usize,
    /// Maximum finite quantale size admitted in enumerations.
    pub finite_v: usize,
    /// Maximum |B| in the bounded injectivity search.
    pub injective_b: usize,
    /// Maximum |ΦX| before the ΦΦX audit refuses.
    pub phiphi: usize,
    /// Maximum |V|^{|TX|} for presheaf/exponential carriers.
    pub presheaf_space: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { carrier: 4, finite_v: 3, injective_b: 4, phiphi: 6, presheaf_space: 256 }
    }
}

/// Errors shared across the toolkit. Structural violations (category,
/// functor, distributor axioms) carry their own witness-bearing payloads.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("unknown builtin quantale `{0}`")]
    UnknownQuantale(String),
    #[error("chain quantale needs at least 2 elements, got {0}")]
    ChainTooSmall(usize),
    #[error("not a lattice: `{0}` and `{1}` have no {2}")]
    NotLattice(String, String, &'static str),
    #[error("unknown monad `{0}`")]
    UnknownMonad(String),
    #[error("quantale `{0}` is not supported by theory `{1}`")]
    TheoryQuantale(String, String),
    #[error("theory `{0}` is unaudited; run its audit and enable it first")]
    UnauditedTheory(String),
    #[error("quantale `{0}` is infinite; this operation needs a finite carrier")]
    InfiniteQuantale(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("capability violation: {0}")]
    Capability(String),
    #[error("category axiom violated: {0}")]
    Category(String),
    #[error("functor axiom violated: {0}")]
    Functor(String),
    #[error("distributor axiom violated: {0}")]
    Distributor(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("{0}")]
    Invalid(String),
}
