//! Exact combinatorics of finite projective spaces PG(k,q) and their
//! non-singular quadrics: field arithmetic, subspace enumeration, section
//! counting, hyperplane-family analysis, and exhaustive searches.
//!
//! Everything is exact integer and finite-field arithmetic — no floating
//! point anywhere — and every enumeration order is deterministic and frozen,
//! so identical inputs give byte-identical results across runs and
//! platforms. The crate is `no_std` (with `alloc`); IO, file formats, and
//! the command-line front end live in the companion `pgfam` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod gf;
mod linalg;
pub mod pg;
pub mod quadric;
pub mod search;
pub mod sigma;

pub use gf::{Elem, Gf, GfError};
pub use pg::{Codim2Subspace, Hyperplane, PgError, ProjPoint, ProjSpace};
pub use quadric::{
    expected_counts, standard_form, Codim2Section, CountTable, HyperplaneSection, Kind,
    QuadraticForm, Quadric, QuadricError, Sign,
};
pub use search::{
    backtracking_search, consistency_suite, exhaustive_search_pg32, lemma_divisibility,
    ConsistencyReport, NoopObserver, SearchLimits, SearchObserver, SearchResult, StopCause,
};
pub use sigma::{
    Classification, FamilyAnalysis, HyperplaneFamily, P1Report, P2Report, SigmaError,
    TheoremViolation, VerdictKind,
};
