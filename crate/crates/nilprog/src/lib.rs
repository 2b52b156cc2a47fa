//! Verification and search toolkit for nilpotent polynomial shift groups,
//! nilprogressions, and restricted van der Waerden certification.
//!
//! The toolkit builds the groups explicitly — each element is a per-coordinate
//! pair (substitution shift, additive polynomial) acting on integer-polynomial
//! tuples — and checks everything computable at desk scale: that word
//! evaluation is injective on the right word classes, that the constructed
//! progressions are non-degenerate, what the nilpotency class actually is, and
//! whether candidate ground sets are partition regular for a pattern family
//! under every r-coloring.

pub mod error;
pub mod group;
pub mod poly;
pub mod progression;
pub mod ramsey;
pub mod words;

pub use error::{Error, Result};
pub use group::{
    left_normed_commutator, nilpotency_report, verify_class_at_most, ClassCheck, CommutatorWitness,
    CoordAffine, GroupConfig, GroupElement, NilpotencyReport,
};
pub use poly::Polynomial;
pub use progression::{
    build, find_in, standard_gen_pool, verify_absence, AbsenceCheck, Nilprogression,
    ProgressionSpec,
};
pub use ramsey::{
    ap_patterns, certify, certify_restricted, coloring_avoids, nilprogression_patterns,
    search_restricted_witness, Certificate, EdgeProvenance, FoundWitness, GroundSet, Outcome,
    PatternFamily, RestrictedReport, SearchScope, WitnessBaseline, WitnessSearchParams,
    WitnessSearchReport,
};
pub use words::{
    count_words, enumerate_words, words_equivalent, Equivalence, Word, WordConvention,
};
