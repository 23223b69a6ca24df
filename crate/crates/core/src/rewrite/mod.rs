//! Equivalence-based rewriting.
//!
//! Terms are rewritten on their name-preserving prenex form, so matching
//! is modulo associativity, commutativity and units of `||` and
//! distributor targets are multisets. A [`Lemma`] is a bisimilarity between
//! two patterns that holds whenever certain side components are present
//! alongside the match; those components are required but left in place.

mod apply;
mod lemma;
mod script;

pub use apply::{
    check_lemma_instance, find_matches, match_and_apply, validate_lemma_instance, Applied, Direction, RewriteError,
};
pub use lemma::{
    bridge_is_unary_distributor, catalog, distributor_splitting, duploser_decomposition, lookup, Binding, Component,
    Instantiation, Lemma, Target,
};
pub use script::{run_script, ProofScript, ProofTrace, ScriptOptions, StepSpec, TermSpec, TraceStep};
