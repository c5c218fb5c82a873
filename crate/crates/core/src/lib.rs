//! Automated theorem proving for first-order logic with recursive
//! definitions, by counterexample-guided synthesis of inductive lemmas.
//!
//! The pipeline, bottom up:
//!
//! * [`logic`] — sorted syntax trees for terms, formulas, and recursive
//!   definitions, with parsing, printing, substitution, and positivity
//!   checking.
//! * [`natproofs`] — the first-order reasoning substrate: fixpoint
//!   abstraction of recursive definitions, Skolemization, depth-bounded
//!   ground-term generation, and quantifier instantiation.
//! * [`induction`] — pre-fixpoint obligations (the induction step of a
//!   lemma) and induction-principle formulas.
//! * [`smt`] — an SMT-LIB2 client that drives an external solver over a
//!   subprocess pipe and extracts finite partial models.
//! * [`model`] — finite-model machinery: three-valued evaluation, least
//!   fixpoint evaluation, random model generation, universal models.
//! * [`synth`] — the lemma proposer: a fair size-ordered enumerator plus
//!   a constraint filter over finite models, and a SyGuS-IF emitter.
//! * [`engine`] — the top-level counterexample-guided loops.

pub mod engine;
pub mod induction;
pub mod logic;
pub mod model;
pub mod natproofs;
pub mod smt;
pub mod synth;

pub use engine::{dovetail, Algorithm, Budgets, RunOutcome, RunResult};
pub use logic::{Formula, Lemma, Problem, RecDef, Signature, Sort, Term};
pub use smt::{SatResult, SolverConfig};
