//! Deterministic encodings of non-deterministic computation.
//!
//! A non-deterministic function is one that may return any of several
//! values for a single input. This crate embeds such functions in plain
//! deterministic Rust in two interchangeable ways:
//!
//! * [`tree`] — the *set of values* encoding: a computation returns a
//!   binary [`NDTree`] holding every value it could produce, with
//!   explicit failure leaves.
//! * [`plan`] — the *planned choices* encoding: a computation takes a
//!   [`ChoicePlan`] oracle that pre-decides every binary choice, making
//!   the function itself deterministic.
//!
//! On top of the encodings sit:
//!
//! * [`programs`] — classic non-deterministic example programs
//!   (permutations, insertion, even/odd neighbours, minimum selection,
//!   last-of-list) written in both encodings plus their deterministic
//!   counterparts.
//! * [`eval`] — a miniature first-order functional-logic core language
//!   with selectable choice semantics (call-time vs run-time) and
//!   evaluation strategy (eager vs lazy).
//! * [`laws`] — an executable law suite re-checking the algebraic
//!   properties the encodings promise, with counterexample shrinking
//!   and a mutant battery.

pub mod eval;
// pub mod laws;
pub mod plan;
pub mod programs;
pub mod tree;

pub use plan::{enumerate_plans, ChoicePlan, PlanBudget};
pub use tree::{always, NDTree, Step, Witness};
