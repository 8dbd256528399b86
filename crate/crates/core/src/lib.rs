//! Executable metastability.
//!
//! A sequence is *metastable* when, for every tolerance `ε` and every
//! sampling `η` (a list of finite index sets with `η_m ⊆ {m, m+1, …}`), some
//! level `m` has all sampled values within `ε` of each other. For a single
//! real sequence this is the same as being Cauchy; for families it gives a
//! notion of uniformity (a *rate* `E(ε, η)` bounding the witness level of
//! every member) that sits strictly between pointwise and uniform
//! convergence.
//!
//! Everything here works at finite scale: sequences are evaluated up to a
//! horizon, samplings are finite prefixes, and families are finite samples.
//! Refutations of a claimed rate are therefore absolute, while
//! certifications only hold for the horizon and samplings that were tested.
//!
//! Module map:
//!
//! * [`metastability`]: oscillation, least witnesses, Cauchy index and
//!   refuting samplings for a single sequence.
//! * [`rates`]: certify, refute and synthesize uniform rates for families.
//! * [`families`]: built-in generators, the sequence-expression language and
//!   trace ingestion.
//! * [`funcspace`]: function sequences on finite point sets, including the
//!   discrete counterexample `g_0, F, g_1, F, …`.
//! * [`logic`]: a continuous propositional logic over `[0,1]` valuations with
//!   rate analysis modulo a theory.
//! * [`commands`] and [`report`]: the command-line driver and JSON reports.

pub mod commands;
pub mod error;
pub mod families;
pub mod funcspace;
pub mod logic;
pub mod metastability;
pub mod numeric;
pub mod par;
pub mod rates;
pub mod report;
pub mod sampling;
pub mod sequence;

pub use error::{Error, Result};
pub use metastability::{cauchy_index, find_witness, oscillation, refuting_sampling, Verdict, Witness};
pub use numeric::{Epsilon, Rational, Scalar};
pub use sampling::{IndexSet, SamplingPrefix};
pub use sequence::{SequenceView, SourceTag};
