//! Workbench for a nonclassical first-order theory of sets and functions
//! and its companion set-matrix theory.
//!
//! The crate is organised around seven subsystems:
//!
//! - [`syntax`]: multi-sorted terms and formulas, substitution,
//!   alpha-equivalence, well-formedness per language.
//! - [`parser`]: concrete ASCII syntax, pretty-printer, proof-script reader.
//! - [`theories`]: axiom catalogs and schema instantiators.
//! - [`kernel`]: step-by-step proof checker for Hilbert-style inference
//!   plus the nonstandard conjunctive-operator and family-quantifier rules.
//! - [`translator`]: the interpretation map from the standard fragment of
//!   the set/function language into the 1x2 set-matrix language.
//! - [`modelcheck`]: finite structures over hereditarily finite sets with
//!   function objects, exhaustive evaluation, axiom reports.
//! - [`saturate`]: bounded staged closure under selected inference rules
//!   with contradiction detection.

pub mod kernel;
pub mod modelcheck;
pub mod parser;
pub mod saturate;
pub mod syntax;
pub mod theories;
pub mod translator;

pub use syntax::{Formula, LanguageId, Sort, Term};

