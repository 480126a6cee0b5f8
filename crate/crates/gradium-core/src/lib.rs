//! Graded call-by-push-value: effect and coeffect type systems, their
//! evaluators, source-language translations and randomized checks.

pub mod grading;
pub mod syntax;
pub mod diag;
pub mod effect_system;
pub mod unify;
pub mod effect_eval;
pub mod env;
pub mod coeffect_system;
pub mod coeffect_eval;
pub mod translate;
pub mod harness;
