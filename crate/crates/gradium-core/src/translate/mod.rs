//! Source λ-calculi, their type checkers, and type-preserving translations
//! into graded CBPV.

mod check;
pub mod interp;
mod parse;
mod source;
mod tr;

use std::fmt;
use std::str::FromStr;

pub use check::{check_type, src_check, SrcGrading, SrcJudgement};
pub use parse::{declared_dialect, parse_scontext, parse_source, parse_term, parse_type, SourceProgram, SrcGrades};
pub use source::{ExtBind, Latent, STerm, SType};
pub use tr::{check_preservation, translate, translate_context, translate_type, Preserved, PreservationError, TargetGrading};

/// A source typing context, outermost first.
pub type SContext = Vec<(String, SType)>;

/// The four source calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lang {
    /// Type-and-effect system with latent effects on arrows.
    Effect,
    /// Pure λ-calculus with a graded monad.
    Monadic,
    /// Type-and-coeffect system with `Box^q`.
    Coeffect,
    /// Linear λ-calculus with a graded comonad.
    Comonadic,
}

impl Lang {
    pub fn algebra_kind(self) -> &'static str {
        match self {
            Lang::Effect | Lang::Monadic => "an effect",
            Lang::Coeffect | Lang::Comonadic => "a coeffect",
        }
    }

    pub fn is_effect(self) -> bool {
        matches!(self, Lang::Effect | Lang::Monadic)
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lang::Effect => "effect",
            Lang::Monadic => "monadic",
            Lang::Coeffect => "coeffect",
            Lang::Comonadic => "comonadic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Cbv,
    Cbn,
}

/// A calculus paired with an evaluation strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dialect {
    pub lang: Lang,
    pub strategy: Strategy,
}

impl Dialect {
    pub const ALL: [Dialect; 7] = [
        Dialect::new(Lang::Effect, Strategy::Cbv),
        Dialect::new(Lang::Monadic, Strategy::Cbn),
        Dialect::new(Lang::Monadic, Strategy::Cbv),
        Dialect::new(Lang::Coeffect, Strategy::Cbn),
        Dialect::new(Lang::Coeffect, Strategy::Cbv),
        Dialect::new(Lang::Comonadic, Strategy::Cbn),
        Dialect::new(Lang::Comonadic, Strategy::Cbv),
    ];

    pub const fn new(lang: Lang, strategy: Strategy) -> Self {
        Dialect { lang, strategy }
    }

    pub fn name(self) -> &'static str {
        match (self.lang, self.strategy) {
            (Lang::Effect, Strategy::Cbv) => "cbv-eff",
            (Lang::Effect, Strategy::Cbn) => "cbn-eff",
            (Lang::Monadic, Strategy::Cbn) => "cbn-mon",
            (Lang::Monadic, Strategy::Cbv) => "cbv-mon",
            (Lang::Coeffect, Strategy::Cbn) => "cbn-co",
            (Lang::Coeffect, Strategy::Cbv) => "cbv-co",
            (Lang::Comonadic, Strategy::Cbn) => "cbn-comonad",
            (Lang::Comonadic, Strategy::Cbv) => "cbv-comonad",
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "cbn-eff" {
            return Err("the effect calculus has only a call-by-value translation".into());
        }
        Dialect::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown dialect `{s}`"))
    }
}
