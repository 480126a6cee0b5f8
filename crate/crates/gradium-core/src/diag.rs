use crate::grading::GradeError;

/// A static error, tagged with the typing rule that failed.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{rule}: {msg}")]
pub struct TypeError {
    pub rule: &'static str,
    pub msg: String,
}

impl TypeError {
    pub fn new(rule: &'static str, msg: impl Into<String>) -> Self {
        Self { rule, msg: msg.into() }
    }

    pub fn grade(rule: &'static str, e: GradeError) -> Self {
        Self::new(rule, e.to_string())
    }
}

pub type TResult<T> = Result<T, TypeError>;

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// The step budget, from `GRADIUM_STEP_BUDGET` when set.
pub fn step_budget() -> u64 {
    std::env::var("GRADIUM_STEP_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_STEP_BUDGET)
}

/// A runtime failure of one of the evaluators.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    /// No rule applies; on checked input this is a defect.
    #[error("stuck: {0}")]
    Stuck(String),
    #[error("step budget of {0} exhausted")]
    Budget(u64),
    /// A grade side condition failed.
    #[error("{rule}: {msg}")]
    Violation { rule: &'static str, msg: String },
    /// A junk value was looked up or inspected.
    #[error("{rule}: junk value used")]
    Junk { rule: &'static str },
    #[error("{0}")]
    Refused(String),
}

impl EvalError {
    pub fn violation(rule: &'static str, msg: impl Into<String>) -> Self {
        EvalError::Violation { rule, msg: msg.into() }
    }

    /// True when the failure indicates a bug rather than bad input.
    pub fn is_defect(&self) -> bool {
        matches!(self, EvalError::Stuck(_) | EvalError::Budget(_))
    }
}

/// Counts rule applications against a budget.
#[derive(Clone, Debug)]
pub struct Fuel {
    pub used: u64,
    pub limit: u64,
}

impl Fuel {
    pub fn new(limit: u64) -> Self {
        Self { used: 0, limit }
    }

    pub fn tick(&mut self) -> Result<(), EvalError> {
        self.used += 1;
        if self.used > self.limit {
            Err(EvalError::Budget(self.limit))
        } else {
            Ok(())
        }
    }
}
