//! Report types shared by the human and JSON renderers.

use serde::Serialize;

/// Why a command failed, mapped onto the exit status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Usage,
    Parse,
    Type,
    Grade,
    Property,
    Defect,
}

impl Kind {
    pub fn exit_code(&self) -> i32 {
        match self {
            Kind::Usage | Kind::Parse | Kind::Type | Kind::Grade => 1,
            Kind::Property => 2,
            Kind::Defect => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostic {
    pub kind: Kind,
    /// The violated rule, when one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
}

impl Diagnostic {
    pub fn new(kind: Kind, rule: Option<&str>, message: impl Into<String>) -> Self {
        Self {
            kind,
            rule: rule.map(str::to_string),
            message: message.into(),
            line: None,
            col: None,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Kind::Usage, None, message)
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error")?;
        if let (Some(l), Some(c)) = (self.line, self.col) {
            write!(f, " at {l}:{c}")?;
        }
        match &self.rule {
            Some(r) => write!(f, " [{r}]: {}", self.message),
            None => write!(f, ": {}", self.message),
        }
    }
}

/// A context entry with its grade.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Graded {
    pub name: String,
    pub grade: String,
}

/// Dynamic usage of one top-level slot.
#[derive(Clone, Debug, Serialize)]
pub struct Usage {
    pub name: String,
    pub used: u64,
    pub grade: String,
    pub within: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub mode: String,
    pub algebra: String,
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effect: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grades: Option<Vec<Graded>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub mode: String,
    pub algebra: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semantics: Option<String>,
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub static_effect: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grades: Option<Vec<Graded>>,
    pub terminal: String,
    /// Runtime effect.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effect: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub usage: Option<Vec<Usage>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TranslateReport {
    pub dialect: String,
    pub algebra: String,
    pub source_type: String,
    pub source_grading: String,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_context: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_grading: Option<String>,
    pub checked: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub term: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub suite: String,
    pub algebra: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<Counterexample>,
    pub defects: Vec<Counterexample>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Body {
    Check(CheckReport),
    Run(RunReport),
    Translate(TranslateReport),
    Soundness(SoundnessReport),
    Error { error: Diagnostic },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
    Error,
}

/// The top-level JSON document every command prints.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub status: Status,
    #[serde(flatten)]
    pub body: Body,
    pub elapsed_ms: f64,
}

fn row(out: &mut String, k: &str, v: &str) {
    out.push_str(&format!("{:<10}{v}\n", format!("{k}:")));
}

fn graded(gs: &[Graded]) -> String {
    if gs.is_empty() {
        return "(empty context)".into();
    }
    gs.iter().map(|g| format!("{}={}", g.name, g.grade)).collect::<Vec<_>>().join(", ")
}

impl Body {
    /// The deterministic human-readable rendering.
    pub fn human(&self) -> String {
        let mut s = String::new();
        match self {
            Body::Check(r) => {
                row(&mut s, "type", &r.ty);
                if let Some(e) = &r.effect {
                    row(&mut s, "effect", e);
                }
                if let Some(g) = &r.grades {
                    row(&mut s, "grades", &graded(g));
                }
            }
            Body::Run(r) => {
                row(&mut s, "type", &r.ty);
                if let Some(g) = &r.grades {
                    row(&mut s, "grades", &graded(g));
                }
                row(&mut s, "terminal", &r.terminal);
                if let (Some(e), Some(st)) = (&r.effect, &r.static_effect) {
                    row(&mut s, "effect", &format!("{e} (static bound {st})"));
                }
                if let Some(us) = &r.usage {
                    let shown: Vec<String> = us.iter().map(|u| format!("{}={}/{}", u.name, u.used, u.grade)).collect();
                    row(&mut s, "usage", &if shown.is_empty() { "(empty context)".into() } else { shown.join(", ") });
                }
            }
            Body::Translate(r) => {
                row(&mut s, "source", &format!("{} ({})", r.source_type, r.source_grading));
                row(&mut s, "target", &r.target);
                if let (Some(t), Some(g)) = (&r.target_type, &r.target_grading) {
                    if let Some(c) = &r.target_context {
                        row(&mut s, "context", if c.is_empty() { "(empty)" } else { c });
                    }
                    row(&mut s, "checks", &format!("{t} at {g}"));
                }
            }
            Body::Soundness(r) => {
                s.push_str(&format!(
                    "{} [{}] seed {}: {}/{} trials passed\n",
                    r.suite, r.algebra, r.seed, r.passed, r.trials
                ));
                for n in &r.notes {
                    s.push_str(&format!("  note: {n}\n"));
                }
                for (tag, fs) in [("failure", &r.failures), ("defect", &r.defects)] {
                    for f in fs {
                        s.push_str(&format!("  {tag} at seed {}: {}\n    {}\n", f.seed, f.message, f.term));
                    }
                }
            }
            Body::Error { error } => s.push_str(&format!("{error}\n")),
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let codes: Vec<i32> = [Kind::Usage, Kind::Parse, Kind::Type, Kind::Grade, Kind::Property, Kind::Defect]
            .iter()
            .map(Kind::exit_code)
            .collect();
        assert_eq!(codes, [1, 1, 1, 1, 2, 3]);
    }

    #[test]
    fn diagnostics_name_their_rule() {
        let d = Diagnostic::new(Kind::Type, Some("coeff-var"), "x used twice");
        assert_eq!(d.to_string(), "error [coeff-var]: x used twice");
    }
}
