//! Structured validation reports shared by every validator.

use std::fmt;

use serde::Serialize;

/// The identity a validator found violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    DSquared,
    CompositionDegree,
    Leibniz,
    Associativity,
    LeftUnit,
    RightUnit,
    UnitDegree,
    UnitClosed,
    FunctorDegree,
    FunctorChainMap,
    FunctorUnit,
    FunctorComposition,
    ActionDegree,
    ActionUnit,
    ActionComposition,
    ActionDifferential,
    NaturalityDegree,
    Naturality,
    Shape,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::DSquared => "d-squared",
            Identity::CompositionDegree => "composition-degree",
            Identity::Leibniz => "leibniz",
            Identity::Associativity => "associativity",
            Identity::LeftUnit => "left-unit",
            Identity::RightUnit => "right-unit",
            Identity::UnitDegree => "unit-degree",
            Identity::UnitClosed => "unit-closed",
            Identity::FunctorDegree => "functor-degree",
            Identity::FunctorChainMap => "functor-chain-map",
            Identity::FunctorUnit => "functor-unit",
            Identity::FunctorComposition => "functor-composition",
            Identity::ActionDegree => "action-degree",
            Identity::ActionUnit => "action-unit",
            Identity::ActionComposition => "action-composition",
            Identity::ActionDifferential => "action-differential",
            Identity::NaturalityDegree => "naturality-degree",
            Identity::Naturality => "naturality",
            Identity::Shape => "shape",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One violated identity, with the objects involved and a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: Identity,
    pub objects: Vec<String>,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at ({}): {}",
            self.identity,
            self.objects.join(","),
            self.witness
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, identity: Identity) -> bool {
        self.violations.iter().any(|v| v.identity == identity)
    }

    pub fn push(&mut self, identity: Identity, objects: Vec<String>, witness: impl Into<String>) {
        self.violations.push(Violation {
            identity,
            objects,
            witness: witness.into(),
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        writeln!(f, "fail ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Three-valued answer for checks that are only semi-decidable over Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    /// Conjunction: any `No` wins, then any `Unknown`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Yes,
        }
    }

    pub fn all(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        items.into_iter().fold(Verdict::Yes, Verdict::and)
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}
