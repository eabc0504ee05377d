use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// `|computed - expected| <= tolerance`
    Within,
    /// `computed < expected`
    Below,
    /// `computed > expected`
    Above,
    /// A yes/no condition; `computed` is 1 when it holds.
    Holds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub kind: CheckKind,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Reported value that is not compared against anything.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Note {
    pub quantity: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub experiment: String,
    pub checks: Vec<Check>,
    pub notes: Vec<Note>,
    pub verdict: bool,
}

impl ComparisonReport {
    pub fn new(experiment: &str) -> Self {
        Self { experiment: experiment.to_string(), checks: Vec::new(), notes: Vec::new(), verdict: true }
    }

    fn push(&mut self, quantity: impl Into<String>, kind: CheckKind, expected: f64, computed: f64, tolerance: f64, pass: bool) {
        self.verdict &= pass;
        self.checks.push(Check { quantity: quantity.into(), kind, expected, computed, tolerance, pass });
    }

    pub fn within(&mut self, quantity: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> bool {
        let pass = (computed - expected).abs() <= tolerance;
        self.push(quantity, CheckKind::Within, expected, computed, tolerance, pass);
        pass
    }

    pub fn below(&mut self, quantity: impl Into<String>, limit: f64, computed: f64) -> bool {
        let pass = computed < limit;
        self.push(quantity, CheckKind::Below, limit, computed, 0.0, pass);
        pass
    }

    pub fn above(&mut self, quantity: impl Into<String>, limit: f64, computed: f64) -> bool {
        let pass = computed > limit;
        self.push(quantity, CheckKind::Above, limit, computed, 0.0, pass);
        pass
    }

    pub fn holds(&mut self, quantity: impl Into<String>, condition: bool) -> bool {
        self.push(quantity, CheckKind::Holds, 1.0, f64::from(u8::from(condition)), 0.0, condition);
        condition
    }

    pub fn note(&mut self, quantity: impl Into<String>, value: f64) {
        self.notes.push(Note { quantity: quantity.into(), value });
    }

    pub fn check(&self, quantity: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.quantity == quantity)
    }

    pub fn note_value(&self, quantity: &str) -> Option<f64> {
        self.notes.iter().find(|n| n.quantity == quantity).map(|n| n.value)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Fold another report's checks and notes in under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: ComparisonReport) {
        for c in other.checks {
            self.push(format!("{prefix}{}", c.quantity), c.kind, c.expected, c.computed, c.tolerance, c.pass);
        }
        for n in other.notes {
            self.note(format!("{prefix}{}", n.quantity), n.value);
        }
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.experiment, if self.verdict { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            let rule = match c.kind {
                CheckKind::Within => format!("{:.6e} vs {:.6e} +- {:e}", c.computed, c.expected, c.tolerance),
                CheckKind::Below => format!("{:.6e} < {:e}", c.computed, c.expected),
                CheckKind::Above => format!("{:.6e} > {:e}", c.computed, c.expected),
                CheckKind::Holds => String::from(if c.pass { "holds" } else { "does not hold" }),
            };
            writeln!(f, "  [{mark}] {}: {rule}", c.quantity)?;
        }
        for n in &self.notes {
            writeln!(f, "  [note] {}: {:.6e}", n.quantity, n.value)?;
        }
        Ok(())
    }
}
