//! Machine-readable outcome of a verification check.

use std::fmt;

use serde::{Deserialize, Serialize};

/// The sample at which a check came closest to failing (or failed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 2]>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem_id: String,
    pub pass: bool,
    pub samples: u64,
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    /// True for falsification runs over sample points, false for exact
    /// coefficient arithmetic.
    pub sampled: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn renamed(mut self, id: impl Into<String>) -> Self {
        self.theorem_id = id.into();
        self
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match (self.pass, self.sampled) {
            (true, true) => "PASS (sampled check, no counterexample found)",
            (true, false) => "PASS (exact)",
            (false, _) => "FAIL",
        };
        write!(
            f,
            "{:<32} {} samples={} worst_margin={:.3e}",
            self.theorem_id, verdict, self.samples, self.worst_margin
        )?;
        if !self.pass {
            if let Some(w) = &self.witness {
                write!(f, " witness: {} (value {:.6e})", w.label, w.value)?;
            }
        }
        Ok(())
    }
}

/// Running minimum of per-sample margins; keeps the first sample that attains
/// the minimum so results do not depend on evaluation order.
#[derive(Debug, Clone)]
pub struct MarginTracker {
    worst: f64,
    witness: Option<Witness>,
    samples: u64,
    notes: Vec<String>,
}

impl Default for MarginTracker {
    fn default() -> Self {
        MarginTracker {
            worst: f64::INFINITY,
            witness: None,
            samples: 0,
            notes: Vec::new(),
        }
    }
}

impl MarginTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, margin: f64, witness: impl FnOnce() -> Witness) {
        self.samples += 1;
        if margin < self.worst || self.witness.is_none() || margin.is_nan() {
            self.worst = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
            self.witness = Some(witness());
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: MarginTracker) {
        self.samples += other.samples;
        if other.worst < self.worst || (self.witness.is_none() && other.witness.is_some()) {
            self.worst = other.worst;
            self.witness = other.witness;
        }
        self.notes.extend(other.notes);
    }

    /// Folds a finished report in as if its samples had been recorded here.
    pub fn absorb(&mut self, report: &VerifyReport) {
        let mut other = MarginTracker::new();
        if report.samples > 0 {
            other.worst = report.worst_margin;
            other.witness = report.witness.clone();
            other.samples = report.samples;
        }
        self.merge(other);
    }

    pub fn worst(&self) -> f64 {
        self.worst
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// `pass` iff the worst margin is at least `-tol`.
    pub fn finish(self, id: &str, tol: f64, sampled: bool) -> VerifyReport {
        let worst = if self.samples == 0 { 0.0 } else { self.worst };
        self.build(id, worst >= -tol, worst, sampled)
    }

    /// `pass` iff every margin is strictly positive.
    pub fn finish_strict(self, id: &str, sampled: bool) -> VerifyReport {
        let worst = if self.samples == 0 { 0.0 } else { self.worst };
        let pass = self.samples == 0 || worst > 0.0;
        self.build(id, pass, worst, sampled)
    }

    fn build(self, id: &str, pass: bool, worst: f64, sampled: bool) -> VerifyReport {
        VerifyReport {
            theorem_id: id.to_string(),
            pass,
            samples: self.samples,
            worst_margin: worst,
            witness: self.witness,
            sampled,
            notes: self.notes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(label: &str) -> Witness {
        Witness {
            label: label.into(),
            point: None,
            value: 0.0,
        }
    }

    #[test]
    fn keeps_first_minimum() {
        let mut t = MarginTracker::new();
        t.record(0.5, || w("a"));
        t.record(0.1, || w("b"));
        t.record(0.1, || w("c"));
        let r = t.finish("x", 0.0, true);
        assert!(r.pass);
        assert_eq!(r.witness.unwrap().label, "b");
        assert_eq!(r.samples, 3);
    }

    #[test]
    fn tolerance_and_strictness() {
        let mut t = MarginTracker::new();
        t.record(-1e-13, || w("a"));
        assert!(t.clone().finish("x", 1e-12, false).pass);
        assert!(!t.finish_strict("x", true).pass);
        let empty = MarginTracker::new().finish("e", 0.0, false);
        assert!(empty.pass && empty.samples == 0);
    }
}
