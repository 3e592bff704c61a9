//! Outcome records shared by every verification routine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One verified property: the worst observed constant or margin, where it
/// occurred, and enough bookkeeping to reproduce the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Largest observed `lhs / rhs`-type ratio, when the check has one.
    pub empirical_constant: Option<f64>,
    /// Smallest observed `rhs - lhs` (negative means a violation).
    pub worst_margin: Option<f64>,
    /// Coordinates of the sample achieving `worst_margin`.
    pub worst_witness: Option<Vec<f64>>,
    pub violations: usize,
    pub sample_count: usize,
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        Self {
            name: name.into(),
            passed: true,
            empirical_constant: None,
            worst_margin: None,
            worst_witness: None,
            violations: 0,
            sample_count: 0,
            seed,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// A failed report carrying the error text; used when a check cannot run.
    pub fn from_error(name: impl Into<String>, seed: u64, err: &Error) -> Self {
        let mut r = Self::new(name, seed);
        r.passed = false;
        r.notes.push(format!("error: {err}"));
        r
    }

    pub fn metric(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.metrics.insert(key.into(), value);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn fail(&mut self, reason: impl Into<String>) -> &mut Self {
        self.passed = false;
        self.notes.push(reason.into());
        self
    }

    /// Folds a [`GapTracker`] into the report; fails on any violation.
    pub fn absorb(&mut self, gaps: &GapTracker) -> &mut Self {
        self.sample_count += gaps.samples;
        self.violations += gaps.violations;
        if let Some(m) = gaps.worst_margin {
            if self.worst_margin.is_none_or(|w| m < w) {
                self.worst_margin = Some(m);
                self.worst_witness = gaps.witness.clone();
            }
        }
        if let Some(c) = gaps.worst_ratio {
            self.empirical_constant = Some(self.empirical_constant.map_or(c, |e| e.max(c)));
        }
        if gaps.violations > 0 {
            self.passed = false;
        }
        self
    }

    /// One-line summary: `PASS name  (samples=.., constant=.., margin=..)`.
    pub fn summary_line(&self) -> String {
        let mut s = format!("{} {}", if self.passed { "PASS" } else { "FAIL" }, self.name);
        s.push_str(&format!("  samples={}", self.sample_count));
        if let Some(c) = self.empirical_constant {
            s.push_str(&format!(" constant={c:.6e}"));
        }
        if let Some(m) = self.worst_margin {
            s.push_str(&format!(" margin={m:.3e}"));
        }
        if self.violations > 0 {
            s.push_str(&format!(" violations={}", self.violations));
        }
        s
    }
}

/// Accumulates `lhs <= rhs + tol` comparisons.
#[derive(Clone, Debug, Default)]
pub struct GapTracker {
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: Option<f64>,
    pub worst_ratio: Option<f64>,
    pub witness: Option<Vec<f64>>,
}

impl GapTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `lhs <= rhs + tol`; returns whether it held. Non-finite sides
    /// count as violations.
    pub fn record(&mut self, lhs: f64, rhs: f64, tol: f64, witness: impl FnOnce() -> Vec<f64>) -> bool {
        self.samples += 1;
        let margin = rhs - lhs;
        let ok = lhs.is_finite() && rhs.is_finite() && margin >= -tol;
        if !ok {
            self.violations += 1;
        }
        if rhs > 0.0 && lhs.is_finite() {
            let r = lhs / rhs;
            self.worst_ratio = Some(self.worst_ratio.map_or(r, |w| w.max(r)));
        }
        let m = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if self.worst_margin.is_none_or(|w| m < w) {
            self.worst_margin = Some(m);
            self.witness = Some(witness());
        }
        ok
    }
}
