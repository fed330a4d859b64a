//! Evaluation reports with three-valued verdicts.
//!
//! A report carries the truncated value of a functional together with a
//! rigorous bound on everything the truncation left out. The verdict is
//! only `Holds` when the bound already includes the tail, so raising the
//! truncation degree can never flip it.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::Violated => "VIOLATED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a modulus term such as `|f(w)|` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusPath {
    ClosedForm,
    Series,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    /// Truncated value; every majorant term in it is a lower bound of the full sum.
    pub value: f64,
    /// Upper bound on `true - value`, including `eval_error`.
    pub tail_bound: f64,
    /// Two-sided error of modulus terms evaluated from a truncated series.
    pub eval_error: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub modulus_path: Option<ModulusPath>,
}

impl EvalReport {
    pub fn new(value: f64, tail_bound: f64, eval_error: f64, threshold: f64) -> Self {
        let mut report = EvalReport {
            value,
            tail_bound,
            eval_error,
            threshold,
            verdict: Verdict::Inconclusive,
            modulus_path: None,
        };
        report.verdict = report.classify();
        report
    }

    /// Report for a finite sum with no truncation error.
    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0, 0.0, 1.0)
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.verdict = self.classify();
        self
    }

    pub fn with_path(mut self, path: ModulusPath) -> Self {
        self.modulus_path = Some(path);
        self
    }

    fn classify(&self) -> Verdict {
        if self.value + self.tail_bound <= self.threshold {
            Verdict::Holds
        } else if self.value - self.eval_error > self.threshold {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    /// Distance to the threshold in the direction of the verdict:
    /// `threshold - (value + tail)` for a holding report.
    pub fn slack(&self) -> f64 {
        self.threshold - (self.value + self.tail_bound)
    }

    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_three_ways() {
        assert_eq!(EvalReport::new(0.8, 0.1, 0.0, 1.0).verdict, Verdict::Holds);
        assert_eq!(EvalReport::new(0.95, 0.1, 0.0, 1.0).verdict, Verdict::Inconclusive);
        assert_eq!(EvalReport::new(1.01, 0.0, 0.0, 1.0).verdict, Verdict::Violated);
        // a modulus known only to +-0.02 cannot certify a violation of 0.01
        assert_eq!(EvalReport::new(1.01, 0.02, 0.02, 1.0).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn threshold_reclassifies() {
        let r = EvalReport::exact(1.2);
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.with_threshold(1.5).verdict, Verdict::Holds);
    }

    #[test]
    fn equality_holds() {
        assert_eq!(EvalReport::exact(1.0).verdict, Verdict::Holds);
    }
}
