//! Verification reports.

use crate::prelude::*;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Stated in the literature on the surface or family.
    Published,
    /// Computed by an independent closed form (algebraic cancellation, residues, ...).
    Derived,
    /// Follows immediately from a definition or an exact identity.
    Exact,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Published => "published",
            Provenance::Derived => "derived",
            Provenance::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedValue {
    pub value: f64,
    pub provenance: Provenance,
}

impl ExpectedValue {
    pub fn derived(value: f64) -> Self {
        ExpectedValue { value, provenance: Provenance::Derived }
    }

    pub fn published(value: f64) -> Self {
        ExpectedValue { value, provenance: Provenance::Published }
    }

    pub fn exact(value: f64) -> Self {
        ExpectedValue { value, provenance: Provenance::Exact }
    }
}

/// Outcome of one check. `pass` holds exactly when
/// `max_abs_deviation <= tolerance`; for a negative control
/// (`expect_failure`) the check has done its job when `pass` is false.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub grid: String,
    pub mean: f64,
    pub max_abs_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub expected: Option<ExpectedValue>,
    pub expect_failure: bool,
    pub runtime_s: f64,
    pub samples: usize,
    /// Additional named measurements (refinement ratios, slack minima, ...).
    pub extras: Vec<(String, f64)>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, grid: impl Into<String>, mean: f64, max_abs_deviation: f64, tolerance: f64) -> Self {
        VerificationReport {
            check: check.into(),
            grid: grid.into(),
            mean,
            max_abs_deviation,
            tolerance,
            pass: max_abs_deviation <= tolerance,
            expected: None,
            expect_failure: false,
            runtime_s: 0.0,
            samples: 0,
            extras: Vec::new(),
        }
    }

    pub fn with_expected(mut self, expected: ExpectedValue) -> Self {
        self.expected = Some(expected);
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_extra(mut self, name: impl Into<String>, value: f64) -> Self {
        self.extras.push((name.into(), value));
        self
    }

    /// Marks the report as a negative control.
    pub fn negative_control(mut self) -> Self {
        self.expect_failure = true;
        self
    }

    /// True when the check behaved as intended: passed, or failed as a negative control.
    pub fn succeeded(&self) -> bool {
        self.pass != self.expect_failure
    }

    pub fn extra(&self, name: &str) -> Option<f64> {
        self.extras.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Changes the tolerance and recomputes `pass`.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.max_abs_deviation <= tolerance;
        self
    }
}

/// Wall-clock timer; reads zero without `std`.
pub(crate) struct Stopwatch {
    #[cfg(feature = "std")]
    start: std::time::Instant,
}

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch {
            #[cfg(feature = "std")]
            start: std::time::Instant::now(),
        }
    }

    pub(crate) fn elapsed_s(&self) -> f64 {
        #[cfg(feature = "std")]
        {
            self.start.elapsed().as_secs_f64()
        }
        #[cfg(not(feature = "std"))]
        {
            0.0
        }
    }
}
