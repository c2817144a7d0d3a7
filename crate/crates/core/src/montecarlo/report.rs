use serde::Serialize;

/// How a statistic is judged.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Criterion {
    /// `|estimate - reference| ≤ sigmas · std_error`.
    WithinSigma { sigmas: f64 },
    /// Observed count inside the central Poisson interval of the expected
    /// count, used when the expected count is too small for a normal
    /// approximation.
    PoissonInterval {
        level: f64,
        lo: u64,
        hi: u64,
        expected: f64,
    },
    /// `estimate` counts violations and must be 0.
    ZeroViolations,
    /// `estimate` must be strictly positive.
    Positive,
    /// `estimate ≤ critical` for a chi-square statistic.
    ChiSquare { df: usize, level: f64, critical: f64 },
    /// `|estimate - reference| ≤ tolerance`.
    AbsoluteTolerance { tolerance: f64 },
    /// Reported only.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Statistic {
    pub name: String,
    pub estimate: f64,
    pub std_error: Option<f64>,
    pub samples: u64,
    pub reference: Option<f64>,
    pub criterion: Criterion,
    pub passed: bool,
    pub note: Option<String>,
}

impl Statistic {
    pub fn informational(name: impl Into<String>, estimate: f64, samples: u64) -> Self {
        Self {
            name: name.into(),
            estimate,
            std_error: None,
            samples,
            reference: None,
            criterion: Criterion::Informational,
            passed: true,
            note: None,
        }
    }

    pub fn violations(name: impl Into<String>, count: u64, samples: u64) -> Self {
        Self {
            name: name.into(),
            estimate: count as f64,
            std_error: None,
            samples,
            reference: Some(0.0),
            criterion: Criterion::ZeroViolations,
            passed: count == 0,
            note: None,
        }
    }

    pub fn positive(name: impl Into<String>, value: f64, samples: u64) -> Self {
        Self {
            name: name.into(),
            estimate: value,
            std_error: None,
            samples,
            reference: None,
            criterion: Criterion::Positive,
            passed: value > 0.0,
            note: None,
        }
    }

    pub fn within_tolerance(name: impl Into<String>, estimate: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            estimate,
            std_error: None,
            samples: 1,
            reference: Some(reference),
            criterion: Criterion::AbsoluteTolerance { tolerance },
            passed: (estimate - reference).abs() <= tolerance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub name: String,
    pub q: u32,
    pub statistics: Vec<Statistic>,
}

impl SimReport {
    pub fn new(name: impl Into<String>, q: u32) -> Self {
        Self {
            name: name.into(),
            q,
            statistics: Vec::new(),
        }
    }

    pub fn push(&mut self, s: Statistic) {
        self.statistics.push(s);
    }

    pub fn passed(&self) -> bool {
        self.statistics.iter().all(|s| s.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Statistic> {
        self.statistics.iter().filter(|s| !s.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Statistic> {
        self.statistics.iter().find(|s| s.name == name)
    }
}
