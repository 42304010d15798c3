use serde::{Deserialize, Serialize};

/// One `r` of a convergence experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPoint {
    pub r: usize,
    pub p_r: usize,
    pub value: f64,
    pub target: f64,
    pub abs_error: f64,
}

impl ExperimentPoint {
    pub fn new(r: usize, p_r: usize, value: f64, target: f64) -> Self {
        ExperimentPoint { r, p_r, value, target, abs_error: (value - target).abs() }
    }

    pub fn relative_error(&self) -> f64 {
        self.abs_error / self.target.abs()
    }
}

/// Raw sequence of a convergence experiment plus its verdict. `passed` holds
/// when the last point is within `tolerance` of its target, relatively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: String,
    pub spec: serde_json::Value,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub per_r: Vec<ExperimentPoint>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(
        kind: impl Into<String>,
        spec: serde_json::Value,
        seed: Option<u64>,
        tolerance: f64,
        per_r: Vec<ExperimentPoint>,
    ) -> Self {
        let passed = per_r.last().is_some_and(|pt| pt.relative_error() <= tolerance);
        ExperimentReport { kind: kind.into(), spec, seed, tolerance, per_r, passed }
    }

    pub fn last(&self) -> Option<&ExperimentPoint> {
        self.per_r.last()
    }
}
