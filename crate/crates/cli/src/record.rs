use std::path::Path;
use std::time::Duration;

use csr_core::{Instance, Solution};
use serde::Serialize;

/// Self-contained summary of one solver run.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: String,
    pub pattern: String,
    pub cost: u64,
    pub oracle_cost: Option<u64>,
    pub given_cost: Option<u64>,
    pub given_certified: Option<bool>,
    /// `oracle + t` (extend) or `oracle + k·t`.
    pub additive_bound: Option<u64>,
    /// `cost(given) + t` (extend) or `cost(given) + k·t`.
    pub additive_bound_given: Option<u64>,
    pub ratio_bound: Option<f64>,
    pub samples_evaluated: Option<u64>,
    pub samples_skipped: Option<u64>,
    pub ms: f64,
    pub threads: usize,
    pub bound_violation: bool,
}

impl RunRecord {
    pub fn new(instance: &Path, algorithm: &str, threads: usize) -> Self {
        RunRecord {
            instance: instance.display().to_string(),
            algorithm: algorithm.to_string(),
            pattern: String::new(),
            cost: 0,
            oracle_cost: None,
            given_cost: None,
            given_certified: None,
            additive_bound: None,
            additive_bound_given: None,
            ratio_bound: None,
            samples_evaluated: None,
            samples_skipped: None,
            ms: 0.0,
            threads,
            bound_violation: false,
        }
    }

    pub fn finish(&mut self, instance: &Instance, solution: &Solution, elapsed: Duration) {
        self.pattern = solution.pattern.text(instance.alphabet());
        self.cost = solution.cost;
        self.ms = elapsed.as_secs_f64() * 1e3;
    }

    pub fn check_bounds(&mut self) {
        let over = |b: Option<u64>| b.is_some_and(|b| self.cost > b);
        self.bound_violation = over(self.additive_bound) || over(self.additive_bound_given);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run records serialize");
        s.push('\n');
        s
    }
}
