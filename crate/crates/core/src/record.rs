use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub residual_norm: f64,
    /// Cumulative fine-level-equivalent Heun steps.
    pub work_units: f64,
    pub seconds: f64,
}

/// Outcome of a steady-state solve. `iterations` counts Heun steps for the
/// single-level solver and top-level cycles for the multilevel one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub iterations: usize,
    pub work_units: f64,
    pub wall_seconds: f64,
    pub history: Vec<HistoryEntry>,
    pub converged: bool,
    /// Reconstructions that fell back to zero slopes, summed over all residual evaluations.
    pub slope_fallbacks: usize,
}

impl ConvergenceRecord {
    pub fn final_norm(&self) -> f64 {
        self.history.last().map_or(f64::NAN, |h| h.residual_norm)
    }
}
