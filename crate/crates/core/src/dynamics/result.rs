use crate::operators::{DensityMatrix, StateVector};

/// Sampled evolution: a time grid, level populations per sample, and an
/// optional fidelity against a target state.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub times: Vec<f64>,
    pub probs: Vec<Vec<f64>>,
    pub fidelity_vs_target: Option<Vec<f64>>,
}

impl SimulationResult {
    pub fn from_states(times: Vec<f64>, states: &[StateVector]) -> Self {
        debug_assert_eq!(times.len(), states.len());
        let probs = states.iter().map(StateVector::probabilities).collect();
        Self { times, probs, fidelity_vs_target: None }
    }

    pub fn from_density_matrices(times: Vec<f64>, states: &[DensityMatrix]) -> Self {
        debug_assert_eq!(times.len(), states.len());
        let probs = states.iter().map(DensityMatrix::probabilities).collect();
        Self { times, probs, fidelity_vs_target: None }
    }

    pub fn with_fidelity(mut self, fidelity: Vec<f64>) -> Self {
        debug_assert_eq!(fidelity.len(), self.times.len());
        self.fidelity_vs_target = Some(fidelity);
        self
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn levels(&self) -> usize {
        self.probs.first().map_or(0, Vec::len)
    }

    /// Time series of `P_n`.
    pub fn level(&self, n: usize) -> Vec<f64> {
        self.probs.iter().map(|row| row.get(n).copied().unwrap_or(0.0)).collect()
    }

    pub fn peak(&self, n: usize) -> f64 {
        self.level(n).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn trough(&self, n: usize) -> f64 {
        self.level(n).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Largest total population found on levels `>= from` at any sample.
    pub fn max_leakage(&self, from: usize) -> f64 {
        self.probs
            .iter()
            .map(|row| row.iter().skip(from).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
