//! Output envelope and the single-case reconstruction report.

use qpurify_core::analysis::{EntropySweep, FidelityReport, MonteCarloSummary, OptimalPairAverage, PhaseAverageAdjudication, ViolationCounts};
use qpurify_core::kraus::KrausAuditSummary;
use qpurify_core::reconstruction::MeasurementCount;
use qpurify_core::{DensityMatrix, PureState};
use serde::Serialize;

use crate::config::{CommandName, ExperimentConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One run's output document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub version: &'static str,
    pub command: CommandName,
    pub seed: u64,
    pub inputs: ExperimentConfig,
    pub violations: usize,
    pub result: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Reconstruct(Box<ReconstructReport>),
    Montecarlo(Box<MonteCarloSummary>),
    EntropySweep(EntropySweep),
    KrausAudit(Box<KrausAuditSummary>),
}

/// Re α, Im α, Re β, Im β.
pub fn flat_state(psi: &PureState) -> [f64; 4] {
    [psi.alpha().re, psi.alpha().im, psi.beta().re, psi.beta().im]
}

/// Row-major (re, im) pairs.
pub fn flat_matrix(rho: &DensityMatrix) -> [f64; 8] {
    let m = rho.matrix();
    [
        m[(0, 0)].re,
        m[(0, 0)].im,
        m[(0, 1)].re,
        m[(0, 1)].im,
        m[(1, 0)].re,
        m[(1, 0)].im,
        m[(1, 1)].re,
        m[(1, 1)].im,
    ]
}

/// Everything derived from one initial state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructReport {
    pub k: MeasurementCount,
    /// "probs" or "psi".
    pub source: &'static str,
    pub input_probs: Option<Vec<f64>>,
    /// Pure states reproducing the input record; for k = 1 the θ = 0 member
    /// of the phase family.
    pub candidates: Vec<[f64; 4]>,
    pub phase_family: bool,
    /// The state treated as ρ_ini.
    pub initial: [f64; 4],
    /// Probabilities the reconstructed states are built from.
    pub record: Vec<f64>,
    pub unbiased: [f64; 8],
    pub maxent: [f64; 8],
    pub protocol_a_phase: f64,
    pub protocol_a_phase_grid: usize,
    pub protocol_a_unbiased: [f64; 4],
    pub protocol_a_maxent: [f64; 4],
    pub protocol_b_unbiased: [f64; 4],
    pub protocol_b_maxent: [f64; 4],
    pub degenerate: bool,
    pub analytic: FidelityReport,
    pub empirical: FidelityReport,
    pub mismatches: Vec<&'static str>,
    pub optimal_pair: Option<OptimalPairAverage>,
    pub adjudication: Option<PhaseAverageAdjudication>,
    pub violations: ViolationCounts,
}
