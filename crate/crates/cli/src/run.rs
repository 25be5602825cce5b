//! Command runners. Each one calls the library and packages the result.

use qpurify_core::analysis::{entropy_sweep, monte_carlo, reconstruct_states, sample, ViolationCounts};
use qpurify_core::kraus::kraus_audit_sweep;
use qpurify_core::purification::{purify_a, ProjectionChoice};
use qpurify_core::reconstruction::{compatible_initial_states, probabilities_from_state, CompatibleStates, MeasurementRecord};
use qpurify_core::{Complex64, PureState};

use crate::config::{CommandName, ExperimentConfig};
use crate::error::CliError;
use crate::record::{flat_matrix, flat_state, Payload, ReconstructReport, ResultRecord, VERSION};

/// Protocol-A phase reported as a representative state.
const REPORTED_PHASE: f64 = 0.0;

pub fn run(cfg: &ExperimentConfig) -> Result<ResultRecord, CliError> {
    let (violations, result) = match cfg.command {
        CommandName::Reconstruct => {
            let report = run_reconstruct(cfg)?;
            (report.violations.total(), Payload::Reconstruct(Box::new(report)))
        }
        CommandName::Montecarlo => {
            let summary = monte_carlo(cfg.measurement_count(), cfg.samples, cfg.seed, cfg.phase_grid)?;
            (summary.violations.total(), Payload::Montecarlo(Box::new(summary)))
        }
        CommandName::EntropySweep => {
            let sweep = entropy_sweep(cfg.samples)?;
            (sweep.violations, Payload::EntropySweep(sweep))
        }
        CommandName::KrausAudit => {
            let summary = kraus_audit_sweep(cfg.samples, cfg.seed)?;
            (summary.violations.total(), Payload::KrausAudit(Box::new(summary)))
        }
    };
    Ok(ResultRecord {
        version: VERSION,
        command: cfg.command,
        seed: cfg.seed,
        inputs: cfg.clone(),
        violations,
        result,
    })
}

pub fn run_reconstruct(cfg: &ExperimentConfig) -> Result<ReconstructReport, CliError> {
    let k = cfg.measurement_count();
    let (source, candidates, phase_family) = match (&cfg.probs, &cfg.psi) {
        (Some(probs), _) => {
            let rec = MeasurementRecord::new(probs)?;
            match compatible_initial_states(&rec)? {
                CompatibleStates::Finite(states) => ("probs", states, false),
                CompatibleStates::PhaseFamily(family) => ("probs", vec![family.state(0.0)], true),
            }
        }
        (None, Some([re_a, im_a, re_b, im_b])) => {
            let psi = PureState::new(Complex64::new(*re_a, *im_a), Complex64::new(*re_b, *im_b))?;
            ("psi", vec![psi], false)
        }
        (None, None) => unreachable!("validated config carries probs or psi"),
    };
    let psi = candidates[0];
    let st = reconstruct_states(&psi, k)?;
    let s = sample(&psi, 0, k, cfg.phase_grid)?;
    let choice = ProjectionChoice::Phase(REPORTED_PHASE);
    Ok(ReconstructReport {
        k,
        source,
        input_probs: cfg.probs.clone(),
        candidates: candidates.iter().map(flat_state).collect(),
        phase_family,
        initial: flat_state(&psi),
        record: probabilities_from_state(&psi, k).probs().to_vec(),
        unbiased: flat_matrix(&st.unbiased),
        maxent: flat_matrix(&st.maxent),
        protocol_a_phase: REPORTED_PHASE,
        protocol_a_phase_grid: cfg.phase_grid,
        protocol_a_unbiased: flat_state(&purify_a(&st.unbiased_mixture, choice)?),
        protocol_a_maxent: flat_state(&purify_a(&st.maxent_mixture, choice)?),
        protocol_b_unbiased: flat_state(&st.unbiased_b.state),
        protocol_b_maxent: flat_state(&st.maxent_b.state),
        degenerate: st.unbiased_b.degenerate,
        violations: ViolationCounts::of(&s),
        analytic: s.analytic,
        empirical: s.empirical,
        mismatches: s.mismatches,
        optimal_pair: s.optimal_pair,
        adjudication: s.adjudication,
    })
}
