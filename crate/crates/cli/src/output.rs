//! JSON and CSV rendering of a [`ResultRecord`].
//!
//! JSON floats use the shortest representation that parses back to the same
//! bits. CSV floats are written with 17 significant digits.

use std::io::Write;
use std::path::Path;

use qpurify_core::analysis::FidelityReport;
use qpurify_core::kraus::EntropyAudit;

use crate::config::Format;
use crate::error::CliError;
use crate::record::{Payload, ResultRecord};

pub fn render(record: &ResultRecord, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(record).map_err(|e| CliError::Write(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => render_csv(record),
    }
}

pub fn write(record: &ResultRecord, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = render(record, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io("<stdout>".into(), e)),
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn fidelity_header(prefix: &str) -> Vec<String> {
    FidelityReport::FIELD_NAMES.iter().map(|n| format!("{prefix}{n}")).collect()
}

fn fidelity_cells(r: &FidelityReport) -> Vec<String> {
    [
        r.f_mixed,
        r.f_protocol_a_avg,
        r.f_protocol_b,
        r.f_maxent,
        r.f_maxent_protocol_a_avg,
        r.f_maxent_protocol_b,
    ]
    .into_iter()
    .map(num)
    .collect()
}

const AUDIT_HEADER: [&str; 9] = [
    "s_before",
    "s_env_after_unitary",
    "s_after_unitary",
    "s_env_final",
    "entropy_increase",
    "det_before",
    "det_after",
    "offdiag",
    "factorization_residual",
];

fn audit_cells(a: &EntropyAudit) -> Vec<String> {
    [
        a.s_before,
        a.s_env_after_unitary,
        a.s_after_unitary,
        a.s_env_final,
        a.entropy_increase,
        a.det_before,
        a.det_after,
        a.offdiag,
        a.factorization_residual,
    ]
    .into_iter()
    .map(num)
    .collect()
}

fn strings<const N: usize>(names: [&str; N]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn render_csv(record: &ResultRecord) -> Result<Vec<u8>, CliError> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    match &record.result {
        Payload::Reconstruct(r) => {
            let mut header = strings(["k", "source", "psi_re_alpha", "psi_im_alpha", "psi_re_beta", "psi_im_beta"]);
            header.extend(fidelity_header("analytic_"));
            header.extend(fidelity_header("empirical_"));
            header.extend(strings(["bloch_norm", "degenerate", "violations"]));
            rows.push(header);

            let mut row = vec![r.k.get().to_string(), r.source.to_string()];
            row.extend(r.initial.iter().copied().map(num));
            row.extend(fidelity_cells(&r.analytic));
            row.extend(fidelity_cells(&r.empirical));
            row.extend([num(r.empirical.bloch_norm), r.degenerate.to_string(), r.violations.total().to_string()]);
            rows.push(row);
        }
        Payload::Montecarlo(mc) => {
            let mut header = strings(["index", "psi_re_alpha", "psi_im_alpha", "psi_re_beta", "psi_im_beta", "bloch_norm"]);
            header.extend(fidelity_header("analytic_"));
            header.extend(fidelity_header("empirical_"));
            header.extend(strings(["degenerate", "mismatches"]));
            rows.push(header);
            for s in &mc.rows {
                let mut row = vec![s.index.to_string()];
                row.extend(s.psi.iter().copied().map(num));
                row.push(num(s.empirical.bloch_norm));
                row.extend(fidelity_cells(&s.analytic));
                row.extend(fidelity_cells(&s.empirical));
                row.extend([s.empirical.degeneracy_flag.to_string(), s.mismatches.join(";")]);
                rows.push(row);
            }
        }
        Payload::EntropySweep(sweep) => {
            rows.push(strings(["determinant", "entropy", "slope_analytic", "slope_fd", "rel_error"]));
            for r in &sweep.rows {
                rows.push(vec![
                    num(r.determinant),
                    num(r.entropy),
                    num(r.slope_analytic),
                    opt(r.slope_fd),
                    opt(r.rel_error),
                ]);
            }
        }
        Payload::KrausAudit(summary) => {
            let mut header = vec!["index".to_string()];
            header.extend(strings(AUDIT_HEADER));
            header.extend(strings([
                "eigenbasis_entropy_increase",
                "unitarity_residual",
                "extraction_residual",
                "monotone",
                "equality_consistent",
            ]));
            rows.push(header);
            for r in &summary.rows {
                let mut row = vec![r.index.to_string()];
                row.extend(audit_cells(&r.audit));
                row.extend([
                    num(r.eigenbasis_audit.entropy_increase),
                    num(r.dilation.unitarity_residual),
                    num(r.dilation.extraction_residual),
                    r.audit.monotone().to_string(),
                    r.audit.equality_consistent().to_string(),
                ]);
                rows.push(row);
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::Write(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Write(e.to_string()))
}
