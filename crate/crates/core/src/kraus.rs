//! Purification as a quantum operation.
//!
//! A purification basis {|0⟩, |1⟩} and a target |ψ⟩ define the two Kraus
//! operators A_k = |ψ⟩⟨k|, which send every input to |ψ⟩⟨ψ|. They are
//! generated by a unitary on system ⊗ environment acting on the environment
//! start state |0_E⟩:
//!
//! ```text
//! U = Σ_s |ψ, s_E⟩⟨s, 0_E| + |ξ, s_E⟩⟨s, 1_E|,    ⟨ξ|ψ⟩ = 0
//! ```
//!
//! Composite matrices are 4×4 in system-major order: index = 2·system + env,
//! i.e. |0,0_E⟩, |0,1_E⟩, |1,0_E⟩, |1,1_E⟩.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::TAU_INEQ;
use crate::error::{Error, Result};
use crate::qubit::{c, max_abs, shannon_entropy, tol, CMatrix2, DensityMatrix, PureState, ONE};
use crate::sampling::HaarSampler;

pub type CMatrix4 = Matrix4<Complex64>;

/// Entropy differences below this count as equal.
pub const ENTROPY_EQUALITY: f64 = 1e-10;
/// |⟨0|ρ|1⟩| at or below this means the basis diagonalizes ρ.
pub const DIAGONAL_OFFDIAG: f64 = 1e-10;

pub fn max_abs4(m: &CMatrix4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    /// Σ = I.
    Nonselective,
    /// Σ ≤ I with Σ ≠ I.
    Selective,
    /// Σ has an eigenvalue above one.
    Invalid,
}

/// Both orderings of the completeness sum, reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Completeness {
    /// max |Σ A†A − I|.
    pub dagger_first_residual: f64,
    pub dagger_first: ChannelKind,
    /// max |Σ AA† − I|.
    pub dagger_last_residual: f64,
    pub dagger_last: ChannelKind,
}

fn classify(sum: &CMatrix2) -> (f64, ChannelKind) {
    let residual = max_abs(&(sum - CMatrix2::identity()));
    if residual <= tol::RECONSTRUCTION {
        return (residual, ChannelKind::Nonselective);
    }
    let a = sum[(0, 0)].re;
    let d = sum[(1, 1)].re;
    let top = 0.5 * (a + d) + (0.5 * (a - d)).hypot(sum[(0, 1)].norm());
    let kind = if top <= 1.0 + tol::PSD { ChannelKind::Selective } else { ChannelKind::Invalid };
    (residual, kind)
}

/// Ordered Kraus operators A_k acting as ρ ↦ Σ A_k ρ A_k†.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<CMatrix2>,
}

impl KrausChannel {
    pub fn new(operators: Vec<CMatrix2>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::EmptyChannel);
        }
        Ok(Self { operators })
    }

    pub fn identity() -> Self {
        Self { operators: vec![CMatrix2::identity()] }
    }

    pub fn operators(&self) -> &[CMatrix2] {
        &self.operators
    }

    pub fn completeness(&self) -> Completeness {
        let first: CMatrix2 = self.operators.iter().map(|a| a.adjoint() * a).sum();
        let last: CMatrix2 = self.operators.iter().map(|a| a * a.adjoint()).sum();
        let (dagger_first_residual, dagger_first) = classify(&first);
        let (dagger_last_residual, dagger_last) = classify(&last);
        Completeness { dagger_first_residual, dagger_first, dagger_last_residual, dagger_last }
    }

    /// Classification by Σ A†A, the ordering that controls the output trace.
    pub fn kind(&self) -> ChannelKind {
        self.completeness().dagger_first
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelOutput {
    Normalized(DensityMatrix),
    Subnormalized { matrix: CMatrix2, trace: f64 },
}

impl ChannelOutput {
    pub fn trace(&self) -> f64 {
        match self {
            Self::Normalized(rho) => rho.trace(),
            Self::Subnormalized { trace, .. } => *trace,
        }
    }

    pub fn matrix(&self) -> CMatrix2 {
        match self {
            Self::Normalized(rho) => *rho.matrix(),
            Self::Subnormalized { matrix, .. } => *matrix,
        }
    }
}

pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<ChannelOutput> {
    let out: CMatrix2 = ch.operators.iter().map(|a| a * rho.matrix() * a.adjoint()).sum();
    let completeness = ch.completeness();
    match completeness.dagger_first {
        ChannelKind::Nonselective => Ok(ChannelOutput::Normalized(DensityMatrix::from_matrix(out)?)),
        ChannelKind::Selective => Ok(ChannelOutput::Subnormalized { trace: out.trace().re, matrix: out }),
        ChannelKind::Invalid => Err(Error::NotTraceNonIncreasing {
            excess: completeness.dagger_first_residual,
        }),
    }
}

/// Purification basis {|0⟩, |1⟩}, target |ψ⟩ and its complement |ξ⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurificationBasis {
    basis: [PureState; 2],
    target: PureState,
    complement: PureState,
}

impl PurificationBasis {
    /// ξ is taken as (−β*, α*) for ψ = (α, β).
    pub fn new(basis: [PureState; 2], target: PureState) -> Result<Self> {
        let residual = basis[0].inner(&basis[1]).norm();
        if residual > tol::ORTHOGONAL {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Self { basis, target, complement: target.complement() })
    }

    pub fn computational(target: PureState) -> Self {
        Self::new(PureState::computational_basis(), target).expect("computational basis is orthonormal")
    }

    /// The eigenbasis of `rho` as purification basis.
    pub fn eigenbasis(rho: &DensityMatrix, target: PureState) -> Self {
        Self::new(rho.spectral().basis(), target).expect("eigenvectors are orthonormal")
    }

    pub fn basis(&self) -> [PureState; 2] {
        self.basis
    }

    pub fn target(&self) -> PureState {
        self.target
    }

    pub fn complement(&self) -> PureState {
        self.complement
    }
}

fn outer(ket: &PureState, bra: &PureState) -> CMatrix2 {
    ket.amplitudes() * bra.amplitudes().adjoint()
}

fn env_ket_bra(row: usize, col: usize) -> CMatrix2 {
    let mut m = CMatrix2::zeros();
    m[(row, col)] = ONE;
    m
}

/// A₀ = |ψ⟩⟨0|, A₁ = |ψ⟩⟨1|.
pub fn purifying_channel(pb: &PurificationBasis) -> KrausChannel {
    KrausChannel {
        operators: pb.basis.iter().map(|b| outer(&pb.target, b)).collect(),
    }
}

pub fn dilation_unitary(pb: &PurificationBasis) -> CMatrix4 {
    let mut u = CMatrix4::zeros();
    for (s, b) in pb.basis.iter().enumerate() {
        u += outer(&pb.target, b).kronecker(&env_ket_bra(s, 0));
        u += outer(&pb.complement, b).kronecker(&env_ket_bra(s, 1));
    }
    u
}

/// A_k = ⟨k_E|U|0_E⟩.
pub fn kraus_from_dilation(u: &CMatrix4) -> [CMatrix2; 2] {
    std::array::from_fn(|k| CMatrix2::from_fn(|i, j| u[(2 * i + k, 2 * j)]))
}

/// max(|U†U − I|, |UU† − I|).
pub fn unitarity_residual(u: &CMatrix4) -> f64 {
    let id = CMatrix4::identity();
    max_abs4(&(u.adjoint() * u - id)).max(max_abs4(&(u * u.adjoint() - id)))
}

/// State of system ⊗ environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeState {
    m: CMatrix4,
}

impl CompositeState {
    pub fn from_matrix(m: CMatrix4) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let residual = max_abs4(&(m - m.adjoint()));
        if residual > tol::HERMITIAN {
            return Err(Error::NotHermitian { residual });
        }
        let residual = (m.trace() - ONE).norm();
        if residual > tol::TRACE {
            return Err(Error::TraceNotOne { residual });
        }
        let cs = Self::hermitized(m);
        let min_eigenvalue = cs.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -tol::PSD {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(cs)
    }

    fn hermitized(m: CMatrix4) -> Self {
        Self { m: (m + m.adjoint()) * c(0.5, 0.0) }
    }

    /// ρ_sys ⊗ ρ_env.
    pub fn product(system: &DensityMatrix, environment: &DensityMatrix) -> Self {
        Self::hermitized(system.matrix().kronecker(environment.matrix()))
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.m
    }

    /// U ρ U†.
    pub fn conjugate(&self, u: &CMatrix4) -> Self {
        Self::hermitized(u * self.m * u.adjoint())
    }

    /// Spectrum from the general Hermitian eigensolver, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn von_neumann_entropy(&self) -> f64 {
        shannon_entropy(&self.eigenvalues())
    }

    /// Tr_E: the system state.
    pub fn partial_trace_env(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(CMatrix2::from_fn(|i, j| {
            (0..2).map(|e| self.m[(2 * i + e, 2 * j + e)]).sum()
        }))
    }

    /// Tr_sys: the environment state.
    pub fn partial_trace_sys(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(CMatrix2::from_fn(|e, f| {
            (0..2).map(|s| self.m[(2 * s + e, 2 * s + f)]).sum()
        }))
    }

    /// max |ρ − Tr_E ρ ⊗ Tr_sys ρ|.
    pub fn factorization_residual(&self) -> f64 {
        let product = Self::product(&self.partial_trace_env(), &self.partial_trace_sys());
        max_abs4(&(self.m - product.m))
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }
}

fn environment_start() -> DensityMatrix {
    PureState::zero().density()
}

/// U (ρ⁽⁰⁾ ⊗ |0_E⟩⟨0_E|) U† = |ψ⟩⟨ψ| ⊗ ρ_E′, with ρ_E′ holding ρ⁽⁰⁾'s matrix
/// elements in the purification basis.
pub fn evolve_composite(pb: &PurificationBasis, rho0: &DensityMatrix) -> CompositeState {
    CompositeState::product(rho0, &environment_start()).conjugate(&dilation_unitary(pb))
}

/// Nonselective measurement of the environment in {|0_E⟩, |1_E⟩}, returning
/// the environment state Σ_k ⟨k_E|ρ|k_E⟩ |k_E⟩⟨k_E|.
pub fn project_environment(cs: &CompositeState) -> DensityMatrix {
    let projected: CMatrix4 = (0..2)
        .map(|k| {
            let q = CMatrix2::identity().kronecker(&env_ket_bra(k, k));
            q * cs.m * q
        })
        .sum();
    CompositeState::hermitized(projected).partial_trace_sys()
}

/// Entropy bookkeeping for one purification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyAudit {
    /// S(ρ⁽⁰⁾).
    pub s_before: f64,
    /// S(ρ⁽⁰⁾ ⊗ |0_E⟩⟨0_E|).
    pub s_composite_before: f64,
    /// S(U(ρ⁽⁰⁾ ⊗ |0_E⟩⟨0_E|)U†).
    pub s_after_unitary: f64,
    /// S(ρ_E′).
    pub s_env_after_unitary: f64,
    /// S of the system after the unitary; zero for a pure output.
    pub s_system_after: f64,
    /// S(ρ_E^fin).
    pub s_env_final: f64,
    pub det_before: f64,
    pub det_after: f64,
    /// |⟨0|ρ⁽⁰⁾|1⟩| in the purification basis.
    pub offdiag: f64,
    pub factorization_residual: f64,
    /// max |Tr_E − |ψ⟩⟨ψ||.
    pub system_residual: f64,
    pub entropy_increase: f64,
}

impl EntropyAudit {
    pub fn swap_residual(&self) -> f64 {
        (self.s_env_after_unitary - self.s_before).abs()
    }

    pub fn unitary_residual(&self) -> f64 {
        (self.s_after_unitary - self.s_composite_before).abs()
    }

    /// S_env_final ≥ S_before and det_after ≥ det_before, within slack.
    pub fn monotone(&self) -> bool {
        self.entropy_increase >= -TAU_INEQ && self.det_after >= self.det_before - TAU_INEQ
    }

    pub fn basis_diagonalizes(&self) -> bool {
        self.offdiag <= DIAGONAL_OFFDIAG
    }

    /// Equality holds exactly when the basis diagonalizes ρ⁽⁰⁾.
    ///
    /// The dephasing raises the determinant by |⟨0|ρ|1⟩|² and the entropy
    /// slope in the determinant is at least 2, so an off-diagonal above
    /// √(ENTROPY_EQUALITY/2) forces a resolvable increase. Between the two
    /// thresholds no claim is made.
    pub fn equality_consistent(&self) -> bool {
        if self.basis_diagonalizes() {
            self.entropy_increase.abs() <= ENTROPY_EQUALITY
        } else if self.offdiag * self.offdiag > ENTROPY_EQUALITY / 2.0 {
            self.entropy_increase > ENTROPY_EQUALITY
        } else {
            true
        }
    }
}

pub fn entropy_audit(pb: &PurificationBasis, rho0: &DensityMatrix) -> EntropyAudit {
    let before = CompositeState::product(rho0, &environment_start());
    let after = before.conjugate(&dilation_unitary(pb));
    let env = after.partial_trace_sys();
    let system = after.partial_trace_env();
    let env_final = project_environment(&after);
    let s_before = rho0.von_neumann_entropy();
    let s_env_final = env_final.von_neumann_entropy();
    EntropyAudit {
        s_before,
        s_composite_before: before.von_neumann_entropy(),
        s_after_unitary: after.von_neumann_entropy(),
        s_env_after_unitary: env.von_neumann_entropy(),
        s_system_after: system.von_neumann_entropy(),
        s_env_final,
        det_before: rho0.determinant(),
        det_after: env_final.determinant(),
        offdiag: rho0.in_basis(&pb.basis)[(0, 1)].norm(),
        factorization_residual: after.factorization_residual(),
        system_residual: system.max_abs_diff(&pb.target.density()),
        entropy_increase: s_env_final - s_before,
    }
}

/// Dilation and channel checks for one purification basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilationCheck {
    pub unitarity_residual: f64,
    /// max |⟨k_E|U|0_E⟩ − A_k|.
    pub extraction_residual: f64,
    /// max |Σ A†A − I|.
    pub completeness_residual: f64,
    /// max |Σ A ρ A† − |ψ⟩⟨ψ||.
    pub output_residual: f64,
}

impl DilationCheck {
    pub fn passes(&self) -> bool {
        [self.unitarity_residual, self.extraction_residual, self.completeness_residual, self.output_residual]
            .iter()
            .all(|&r| r <= tol::RECONSTRUCTION)
    }
}

pub fn dilation_check(pb: &PurificationBasis, rho: &DensityMatrix) -> Result<DilationCheck> {
    let u = dilation_unitary(pb);
    let channel = purifying_channel(pb);
    let extracted = kraus_from_dilation(&u);
    let extraction_residual = extracted
        .iter()
        .zip(channel.operators())
        .map(|(a, b)| max_abs(&(a - b)))
        .fold(0.0, f64::max);
    let output = apply_channel(&channel, rho)?;
    Ok(DilationCheck {
        unitarity_residual: unitarity_residual(&u),
        extraction_residual,
        completeness_residual: channel.completeness().dagger_first_residual,
        output_residual: max_abs(&(output.matrix() - pb.target.density().matrix())),
    })
}

/// One random audit: ρ⁽⁰⁾, basis and target drawn from the sample's sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrausAuditRow {
    pub index: u64,
    pub audit: EntropyAudit,
    /// The same ρ⁽⁰⁾ purified in its own eigenbasis.
    pub eigenbasis_audit: EntropyAudit,
    pub dilation: DilationCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KrausViolations {
    pub monotonicity: usize,
    pub entropy_swap: usize,
    pub unitary_entropy: usize,
    pub factorization: usize,
    pub equality: usize,
    pub dilation: usize,
}

impl KrausViolations {
    pub fn total(&self) -> usize {
        self.monotonicity + self.entropy_swap + self.unitary_entropy + self.factorization + self.equality + self.dilation
    }

    fn record(&mut self, a: &EntropyAudit) {
        self.monotonicity += usize::from(!a.monotone());
        self.entropy_swap += usize::from(a.swap_residual() > ENTROPY_EQUALITY);
        self.unitary_entropy += usize::from(a.unitary_residual() > ENTROPY_EQUALITY);
        self.factorization += usize::from(a.factorization_residual > ENTROPY_EQUALITY);
        self.equality += usize::from(!a.equality_consistent());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausAuditSummary {
    pub samples: usize,
    pub seed: u64,
    /// diag(2/3, 1/3) purified in its eigenbasis.
    pub eigenbasis_case: EntropyAudit,
    /// [[1/2, 1/2], [1/2, 1/2]] purified in the computational basis.
    pub symmetric_case: EntropyAudit,
    pub max_entropy_swap_residual: f64,
    pub max_unitarity_residual: f64,
    pub max_extraction_residual: f64,
    pub min_entropy_increase: f64,
    pub max_eigenbasis_entropy_change: f64,
    pub violations: KrausViolations,
    pub rows: Vec<KrausAuditRow>,
}

pub fn kraus_audit_sweep(samples: usize, seed: u64) -> Result<KrausAuditSummary> {
    if samples == 0 {
        return Err(Error::EmptySweep);
    }
    let rows = (0..samples as u64)
        .into_par_iter()
        .map(|index| {
            let mut s = HaarSampler::for_sample(seed, index);
            let rho0 = s.density();
            let basis = s.basis();
            let target = s.haar_pure();
            let pb = PurificationBasis::new(basis, target)?;
            Ok(KrausAuditRow {
                index,
                audit: entropy_audit(&pb, &rho0),
                eigenbasis_audit: entropy_audit(&PurificationBasis::eigenbasis(&rho0, target), &rho0),
                dilation: dilation_check(&pb, &rho0)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violations = KrausViolations::default();
    for row in &rows {
        violations.record(&row.audit);
        violations.record(&row.eigenbasis_audit);
        violations.dilation += usize::from(!row.dilation.passes());
    }
    let fold_max = |f: &dyn Fn(&KrausAuditRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);

    let third = DensityMatrix::diagonal(2.0 / 3.0)?;
    let symmetric = DensityMatrix::from_real([[0.5, 0.5], [0.5, 0.5]])?;
    Ok(KrausAuditSummary {
        samples,
        seed,
        eigenbasis_case: entropy_audit(&PurificationBasis::eigenbasis(&third, PureState::zero()), &third),
        symmetric_case: entropy_audit(&PurificationBasis::computational(PureState::zero()), &symmetric),
        max_entropy_swap_residual: fold_max(&|r| r.audit.swap_residual()),
        max_unitarity_residual: fold_max(&|r| r.dilation.unitarity_residual),
        max_extraction_residual: fold_max(&|r| r.dilation.extraction_residual),
        min_entropy_increase: rows.iter().map(|r| r.audit.entropy_increase).fold(f64::INFINITY, f64::min),
        max_eigenbasis_entropy_change: fold_max(&|r| r.eigenbasis_audit.entropy_increase.abs()),
        violations,
        rows,
    })
}
