//! Entanglement-free purification of qubit mixtures.
//!
//! * Protocol A preserves the weights of the two orthogonal components of the
//!   mixture and leaves one relative phase free.
//! * Protocol B returns the eigenvector of the largest eigenvalue, the pure
//!   state with maximal overlap tr(ρσ).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubit::{c, tol, CMatrix2, DensityMatrix, PureState};

/// ρ = p₁ρ₁ + p₂ρ₂ with ρ₁, ρ₂ orthogonal pure states and p₁ ≥ p₂ when built
/// by [`decompose`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalMixture {
    weights: [f64; 2],
    states: [PureState; 2],
}

impl OrthogonalMixture {
    pub fn new(p1: f64, p2: f64, first: PureState, second: PureState) -> Result<Self> {
        if p1 < -tol::TRACE || p2 < -tol::TRACE {
            return Err(Error::InvalidMixture("negative weight"));
        }
        if (p1 + p2 - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidMixture("weights do not sum to one"));
        }
        if first.overlap(&second) > tol::ORTHOGONAL {
            return Err(Error::InvalidMixture("components are not orthogonal"));
        }
        Ok(Self {
            weights: [p1.max(0.0), p2.max(0.0)],
            states: [first, second],
        })
    }

    pub fn p1(&self) -> f64 {
        self.weights[0]
    }

    pub fn p2(&self) -> f64 {
        self.weights[1]
    }

    /// The component vectors |0̃⟩, |1̃⟩.
    pub fn basis(&self) -> [PureState; 2] {
        self.states
    }

    pub fn rho1(&self) -> DensityMatrix {
        self.states[0].density()
    }

    pub fn rho2(&self) -> DensityMatrix {
        self.states[1].density()
    }

    pub fn to_density(&self) -> DensityMatrix {
        let m = self.rho1().matrix() * c(self.p1(), 0.0) + self.rho2().matrix() * c(self.p2(), 0.0);
        DensityMatrix::from_matrix_unchecked(m)
    }
}

/// Spectral split of ρ, larger weight first.
pub fn decompose(rho: &DensityMatrix) -> OrthogonalMixture {
    let s = rho.spectral();
    OrthogonalMixture {
        weights: [s.lambda_plus.max(0.0), s.lambda_minus.max(0.0)],
        states: [s.v_plus, s.v_minus],
    }
}

/// How Protocol A fixes its free phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectionChoice {
    /// Π = |χ⟩⟨χ| with χ = μ|0̃⟩ + ν|1̃⟩, given as (μ, ν) in the mixture's own
    /// basis.
    Projector(PureState),
    /// The phase φ directly, in radians.
    Phase(f64),
}

impl ProjectionChoice {
    pub fn projector(mu: Complex64, nu: Complex64) -> Result<Self> {
        Ok(Self::Projector(PureState::normalized(mu, nu)?))
    }

    /// φ = arg(μν*) ∈ (−π, π] for the projector form.
    pub fn phase(&self) -> Result<f64> {
        match *self {
            Self::Phase(phi) => Ok(phi),
            Self::Projector(chi) => {
                let (mu, nu) = (chi.alpha(), chi.beta());
                check_projector(mu, nu)?;
                let phi = (mu * nu.conj()).arg();
                // `arg` yields −π on the negative real axis with a −0 imaginary part
                Ok(if phi <= -std::f64::consts::PI { std::f64::consts::PI } else { phi })
            }
        }
    }
}

fn check_projector(mu: Complex64, nu: Complex64) -> Result<()> {
    if mu.norm() <= tol::PHASE || nu.norm() <= tol::PHASE {
        return Err(Error::DegenerateProjector { mu: mu.norm(), nu: nu.norm() });
    }
    Ok(())
}

/// Protocol A: √p₁|0̃⟩ + √p₂ e^{−iφ}|1̃⟩.
pub fn purify_a(mix: &OrthogonalMixture, choice: ProjectionChoice) -> Result<PureState> {
    let phi = choice.phase()?;
    let [zero, one] = mix.basis();
    let v = zero.amplitudes() * c(mix.p1().sqrt(), 0.0)
        + one.amplitudes() * Complex64::from_polar(mix.p2().sqrt(), -phi);
    PureState::from_vector(v)
}

/// Protocol A evaluated as the matrix
///
/// p₁ρ₁ + p₂ρ₂ + √(p₁p₂)(ρ₁Πρ₂ + ρ₂Πρ₁)/√(tr(ρ₁Π) tr(ρ₂Π)).
///
/// Only the projector form of `pi` is accepted.
pub fn purify_a_via_projection(mix: &OrthogonalMixture, pi: ProjectionChoice) -> Result<DensityMatrix> {
    let chi = match pi {
        ProjectionChoice::Projector(chi) => chi,
        ProjectionChoice::Phase(_) => {
            return Err(Error::InvalidMixture("projection form requires a projector"))
        }
    };
    check_projector(chi.alpha(), chi.beta())?;
    let [zero, one] = mix.basis();
    let chi_lab = zero.amplitudes() * chi.alpha() + one.amplitudes() * chi.beta();
    let projector: CMatrix2 = chi_lab * chi_lab.adjoint();
    let rho1 = *mix.rho1().matrix();
    let rho2 = *mix.rho2().matrix();
    let tr1 = (rho1 * projector).trace().re;
    let tr2 = (rho2 * projector).trace().re;
    let cross = (rho1 * projector * rho2 + rho2 * projector * rho1)
        * c((mix.p1() * mix.p2()).sqrt() / (tr1 * tr2).sqrt(), 0.0);
    let m = rho1 * c(mix.p1(), 0.0) + rho2 * c(mix.p2(), 0.0) + cross;
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Result of Protocol B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolB {
    pub state: PureState,
    /// tr(ρ|ψ⟩⟨ψ|), equal to the largest eigenvalue.
    pub overlap: f64,
    /// The input had (numerically) equal eigenvalues; `state` is |0⟩.
    pub degenerate: bool,
}

/// Protocol B: the top eigenvector of ρ.
pub fn purify_b(rho: &DensityMatrix) -> ProtocolB {
    let s = rho.spectral();
    ProtocolB {
        state: s.v_plus,
        overlap: s.lambda_plus,
        degenerate: s.degenerate,
    }
}
