//! Single-qubit states: density matrices, pure states, Bloch vectors and the
//! closed-form 2×2 Hermitian eigendecomposition everything else builds on.
//!
//! Bloch coordinates follow the layout
//!
//! ```text
//! rho = 1/2 [[1 + a1,      a3 - i a2],
//!            [a3 + i a2,   1 - a1   ]]
//! ```
//!
//! so `a1` is the σ_z component, `a2` the σ_y component and `a3` the σ_x
//! component.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix2 = Matrix2<Complex64>;
pub type CVector2 = Vector2<Complex64>;

/// Numerical tolerances shared by all validators.
pub mod tol {
    pub const HERMITIAN: f64 = 1e-10;
    pub const TRACE: f64 = 1e-10;
    pub const ORTHOGONAL: f64 = 1e-10;
    pub const PSD: f64 = 1e-10;
    pub const RECONSTRUCTION: f64 = 1e-12;
    pub const NORM: f64 = 1e-10;
    pub const PHASE: f64 = 1e-12;
    /// Eigenvalue gap below which the computational basis is returned.
    pub const DEGENERACY: f64 = 1e-12;
}

/// Below this off-diagonal modulus the smaller eigenvalue is taken as det/λ₊.
const SMALL_COHERENCE: f64 = 1e-6;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entrywise modulus of a 2×2 complex matrix.
pub fn max_abs(m: &CMatrix2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_residual(m: &CMatrix2) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigenvalues (larger, smaller) of the Hermitian matrix [[a, p], [p*, d]].
fn hermitian_eigenvalues(a: f64, d: f64, p: Complex64) -> (f64, f64) {
    let half_trace = 0.5 * (a + d);
    let half_gap = (0.5 * (a - d)).hypot(p.norm());
    let plus = half_trace + half_gap;
    let minus = if p.norm() <= SMALL_COHERENCE && plus > 0.0 {
        (a * d - p.norm_sqr()) / plus
    } else {
        half_trace - half_gap
    };
    (plus, minus)
}

/// A validated 2×2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix2,
}

impl DensityMatrix {
    /// Validates `entries` (row-major) as a density matrix.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::from_matrix(CMatrix2::new(
            entries[0][0],
            entries[0][1],
            entries[1][0],
            entries[1][1],
        ))
    }

    pub fn from_real(entries: [[f64; 2]; 2]) -> Result<Self> {
        Self::new([
            [c(entries[0][0], 0.0), c(entries[0][1], 0.0)],
            [c(entries[1][0], 0.0), c(entries[1][1], 0.0)],
        ])
    }

    pub fn from_matrix(m: CMatrix2) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let residual = hermitian_residual(&m);
        if residual > tol::HERMITIAN {
            return Err(Error::NotHermitian { residual });
        }
        let residual = (m.trace() - ONE).norm();
        if residual > tol::TRACE {
            return Err(Error::TraceNotOne { residual });
        }
        let rho = Self::from_matrix_unchecked(m);
        let (_, min_eigenvalue) = hermitian_eigenvalues(rho.population(), rho.m[(1, 1)].re, rho.coherence());
        if min_eigenvalue < -tol::PSD {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(rho)
    }

    /// Wraps a matrix known to be a density matrix, projecting it onto the
    /// Hermitian subspace.
    pub(crate) fn from_matrix_unchecked(m: CMatrix2) -> Self {
        let h = (m + m.adjoint()) * c(0.5, 0.0);
        debug_assert!((h.trace() - ONE).norm() < 1e-8, "trace drifted: {}", h.trace());
        Self { m: h }
    }

    pub fn maximally_mixed() -> Self {
        Self::from_matrix_unchecked(CMatrix2::identity() * c(0.5, 0.0))
    }

    /// diag(p0, 1 - p0).
    pub fn diagonal(p0: f64) -> Result<Self> {
        Self::from_real([[p0, 0.0], [0.0, 1.0 - p0]])
    }

    pub fn from_bloch(b: BlochVector) -> Result<Self> {
        let norm = b.norm();
        if norm > 1.0 + tol::NORM {
            return Err(Error::BlochOutOfBall { norm });
        }
        Ok(Self::from_matrix_unchecked(CMatrix2::new(
            c(0.5 * (1.0 + b.a1), 0.0),
            c(0.5 * b.a3, -0.5 * b.a2),
            c(0.5 * b.a3, 0.5 * b.a2),
            c(0.5 * (1.0 - b.a1), 0.0),
        )))
    }

    pub fn to_bloch(&self) -> BlochVector {
        let p = self.coherence();
        BlochVector {
            a1: self.m[(0, 0)].re - self.m[(1, 1)].re,
            a2: -2.0 * p.im,
            a3: 2.0 * p.re,
        }
    }

    pub fn matrix(&self) -> &CMatrix2 {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// The (0,0) entry.
    pub fn population(&self) -> f64 {
        self.m[(0, 0)].re
    }

    /// The (0,1) entry.
    pub fn coherence(&self) -> Complex64 {
        self.m[(0, 1)]
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.overlap(self)
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() <= tol::NORM
    }

    pub fn spectral(&self) -> Spectrum2 {
        Spectrum2::of(self)
    }

    /// tr(ρ₁ρ₂).
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        let mut acc = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                acc += self.m[(i, j)] * other.m[(j, i)];
            }
        }
        acc.re
    }

    /// Von Neumann entropy in nats, with 0·ln 0 = 0.
    pub fn von_neumann_entropy(&self) -> f64 {
        let s = self.spectral();
        shannon_entropy(&[s.lambda_plus, s.lambda_minus])
    }

    pub fn determinant(&self) -> f64 {
        self.m[(0, 0)].re * self.m[(1, 1)].re - self.coherence().norm_sqr()
    }

    /// Convex combination `w·self + (1 - w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidProbability { index: 0, value: w });
        }
        Ok(Self::from_matrix_unchecked(
            self.m * c(w, 0.0) + other.m * c(1.0 - w, 0.0),
        ))
    }

    /// Matrix elements ⟨b_s|ρ|b_t⟩ in an orthonormal basis.
    pub fn in_basis(&self, basis: &[PureState; 2]) -> CMatrix2 {
        let u = basis_matrix(basis);
        u.adjoint() * self.m * u
    }

    /// The diagonal part of ρ in `basis`, mapped back to the computational frame.
    pub fn dephase_in(&self, basis: &[PureState; 2]) -> Self {
        let local = self.in_basis(basis);
        let u = basis_matrix(basis);
        let diag = CMatrix2::new(local[(0, 0)], ZERO, ZERO, local[(1, 1)]);
        Self::from_matrix_unchecked(u * diag * u.adjoint())
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs(&(self.m - other.m))
    }
}

/// Columns are the basis vectors.
pub(crate) fn basis_matrix(basis: &[PureState; 2]) -> CMatrix2 {
    CMatrix2::from_columns(&[basis[0].amplitudes(), basis[1].amplitudes()])
}

/// −Σ pᵢ ln pᵢ, skipping non-positive weights.
pub fn shannon_entropy(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Entropy of any qubit state with determinant `det`.
pub fn entropy_from_determinant(det: f64) -> Result<f64> {
    let r = disc_root(det)?;
    let rho = DensityMatrix::diagonal(0.5 * (1.0 + r))?;
    Ok(rho.von_neumann_entropy())
}

/// ∂S/∂det = ln((1 + r)/(1 − r))/r with r = √(1 − 4 det).
///
/// Returns the limit 2 at det = 1/4 and +∞ at det = 0.
pub fn entropy_determinant_slope(det: f64) -> Result<f64> {
    let r = disc_root(det)?;
    if r < 1e-8 {
        // series 2(1 + r²/3 + …)
        return Ok(2.0 * (1.0 + r * r / 3.0));
    }
    if r >= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(((1.0 + r) / (1.0 - r)).ln() / r)
}

fn disc_root(det: f64) -> Result<f64> {
    if !(-tol::PSD..=0.25 + tol::NORM).contains(&det) {
        return Err(Error::DeterminantOutOfRange(det));
    }
    Ok((1.0 - 4.0 * det).max(0.0).sqrt())
}

/// A normalized qubit vector. The first component whose modulus exceeds
/// [`tol::PHASE`] is stored real and non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amps: CVector2,
}

impl PureState {
    /// Requires |α|² + |β|² = 1 within [`tol::NORM`].
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if !norm_sqr.is_finite() {
            return Err(Error::NonFinite);
        }
        if (norm_sqr - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Self::normalized(alpha, beta)
    }

    /// Normalizes any nonzero vector.
    pub fn normalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::from_vector(CVector2::new(alpha, beta))
    }

    pub fn from_vector(v: CVector2) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroVector);
        }
        let v = v / c(norm, 0.0);
        let i = if v[0].norm() > tol::PHASE { 0 } else { 1 };
        let phase = v[i].conj() / c(v[i].norm(), 0.0);
        let mut amps = v * phase;
        amps[i] = c(v[i].norm(), 0.0);
        Ok(Self { amps })
    }

    pub fn zero() -> Self {
        Self { amps: CVector2::new(ONE, ZERO) }
    }

    pub fn one() -> Self {
        Self { amps: CVector2::new(ZERO, ONE) }
    }

    pub fn computational_basis() -> [PureState; 2] {
        [Self::zero(), Self::one()]
    }

    pub fn alpha(&self) -> Complex64 {
        self.amps[0]
    }

    pub fn beta(&self) -> Complex64 {
        self.amps[1]
    }

    pub fn amplitudes(&self) -> CVector2 {
        self.amps
    }

    /// |ψ⟩⟨ψ|.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.amps * self.amps.adjoint())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// |⟨self|other⟩|².
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// The orthogonal state (−β*, α*), phase-fixed.
    pub fn complement(&self) -> PureState {
        Self::from_vector(CVector2::new(-self.amps[1].conj(), self.amps[0].conj()))
            .expect("complement of a unit vector is a unit vector")
    }

    pub fn bloch(&self) -> BlochVector {
        self.density().to_bloch()
    }

    /// Builds the pure state with unit Bloch vector `b`.
    pub fn from_bloch(b: BlochVector) -> Result<Self> {
        let norm = b.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::BlochOutOfBall { norm });
        }
        let pop0 = (0.5 * (1.0 + b.a1)).clamp(0.0, 1.0);
        let alpha = pop0.sqrt();
        if alpha > 1e-8 {
            // ρ₁₀ = βα* = (a3 + i a2)/2
            Self::normalized(c(alpha, 0.0), c(0.5 * b.a3, 0.5 * b.a2) / c(alpha, 0.0))
        } else {
            Ok(Self::one())
        }
    }
}

/// Real Bloch coordinates (σ_z, σ_y, σ_x components).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl BlochVector {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    /// From conventional (x, y, z) ordering.
    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Self {
        Self { a1: z, a2: y, a3: x }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> BlochVector {
        Self::new(self.a1 * s, self.a2 * s, self.a3 * s)
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.a1 * other.a1 + self.a2 * other.a2 + self.a3 * other.a3
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.a1 - other.a1)
            .abs()
            .max((self.a2 - other.a2).abs())
            .max((self.a3 - other.a3).abs())
    }
}

/// Eigendecomposition of a qubit density matrix, larger eigenvalue first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum2 {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: PureState,
    pub v_minus: PureState,
    /// Set when λ₊ − λ₋ ≤ [`tol::DEGENERACY`]; the vectors are then the
    /// computational basis.
    pub degenerate: bool,
}

impl Spectrum2 {
    fn of(rho: &DensityMatrix) -> Self {
        let a = rho.population();
        let d = rho.m[(1, 1)].re;
        let p = rho.coherence();
        let (lambda_plus, lambda_minus) = hermitian_eigenvalues(a, d, p);
        if lambda_plus - lambda_minus <= tol::DEGENERACY {
            return Self {
                lambda_plus,
                lambda_minus,
                v_plus: PureState::zero(),
                v_minus: PureState::one(),
                degenerate: true,
            };
        }
        // Null vectors of ρ − λ₊ from either row; keep the better conditioned one.
        let from_row0 = CVector2::new(p, c(lambda_plus - a, 0.0));
        let from_row1 = CVector2::new(c(lambda_plus - d, 0.0), p.conj());
        let v = if from_row0.norm_squared() >= from_row1.norm_squared() {
            from_row0
        } else {
            from_row1
        };
        let v_plus = PureState::from_vector(v).expect("gap > 0 implies a nonzero null vector");
        Self {
            lambda_plus,
            lambda_minus,
            v_plus,
            v_minus: v_plus.complement(),
            degenerate: false,
        }
    }

    pub fn basis(&self) -> [PureState; 2] {
        [self.v_plus, self.v_minus]
    }

    /// λ₊P₊ + λ₋P₋.
    pub fn reconstruct(&self) -> CMatrix2 {
        self.v_plus.density().m * c(self.lambda_plus, 0.0)
            + self.v_minus.density().m * c(self.lambda_minus, 0.0)
    }
}

/// tr(ρ₁ρ₂); symmetric in its arguments.
pub fn overlap(r1: &DensityMatrix, r2: &DensityMatrix) -> f64 {
    r1.overlap(r2)
}
