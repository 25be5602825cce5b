//! Post-measurement state reconstruction from exact spin-component
//! probabilities.
//!
//! A record of `k` measurements always covers the axes in the order z, y, x:
//! `k = 1` is {z}, `k = 2` is {z, y}, `k = 3` is {z, y, x}.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{c, tol, BlochVector, DensityMatrix, PureState};

/// Tolerance for matching user-supplied records against pure states.
pub const CONSISTENCY: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    Y,
    X,
}

impl Axis {
    pub const CANONICAL: [Axis; 3] = [Axis::Z, Axis::Y, Axis::X];

    /// The "+" eigenstate: |+⟩_z, (|+⟩_z + i|−⟩_z)/√2, (|+⟩_z + |−⟩_z)/√2.
    pub fn plus_state(self) -> PureState {
        match self {
            Axis::Z => PureState::zero(),
            Axis::Y => PureState::normalized(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap(),
            Axis::X => PureState::normalized(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap(),
        }
    }

    pub fn minus_state(self) -> PureState {
        self.plus_state().complement()
    }

    /// The Bloch component along this axis.
    pub fn component(self, b: &BlochVector) -> f64 {
        match self {
            Axis::Z => b.a1,
            Axis::Y => b.a2,
            Axis::X => b.a3,
        }
    }
}

/// Number of measured spin components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub enum MeasurementCount {
    One,
    Two,
    Three,
}

impl MeasurementCount {
    pub const ALL: [MeasurementCount; 3] = [Self::One, Self::Two, Self::Three];

    pub fn get(self) -> usize {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
        }
    }

    pub fn axes(self) -> &'static [Axis] {
        &Axis::CANONICAL[..self.get()]
    }
}

impl TryFrom<usize> for MeasurementCount {
    type Error = Error;

    fn try_from(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            other => Err(Error::InvalidMeasurementCount(other)),
        }
    }
}

impl From<MeasurementCount> for usize {
    fn from(k: MeasurementCount) -> usize {
        k.get()
    }
}

/// Probabilities of the "+" outcome on each measured axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    count: MeasurementCount,
    probs: Vec<f64>,
}

impl MeasurementRecord {
    pub fn new(probs: &[f64]) -> Result<Self> {
        let count = MeasurementCount::try_from(probs.len())?;
        for (index, &value) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        Ok(Self { count, probs: probs.to_vec() })
    }

    pub fn count(&self) -> MeasurementCount {
        self.count
    }

    pub fn k(&self) -> usize {
        self.count.get()
    }

    pub fn axes(&self) -> &'static [Axis] {
        self.count.axes()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Aⱼ = 2pⱼ − 1 for the measured axes.
    pub fn bloch_components(&self) -> Vec<f64> {
        self.probs.iter().map(|p| 2.0 * p - 1.0).collect()
    }

    /// |A| over the measured components.
    pub fn measured_norm(&self) -> f64 {
        self.bloch_components().iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Measured components with the unmeasured ones set to zero.
    pub fn bloch(&self) -> BlochVector {
        let a = self.bloch_components();
        BlochVector::new(a[0], a.get(1).copied().unwrap_or(0.0), a.get(2).copied().unwrap_or(0.0))
    }
}

/// Outcome probabilities of measuring `psi` along the first `k` axes.
pub fn probabilities_from_state(psi: &PureState, k: MeasurementCount) -> MeasurementRecord {
    let b = psi.bloch();
    let probs = k
        .axes()
        .iter()
        .map(|axis| (0.5 * (1.0 + axis.component(&b))).clamp(0.0, 1.0))
        .collect();
    MeasurementRecord { count: k, probs }
}

/// Equal-weight mixture of the per-axis post-measurement states,
/// (I + A·σ/k)/2 over the measured axes.
pub fn unbiased_state(rec: &MeasurementRecord) -> DensityMatrix {
    let k = rec.k() as f64;
    let a = rec.bloch();
    DensityMatrix::from_bloch(a.scaled(1.0 / k)).expect("|A|/k ≤ 1 whenever every p ∈ [0, 1]")
}

/// Maximum-entropy state (I + A·σ)/2 over the measured axes.
pub fn maxent_state(rec: &MeasurementRecord) -> Result<DensityMatrix> {
    let a = rec.bloch();
    let norm = a.norm();
    if norm > 1.0 + CONSISTENCY {
        return Err(Error::MaxEntNotPositive { norm });
    }
    let a = if norm > 1.0 { a.scaled(1.0 / norm) } else { a };
    DensityMatrix::from_bloch(a)
}

/// Pure states compatible with a record.
#[derive(Debug, Clone, PartialEq)]
pub enum CompatibleStates {
    Finite(Vec<PureState>),
    /// `k = 1`: √p₁|+⟩_z + √(1 − p₁) e^{iθ}|−⟩_z for unknown θ.
    PhaseFamily(PhaseFamily),
}

impl CompatibleStates {
    /// Enumerates the finite set, or samples the family on `grid` phases.
    pub fn sample(&self, grid: usize) -> Vec<PureState> {
        match self {
            Self::Finite(states) => states.clone(),
            Self::PhaseFamily(family) => family.grid(grid).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFamily {
    pub p1: f64,
}

impl PhaseFamily {
    pub fn state(&self, theta: f64) -> PureState {
        let beta = num_complex::Complex64::from_polar((1.0 - self.p1).max(0.0).sqrt(), theta);
        PureState::normalized(c(self.p1.sqrt(), 0.0), beta).expect("unit vector")
    }

    /// θⱼ = 2πj/n, j = 0..n.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = PureState> + '_ {
        (0..n).map(move |j| self.state(std::f64::consts::TAU * j as f64 / n as f64))
    }
}

/// Both pure states sharing the z and y components of a `k = 2` record,
/// A₃ = ±√(1 − |A|²). The pair coincides when |A| = 1.
pub fn two_axis_candidates(rec: &MeasurementRecord) -> Result<[PureState; 2]> {
    if rec.count() != MeasurementCount::Two {
        return Err(Error::InvalidMeasurementCount(rec.k()));
    }
    let norm = rec.measured_norm();
    if norm > 1.0 + CONSISTENCY {
        return Err(Error::InconsistentRecord(format!("|A| = {norm} exceeds 1")));
    }
    let a = rec.bloch().scaled(1.0 / norm.max(1.0));
    let s = (1.0 - a.a1 * a.a1 - a.a2 * a.a2).max(0.0).sqrt();
    let plus = PureState::from_bloch(BlochVector::new(a.a1, a.a2, s))?;
    let minus = PureState::from_bloch(BlochVector::new(a.a1, a.a2, -s))?;
    Ok([plus, minus])
}

pub fn compatible_initial_states(rec: &MeasurementRecord) -> Result<CompatibleStates> {
    match rec.count() {
        MeasurementCount::One => Ok(CompatibleStates::PhaseFamily(PhaseFamily { p1: rec.probs[0] })),
        MeasurementCount::Two => {
            let [plus, minus] = two_axis_candidates(rec)?;
            if plus.overlap(&minus) >= 1.0 - tol::ORTHOGONAL {
                Ok(CompatibleStates::Finite(vec![plus]))
            } else {
                Ok(CompatibleStates::Finite(vec![plus, minus]))
            }
        }
        MeasurementCount::Three => {
            let a = rec.bloch();
            let norm = a.norm();
            if (norm - 1.0).abs() > CONSISTENCY {
                return Err(Error::InconsistentRecord(format!(
                    "complete record has |A| = {norm}, a pure state needs 1"
                )));
            }
            let psi = PureState::from_bloch(a.scaled(1.0 / norm))?;
            Ok(CompatibleStates::Finite(vec![psi]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rec(p: &[f64]) -> MeasurementRecord {
        MeasurementRecord::new(p).unwrap()
    }

    /// Average over axes of p|+⟩⟨+| + (1 − p)|−⟩⟨−|, built from projectors.
    fn brute_force_unbiased(r: &MeasurementRecord) -> nalgebra::Matrix2<num_complex::Complex64> {
        let mut acc = nalgebra::Matrix2::zeros();
        for (axis, &p) in r.axes().iter().zip(r.probs()) {
            acc += axis.plus_state().density().matrix() * c(p, 0.0)
                + axis.minus_state().density().matrix() * c(1.0 - p, 0.0);
        }
        acc / c(r.k() as f64, 0.0)
    }

    #[test]
    fn record_validation() {
        assert!(matches!(MeasurementRecord::new(&[]), Err(Error::InvalidMeasurementCount(0))));
        assert!(matches!(MeasurementRecord::new(&[0.1; 4]), Err(Error::InvalidMeasurementCount(4))));
        assert!(matches!(
            MeasurementRecord::new(&[0.5, 1.2]),
            Err(Error::InvalidProbability { index: 1, .. })
        ));
    }

    #[test]
    fn probabilities_examples() {
        let three = MeasurementCount::Three;
        let r = probabilities_from_state(&PureState::zero(), three);
        assert_eq!(r.probs(), &[1.0, 0.5, 0.5]);

        let plus_x = Axis::X.plus_state();
        let r = probabilities_from_state(&plus_x, three);
        assert_abs_diff_eq!(r.probs()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.probs()[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.probs()[2], 1.0, epsilon = 1e-15);

        let plus_y = PureState::normalized(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let r = probabilities_from_state(&plus_y, MeasurementCount::Two);
        assert_eq!(r.k(), 2);
        assert_abs_diff_eq!(r.probs()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.probs()[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn axis_states_match_bloch_layout() {
        assert_eq!(Axis::Z.plus_state().bloch(), BlochVector::new(1.0, 0.0, 0.0));
        assert!(Axis::Y.plus_state().bloch().max_abs_diff(&BlochVector::new(0.0, 1.0, 0.0)) < 1e-15);
        assert!(Axis::X.plus_state().bloch().max_abs_diff(&BlochVector::new(0.0, 0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn unbiased_examples() {
        let r = rec(&[1.0, 0.5, 0.5]);
        let rho = unbiased_state(&r);
        assert!(crate::qubit::max_abs(&(rho.matrix() - brute_force_unbiased(&r))) < 1e-15);
        assert!(rho.max_abs_diff(&DensityMatrix::diagonal(2.0 / 3.0).unwrap()) < 1e-15);

        let rho = unbiased_state(&rec(&[0.8]));
        assert!(rho.max_abs_diff(&DensityMatrix::diagonal(0.8).unwrap()) < 1e-15);
    }

    #[test]
    fn unbiased_closed_forms() {
        let (p1, p2, p3) = (0.7, 0.2, 0.45);
        let (a1, a2, a3) = (2.0 * p1 - 1.0, 2.0 * p2 - 1.0, 2.0 * p3 - 1.0);
        let r3 = rec(&[p1, p2, p3]);
        let expected3 = nalgebra::Matrix2::new(
            c(a1 + 3.0, 0.0),
            c(a3, -a2),
            c(a3, a2),
            c(3.0 - a1, 0.0),
        ) / c(6.0, 0.0);
        assert!(crate::qubit::max_abs(&(unbiased_state(&r3).matrix() - expected3)) < 1e-15);
        assert!(crate::qubit::max_abs(&(brute_force_unbiased(&r3) - expected3)) < 1e-15);

        let r2 = rec(&[p1, p2]);
        let expected2 = nalgebra::Matrix2::new(c(a1 + 2.0, 0.0), c(0.0, -a2), c(0.0, a2), c(2.0 - a1, 0.0))
            / c(4.0, 0.0);
        assert!(crate::qubit::max_abs(&(unbiased_state(&r2).matrix() - expected2)) < 1e-15);
        assert!(crate::qubit::max_abs(&(brute_force_unbiased(&r2) - expected2)) < 1e-15);

        let expected_max2 =
            nalgebra::Matrix2::new(c(1.0 + a1, 0.0), c(0.0, -a2), c(0.0, a2), c(1.0 - a1, 0.0)) / c(2.0, 0.0);
        assert!(crate::qubit::max_abs(&(maxent_state(&r2).unwrap().matrix() - expected_max2)) < 1e-15);
    }

    #[test]
    fn maxent_examples() {
        let rho = maxent_state(&rec(&[1.0, 0.5, 0.5])).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::diagonal(1.0).unwrap()) < 1e-15);
        let r1 = rec(&[0.8]);
        assert_eq!(maxent_state(&r1).unwrap(), unbiased_state(&r1));
        assert!(matches!(maxent_state(&rec(&[1.0, 1.0, 0.5])), Err(Error::MaxEntNotPositive { .. })));
    }

    #[test]
    fn compatible_examples() {
        match compatible_initial_states(&rec(&[1.0, 0.5, 0.5])).unwrap() {
            CompatibleStates::Finite(v) => assert_eq!(v, vec![PureState::zero()]),
            other => panic!("{other:?}"),
        }
        match compatible_initial_states(&rec(&[1.0, 0.5])).unwrap() {
            CompatibleStates::Finite(v) => assert_eq!(v, vec![PureState::zero()]),
            other => panic!("{other:?}"),
        }
        match compatible_initial_states(&rec(&[0.5, 0.5])).unwrap() {
            CompatibleStates::Finite(v) => {
                assert_eq!(v.len(), 2);
                let plus_x = Axis::X.plus_state();
                let minus_x = Axis::X.minus_state();
                assert_abs_diff_eq!(v[0].overlap(&plus_x), 1.0, epsilon = 1e-15);
                assert_abs_diff_eq!(v[1].overlap(&minus_x), 1.0, epsilon = 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            compatible_initial_states(&rec(&[0.9, 0.9, 0.9])),
            Err(Error::InconsistentRecord(_))
        ));
        assert!(matches!(
            compatible_initial_states(&rec(&[1.0, 1.0])),
            Err(Error::InconsistentRecord(_))
        ));
    }

    #[test]
    fn phase_family_reproduces_record() {
        let r = rec(&[0.3]);
        let family = compatible_initial_states(&r).unwrap();
        let states = family.sample(16);
        assert_eq!(states.len(), 16);
        for psi in states {
            let back = probabilities_from_state(&psi, MeasurementCount::One);
            assert_abs_diff_eq!(back.probs()[0], 0.3, epsilon = 1e-15);
        }
    }

    #[test]
    fn measurement_count_serde() {
        assert_eq!(MeasurementCount::try_from(2).unwrap(), MeasurementCount::Two);
        assert_eq!(usize::from(MeasurementCount::Three), 3);
    }
}
