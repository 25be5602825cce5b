use nalgebra::{Matrix2, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;
use qpurify_core::qubit::{entropy_determinant_slope, entropy_from_determinant, max_abs};
use qpurify_core::sampling::HaarSampler;
use qpurify_core::{BlochVector, DensityMatrix};

fn bloch_ball() -> impl Strategy<Value = BlochVector> {
    (0.0..=1.0f64, -1.0..=1.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, cos_t, phi)| {
            let sin_t = (1.0 - cos_t * cos_t).sqrt();
            BlochVector::new(r * cos_t, r * sin_t * phi.sin(), r * sin_t * phi.cos())
        })
}

fn density() -> impl Strategy<Value = DensityMatrix> {
    bloch_ball().prop_map(|b| DensityMatrix::from_bloch(b).unwrap())
}

fn to_nalgebra(rho: &DensityMatrix) -> Matrix2<Complex64> {
    Matrix2::from_fn(|i, j| rho.entry(i, j))
}

#[test]
fn spectral_matches_generic_eigensolver() {
    let mut s = HaarSampler::new(2024);
    for _ in 0..10_000 {
        let rho = s.density();
        let sp = rho.spectral();

        assert!(max_abs(&(sp.reconstruct() - rho.matrix())) <= 1e-12);
        assert!(sp.v_plus.inner(&sp.v_minus).norm() <= 1e-12);

        let generic = SymmetricEigen::new(to_nalgebra(&rho));
        let top = generic.eigenvalues.max();
        assert!((sp.lambda_plus - top).abs() <= 1e-12, "{} vs {top}", sp.lambda_plus);

        // λ₊ = a + Δ/2 with Δ = 1 − 2a + √(4|p|² + (1 − 2a)²)
        let a = rho.entry(0, 0).re;
        let p = rho.entry(0, 1).norm();
        let delta = 1.0 - 2.0 * a + (4.0 * p * p + (1.0 - 2.0 * a).powi(2)).sqrt();
        assert!((sp.lambda_plus - (a + delta / 2.0)).abs() <= 1e-12);
    }
}

#[test]
fn near_degenerate_spectra_stay_accurate() {
    for exp in 6..15 {
        let eps = 10f64.powi(-exp);
        let rho = DensityMatrix::new([
            [Complex64::new(0.5 + eps, 0.0), Complex64::new(0.0, eps)],
            [Complex64::new(0.0, -eps), Complex64::new(0.5 - eps, 0.0)],
        ])
        .unwrap();
        let sp = rho.spectral();
        assert!(max_abs(&(sp.reconstruct() - rho.matrix())) <= 1e-12);
        assert!((sp.lambda_plus + sp.lambda_minus - 1.0).abs() <= 1e-15);
    }
}

#[test]
fn spec_validation_examples() {
    assert!(DensityMatrix::from_real([[0.5, 0.25], [0.25, 0.5]]).is_ok());
    let err = DensityMatrix::from_real([[0.7, 0.6], [0.6, 0.3]]).unwrap_err();
    match err {
        qpurify_core::Error::NotPositive { min_eigenvalue } => {
            let expected = 0.5 - (0.04f64 + 0.36).sqrt();
            assert!((min_eigenvalue - expected).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn entropy_slope_matches_finite_differences() {
    let h = 1e-6;
    for j in 1..=24 {
        let det = 0.01 * j as f64;
        let r = (1.0 - 4.0 * det).sqrt();
        let expected = (1.0 / r) * ((1.0 + r) / (1.0 - r)).ln();
        let slope = entropy_determinant_slope(det).unwrap();
        assert!((slope - expected).abs() <= 1e-12 * expected);
        assert!(slope >= 0.0);

        let s = |d: f64| entropy_from_determinant(d).unwrap();
        let fd = (s(det + h) - s(det - h)) / (2.0 * h);
        assert!((fd - slope).abs() / slope <= 1e-4, "det {det}: {fd} vs {slope}");
    }
}

#[test]
fn entropy_of_two_thirds() {
    let rho = DensityMatrix::diagonal(2.0 / 3.0).unwrap();
    let direct = -(2.0f64 / 3.0) * (2.0f64 / 3.0).ln() - (1.0f64 / 3.0) * (1.0f64 / 3.0).ln();
    assert!((rho.von_neumann_entropy() - direct).abs() < 1e-15);
    assert!((direct - 0.636514).abs() < 1e-6);
    assert!((rho.determinant() - 2.0 / 9.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn bloch_round_trip(b in bloch_ball()) {
        let back = DensityMatrix::from_bloch(b).unwrap().to_bloch();
        prop_assert!(back.max_abs_diff(&b) <= 1e-14);
    }

    #[test]
    fn overlap_is_bilinear(r1 in density(), r2 in density(), r3 in density(), w in 0.0..=1.0f64) {
        let mixed = r1.mix(&r2, w).unwrap();
        let lhs = mixed.overlap(&r3);
        let rhs = w * r1.overlap(&r3) + (1.0 - w) * r2.overlap(&r3);
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn overlap_is_symmetric_and_bounded(r1 in density(), r2 in density()) {
        let f = r1.overlap(&r2);
        prop_assert!((f - r2.overlap(&r1)).abs() <= 1e-15);
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn entropy_and_determinant_bounds(rho in density()) {
        let s = rho.von_neumann_entropy();
        prop_assert!(s >= 0.0 && s <= std::f64::consts::LN_2 + 1e-15);
        let det = rho.determinant();
        prop_assert!(det >= -1e-10 && det <= 0.25 + 1e-10);
        prop_assert!((entropy_from_determinant(det.clamp(0.0, 0.25)).unwrap() - s).abs() <= 1e-9);
    }

    #[test]
    fn eigenvectors_carry_phase_convention(rho in density()) {
        let sp = rho.spectral();
        for v in sp.basis() {
            let pivot = if v.alpha().norm() > 1e-12 { v.alpha() } else { v.beta() };
            prop_assert!(pivot.im == 0.0 && pivot.re > 0.0);
        }
    }
}
