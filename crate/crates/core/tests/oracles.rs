//! Closed forms against the brute-force references.

use num_complex::Complex64;
use std::f64::consts::PI;

use inphase::exact::{
    displacement_element, posmom_overlap, sho_propagator, sho_propagator_complex, squeeze_element,
    squeezed_coherent_element, SqueezeParam,
};
use inphase::oracle::{
    fock_rotation_propagator, operator_matrix, quad_overlap_2d, quad_overlap_fixed,
    series_displacement_element, OperatorKind, QuadKind,
};
use inphase::states::{cat_state, coherent_fock_coeffs, FockVector};
use inphase::PhasePoint;

#[test]
fn displacement_three_ways() {
    for z in [PhasePoint::new(1.3, -0.4), PhasePoint::new(-3.0, 2.2)] {
        let op = operator_matrix(OperatorKind::Displacement(z), 160).unwrap();
        for m in (0..=24).step_by(3) {
            for n in (0..=24).step_by(4) {
                let closed = displacement_element(m, n, z.q, z.p).unwrap();
                let series = series_displacement_element(m, n, z.q, z.p).unwrap();
                assert!((closed - series).norm() < 1e-10, "series ({m},{n})");
                assert!((closed - op.get(m, n)).norm() < 1e-10, "matrix ({m},{n})");
            }
        }
    }
}

#[test]
fn squeeze_against_matrix_exponential() {
    for mu in [0.02, 0.9, 1.6] {
        let op = operator_matrix(OperatorKind::Squeeze(mu), 192).unwrap();
        let sq = SqueezeParam::new(mu).unwrap();
        for m in 0..=36 {
            for n in 0..=36 {
                let closed = squeeze_element(m, sq, n).unwrap();
                assert!(
                    (closed - op.get(m, n).re).abs() < 1e-12,
                    "mu {mu} ({m},{n})"
                );
                assert!(op.get(m, n).im.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn displaced_squeezed_vacuum_against_matrices() {
    let mu = 0.8;
    let z = PhasePoint::new(0.7, -1.2);
    let vacuum = operator_matrix(OperatorKind::Squeeze(mu), 128)
        .unwrap()
        .column(0);
    let column = operator_matrix(OperatorKind::Displacement(z), 128)
        .unwrap()
        .apply(&vacuum)
        .unwrap();
    let sq = SqueezeParam::new(mu).unwrap();
    for (n, c) in column.iter().enumerate().take(20) {
        let closed = squeezed_coherent_element(n, sq, z.q, z.p).unwrap();
        assert!((closed - c).norm() < 1e-10, "n = {n}");
    }
}

#[test]
fn rotation_matrix_is_diagonal_phase() {
    let t = 0.37;
    let op = operator_matrix(OperatorKind::Rotation(t), 16).unwrap();
    for n in 0..=16 {
        assert!((op.get(n, n) - Complex64::from_polar(1.0, t * n as f64)).norm() < 1e-14);
    }
}

#[test]
fn posmom_quadrature_converges() {
    let exact = posmom_overlap(1.0, 2.0);
    let coarse =
        (quad_overlap_fixed(QuadKind::Posmom { q: 1.0, p: 2.0 }, 2).unwrap() - exact).norm();
    let fine =
        (quad_overlap_fixed(QuadKind::Posmom { q: 1.0, p: 2.0 }, 16).unwrap() - exact).norm();
    assert!(fine < coarse, "{fine} vs {coarse}");
    assert!(fine < 1e-8);
    assert!(quad_overlap_fixed(QuadKind::Posmom { q: 0.0, p: 0.0 }, 0).is_err());
}

#[test]
fn propagator_against_quadrature_and_fock_sum() {
    for t in [0.5, 1.1, 2.6] {
        for (q1, q2) in [(0.0, 0.4), (-1.2, 0.9)] {
            let closed = sho_propagator(q2, q1, t).unwrap();
            let quad = quad_overlap_2d(QuadKind::Propagator { q1, q2, t }).unwrap();
            assert!((closed - quad).norm() < 1e-7, "t = {t}");
            let tau = Complex64::new(t, -0.5);
            let sum = fock_rotation_propagator(q2, q1, tau, 128).unwrap();
            assert!((sum - sho_propagator_complex(q2, q1, tau).unwrap()).norm() < 1e-10);
        }
    }
    // the damped kernel, checked above against the Fock sum, meets the real one
    let v = sho_propagator(0.3, -0.2, PI / 2.0).unwrap();
    for eps in [1e-4, 1e-8, 1e-12] {
        let damped = sho_propagator_complex(0.3, -0.2, Complex64::new(PI / 2.0, -eps)).unwrap();
        assert!((v - damped).norm() < 10.0 * eps);
    }
}

#[test]
fn resolution_of_identity() {
    let phi = coherent_fock_coeffs(PhasePoint::new(0.5, -0.3), 40).unwrap();
    let psi = cat_state(0.8, 0.4, 40).unwrap();
    let quad = quad_overlap_2d(QuadKind::Resolution {
        phi: &phi,
        psi: &psi,
    })
    .unwrap();
    assert!((quad - phi.inner(&psi).unwrap()).norm() < 1e-8);
    let n = FockVector::number_state(3, 40).unwrap();
    let quad = quad_overlap_2d(QuadKind::Resolution { phi: &n, psi: &n }).unwrap();
    assert!((quad - 1.0).norm() < 1e-8);
}
