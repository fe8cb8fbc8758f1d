//! Worked values for the public functions, each checked against an
//! independent hand computation or oracle.

use num_complex::Complex64;
use std::f64::consts::PI;

use inphase::exact::{
    displacement_element, fock_position_wavefn, posmom_overlap, sho_propagator, squeeze_element,
    squeezed_coherent_element, SqueezeParam,
};
use inphase::oracle::{operator_matrix, quad_overlap_2d, OperatorKind, QuadKind};
use inphase::phasespace::{
    bargmann_phase, coherent_overlap, displacement_compose, pancharatnam_phase,
    polyline_geometric_phase, triangle_area, PhaseCurve,
};
use inphase::specfun::{hermite, laguerre, log_factorial, norm_factor_log};
use inphase::states::{
    build_superposition, coherent_fock_coeffs, evolve, q_closed_form, q_function, quadrature_stats,
    rotated_label, two_source_q, FockVector, QConvention, QFamily, SuperpositionKind,
    SuperpositionSpec, Transform,
};
use inphase::PhasePoint;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn factorial_logs() {
    assert_eq!(log_factorial(0), 0.0);
    assert_eq!(log_factorial(1), 0.0);
    assert!((log_factorial(5) - 120f64.ln()).abs() < 1e-14);
    assert!((norm_factor_log(1) - 0.5).abs() < 1e-15);
    let direct = 10.0 - 10.0 * 20f64.ln() + 0.5 * (1..=20).map(|k| (k as f64).ln()).sum::<f64>();
    assert!((norm_factor_log(20) - direct).abs() < 1e-12);
}

#[test]
fn hermite_values() {
    assert_eq!(
        hermite(0, Complex64::new(3.7, -1.0)).unwrap(),
        Complex64::new(1.0, 0.0)
    );
    assert!(close(
        hermite(4, Complex64::new(0.0, 0.0)).unwrap(),
        Complex64::new(12.0, 0.0),
        1e-12
    ));
    assert!(close(
        hermite(2, Complex64::i()).unwrap(),
        Complex64::new(-6.0, 0.0),
        1e-12
    ));
}

#[test]
fn laguerre_values() {
    assert_eq!(laguerre(0, 3, 1.7).unwrap(), 1.0);
    assert!((laguerre(1, 0, 2.0).unwrap() + 1.0).abs() < 1e-14);
    assert!((laguerre(2, 0, 2.0).unwrap() + 1.0).abs() < 1e-14);
    assert!(laguerre(2, -3, 1.0).is_err());
}

#[test]
fn overlap_values() {
    let a = PhasePoint::new(0.3, -1.1);
    assert!(close(
        coherent_overlap(a, a),
        Complex64::new(1.0, 0.0),
        1e-15
    ));
    let b = PhasePoint::new(1.2, 0.5);
    let vac = coherent_overlap(PhasePoint::ORIGIN, b);
    assert!(close(
        vac,
        Complex64::new((-(1.44 + 0.25) / 4.0f64).exp(), 0.0),
        1e-15
    ));
    let got = coherent_overlap(PhasePoint::new(1.0, 0.0), PhasePoint::new(0.0, 1.0));
    let want = Complex64::from_polar((-0.5f64).exp(), 0.5);
    assert!(close(got, want, 1e-15));
    // Fock-series oracle for the same pair
    let za = PhasePoint::new(1.0, 0.0).z();
    let zb = PhasePoint::new(0.0, 1.0).z();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..64 {
        term *= za.conj() * zb / n as f64;
        sum += term;
    }
    let series = sum * (-(za.norm_sqr() + zb.norm_sqr()) / 2.0).exp();
    assert!(close(got, series, 1e-14));
}

#[test]
fn composition_law() {
    let z = PhasePoint::new(0.7, -0.2);
    let (sum, phase) = displacement_compose(z, PhasePoint::new(-z.q, -z.p));
    assert_eq!((sum, phase), (PhasePoint::ORIGIN, 0.0));
    let (sum, phase) = displacement_compose(PhasePoint::new(1.5, 0.0), PhasePoint::new(0.0, 2.0));
    assert_eq!(sum, PhasePoint::new(1.5, 2.0));
    assert!((phase - 1.5).abs() < 1e-15);
}

#[test]
fn composition_phase_matches_matrix_product() {
    let (a, b) = (PhasePoint::new(0.8, -0.3), PhasePoint::new(-0.4, 1.1));
    let da = operator_matrix(OperatorKind::Displacement(a), 128).unwrap();
    let db = operator_matrix(OperatorKind::Displacement(b), 128).unwrap();
    let (sum, phase) = displacement_compose(a, b);
    let dsum = operator_matrix(OperatorKind::Displacement(sum), 128).unwrap();
    let product = db.product(&da);
    for m in 0..6 {
        for n in 0..6 {
            let want = Complex64::from_polar(1.0, phase) * dsum.get(m, n);
            assert!(close(product[[m, n]], want, 1e-9), "({m},{n})");
        }
    }
}

#[test]
fn triangle_and_phase_values() {
    let (o, x, y) = (
        PhasePoint::ORIGIN,
        PhasePoint::new(1.0, 0.0),
        PhasePoint::new(0.0, 1.0),
    );
    assert_eq!(triangle_area(o, x, y), 0.5);
    assert_eq!(triangle_area(o, y, x), -0.5);
    assert_eq!(triangle_area(o, x, PhasePoint::new(2.0, 0.0)), 0.0);
    assert_eq!(pancharatnam_phase(x, x), 0.0);
    assert!((pancharatnam_phase(x, y) - 0.5).abs() < 1e-15);
    assert!((bargmann_phase(o, x, y) - 0.5).abs() < 1e-15);
    assert_eq!(bargmann_phase(x, x, y), 0.0);
}

#[test]
fn polyline_values() {
    let square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        .map(|(q, p)| PhasePoint::new(q, p))
        .to_vec();
    let phase = polyline_geometric_phase(&PhaseCurve::closed(square).unwrap());
    assert!((phase + 1.0).abs() < 1e-14);
    let radial = (0..10)
        .map(|i| PhasePoint::new(2.0 * i as f64 / 9.0, 0.0))
        .collect();
    assert_eq!(
        polyline_geometric_phase(&PhaseCurve::open(radial).unwrap()),
        0.0
    );
    assert!(PhaseCurve::closed(vec![PhasePoint::ORIGIN]).is_err());
    let circle = PhaseCurve::circle(10f64.sqrt(), 500).unwrap();
    assert!((polyline_geometric_phase(&circle) + 10.0 * PI).abs() < 1e-4);
}

#[test]
fn coherent_coefficients() {
    let vac = coherent_fock_coeffs(PhasePoint::ORIGIN, 16).unwrap();
    assert_eq!(vac.coeffs()[0], Complex64::new(1.0, 0.0));
    assert!(vac.coeffs()[1..]
        .iter()
        .all(|c| *c == Complex64::new(0.0, 0.0)));
    let z = PhasePoint::new(2.0, -1.5);
    let cutoff = (8.0 * z.z_norm_sqr()) as usize + 40;
    assert!((coherent_fock_coeffs(z, cutoff).unwrap().norm_sqr() - 1.0).abs() < 1e-10);
}

#[test]
fn fock_circle_any_radius() {
    for r in [10f64.sqrt(), 5.0] {
        let spec =
            SuperpositionSpec::new(SuperpositionKind::FockCircle { n: 5, r }).with_samples(500);
        let state = build_superposition(&spec, 64).unwrap();
        let f = state
            .fidelity(&FockVector::number_state(5, 64).unwrap())
            .unwrap();
        assert!(f >= 1.0 - 1e-8, "r = {r}: {f}");
    }
}

#[test]
fn gaussian_line_momentum_profile() {
    let (sigma, p0) = (0.8, 0.5);
    let spec = SuperpositionSpec::new(SuperpositionKind::GaussianLine { sigma, p0 });
    let state = build_superposition(&spec, 96).unwrap();
    let m = quadrature_stats(&state).unwrap();
    // exp[-(p-p0)^2 (1 + 1/sigma^2) / 2] as an amplitude gives var p = 1 / (2 (1 + 1/sigma^2))
    let want = 0.5 / (1.0 + 1.0 / (sigma * sigma));
    assert!((m.mean_p - p0).abs() < 1e-6);
    assert!((m.var_p - want).abs() < 1e-6, "{} vs {want}", m.var_p);
}

#[test]
fn q_function_values() {
    let vac = FockVector::number_state(0, 8).unwrap();
    assert!(
        (q_function(&vac, PhasePoint::ORIGIN, QConvention::PerD2zOverPi).unwrap() - 1.0 / PI).abs()
            < 1e-15
    );
    assert!(q_function(
        &FockVector::from_coeffs(vec![Complex64::new(0.0, 0.0); 4]).unwrap(),
        PhasePoint::ORIGIN,
        QConvention::PerDqDp
    )
    .is_err());
    let state = FockVector::number_state(3, 32).unwrap();
    for pt in [PhasePoint::new(1.0, 2.0), PhasePoint::new(-0.3, 0.1)] {
        let got = q_function(&state, pt, QConvention::PerDqDp).unwrap();
        assert!((got - q_closed_form(QFamily::Fock(3), pt)).abs() < 1e-14);
    }
    assert!((q_closed_form(QFamily::Fock(0), PhasePoint::ORIGIN) - 0.5 / PI).abs() < 1e-15);
    let peak = q_closed_form(QFamily::Position(0.7), PhasePoint::new(0.7, 3.0));
    assert!((peak - 1.0 / (2.0 * PI.powf(1.5))).abs() < 1e-15);
}

#[test]
fn two_source_paths_agree() {
    let (z1, z2, theta) = (PhasePoint::new(-0.5, 0.2), PhasePoint::new(0.9, -0.4), 0.7);
    let a = coherent_fock_coeffs(z1, 64).unwrap();
    let b = coherent_fock_coeffs(z2, 64).unwrap();
    let phase = Complex64::from_polar(1.0, theta);
    let state = FockVector::from_coeffs(
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| x + phase * y)
            .collect(),
    )
    .unwrap();
    for pt in [PhasePoint::new(0.0, 0.0), PhasePoint::new(1.3, 0.8), z1] {
        let q = q_function(&state, pt, QConvention::PerD2zOverPi).unwrap();
        assert!((q - two_source_q(z1, z2, theta, pt).q_value).abs() < 1e-12);
    }
    assert!((two_source_q(z1, z2, theta, z1).i1 - 1.0).abs() < 1e-15);
    let theta0 = -triangle_area(PhasePoint::ORIGIN, z1, z2);
    let mid = PhasePoint::new(0.5 * (z1.q + z2.q), 0.5 * (z1.p + z2.p));
    assert!(two_source_q(z1, z2, theta0, mid).delta.abs() < 1e-15);
}

#[test]
fn moment_values() {
    let m = quadrature_stats(&FockVector::number_state(0, 8).unwrap()).unwrap();
    assert_eq!(
        (m.mean_q, m.mean_p, m.var_q, m.var_p, m.cov_qp),
        (0.0, 0.0, 0.5, 0.5, 0.0)
    );
    let z = PhasePoint::new(1.3, -0.6);
    let m = quadrature_stats(&coherent_fock_coeffs(z, 64).unwrap()).unwrap();
    assert!((m.mean_q - z.q).abs() < 1e-12 && (m.mean_p - z.p).abs() < 1e-12);
    assert!(
        (m.var_q - 0.5).abs() < 1e-12 && (m.var_p - 0.5).abs() < 1e-12 && m.cov_qp.abs() < 1e-12
    );
}

#[test]
fn evolution_values() {
    let z = PhasePoint::new(0.9, 0.4);
    let state = coherent_fock_coeffs(z, 48).unwrap();
    let turned = evolve(&state, Transform::Rotate(2.0 * PI)).unwrap();
    for (a, b) in state.coeffs().iter().zip(turned.coeffs()) {
        assert!(close(*a, *b, 1e-13));
    }
    let displaced = evolve(
        &FockVector::number_state(0, 48).unwrap(),
        Transform::Displace(z),
    )
    .unwrap();
    for (a, b) in state.coeffs().iter().zip(displaced.coeffs()) {
        assert!(close(*a, *b, 1e-12));
    }
    let t = 0.8;
    let rotated = evolve(&state, Transform::Rotate(t)).unwrap();
    let target = coherent_fock_coeffs(rotated_label(z, t), 48).unwrap();
    assert!(rotated.fidelity(&target).unwrap() >= 1.0 - 1e-10);
}

#[test]
fn gaussian_integral_values() {
    assert!((posmom_overlap(0.0, 0.0).re - 0.398942).abs() < 1e-6);
    for (q, p) in [(1.0, 2.0), (-3.0, 0.5)] {
        assert!((posmom_overlap(q, p).norm() - (2.0 * PI).sqrt().recip()).abs() < 1e-15);
    }
    let quad = quad_overlap_2d(QuadKind::Posmom { q: 1.0, p: 2.0 }).unwrap();
    assert!(close(quad, posmom_overlap(1.0, 2.0), 1e-8));

    let want = (2.0 * PI * Complex64::i()).powf(-0.5);
    assert!(close(
        sho_propagator(0.0, 0.0, PI / 2.0).unwrap(),
        want,
        1e-12
    ));
    let quad = quad_overlap_2d(QuadKind::Propagator {
        q1: 0.5,
        q2: 1.0,
        t: 0.7,
    })
    .unwrap();
    assert!(close(quad, sho_propagator(1.0, 0.5, 0.7).unwrap(), 1e-7));
    assert!(sho_propagator(0.0, 0.0, PI).is_err());
}

#[test]
fn fock_wavefunction_values() {
    assert!((fock_position_wavefn(0, 0.0).unwrap() - PI.powf(-0.25)).abs() < 1e-15);
    assert_eq!(fock_position_wavefn(7, 0.0).unwrap(), 0.0);
    assert!((fock_position_wavefn(20, 0.0).unwrap() - 0.3152912009418028).abs() < 1e-14);
}

#[test]
fn displacement_values() {
    assert!(close(
        displacement_element(3, 3, 0.0, 0.0).unwrap(),
        Complex64::new(1.0, 0.0),
        1e-15
    ));
    assert_eq!(
        displacement_element(2, 4, 0.0, 0.0).unwrap(),
        Complex64::new(0.0, 0.0)
    );
    for d in [0.3, 1.7, 4.0] {
        let e = (-d * d / 4.0f64).exp();
        assert!(close(
            displacement_element(0, 0, d, 0.0).unwrap(),
            Complex64::new(e, 0.0),
            1e-15
        ));
        let want = Complex64::new(e * (1.0 - d * d / 2.0), 0.0);
        assert!(close(
            displacement_element(1, 1, d, 0.0).unwrap(),
            want,
            1e-10
        ));
    }
}

#[test]
fn squeeze_values() {
    let zero = SqueezeParam::new(0.0).unwrap();
    let z = PhasePoint::new(0.6, -0.9);
    let coherent = coherent_fock_coeffs(z, 16).unwrap();
    for n in 0..6 {
        assert!(close(
            squeezed_coherent_element(n, zero, z.q, z.p).unwrap(),
            coherent.coeffs()[n],
            1e-14
        ));
        for m in 0..6 {
            assert_eq!(
                squeeze_element(m, zero, n).unwrap(),
                if m == n { 1.0 } else { 0.0 }
            );
        }
    }
    let one = SqueezeParam::new(1.0).unwrap();
    let k = 0.5f64.exp();
    let want = (2.0 * k / (k * k + 1.0)).sqrt();
    assert!((squeezed_coherent_element(0, one, 0.0, 0.0).unwrap().re - want).abs() < 1e-12);
    assert!(squeezed_coherent_element(3, one, 0.0, 0.0).unwrap().norm() < 1e-15);
    assert!((squeeze_element(0, one, 0).unwrap() - want).abs() < 1e-12);
    assert_eq!(squeeze_element(1, one, 4).unwrap(), 0.0);
    let column = operator_matrix(OperatorKind::Squeeze(1.0), 128)
        .unwrap()
        .column(0);
    assert!((column[0].re - want).abs() < 1e-8);
    let negative = SqueezeParam::new(-1.0).unwrap();
    assert!(squeezed_coherent_element(0, negative, 0.0, 0.0).is_err());
}
