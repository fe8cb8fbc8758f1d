//! Randomized invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use inphase::asymptotics::interference_area;
use inphase::exact::{
    displacement_element, displacement_element_form, squeeze_element, LaguerreForm, SqueezeParam,
};
use inphase::harness::csv::format_float;
use inphase::phasespace::{
    bargmann_phase, coherent_overlap, pancharatnam_phase, polyline_geometric_phase, PhaseCurve,
};
use inphase::specfun::{hermite, laguerre, laguerre_series, wrap_phase};
use inphase::states::{coherent_fock_coeffs, evolve, Transform};
use inphase::PhasePoint;

fn point() -> impl Strategy<Value = PhasePoint> {
    (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(q, p)| PhasePoint::new(q, p))
}

fn phase_gap(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

proptest! {
    #[test]
    fn overlap_modulus(a in point(), b in point()) {
        let want = (-((a.q - b.q).powi(2) + (a.p - b.p).powi(2)) / 4.0).exp();
        prop_assert!((coherent_overlap(a, b).norm() - want).abs() < 1e-14);
    }

    #[test]
    fn pancharatnam_antisymmetry(a in point(), b in point()) {
        prop_assert!((pancharatnam_phase(a, b) + pancharatnam_phase(b, a)).abs() < 1e-12);
        prop_assert!(phase_gap(pancharatnam_phase(a, b), coherent_overlap(a, b).arg()) < 1e-12);
    }

    #[test]
    fn bargmann_cyclic(a in point(), b in point(), c in point()) {
        let g = bargmann_phase(a, b, c);
        prop_assert!((g - bargmann_phase(b, c, a)).abs() < 1e-11);
        prop_assert!((g + bargmann_phase(a, c, b)).abs() < 1e-11);
        let product = coherent_overlap(a, b) * coherent_overlap(b, c) * coherent_overlap(c, a);
        prop_assert!(phase_gap(g, product.arg()) < 1e-11);
    }

    #[test]
    fn polygon_shoelace(points in prop::collection::vec(point(), 3..12)) {
        let n = points.len();
        let area: f64 = (0..n)
            .map(|i| {
                let (a, b) = (points[i], points[(i + 1) % n]);
                a.q * b.p - b.q * a.p
            })
            .sum::<f64>()
            / 2.0;
        let phase = polyline_geometric_phase(&PhaseCurve::closed(points).unwrap());
        prop_assert!((phase + area).abs() < 1e-11);
    }

    #[test]
    fn hermite_parity(n in 0usize..60, re in -5.0..5.0f64, im in -5.0..5.0f64) {
        let x = Complex64::new(re, im);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let (a, b) = (hermite(n, x).unwrap(), hermite(n, -x).unwrap());
        prop_assert!((a - sign * b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn laguerre_recurrence_matches_series(n in 0usize..25, alpha in 0i64..10, x in 0.0..20.0f64) {
        let a = laguerre(n, alpha, x).unwrap();
        let b = laguerre_series(n, alpha, x).unwrap();
        // the alternating sum loses digits in proportion to its largest terms
        let scale = laguerre_series(n, alpha, -x).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * scale.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn laguerre_forms_agree(m in 0usize..40, n in 0usize..40, z in point()) {
        let a = displacement_element_form(m, n, z.q, z.p, LaguerreForm::Lower).unwrap();
        let b = displacement_element_form(m, n, z.q, z.p, LaguerreForm::Upper).unwrap();
        prop_assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn displacement_hermiticity(m in 0usize..40, n in 0usize..40, z in point()) {
        let a = displacement_element(m, n, z.q, z.p).unwrap();
        let b = displacement_element(n, m, -z.q, -z.p).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn squeeze_parity(m in 0usize..40, n in 0usize..40, mu in 0.0..2.0f64) {
        let sq = SqueezeParam::new(mu).unwrap();
        let v = squeeze_element(m, sq, n).unwrap();
        if (m + n) % 2 == 1 {
            prop_assert_eq!(v, 0.0);
        }
        // the transpose is the squeeze along the other axis, a quarter turn away
        let sign = if m.abs_diff(n) % 4 == 2 { -1.0 } else { 1.0 };
        let w = sign * squeeze_element(n, sq, m).unwrap();
        prop_assert!((v - w).abs() < 1e-12, "{v} vs {w}");
    }

    #[test]
    fn rotation_preserves_norm(z in point(), t in -10.0..10.0f64) {
        let state = coherent_fock_coeffs(z, 96).unwrap();
        let rotated = evolve(&state, Transform::Rotate(t)).unwrap();
        prop_assert!((rotated.norm_sqr() - state.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn interference_area_exchange(m in 5usize..40, n in 5usize..40, frac in 0.2..0.8f64) {
        let (rm, rn) = ((2.0 * m as f64).sqrt(), (2.0 * n as f64).sqrt());
        let (lo, hi) = ((rm - rn).abs(), rm + rn);
        let d = lo + frac * (hi - lo);
        let a = interference_area(m, n, d).unwrap();
        let b = interference_area(n, m, d).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn csv_float_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = format_float(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        let digits = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
        prop_assert_eq!(digits, 17);
    }
}
