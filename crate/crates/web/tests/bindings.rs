use inphase_web::{fock_curves, q_function_grid, two_source_fringes};

#[test]
fn fock_rows_have_five_columns() {
    let data = fock_curves(20, 64).unwrap();
    assert_eq!(data.len(), 64 * 5);
    let exact_at_origin = data
        .chunks(5)
        .min_by(|a, b| a[0].abs().total_cmp(&b[0].abs()))
        .unwrap()[1];
    assert!(exact_at_origin.is_finite());
}

#[test]
fn q_grid_is_a_density() {
    let data = q_function_grid("fock:n=2", -5.0, 5.0, -5.0, 5.0, 0.25).unwrap();
    assert_eq!(data.len(), 41 * 41 * 3);
    let mass: f64 = data.chunks(3).map(|r| r[2]).sum::<f64>() * 0.25 * 0.25;
    assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    assert!(q_function_grid("nope:x=1", 0.0, 1.0, 0.0, 1.0, 0.5).is_err());
}

#[test]
fn fringes_peak_spacing() {
    let q0 = 0.8;
    let data = two_source_fringes(q0, 0.0, -12.0, 12.0, 2401).unwrap();
    let rows: Vec<&[f64]> = data.chunks(6).collect();
    let peaks: Vec<f64> = rows
        .windows(3)
        .filter(|w| w[1][5] > w[0][5] && w[1][5] >= w[2][5])
        .map(|w| w[1][0])
        .collect();
    assert!(peaks.len() >= 2);
    for pair in peaks.windows(2) {
        assert!(
            (pair[1] - pair[0] - 2.0 * std::f64::consts::PI / q0).abs() < 0.02,
            "{pair:?}"
        );
    }
}
