use mobile_wall_web::{compute_profile_1d, compute_profile_3d, compute_spectrum, MAX_OMEGA_CUT_3D};

#[test]
fn profile_1d_peaks_at_the_mobile_wall() {
    let p = compute_profile_1d(10e-6, 1e-11, 1e5, 1e15, 200, 0.0).unwrap();
    let rho = p.rho();
    assert_eq!(rho.len(), 200);
    assert!(rho.iter().all(|&r| r >= 0.0));
    assert!(p.peak_location() > 0.9 * 10e-6);
    let near = compute_profile_1d(10e-6, 1e-11, 1e5, 1e15, 50, 5e-7).unwrap();
    assert!(near.x()[0] > 10e-6 - 5e-7);
}

#[test]
fn spectrum_is_positive_and_halves_with_mass() {
    let a = compute_spectrum(10e-6, 0.5e-4, 1e-11, 1e5, 1e15, 10, 1, -2).unwrap();
    let b = compute_spectrum(10e-6, 0.5e-4, 2e-11, 1e5, 1e15, 10, 1, -2).unwrap();
    assert_eq!(a.len(), 10);
    for (x, y) in a.iter().zip(&b) {
        assert!(*x > 0.0);
        assert!((x / y - 2.0).abs() < 1e-12);
    }
}

#[test]
fn profile_3d_limits_and_peak() {
    let p = compute_profile_3d(10e-6, 0.5e-4, 1e-11, 1e5, 1e14, 30).unwrap();
    assert!(p.peak_location() < 10e-6);
    assert_eq!(p.delta_rho().len(), 30);
    assert!(compute_profile_3d(10e-6, 0.5e-4, 1e-11, 1e5, 2.0 * MAX_OMEGA_CUT_3D, 30).is_err());
    assert!(compute_profile_1d(-1.0, 1e-11, 1e5, 1e15, 10, 0.0).is_err());
}
