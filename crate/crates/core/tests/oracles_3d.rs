//! Brute-force checks of the three-dimensional sums.

use std::f64::consts::PI;

use mobile_wall::cavity3d::{
    domega_dq, photon_number_axial_with, photon_number_with, DeltaRho3D, ModeSet3, RhoZeroth3D,
};
use mobile_wall::{Cavity3D, Cavity3DParams, CutoffScheme, CutoffWeight, ModeIndex3};

fn cfg() -> Cavity3D {
    Cavity3DParams::mems().validate().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[derive(Clone, Copy)]
struct Mode {
    nx: i64,
    ny: i64,
    nz: i64,
    qx: f64,
    qy: f64,
    qz: f64,
    omega: f64,
}

fn mode(c: &Cavity3D, nx: i64, ny: i64, nz: i64) -> Mode {
    let ly = c.area().sqrt();
    let qx = nx as f64 * PI / c.length();
    let qy = 2.0 * PI * ny as f64 / ly;
    let qz = 2.0 * PI * nz as f64 / ly;
    Mode {
        nx,
        ny,
        nz,
        qx,
        qy,
        qz,
        omega: c.c() * (qx * qx + qy * qy + qz * qz).sqrt(),
    }
}

fn box_modes(c: &Cavity3D, ax: i64, tr: i64) -> Vec<Mode> {
    let mut v = Vec::new();
    for nx in 1..=ax {
        for ny in -tr..=tr {
            for nz in -tr..=tr {
                v.push(mode(c, nx, ny, nz));
            }
        }
    }
    v
}

/// Dressed amplitude written out from the coupling constant, independent of
/// the crate's channel bookkeeping.
fn amplitude(c: &Cavity3D, k: &Mode, j: &Mode) -> f64 {
    let l0 = c.length();
    let mut bracket = 0.0;
    if (k.nx, k.ny, k.nz) == (j.nx, j.ny, j.nz) {
        bracket += -c.c() * c.c() * PI * PI * (k.nx * k.nx) as f64 / (l0.powi(3) * k.omega);
    }
    if k.ny == -j.ny && k.nz == -j.nz && k.nx != j.nx {
        let sign = if (k.nx + j.nx) % 2 == 0 { 1.0 } else { -1.0 };
        let g = sign * 2.0 * (k.nx * j.nx) as f64 / ((j.nx * j.nx - k.nx * k.nx) as f64);
        bracket -= g / l0 * (k.omega / j.omega).sqrt() * k.omega;
    }
    let ch = 0.5 * c.hbar() * (c.hbar() / (2.0 * c.mass() * c.omega_osc())).sqrt() * bracket;
    ch / (c.hbar() * (c.omega_osc() + k.omega + j.omega))
}

/// Σ over every `(m, j, r)` in the box with `q_∥^m = q_∥^r`.
fn delta_rho_naive(c: &Cavity3D, modes: &[Mode], cut: Option<f64>, x: f64) -> f64 {
    let w = |m: &Mode| cut.map_or(1.0, |k| (-m.omega / k).exp());
    let n = modes.len();
    let d: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| amplitude(c, &modes[a], &modes[b])).collect()).collect();
    let pref = 4.0 * c.hbar() * c.c() * c.c() / (c.area() * c.length());
    let mut total = 0.0;
    for (mi, m) in modes.iter().enumerate() {
        for (ji, j) in modes.iter().enumerate() {
            if d[mi][ji] == 0.0 {
                continue;
            }
            for (ri, r) in modes.iter().enumerate() {
                if d[ji][ri] == 0.0 || (m.ny, m.nz) != (r.ny, r.nz) {
                    continue;
                }
                let root = (m.omega * r.omega).sqrt();
                let transverse = m.qy * r.qy + m.qz * r.qz;
                let bracket = (root / (c.c() * c.c()) + transverse / root) * (m.qx * x).sin() * (r.qx * x).sin()
                    + m.qx * r.qx / root * (m.qx * x).cos() * (r.qx * x).cos();
                total += d[mi][ji] * d[ji][ri] * w(m) * w(j) * w(r) * bracket;
            }
        }
    }
    pref * total
}

#[test]
fn delta_rho_matches_naive_loop() {
    let c = cfg();
    let modes = box_modes(&c, 8, 2);
    let fast = DeltaRho3D::new(&c, ModeSet3::boxed(8, 2), CutoffWeight::none()).unwrap();
    for i in 0..10 {
        let x = c.length() * i as f64 / 9.0;
        let naive = delta_rho_naive(&c, &modes, None, x);
        let got = fast.eval(x).unwrap().value;
        assert!(rel(got, naive) < 1e-10, "x = {x:e}: {got:e} vs {naive:e}");
    }
}

#[test]
fn delta_rho_matches_naive_loop_with_cutoff() {
    let c = cfg();
    let cut = 1.5e14;
    let modes = box_modes(&c, 6, 2);
    let weight = CutoffWeight::new(CutoffScheme::Exponential, cut);
    let fast = DeltaRho3D::new(&c, ModeSet3::boxed(6, 2), weight).unwrap();
    for x in [0.13e-5, 0.5e-5, 0.96e-5] {
        assert!(rel(fast.eval(x).unwrap().value, delta_rho_naive(&c, &modes, Some(cut), x)) < 1e-10);
    }
}

#[test]
fn delta_rho_at_fixed_wall_has_only_gradient_part() {
    let c = cfg();
    let modes = box_modes(&c, 5, 1);
    let fast = DeltaRho3D::new(&c, ModeSet3::boxed(5, 1), CutoffWeight::none()).unwrap();
    let got = fast.eval(0.0).unwrap().value;
    assert!(got != 0.0);
    assert!(rel(got, delta_rho_naive(&c, &modes, None, 0.0)) < 1e-10);
}

/// `⟨N_m⟩ = Σ_j (D_mj + D_jm)²` over partners in the box. Only `j_∥ = ±m_∥`
/// can couple; uncoupled candidates contribute exact zeros.
fn photon_naive(c: &Cavity3D, m: &Mode, partners: i64) -> f64 {
    let mut transverse = vec![(m.ny, m.nz)];
    if (m.ny, m.nz) != (0, 0) {
        transverse.push((-m.ny, -m.nz));
    }
    let mut total = 0.0;
    for jx in 1..=partners {
        for &(ny, nz) in &transverse {
            let j = mode(c, jx, ny, nz);
            let a = amplitude(c, m, &j) + amplitude(c, &j, m);
            total += a * a;
        }
    }
    total
}

#[test]
fn photon_number_matches_amplitude_sum() {
    let c = cfg();
    for (nx, ny, nz) in [(1, 0, 0), (3, 0, 0), (1, 1, 0), (2, -1, 3), (4, 2, 2)] {
        let m = mode(&c, nx, ny, nz);
        let idx = ModeIndex3::new(nx as u32, ny as i32, nz as i32).unwrap();
        let got = photon_number_with(idx, &c, 60, CutoffWeight::none()).unwrap().value;
        assert!(rel(got, photon_naive(&c, &m, 60)) < 1e-12, "{idx}");
    }
}

#[test]
fn axial_reduction() {
    let c = cfg();
    let w = CutoffWeight::new(CutoffScheme::Exponential, 1e15);
    for mx in 1..=5 {
        let full = photon_number_with(ModeIndex3::axial(mx).unwrap(), &c, 500, w).unwrap().value;
        let axial = photon_number_axial_with(mx, &c, 500, w).unwrap().value;
        assert!(rel(full, axial) < 1e-10, "m_x = {mx}");
    }
}

#[test]
fn gradient_matches_finite_difference() {
    let c = cfg();
    for (nx, ny, nz) in [(1, 0, 0), (3, 2, -1), (7, 10, 4)] {
        let k = ModeIndex3::new(nx, ny, nz).unwrap();
        let at = |h: f64| {
            let shifted = c.with(|p| p.L0 += h).unwrap();
            shifted.omega(k)
        };
        let exact = domega_dq(k, &c);
        let err = |h: f64| ((at(h) - at(-h)) / (2.0 * h) - exact).abs();
        let h = 1e-3 * c.length();
        assert!(err(h) / exact.abs() < 1e-5, "{k}");
        // second order: halving the step quarters the error
        let ratio = err(h) / err(0.5 * h);
        assert!((ratio - 4.0).abs() < 0.1, "{k}: ratio {ratio}");
    }
}

#[test]
fn zeroth_order_matches_direct_sum() {
    let c = cfg();
    let cut = 3e14;
    let weight = CutoffWeight::new(CutoffScheme::Exponential, cut);
    let z = RhoZeroth3D::new(&c, ModeSet3::boxed(12, 6), weight).unwrap();
    let mut offset = 0.0;
    for ny in -6i64..=6 {
        for nz in -6i64..=6 {
            if (ny, nz) == (0, 0) {
                continue;
            }
            let q = 2.0 * PI * ((ny * ny + nz * nz) as f64).sqrt() / c.area().sqrt();
            offset -= c.hbar() * c.c() / (c.area() * c.length()) * q * (-c.c() * q / cut).exp();
        }
    }
    assert!(rel(z.px0_offset(), offset) < 1e-12);
    for x in [0.07e-5, 0.5e-5, 0.81e-5] {
        let mut direct = 0.0;
        for p in box_modes(&c, 12, 6) {
            direct -= c.hbar() / (c.area() * c.length())
                * (2.0 * p.qx * x).cos()
                * c.c()
                * c.c()
                * (p.qx * p.qx + 2.0 * (p.qy * p.qy + p.qz * p.qz))
                / (2.0 * p.omega)
                * (-p.omega / cut).exp();
        }
        assert!(rel(z.position_part(x).unwrap().value, direct) < 1e-11);
    }
}

#[test]
fn zeroth_order_position_part_integrates_to_zero() {
    let c = cfg().with(|p| p.omega_cut = 2e14).unwrap();
    let z = RhoZeroth3D::from_control(&c, &Default::default()).unwrap();
    let nodes = 4 * z.modes().axial.bound + 1;
    let h = c.length() / nodes as f64;
    let values: Vec<f64> = (0..nodes)
        .map(|i| z.position_part((i as f64 + 0.5) * h).unwrap().value)
        .collect();
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let integral: f64 = values.iter().sum::<f64>() * h;
    assert!((integral / c.length()).abs() < 1e-8 * peak);
}
