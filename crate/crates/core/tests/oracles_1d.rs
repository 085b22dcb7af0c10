//! Brute-force checks of the one-dimensional first-order sums.

use std::f64::consts::PI;

use mobile_wall::cavity1d::{amplitude_d, coupling_c, delta_green, FirstOrder1D};
use mobile_wall::{Cavity1D, Cavity1DParams, CutoffScheme, CutoffWeight};

fn cfg() -> Cavity1D {
    Cavity1DParams::mems().validate().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Sample points spread over the cavity without hitting nodes exactly.
fn points(l0: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| l0 * ((0.618_033_988_75 * (i + 1) as f64) % 1.0)).collect()
}

struct Naive {
    k: f64,
    omega: Vec<f64>,
    w: Vec<f64>,
    wosc: f64,
}

impl Naive {
    fn new(c: &Cavity1D, n: usize, weight: Option<f64>) -> Self {
        let omega: Vec<f64> = (1..=n).map(|j| j as f64 * PI * c.c() / c.length()).collect();
        let w = omega.iter().map(|o| weight.map_or(1.0, |cut| (-o / cut).exp())).collect();
        Self {
            k: c.hbar() * c.hbar() / (c.length().powi(3) * c.mass() * c.omega_osc()),
            omega,
            w,
            wosc: c.omega_osc(),
        }
    }

    /// `K Σ_{jlr} (-1)^{l+r} ω_jω_lω_r f(l, r) / ((ω_osc+ω_j+ω_l)(ω_osc+ω_j+ω_r))`.
    fn triple(&self, f: impl Fn(usize, usize) -> f64) -> f64 {
        let n = self.omega.len();
        let mut total = 0.0;
        for j in 0..n {
            for l in 0..n {
                for r in 0..n {
                    let sign = if (l + r) % 2 == 0 { 1.0 } else { -1.0 };
                    let (oj, ol, or) = (self.omega[j], self.omega[l], self.omega[r]);
                    total += sign * oj * ol * or * f(l, r) * self.w[j] * self.w[l] * self.w[r]
                        / ((self.wosc + oj + ol) * (self.wosc + oj + or));
                }
            }
        }
        self.k * total
    }
}

#[test]
fn factorized_matches_triple_loop_without_cutoff() {
    let c = cfg();
    for n in [12, 15] {
        let naive = Naive::new(&c, n, None);
        let fast = FirstOrder1D::new(&c, n, CutoffWeight::none()).unwrap();
        for x in points(c.length(), 20) {
            let k = |m: usize| (m + 1) as f64 * PI * x / c.length();
            let e = naive.triple(|l, r| k(l).sin() * k(r).sin());
            let b = naive.triple(|l, r| k(l).cos() * k(r).cos());
            assert!(rel(fast.e2(x).unwrap().value, e) < 1e-10, "E² at x = {x:e}");
            assert!(rel(fast.b2(x).unwrap().value, b) < 1e-10, "B² at x = {x:e}");
        }
    }
}

#[test]
fn factorized_matches_triple_loop_with_cutoff() {
    let c = cfg();
    let cut = 2e14;
    let naive = Naive::new(&c, 15, Some(cut));
    let fast = FirstOrder1D::new(&c, 15, CutoffWeight::new(CutoffScheme::Exponential, cut)).unwrap();
    for x in points(c.length(), 10) {
        let k = |m: usize| (m + 1) as f64 * PI * x / c.length();
        let e = naive.triple(|l, r| k(l).sin() * k(r).sin());
        assert!(rel(fast.e2(x).unwrap().value, e) < 1e-10);
    }
}

#[test]
fn energy_density_matches_difference_form() {
    let c = cfg();
    let naive = Naive::new(&c, 12, None);
    let fast = FirstOrder1D::new(&c, 12, CutoffWeight::none()).unwrap();
    for x in points(c.length(), 20) {
        let k = |m: usize| (m + 1) as f64 * PI / c.length();
        let direct = 0.5 * naive.triple(|l, r| ((k(l) - k(r)) * x).cos());
        assert!(rel(fast.fields(x).unwrap().rho(), direct) < 1e-10);
    }
}

#[test]
fn fundamental_amplitude_reference() {
    // 40-digit evaluation at L0 = 10 μm, M = 10⁻¹¹ kg, ω_osc = 10⁵ s⁻¹
    let c = cfg();
    let d = amplitude_d(1, 1, &c).unwrap().value;
    assert!(rel(d, 1.815_361_375_766_793_7e-10) < 1e-14);
    let k = coupling_c(1, 1, &c).unwrap().value;
    assert!(rel(k, 3.606_117_083_825_018_8e-30) < 1e-14);
}

/// `8 Σ_{jlr} ħc²/(L0√(ω_jω_r)) D_jl D_lr cos(ω_j t - ω_r t') sin k_j x sin k_r x'`.
fn green_naive(c: &Cavity1D, n: u32, (x, t): (f64, f64), (xp, tp): (f64, f64)) -> f64 {
    let mut total = 0.0;
    for j in 1..=n {
        for l in 1..=n {
            for r in 1..=n {
                let (oj, or) = (c.omega(j).unwrap(), c.omega(r).unwrap());
                let d = amplitude_d(j, l, c).unwrap().value * amplitude_d(l, r, c).unwrap().value;
                total += 8.0 * c.hbar() * c.c() * c.c() / (c.length() * (oj * or).sqrt())
                    * d
                    * (oj * t - or * tp).cos()
                    * (c.wavenumber(j).unwrap() * x).sin()
                    * (c.wavenumber(r).unwrap() * xp).sin();
            }
        }
    }
    total
}

#[test]
fn propagator_correction() {
    let c = cfg();
    let a = (0.31 * c.length(), 2e-15);
    let b = (0.77 * c.length(), -5e-15);
    let g = delta_green(a, b, &c, 10, CutoffWeight::none()).unwrap();
    assert!(rel(g, green_naive(&c, 10, a, b)) < 1e-10);
    let swapped = delta_green(b, a, &c, 10, CutoffWeight::none()).unwrap();
    assert!(rel(swapped, g) < 1e-12);
    assert!(delta_green(a, (2.0 * c.length(), 0.0), &c, 10, CutoffWeight::none()).is_err());
}
