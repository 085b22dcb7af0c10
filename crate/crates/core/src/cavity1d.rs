//! One-dimensional electromagnetic cavity with a mobile wall at `x = L0`.
//!
//! Zeroth-order fluctuations are the fixed-wall closed forms. First-order
//! corrections come from the dressed ground state
//! `|g⟩ = |0,0⟩ + Σ D_jl |1_j 1_l, 1⟩` and are triple mode sums sharing the
//! middle index of the `D·D` product, evaluated through
//! [`BilinearSum`](crate::modesum::BilinearSum).

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::config::{Cavity1D, Cavity1DParams, SumControl};
use crate::error::{Error, Result};
use crate::grid::{peak_info, Grid, PeakInfo};
use crate::modesum::{evaluation_control, truncation_for, Axis, BilinearSum, CutoffWeight, Matrix, SumResult, Truncation};
use crate::trig::{cos_pi, sin_pi};

fn parity(n: u32) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_indices(j: u32, l: u32) -> Result<()> {
    if j == 0 || l == 0 {
        return Err(Error::domain("mode indices must be >= 1"));
    }
    Ok(())
}

/// Radiation-pressure coupling between field modes `j` and `l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling1D {
    pub j: u32,
    pub l: u32,
    pub value: f64,
}

/// `C_jl = (-1)^{j+l} (ħ/2)^{3/2} / (L0 √M) · √(ω_j ω_l / ω_osc)`.
pub fn coupling_c(j: u32, l: u32, cfg: &Cavity1D) -> Result<Coupling1D> {
    check_indices(j, l)?;
    let (wj, wl) = (cfg.omega(j)?, cfg.omega(l)?);
    let value = parity(j + l) * (0.5 * cfg.hbar()).powf(1.5) / (cfg.length() * cfg.mass().sqrt())
        * (wj * wl / cfg.omega_osc()).sqrt();
    Ok(Coupling1D { j, l, value })
}

/// Dimensionless amplitude of `|1_j 1_l, 1⟩` in the dressed ground state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitude1D {
    pub j: u32,
    pub l: u32,
    pub value: f64,
}

/// `D_jl = (-1)^{j+l} (1/L0) √(ħ ω_j ω_l / (8 M ω_osc)) / (ω_osc + ω_j + ω_l)`.
pub fn amplitude_d(j: u32, l: u32, cfg: &Cavity1D) -> Result<Amplitude1D> {
    check_indices(j, l)?;
    let (wj, wl) = (cfg.omega(j)?, cfg.omega(l)?);
    let value = parity(j + l) / cfg.length()
        * (cfg.hbar() * wj * wl / (8.0 * cfg.mass() * cfg.omega_osc())).sqrt()
        / (cfg.omega_osc() + wj + wl);
    Ok(Amplitude1D { j, l, value })
}

fn open_interval(x: f64, cfg: &Cavity1D) -> Result<()> {
    if !(x > 0.0 && x < cfg.length()) {
        return Err(Error::domain(format!(
            "zeroth-order fields need 0 < x < L0, got x = {x:e}"
        )));
    }
    Ok(())
}

fn closed_interval(x: f64, length: f64) -> Result<()> {
    if !(x >= 0.0 && x <= length) {
        return Err(Error::domain(format!("need 0 <= x <= L0, got x = {x:e}")));
    }
    Ok(())
}

/// `(ħcπ/24L0², ħcπ/(8L0² sin²(πx/L0)))`: constant and divergent parts of the
/// fixed-wall fluctuations.
fn zeroth_parts(x: f64, cfg: &Cavity1D) -> Result<(f64, f64)> {
    open_interval(x, cfg)?;
    let l2 = cfg.length() * cfg.length();
    let base = cfg.hbar() * cfg.c() * PI / l2;
    let s = sin_pi(x / cfg.length());
    let s2 = s * s;
    let wall = base / (8.0 * s2);
    if s2 == 0.0 || !wall.is_finite() {
        return Err(Error::Overflow(format!("sin²(πx/L0) underflows at x = {x:e}")));
    }
    Ok((base / 24.0, wall))
}

/// Fixed-wall `⟨E_z²(x)⟩₀ = -ħcπ/24L0² + ħcπ/(8L0² sin²(πx/L0))`, J/m.
pub fn e2_zeroth(x: f64, cfg: &Cavity1D) -> Result<f64> {
    let (k, wall) = zeroth_parts(x, cfg)?;
    Ok(-k + wall)
}

/// Fixed-wall `⟨B_y²(x)⟩₀ = -ħcπ/24L0² - ħcπ/(8L0² sin²(πx/L0))`, J/m.
pub fn b2_zeroth(x: f64, cfg: &Cavity1D) -> Result<f64> {
    let (k, wall) = zeroth_parts(x, cfg)?;
    Ok(-k - wall)
}

/// Leading behaviour of the zeroth-order fluctuations next to the mobile wall:
/// `(ħc/(8π d²), -ħcπ/12L0² - ħc/(8π d²))` with `d = L0 - x`.
pub fn near_wall_asymptotics(x: f64, cfg: &Cavity1D) -> Result<(f64, f64)> {
    let l0 = cfg.length();
    if !(x > 0.5 * l0 && x < l0) {
        return Err(Error::domain(format!(
            "near-wall expansion needs L0/2 < x < L0, got x = {x:e}"
        )));
    }
    let hc = cfg.hbar() * cfg.c();
    let d = x - l0;
    let div = hc / (8.0 * PI * d * d);
    Ok((div, -hc * PI / (12.0 * l0 * l0) - div))
}

/// Precomputed first-order evaluator for a fixed truncation and cutoff.
///
/// With `a(j,l) = (-1)^l ω_l w_l / (ω_osc + ω_j + ω_l)` and
/// `K = ħ²/(L0³ M ω_osc)`:
///
/// ```text
/// ⟨E_z²⟩₁(x) = K Σ_j ω_j w_j (Σ_l a(j,l) sin k_l x)²
/// ⟨B_y²⟩₁(x) = K Σ_j ω_j w_j (Σ_l a(j,l) cos k_l x)²
/// ```
///
/// where `w = exp(-ω/ω_cut)` per mode (or the sharp step).
#[derive(Clone, Debug)]
pub struct FirstOrder1D {
    cfg: Cavity1D,
    weight: CutoffWeight,
    truncation: Truncation,
    sum: BilinearSum,
}

/// First-order fluctuations at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstOrderFields {
    pub e2: SumResult,
    pub b2: SumResult,
}

impl FirstOrderFields {
    /// `(⟨E²⟩₁ + ⟨B²⟩₁)/2`, the energy density correction.
    pub fn rho(&self) -> f64 {
        0.5 * (self.e2.value + self.b2.value)
    }

    pub fn tail(&self) -> f64 {
        self.e2.tail_estimate.max(self.b2.tail_estimate)
    }
}

impl FirstOrder1D {
    /// Evaluator keeping modes `1..=modes`.
    pub fn new(cfg: &Cavity1D, modes: usize, weight: CutoffWeight) -> Result<Self> {
        Self::with_truncation(
            cfg,
            Truncation {
                bound: modes,
                clamped: false,
            },
            weight,
        )
    }

    /// Evaluator truncated where the cutoff weight drops below the control's
    /// tolerance.
    pub fn from_control(cfg: &Cavity1D, control: &SumControl) -> Result<Self> {
        let control = control.validate()?;
        let weight = control.weight(cfg.omega_cut());
        let unit = cfg.omega_unit();
        let truncation = truncation_for(&evaluation_control(&control), Axis::Axial, &weight, |j| j as f64 * unit);
        Self::with_truncation(cfg, truncation, weight)
    }

    fn with_truncation(cfg: &Cavity1D, truncation: Truncation, weight: CutoffWeight) -> Result<Self> {
        let n = truncation.bound;
        if n == 0 {
            return Err(Error::domain("first-order sums need at least one mode"));
        }
        let unit = cfg.omega_unit();
        let omega: Vec<f64> = (1..=n).map(|j| j as f64 * unit).collect();
        let w: Vec<f64> = omega.iter().map(|&o| weight.factor(o)).collect();
        let prefactor = cfg.hbar() * cfg.hbar()
            / (cfg.length().powi(3) * cfg.mass() * cfg.omega_osc());
        let wo = cfg.omega_osc();
        let coef = Matrix::from_fn(n, n, |j, l| {
            parity(l as u32 + 1) * omega[l] * w[l] / (wo + omega[j] + omega[l])
        });
        let outer = omega.iter().zip(&w).map(|(o, w)| prefactor * o * w).collect();
        let sum = BilinearSum::symmetric(outer, coef)?
            .with_decay(weight.decay_ratio(unit, truncation.clamped));
        Ok(Self {
            cfg: *cfg,
            weight,
            truncation,
            sum,
        })
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn weight(&self) -> CutoffWeight {
        self.weight
    }

    fn basis(&self, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        closed_interval(x, self.cfg.length())?;
        let t = x / self.cfg.length();
        let n = self.truncation.bound;
        let mut s = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n);
        for l in 1..=n {
            let a = l as f64 * t;
            s.push(sin_pi(a));
            c.push(cos_pi(a));
        }
        Ok((s, c))
    }

    /// `⟨E_z²(x)⟩₁`, J/m. Defined on the closed interval `[0, L0]`.
    pub fn e2(&self, x: f64) -> Result<SumResult> {
        let (s, _) = self.basis(x)?;
        self.sum.eval(&s, &s)
    }

    /// `⟨B_y²(x)⟩₁`, J/m.
    pub fn b2(&self, x: f64) -> Result<SumResult> {
        let (_, c) = self.basis(x)?;
        self.sum.eval(&c, &c)
    }

    pub fn fields(&self, x: f64) -> Result<FirstOrderFields> {
        let (s, c) = self.basis(x)?;
        Ok(FirstOrderFields {
            e2: self.sum.eval(&s, &s)?,
            b2: self.sum.eval(&c, &c)?,
        })
    }
}

fn checked_fields(x: f64, cfg: &Cavity1D, control: &SumControl) -> Result<FirstOrderFields> {
    let f = FirstOrder1D::from_control(cfg, control)?.fields(x)?;
    f.e2.check("first-order <E^2>", control.rel_tol)?;
    f.b2.check("first-order <B^2>", control.rel_tol)?;
    Ok(f)
}

/// First-order correction to the electric fluctuations, J/m.
pub fn e2_first(x: f64, cfg: &Cavity1D, control: &SumControl) -> Result<f64> {
    let e = FirstOrder1D::from_control(cfg, control)?.e2(x)?;
    Ok(e.check("first-order <E^2>", control.rel_tol)?.value)
}

/// First-order correction to the magnetic fluctuations, J/m.
pub fn b2_first(x: f64, cfg: &Cavity1D, control: &SumControl) -> Result<f64> {
    let b = FirstOrder1D::from_control(cfg, control)?.b2(x)?;
    Ok(b.check("first-order <B^2>", control.rel_tol)?.value)
}

/// First-order correction to the energy density, `(⟨E²⟩₁ + ⟨B²⟩₁)/2`, J/m.
pub fn energy_density_correction(x: f64, cfg: &Cavity1D, control: &SumControl) -> Result<f64> {
    Ok(checked_fields(x, cfg, control)?.rho())
}

/// A small body with static electric and magnetic polarizabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizableBody {
    alpha_e: f64,
    alpha_m: f64,
    position: f64,
}

impl PolarizableBody {
    pub fn new(alpha_e: f64, alpha_m: f64, position: f64, cfg: &Cavity1D) -> Result<Self> {
        if !(alpha_e.is_finite() && alpha_m.is_finite()) {
            return Err(Error::domain("polarizabilities must be finite"));
        }
        if !(position > 0.0 && position < cfg.length()) {
            return Err(Error::domain("polarizable body must sit strictly inside the cavity"));
        }
        Ok(Self {
            alpha_e,
            alpha_m,
            position,
        })
    }

    pub fn position(&self) -> f64 {
        self.position
    }
}

/// Casimir-Polder energy `-α_E⟨E²⟩/2 - α_M⟨B²⟩/2`, with the fluctuations taken
/// to first order in the wall coupling.
pub fn casimir_polder_shift(body: &PolarizableBody, cfg: &Cavity1D, control: &SumControl) -> Result<f64> {
    let x = body.position;
    let e2 = e2_zeroth(x, cfg)?;
    let b2 = b2_zeroth(x, cfg)?;
    let first = checked_fields(x, cfg, control)?;
    let mut shift = 0.0;
    if body.alpha_e != 0.0 {
        shift -= 0.5 * body.alpha_e * (e2 + first.e2.value);
    }
    if body.alpha_m != 0.0 {
        shift -= 0.5 * body.alpha_m * (b2 + first.b2.value);
    }
    Ok(shift)
}

/// First-order correction to the renormalized propagator,
///
/// ```text
/// ΔG_R = 8 Σ_{jlr} ħc²/(L0 √(ω_j ω_r)) D_jl D_lr cos(ω_j t - ω_r t') sin(k_j x) sin(k_r x'),
/// ```
///
/// truncated to modes `1..=modes` with per-mode cutoff weights.
pub fn delta_green(
    (x, t): (f64, f64),
    (xp, tp): (f64, f64),
    cfg: &Cavity1D,
    modes: usize,
    weight: CutoffWeight,
) -> Result<f64> {
    closed_interval(x, cfg.length())?;
    closed_interval(xp, cfg.length())?;
    if modes == 0 {
        return Err(Error::domain("need at least one mode"));
    }
    let unit = cfg.omega_unit();
    let omega: Vec<f64> = (1..=modes).map(|j| j as f64 * unit).collect();
    let w: Vec<f64> = omega.iter().map(|&o| weight.factor(o)).collect();
    let d = Matrix::from_fn(modes, modes, |l, j| {
        amplitude_d(j as u32 + 1, l as u32 + 1, cfg).map_or(0.0, |a| a.value) * w[j]
    });
    let outer = w.clone();
    let sum = BilinearSum::symmetric(outer, d)?;
    let basis = |pos: f64, time: f64, phase: fn(f64) -> f64| -> Vec<f64> {
        (0..modes)
            .map(|j| phase(omega[j] * time) * sin_pi((j + 1) as f64 * pos / cfg.length()) / omega[j].sqrt())
            .collect()
    };
    let cos_part = sum.eval(&basis(x, t, f64::cos), &basis(xp, tp, f64::cos))?.value;
    let sin_part = sum.eval(&basis(x, t, f64::sin), &basis(xp, tp, f64::sin))?.value;
    let pref = 8.0 * cfg.hbar() * cfg.c() * cfg.c() / cfg.length();
    Ok(pref * (cos_part + sin_part))
}

/// Provenance of a one-dimensional profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Profile1DMeta {
    pub params: Cavity1DParams,
    pub control: SumControl,
    pub truncation: Truncation,
    /// Largest tail estimate over all points.
    pub max_tail: f64,
}

/// Zeroth- and first-order fluctuations on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Density1DProfile {
    pub grid: Vec<f64>,
    pub e2_0: Vec<f64>,
    pub b2_0: Vec<f64>,
    pub e2_1: Vec<f64>,
    pub b2_1: Vec<f64>,
    pub rho_corr: Vec<f64>,
    pub meta: Profile1DMeta,
}

impl Density1DProfile {
    /// Peak and width of the energy density correction.
    pub fn peak(&self) -> PeakInfo {
        peak_info(&self.grid, &self.rho_corr).expect("profile grids are non-empty")
    }
}

/// Evaluate every quantity at every grid point. Points are processed in
/// parallel on the current rayon pool; each point's sums run in a fixed order,
/// so the result does not depend on the pool size.
pub fn profile_1d(cfg: &Cavity1D, control: &SumControl, grid: &Grid) -> Result<Density1DProfile> {
    let eval = FirstOrder1D::from_control(cfg, control)?;
    let rows: Vec<(f64, f64, FirstOrderFields)> = grid
        .points()
        .par_iter()
        .map(|&x| Ok((e2_zeroth(x, cfg)?, b2_zeroth(x, cfg)?, eval.fields(x)?)))
        .collect::<Result<_>>()?;
    let mut max_tail = 0.0f64;
    for (_, _, f) in &rows {
        f.e2.check("first-order <E^2>", control.rel_tol)?;
        f.b2.check("first-order <B^2>", control.rel_tol)?;
        max_tail = max_tail.max(f.tail());
    }
    Ok(Density1DProfile {
        grid: grid.points().to_vec(),
        e2_0: rows.iter().map(|r| r.0).collect(),
        b2_0: rows.iter().map(|r| r.1).collect(),
        e2_1: rows.iter().map(|r| r.2.e2.value).collect(),
        b2_1: rows.iter().map(|r| r.2.b2.value).collect(),
        rho_corr: rows.iter().map(|r| r.2.rho()).collect(),
        meta: Profile1DMeta {
            params: cfg.params(),
            control: *control,
            truncation: eval.truncation(),
            max_tail,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modesum::CutoffScheme;

    fn cfg() -> Cavity1D {
        Cavity1DParams::mems().validate().unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn coupling_is_symmetric_and_amplitude_follows() {
        let c = cfg();
        assert_eq!(coupling_c(1, 2, &c).unwrap().value, coupling_c(2, 1, &c).unwrap().value);
        assert!(coupling_c(1, 2, &c).unwrap().value < 0.0);
        for (j, l) in [(1, 1), (2, 5), (7, 3)] {
            let cj = coupling_c(j, l, &c).unwrap().value;
            let d = amplitude_d(j, l, &c).unwrap().value;
            let w = c.omega_osc() + c.omega(j).unwrap() + c.omega(l).unwrap();
            assert!(rel(d, cj / (c.hbar() * w)) < 1e-14);
        }
        assert!(coupling_c(0, 1, &c).is_err());
    }

    #[test]
    fn zeroth_order_midpoint() {
        let c = cfg();
        let unit = c.hbar() * c.c() * PI / (c.length() * c.length());
        let mid = 0.5 * c.length();
        assert!(rel(e2_zeroth(mid, &c).unwrap(), unit / 12.0) < 1e-14);
        assert!(rel(b2_zeroth(mid, &c).unwrap(), -unit / 6.0) < 1e-14);
        assert!(e2_zeroth(0.0, &c).is_err());
        assert!(b2_zeroth(c.length(), &c).is_err());
    }

    #[test]
    fn near_wall_limits() {
        let c = cfg();
        let x = c.length() * (1.0 - 1e-4);
        let (e, b) = near_wall_asymptotics(x, &c).unwrap();
        assert!(rel(e2_zeroth(x, &c).unwrap(), e) < 1e-3);
        assert!(rel(b2_zeroth(x, &c).unwrap(), b) < 1e-3);
        assert!(near_wall_asymptotics(0.25 * c.length(), &c).is_err());
    }

    #[test]
    fn first_order_vanishes_at_walls_only_for_e() {
        let c = cfg();
        let f = FirstOrder1D::new(&c, 40, CutoffWeight::new(CutoffScheme::Exponential, 1e15)).unwrap();
        assert_eq!(f.e2(0.0).unwrap().value, 0.0);
        assert_eq!(f.e2(c.length()).unwrap().value, 0.0);
        assert!(f.b2(0.0).unwrap().value > 0.0);
        assert!(f.e2(1.1 * c.length()).is_err());
    }

    #[test]
    fn casimir_polder_is_linear() {
        let c = cfg();
        let control = SumControl::default();
        let x = 0.7 * c.length();
        let none = PolarizableBody::new(0.0, 0.0, x, &c).unwrap();
        assert_eq!(casimir_polder_shift(&none, &c, &control).unwrap(), 0.0);
        let one = PolarizableBody::new(1e-40, 0.0, x, &c).unwrap();
        let two = PolarizableBody::new(2e-40, 0.0, x, &c).unwrap();
        let a = casimir_polder_shift(&one, &c, &control).unwrap();
        let b = casimir_polder_shift(&two, &c, &control).unwrap();
        assert!(rel(b, 2.0 * a) < 1e-15);
        let e = e2_zeroth(x, &c).unwrap() + e2_first(x, &c, &control).unwrap();
        assert!(rel(a, -0.5e-40 * e) < 1e-14);
        assert!(PolarizableBody::new(1.0, 1.0, c.length(), &c).is_err());
    }
}
