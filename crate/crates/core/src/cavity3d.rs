//! Massless scalar field in a box with one mobile wall, L0 along x and
//! periodic transverse section S = Ly·Lz.
//!
//! The wall-field coupling only links modes with the same transverse norm
//! `n_y² + n_z²`: the diagonal part keeps a mode fixed, the off-diagonal part
//! flips `n_∥ → -n_∥` and changes `n_x`. Every sum here is therefore organized
//! by transverse *channel* `s = n_y² + n_z²`, and within a channel by `n_x`.
//! Channels are visited in ascending `s` and each carries the number of
//! lattice points `(n_y, n_z)` with that norm.
//!
//! Amplitudes are stored in reduced form `d = D/K` with
//! `K = ½√(ħ/(2Mω_osc))`, so the `1/M` dependence of every `D·D` observable
//! sits in a single prefactor.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Cavity3D, Cavity3DParams, SumControl};
use crate::error::{Error, Result};
use crate::grid::{peak_info, Grid, PeakInfo};
use crate::modes::ModeIndex3;
use crate::modesum::{
    evaluation_control, tail_bound, truncation_for, Axis, BilinearSum, Coefficients, CompensatedSum, CutoffScheme,
    CutoffWeight, Matrix, SumResult, Truncation, TRUNCATION_MARGIN,
};
use crate::trig::{cos_pi, sin_pi};

/// Upper limit on stored amplitudes for one evaluator (8 bytes each).
pub const MAX_COEFFICIENTS: usize = 300_000_000;

/// Intermode coupling `g_kj`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GCoupling {
    pub k: ModeIndex3,
    pub j: ModeIndex3,
    pub value: f64,
}

/// Wall-field coupling constant `C_kj`, J; see [`coupling_c3`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling3D {
    pub k: ModeIndex3,
    pub j: ModeIndex3,
    pub value: f64,
}

/// Dressed-state amplitude `D_kj = C_kj/(ħ(ω_osc + ω_k + ω_j))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitude3D {
    pub k: ModeIndex3,
    pub j: ModeIndex3,
    pub value: f64,
}

fn parity(n: u32) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Axial factor of `g`: `(-1)^{k+j} 2kj/(j² - k²)`, zero for `k = j`.
fn g_axial(kx: u32, jx: u32) -> f64 {
    if kx == jx {
        return 0.0;
    }
    let (k, j) = (kx as f64, jx as f64);
    parity(kx + jx) * 2.0 * k * j / ((j - k) * (j + k))
}

/// `g_kj = (-1)^{k_x+j_x} 2k_xj_x/(j_x² - k_x²) δ_{k_∥,-j_∥}`.
pub fn g_coupling(k: ModeIndex3, j: ModeIndex3) -> GCoupling {
    let value = if k.ny() == -j.ny() && k.nz() == -j.nz() {
        g_axial(k.nx(), j.nx())
    } else {
        0.0
    };
    GCoupling { k, j, value }
}

/// `∂ω_k/∂q` at `q = L0`: `-c²π²k_x²/(L0³ω_k)`, 1/(s·m).
pub fn domega_dq(k: ModeIndex3, cfg: &Cavity3D) -> f64 {
    domega_parts(k.nx(), cfg.omega(k), cfg)
}

fn domega_parts(nx: u32, omega: f64, cfg: &Cavity3D) -> f64 {
    let q = nx as f64 * cfg.axial_unit();
    -cfg.c() * cfg.c() * q * q / (cfg.length() * omega)
}

/// Bracket of `C_kj` without the `(ħ/2)√(ħ/(2Mω_osc))` prefactor:
/// `∂ω_k/∂q δ_kj - (g_kj/L0)√(ω_k/ω_j) ω_k`.
fn bracket(k: ModeIndex3, j: ModeIndex3, cfg: &Cavity3D) -> f64 {
    let wk = cfg.omega(k);
    let mut b = 0.0;
    if k == j {
        b += domega_parts(k.nx(), wk, cfg);
    }
    let g = g_coupling(k, j).value;
    if g != 0.0 {
        let wj = cfg.omega(j);
        b -= g / cfg.length() * (wk / wj).sqrt() * wk;
    }
    b
}

/// `K = ½√(ħ/(2Mω_osc))`, the mass-dependent scale of `D`.
fn amplitude_scale(cfg: &Cavity3D) -> f64 {
    0.5 * (cfg.hbar() / (2.0 * cfg.mass() * cfg.omega_osc())).sqrt()
}

/// `C_kj = (ħ/2)√(ħ/(2Mω_osc)) [∂ω_k/∂q δ_kj - (g_kj/L0)√(ω_k/ω_j) ω_k]`.
pub fn coupling_c3(k: ModeIndex3, j: ModeIndex3, cfg: &Cavity3D) -> Coupling3D {
    let value = cfg.hbar() * amplitude_scale(cfg) * bracket(k, j, cfg);
    Coupling3D { k, j, value }
}

pub fn amplitude_d3(k: ModeIndex3, j: ModeIndex3, cfg: &Cavity3D) -> Amplitude3D {
    let b = bracket(k, j, cfg);
    let value = if b == 0.0 {
        0.0
    } else {
        amplitude_scale(cfg) * b / (cfg.omega_osc() + cfg.omega(k) + cfg.omega(j))
    };
    Amplitude3D { k, j, value }
}

/// Reduced amplitude `D/K` between `(kx, n_∥)` and `(jx, ±n_∥)` in the
/// channel with `s = |n_∥|²`. `diagonal` selects `j = k` (same `n_∥`);
/// otherwise `j_∥ = -k_∥` and only the `g` term contributes.
fn reduced(kx: u32, jx: u32, s: u64, diagonal: bool, cfg: &Cavity3D) -> f64 {
    let wk = cfg.omega_parts(kx, s);
    let wj = cfg.omega_parts(jx, s);
    let mut b = 0.0;
    if diagonal && kx == jx {
        b += domega_parts(kx, wk, cfg);
    }
    if kx != jx && (!diagonal || s == 0) {
        b -= g_axial(kx, jx) / cfg.length() * (wk / wj).sqrt() * wk;
    }
    if b == 0.0 {
        0.0
    } else {
        b / (cfg.omega_osc() + wk + wj)
    }
}

/// Modes retained by a three-dimensional sum: `1 ≤ n_x ≤ axial.bound`,
/// `|n_y|, |n_z| ≤ transverse.bound` and `ω ≤ omega_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSet3 {
    pub axial: Truncation,
    pub transverse: Truncation,
    pub omega_max: f64,
}

impl ModeSet3 {
    /// A plain box with no frequency ceiling.
    pub fn boxed(max_axial: usize, max_transverse: usize) -> Self {
        Self {
            axial: Truncation {
                bound: max_axial,
                clamped: false,
            },
            transverse: Truncation {
                bound: max_transverse,
                clamped: false,
            },
            omega_max: f64::INFINITY,
        }
    }

    /// Modes whose weight is at least `tol`, limited by the control's bounds.
    pub fn for_tolerance(cfg: &Cavity3D, control: &SumControl, tol: f64) -> Self {
        let ctl = SumControl {
            rel_tol: tol,
            ..*control
        };
        let weight = control.weight(cfg.omega_cut());
        let axial = truncation_for(&ctl, Axis::Axial, &weight, |n| cfg.omega_parts(n as u32, 0));
        let step = cfg.c() * cfg.transverse_unit();
        let transverse = truncation_for(&ctl, Axis::Transverse, &weight, |t| t as f64 * step);
        let omega_max = if tol >= 1.0 {
            cfg.omega_parts(axial.bound as u32, 0)
        } else {
            match weight.scheme {
                CutoffScheme::Exponential => cfg.omega_parts(axial.bound as u32, 0),
                CutoffScheme::Sharp => weight.omega_cut,
            }
        };
        Self {
            axial,
            transverse,
            omega_max,
        }
    }

    fn contains(&self, nx: u32, s: u64, cfg: &Cavity3D) -> bool {
        nx as usize <= self.axial.bound && cfg.omega_parts(nx, s) <= self.omega_max
    }

    /// Transverse channels `(s, multiplicity)` in ascending `s` that hold at
    /// least one retained mode.
    fn channels(&self, cfg: &Cavity3D) -> Vec<(u64, u64)> {
        let t = self.transverse.bound as i64;
        let mut counts = BTreeMap::new();
        for ny in -t..=t {
            for nz in -t..=t {
                let s = (ny * ny + nz * nz) as u64;
                if self.contains(1, s, cfg) {
                    *counts.entry(s).or_insert(0u64) += 1;
                }
            }
        }
        counts.into_iter().collect()
    }

    /// Number of retained axial modes in channel `s`.
    fn axial_len(&self, s: u64, cfg: &Cavity3D) -> usize {
        let mut n = 0;
        while n < self.axial.bound && cfg.omega_parts(n as u32 + 1, s) <= self.omega_max {
            n += 1;
        }
        n
    }
}

/// Occupation `⟨N_m⟩` of mode `m` in the dressed ground state, summing the
/// partner index `m'_x` over `1..=modes` with weights `w(ω_m)w(ω_m')`.
pub fn photon_number_with(m: ModeIndex3, cfg: &Cavity3D, modes: usize, weight: CutoffWeight) -> Result<SumResult> {
    if modes == 0 {
        return Err(Error::domain("photon number needs at least one partner mode"));
    }
    let s = m.transverse_norm2();
    let mx = m.nx() as f64;
    let wm = cfg.omega(m);
    let wo = cfg.omega_osc();
    let l2 = cfg.length() * cfg.length();
    let c2 = cfg.c() * cfg.c();
    let base = cfg.hbar() / (2.0 * cfg.mass() * l2 * wo);
    let pi2 = PI * PI;
    let mut acc = CompensatedSum::new();
    let mut mag = CompensatedSum::new();
    let mut last = 0.0;
    for p in 1..=modes as u32 {
        let wp = cfg.omega_parts(p, s);
        let t = if p == m.nx() {
            let r = pi2 * c2 * mx * mx / (l2 * wm * (wo + 2.0 * wm));
            base * r * r
        } else {
            let px = p as f64;
            let k = pi2 * c2 / l2;
            base * (mx * mx * px * px) * k * k / (wm * wp * (wo + wm + wp).powi(2))
        } * weight.factor(wm)
            * weight.factor(wp);
        acc.add(t);
        mag.add(t.abs());
        last = t;
    }
    let step = cfg.omega_parts(modes as u32 + 1, s) - cfg.omega_parts(modes as u32, s);
    Ok(SumResult::from_terms(
        acc.value(),
        mag.value(),
        last,
        weight.decay_ratio(step, false),
        modes,
    ))
}

fn partner_truncation(cfg: &Cavity3D, control: &SumControl, s: u64) -> Result<(Truncation, CutoffWeight)> {
    let control = control.validate()?;
    let weight = control.weight(cfg.omega_cut());
    let t = truncation_for(&evaluation_control(&control), Axis::Axial, &weight, |p| {
        cfg.omega_parts(p as u32, s)
    });
    Ok((t, weight))
}

fn clamp_tail(mut r: SumResult, t: Truncation, weight: &CutoffWeight) -> SumResult {
    if t.clamped && weight.scheme == CutoffScheme::Sharp {
        r.tail_estimate = f64::INFINITY;
    }
    r
}

/// `⟨N_m⟩` truncated per `control`.
pub fn photon_number(m: ModeIndex3, cfg: &Cavity3D, control: &SumControl) -> Result<f64> {
    Ok(photon_number_checked(m, cfg, control)?.0.value)
}

fn photon_number_checked(m: ModeIndex3, cfg: &Cavity3D, control: &SumControl) -> Result<(SumResult, Truncation)> {
    let (t, weight) = partner_truncation(cfg, control, m.transverse_norm2())?;
    let r = clamp_tail(photon_number_with(m, cfg, t.bound, weight)?, t, &weight);
    Ok((r.check("photon number", control.rel_tol)?, t))
}

/// `ħ/(2ML0²ω_osc) Σ_{m'} ω_m ω_m'/(ω_osc + ω_m + ω_m')²` over `1..=modes`,
/// the occupation of a purely axial mode.
pub fn photon_number_axial_with(mx: u32, cfg: &Cavity3D, modes: usize, weight: CutoffWeight) -> Result<SumResult> {
    if mx == 0 {
        return Err(Error::domain("m_x must be >= 1"));
    }
    if modes == 0 {
        return Err(Error::domain("photon number needs at least one partner mode"));
    }
    let wo = cfg.omega_osc();
    let base = cfg.hbar() / (2.0 * cfg.mass() * cfg.length() * cfg.length() * wo);
    let wm = cfg.omega_parts(mx, 0);
    let mut acc = CompensatedSum::new();
    let mut mag = CompensatedSum::new();
    let mut last = 0.0;
    for p in 1..=modes as u32 {
        let wp = cfg.omega_parts(p, 0);
        let t = base * wm * wp / (wo + wm + wp).powi(2) * weight.factor(wm) * weight.factor(wp);
        acc.add(t);
        mag.add(t);
        last = t;
    }
    let unit = cfg.omega_parts(1, 0);
    Ok(SumResult::from_terms(
        acc.value(),
        mag.value(),
        last,
        weight.decay_ratio(unit, false),
        modes,
    ))
}

pub fn photon_number_axial(mx: u32, cfg: &Cavity3D, control: &SumControl) -> Result<f64> {
    let (t, weight) = partner_truncation(cfg, control, 0)?;
    let r = clamp_tail(photon_number_axial_with(mx, cfg, t.bound, weight)?, t, &weight);
    Ok(r.check("axial photon number", control.rel_tol)?.value)
}

/// Occupations of a list of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonSpectrum {
    pub entries: Vec<(ModeIndex3, f64)>,
    pub params: Cavity3DParams,
    pub control: SumControl,
    /// Largest partner truncation over all entries.
    pub max_partners: usize,
    /// Largest tail estimate over all entries.
    pub max_tail: f64,
}

/// Occupation of every mode in `modes`, in the given order. Entries are
/// computed in parallel; each is an independent ordered sum.
pub fn photon_spectrum(modes: &[ModeIndex3], cfg: &Cavity3D, control: &SumControl) -> Result<PhotonSpectrum> {
    let control = control.validate()?;
    let rows = modes
        .par_iter()
        .map(|&m| photon_number_checked(m, cfg, &control))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhotonSpectrum {
        entries: modes.iter().zip(&rows).map(|(&m, (r, _))| (m, r.value)).collect(),
        params: cfg.params(),
        control,
        max_partners: rows.iter().map(|(_, t)| t.bound).max().unwrap_or(0),
        max_tail: rows.iter().map(|(r, _)| r.tail_estimate).fold(0.0, f64::max),
    })
}

/// Zeroth-order energy density
///
/// ```text
/// ⟨ρ₀⟩(x) = -π²ħc/(1440 L0⁴)
///           - (ħc²/(2SL0)) Σ_{p_x≥1} cos(2q_x x) Σ_{p_∥} (q_x² + 2|q_∥|²)/ω_p · w(ω_p)
/// ```
///
/// The `p_x = 0` channel, `-(ħc/(SL0)) Σ_{p_∥≠0} |q_∥| w`, has no position
/// dependence and is reported separately by [`px0_offset`](Self::px0_offset).
#[derive(Clone, Debug)]
pub struct RhoZeroth3D {
    cfg: Cavity3D,
    modes: ModeSet3,
    /// `-(ħc²/(2SL0)) Σ_{p_∥} ...` for `p_x = 1, 2, ...`.
    axial: Vec<f64>,
    offset: f64,
    decay: f64,
}

impl RhoZeroth3D {
    pub fn new(cfg: &Cavity3D, modes: ModeSet3, weight: CutoffWeight) -> Result<Self> {
        if modes.axial.bound == 0 {
            return Err(Error::domain("zeroth-order density needs at least one axial mode"));
        }
        let channels = modes.channels(cfg);
        let tu = cfg.transverse_unit();
        let qx1 = cfg.axial_unit();
        let c = cfg.c();
        let pref = -cfg.hbar() * c * c / (2.0 * cfg.area() * cfg.length());
        let axial = (1..=modes.axial.bound as u32)
            .map(|px| {
                let qx2 = (px as f64 * qx1).powi(2);
                let mut acc = CompensatedSum::new();
                for &(s, mult) in &channels {
                    if !modes.contains(px, s, cfg) {
                        continue;
                    }
                    let w = cfg.omega_parts(px, s);
                    acc.add(mult as f64 * (qx2 + 2.0 * s as f64 * tu * tu) / w * weight.factor(w));
                }
                pref * acc.value()
            })
            .collect();

        let mut off = CompensatedSum::new();
        for &(s, mult) in &channels {
            if s == 0 {
                continue;
            }
            let q = (s as f64).sqrt() * tu;
            let w = c * q;
            if w <= modes.omega_max {
                off.add(mult as f64 * q * weight.factor(w));
            }
        }
        let offset = -cfg.hbar() * c / (cfg.area() * cfg.length()) * off.value();
        let step = cfg.omega_parts(2, 0) - cfg.omega_parts(1, 0);
        Ok(Self {
            cfg: *cfg,
            modes,
            axial,
            offset,
            decay: weight.decay_ratio(step, modes.axial.clamped),
        })
    }

    /// Truncated two decades below the control's tolerance, since the
    /// position-dependent part is a difference of large near-wall terms.
    pub fn from_control(cfg: &Cavity3D, control: &SumControl) -> Result<Self> {
        let control = control.validate()?;
        let tol = control.rel_tol * TRUNCATION_MARGIN * TRUNCATION_MARGIN;
        let modes = ModeSet3::for_tolerance(cfg, &control, tol);
        Self::new(cfg, modes, control.weight(cfg.omega_cut()))
    }

    pub fn modes(&self) -> ModeSet3 {
        self.modes
    }

    /// `-π²ħc/(1440 L0⁴)`.
    pub fn casimir_constant(&self) -> f64 {
        casimir_constant(&self.cfg)
    }

    pub fn px0_offset(&self) -> f64 {
        self.offset
    }

    /// The `p_x ≥ 1` part. Defined on the closed interval `[0, L0]`.
    pub fn position_part(&self, x: f64) -> Result<SumResult> {
        closed_interval(x, self.cfg.length())?;
        let t = x / self.cfg.length();
        let mut acc = CompensatedSum::new();
        let mut mag = CompensatedSum::new();
        let mut last = 0.0;
        for (i, a) in self.axial.iter().enumerate() {
            let v = a * cos_pi(2.0 * (i + 1) as f64 * t);
            acc.add(v);
            mag.add(v.abs());
            last = *a;
        }
        Ok(SumResult::from_terms(acc.value(), mag.value(), last, self.decay, self.axial.len()))
    }

    /// Casimir constant plus position-dependent part (the `p_x = 0` offset
    /// is not included).
    pub fn eval(&self, x: f64) -> Result<SumResult> {
        interior(x, self.cfg.length())?;
        let mut r = self.position_part(x)?;
        r.value += self.casimir_constant();
        Ok(r)
    }
}

/// `-π²ħc/(1440 L0⁴)`, the Casimir energy density of the box.
pub fn casimir_constant(cfg: &Cavity3D) -> f64 {
    -PI * PI * cfg.hbar() * cfg.c() / (1440.0 * cfg.length().powi(4))
}

/// Zeroth-order energy density, J/m³, for `0 < x < L0`.
pub fn rho_zeroth(x: f64, cfg: &Cavity3D, control: &SumControl) -> Result<f64> {
    let r = RhoZeroth3D::from_control(cfg, control)?.eval(x)?;
    Ok(r.check("zeroth-order density", control.rel_tol)?.value)
}

fn interior(x: f64, l0: f64) -> Result<()> {
    if x > 0.0 && x < l0 {
        Ok(())
    } else {
        Err(Error::domain(format!("x = {x:e} must lie strictly inside (0, {l0:e})")))
    }
}

fn closed_interval(x: f64, l0: f64) -> Result<()> {
    if (0.0..=l0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("x = {x:e} must lie in [0, {l0:e}]")))
    }
}

/// One transverse channel of the first-order correction.
#[derive(Clone, Debug)]
struct Channel {
    s: u64,
    multiplicity: f64,
    /// `|q_∥|²`.
    q_par2: f64,
    /// Per axial mode: `w√ω`, `w/√ω`, `q_x w/√ω`.
    scale: Vec<[f64; 3]>,
    sum: BilinearSum,
    /// `w_m d_mm²` for the diagonal-diagonal terms of `s ≠ 0` channels.
    diagonal: Option<Vec<f64>>,
    decay: f64,
}

/// First-order energy density correction
///
/// ```text
/// ⟨Δρ⟩(x) = 4 (ħc²/(SL0)) Σ D_mj D_jr [ (√(ω_mω_r)/c² + q_∥^m·q_∥^r/√(ω_mω_r)) sin q_x^m x sin q_x^r x
///                                       + q_x^m q_x^r/√(ω_mω_r) cos q_x^m x cos q_x^r x ]
/// ```
///
/// over the triples with `q_∥^m = q_∥^r`. In channel `s = 0` the amplitude
/// matrix holds both diagonal and off-diagonal pieces. For `s ≠ 0` the
/// retained triples are the off-diagonal pair (`j_∥ = -m_∥`, `r_∥ = m_∥`) and
/// the purely diagonal `j = r = m`; mixed diagonal/off-diagonal products
/// would give `r_∥ = -m_∥` and are left out.
#[derive(Clone, Debug)]
pub struct DeltaRho3D {
    cfg: Cavity3D,
    modes: ModeSet3,
    weight: CutoffWeight,
    channels: Vec<Channel>,
    prefactor: f64,
    coefficients: usize,
}

impl DeltaRho3D {
    pub fn new(cfg: &Cavity3D, modes: ModeSet3, weight: CutoffWeight) -> Result<Self> {
        let channel_list = modes.channels(cfg);
        let lens: Vec<usize> = channel_list.iter().map(|&(s, _)| modes.axial_len(s, cfg)).collect();
        let coefficients: usize = lens.iter().map(|n| n * n).sum();
        if coefficients > MAX_COEFFICIENTS {
            return Err(Error::domain(format!(
                "first-order 3D sum needs {coefficients} amplitudes (limit {MAX_COEFFICIENTS}); \
                 lower omega_cut or raise rel_tol"
            )));
        }
        if coefficients == 0 {
            return Err(Error::domain("first-order 3D sum has no modes"));
        }
        let tu = cfg.transverse_unit();
        let qx1 = cfg.axial_unit();
        let channels = channel_list
            .iter()
            .zip(&lens)
            .filter(|(_, &n)| n > 0)
            .map(|(&(s, mult), &n)| {
                let omega: Vec<f64> = (1..=n as u32).map(|k| cfg.omega_parts(k, s)).collect();
                let w: Vec<f64> = omega.iter().map(|&o| weight.factor(o)).collect();
                let scale = (0..n)
                    .map(|i| {
                        let r = omega[i].sqrt();
                        let qx = (i + 1) as f64 * qx1;
                        [w[i] * r, w[i] / r, qx * w[i] / r]
                    })
                    .collect();
                let d = Matrix::from_fn(n, n, |m, j| reduced(m as u32 + 1, j as u32 + 1, s, s == 0, cfg));
                let diagonal = (s != 0).then(|| {
                    (0..n)
                        .map(|m| {
                            let v = reduced(m as u32 + 1, m as u32 + 1, s, true, cfg);
                            w[m] * v * v
                        })
                        .collect()
                });
                let next = cfg.omega_parts(n as u32 + 1, s) - omega[n - 1];
                let clamped = modes.axial.clamped && n == modes.axial.bound;
                let decay = weight.decay_ratio(next, clamped);
                let d = std::sync::Arc::new(d);
                let sum = BilinearSum::new(w, Coefficients::Columns(d.clone()), Some(Coefficients::Rows(d)))?
                    .with_decay(decay);
                Ok(Channel {
                    s,
                    multiplicity: mult as f64,
                    q_par2: s as f64 * tu * tu,
                    scale,
                    sum,
                    diagonal,
                    decay,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let c2 = cfg.c() * cfg.c();
        // K² = ħ/(8Mω_osc)
        let prefactor =
            4.0 * cfg.hbar() * c2 / (cfg.area() * cfg.length()) * cfg.hbar() / (8.0 * cfg.mass() * cfg.omega_osc());
        Ok(Self {
            cfg: *cfg,
            modes,
            weight,
            channels,
            prefactor,
            coefficients,
        })
    }

    pub fn from_control(cfg: &Cavity3D, control: &SumControl) -> Result<Self> {
        let control = control.validate()?;
        let modes = ModeSet3::for_tolerance(cfg, &control, evaluation_control(&control).rel_tol);
        Self::new(cfg, modes, control.weight(cfg.omega_cut()))
    }

    pub fn modes(&self) -> ModeSet3 {
        self.modes
    }

    /// Number of stored amplitudes.
    pub fn coefficients(&self) -> usize {
        self.coefficients
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    /// `⟨Δρ(x)⟩`, J/m³, for `0 ≤ x ≤ L0`. There is no transverse argument:
    /// the correction does not depend on `r_∥`.
    pub fn eval(&self, x: f64) -> Result<SumResult> {
        closed_interval(x, self.cfg.length())?;
        let t = x / self.cfg.length();
        let n = self.channels.iter().map(|c| c.scale.len()).max().unwrap_or(0);
        let sin: Vec<f64> = (1..=n).map(|k| sin_pi(k as f64 * t)).collect();
        let cos: Vec<f64> = (1..=n).map(|k| cos_pi(k as f64 * t)).collect();
        let inv_c2 = 1.0 / (self.cfg.c() * self.cfg.c());

        let mut total = CompensatedSum::new();
        let mut magnitude = CompensatedSum::new();
        let mut tail = CompensatedSum::new();
        let mut shell = CompensatedSum::new();
        let mut terms = 0;
        let outer_ring = (self.modes.transverse.bound.saturating_sub(1) as u64).pow(2);
        for ch in &self.channels {
            let len = ch.scale.len();
            let z: [Vec<f64>; 3] = std::array::from_fn(|k| {
                let b = if k == 2 { &cos } else { &sin };
                (0..len).map(|i| ch.scale[i][k] * b[i]).collect()
            });
            let factors = [inv_c2, ch.q_par2, 1.0];
            let picked: Vec<usize> = (0..3).filter(|&k| factors[k] != 0.0).collect();
            let pairs: Vec<(&[f64], &[f64])> = picked.iter().map(|&k| (&z[k][..], &z[k][..])).collect();
            let mut parts: Vec<(f64, SumResult)> = picked
                .iter()
                .zip(ch.sum.eval_many(&pairs)?)
                .map(|(&k, r)| (factors[k], r))
                .collect();
            if let Some(diag) = &ch.diagonal {
                let mut acc = CompensatedSum::new();
                let mut mag = CompensatedSum::new();
                let mut last = 0.0;
                for (i, dw) in diag.iter().enumerate() {
                    let v = dw * (inv_c2 * z[0][i] * z[0][i] + ch.q_par2 * z[1][i] * z[1][i] + z[2][i] * z[2][i]);
                    acc.add(v);
                    mag.add(v.abs());
                    last = v;
                }
                parts.push((1.0, SumResult::from_terms(acc.value(), mag.value(), last, ch.decay, len)));
            }
            for (f, r) in parts {
                let scale = f * ch.multiplicity;
                total.add(scale * r.value);
                let m = scale.abs() * r.magnitude;
                magnitude.add(m);
                tail.add(if r.tail_estimate == 0.0 { 0.0 } else { r.tail_estimate * m });
                if ch.s > outer_ring {
                    shell.add(m);
                }
                terms += r.terms_used;
            }
        }
        let magnitude = magnitude.value();
        let mut tail_estimate = if magnitude > 0.0 { tail.value() / magnitude } else { 0.0 };
        if self.modes.transverse.clamped {
            let step = self.cfg.c() * self.cfg.transverse_unit();
            let r = self.weight.decay_ratio(step, true);
            tail_estimate += tail_bound(shell.value(), r, magnitude);
        }
        Ok(SumResult {
            value: self.prefactor * total.value(),
            tail_estimate,
            terms_used: terms,
            magnitude: self.prefactor.abs() * magnitude,
        })
    }
}

/// First-order energy density correction, J/m³, for `0 ≤ x ≤ L0`.
pub fn delta_rho(x: f64, cfg: &Cavity3D, control: &SumControl) -> Result<f64> {
    let r = DeltaRho3D::from_control(cfg, control)?.eval(x)?;
    Ok(r.check("first-order 3D density", control.rel_tol)?.value)
}

/// Provenance of a three-dimensional profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Profile3DMeta {
    pub params: Cavity3DParams,
    pub control: SumControl,
    pub rho0_modes: ModeSet3,
    pub delta_modes: ModeSet3,
    pub coefficients: usize,
    pub max_tail: f64,
    /// Peak of `|Δρ|` on the mobile-wall half `x ≥ L0/2` of the grid.
    pub peak: PeakInfo,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Density3DProfile {
    pub grid: Vec<f64>,
    pub rho0: Vec<f64>,
    pub delta_rho: Vec<f64>,
    pub casimir_constant: f64,
    pub px0_offset: f64,
    pub meta: Profile3DMeta,
}

/// Peak of `delta_rho` among points with `x ≥ L0/2`, or over the whole grid
/// if none lie there. The correction is nearly mirror-symmetric, so the
/// fixed-wall half carries a twin peak that is not of interest.
pub fn mobile_wall_peak(grid: &[f64], values: &[f64], l0: f64) -> Option<PeakInfo> {
    let start = grid.iter().position(|&x| x >= 0.5 * l0).unwrap_or(0);
    let mut p = peak_info(&grid[start..], &values[start..])?;
    p.index += start;
    Some(p)
}

/// `ρ₀` and `Δρ` at every grid point, in parallel over points.
pub fn density_profile_3d(cfg: &Cavity3D, control: &SumControl, grid: &Grid) -> Result<Density3DProfile> {
    let control = control.validate()?;
    let zeroth = RhoZeroth3D::from_control(cfg, &control)?;
    let first = DeltaRho3D::from_control(cfg, &control)?;
    let rows: Vec<(SumResult, SumResult)> = grid
        .points()
        .par_iter()
        .map(|&x| Ok((zeroth.eval(x)?, first.eval(x)?)))
        .collect::<Result<_>>()?;
    let mut max_tail = 0.0f64;
    for (r0, r1) in &rows {
        r0.check("zeroth-order density", control.rel_tol)?;
        r1.check("first-order 3D density", control.rel_tol)?;
        max_tail = max_tail.max(r0.tail_estimate).max(r1.tail_estimate);
    }
    let delta: Vec<f64> = rows.iter().map(|r| r.1.value).collect();
    let peak = mobile_wall_peak(grid.points(), &delta, cfg.length())
        .ok_or_else(|| Error::domain("profile grid is empty"))?;
    Ok(Density3DProfile {
        grid: grid.points().to_vec(),
        rho0: rows.iter().map(|r| r.0.value).collect(),
        delta_rho: delta,
        casimir_constant: zeroth.casimir_constant(),
        px0_offset: zeroth.px0_offset(),
        meta: Profile3DMeta {
            params: cfg.params(),
            control,
            rho0_modes: zeroth.modes(),
            delta_modes: first.modes(),
            coefficients: first.coefficients(),
            max_tail,
            peak,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Cavity3D {
        Cavity3DParams::mems().validate().unwrap()
    }

    fn mode(nx: u32, ny: i32, nz: i32) -> ModeIndex3 {
        ModeIndex3::new(nx, ny, nz).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_coupling(mode(3, 1, 2), mode(3, -1, -2)).value, 0.0);
        assert!(rel(g_coupling(mode(1, 2, -3), mode(2, -2, 3)).value, -4.0 / 3.0) < 1e-15);
        assert_eq!(g_coupling(mode(1, 0, 0), mode(2, 1, 0)).value, 0.0);
        assert_eq!(g_coupling(mode(1, 1, 0), mode(2, 1, 0)).value, 0.0);
        let a = g_coupling(mode(2, 1, 1), mode(5, -1, -1)).value;
        let b = g_coupling(mode(5, 1, 1), mode(2, -1, -1)).value;
        assert_eq!(a, -b);
    }

    #[test]
    fn frequency_gradient() {
        let c = cfg();
        let k = mode(1, 0, 0);
        assert!(rel(domega_dq(k, &c), -c.omega(k) / c.length()) < 1e-15);
        assert!(domega_dq(mode(1, 3000, 3000), &c).abs() < 1e-3 * domega_dq(k, &c).abs());
    }

    #[test]
    fn coupling_structure() {
        let c = cfg();
        let k = mode(1, 0, 0);
        let j = mode(2, 0, 0);
        assert!(coupling_c3(k, k, &c).value < 0.0);
        assert_eq!(coupling_c3(mode(1, 1, 0), mode(2, 1, 0), &c).value, 0.0);
        assert_eq!(amplitude_d3(mode(1, 1, 0), mode(2, 1, 0), &c).value, 0.0);
        let kj = coupling_c3(k, j, &c).value;
        let jk = coupling_c3(j, k, &c).value;
        assert!(rel(kj / jk, -(c.omega(k) / c.omega(j)).powi(2)) < 1e-14);
        let d = amplitude_d3(k, j, &c).value;
        assert!(rel(d, kj / (c.hbar() * (c.omega_osc() + c.omega(k) + c.omega(j)))) < 1e-14);
        let heavy = c.with(|p| p.M *= 10.0).unwrap();
        let dh = amplitude_d3(k, j, &heavy).value;
        assert!(rel(dh, d / 10f64.sqrt()) < 1e-14);
    }

    #[test]
    fn reduced_amplitudes_match_full() {
        let c = cfg();
        let k = amplitude_scale(&c);
        for (m, j, s, diag) in [(1, 1, 0, true), (2, 5, 0, true), (3, 3, 5, true), (4, 1, 5, false)] {
            let (ny, nz) = if s == 0 { (0, 0) } else { (1, 2) };
            let a = mode(m, ny, nz);
            let b = if diag { mode(j, ny, nz) } else { mode(j, -ny, -nz) };
            let full = amplitude_d3(a, b, &c).value;
            assert!(rel(k * reduced(m, j, s, diag, &c), full) < 1e-14, "{a} {b}");
        }
        assert_eq!(reduced(4, 1, 5, true, &c), 0.0);
    }

    #[test]
    fn channel_multiplicities() {
        let c = cfg();
        let set = ModeSet3::boxed(4, 2);
        let ch = set.channels(&c);
        let get = |s: u64| ch.iter().find(|e| e.0 == s).map(|e| e.1);
        assert_eq!(get(0), Some(1));
        assert_eq!(get(1), Some(4));
        assert_eq!(get(2), Some(4));
        assert_eq!(get(5), Some(8));
        assert_eq!(get(8), Some(4));
        assert_eq!(ch.iter().map(|e| e.1).sum::<u64>(), 25);
        assert!(ch.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn photon_numbers_scale_with_mass() {
        let c = cfg().with(|p| p.omega_cut = 2e14).unwrap();
        let heavy = c.with(|p| p.M *= 2.0).unwrap();
        let control = SumControl::default();
        for m in [mode(1, 0, 0), mode(2, 1, -1)] {
            let a = photon_number(m, &c, &control).unwrap();
            let b = photon_number(m, &heavy, &control).unwrap();
            assert!(a > 0.0);
            assert!(rel(a, 2.0 * b) < 1e-15);
        }
        assert!(photon_number_axial(0, &c, &control).is_err());
    }

    #[test]
    fn casimir_constant_value() {
        let c = cfg();
        // -π²ħc/1440L0⁴ at L0 = 10 μm
        assert!(rel(casimir_constant(&c), -2.166_876_287_412_9e-8) < 1e-12);
        let z = RhoZeroth3D::new(&c, ModeSet3::boxed(3, 1), CutoffWeight::new(CutoffScheme::Exponential, 1e15)).unwrap();
        assert_eq!(z.casimir_constant(), casimir_constant(&c));
        assert!(z.px0_offset() < 0.0);
        assert!(z.eval(0.0).is_err());
        assert!(z.position_part(0.0).is_ok());
    }

    #[test]
    fn delta_rho_mass_scaling_is_exact() {
        let c = cfg().with(|p| p.omega_cut = 1e14).unwrap();
        let heavy = c.with(|p| p.M *= 2.0).unwrap();
        let w = CutoffWeight::new(CutoffScheme::Exponential, 1e14);
        let a = DeltaRho3D::new(&c, ModeSet3::boxed(6, 3), w).unwrap();
        let b = DeltaRho3D::new(&heavy, ModeSet3::boxed(6, 3), w).unwrap();
        for x in [0.0, 0.3e-5, 0.9e-5] {
            assert_eq!(a.eval(x).unwrap().value, 2.0 * b.eval(x).unwrap().value);
        }
    }

    #[test]
    fn peak_search_uses_mobile_wall_half() {
        let xs = [1.0, 2.0, 3.0, 6.0, 7.0, 8.0];
        let v = [0.0, 5.0, 0.0, 1.0, 3.0, 1.0];
        let p = mobile_wall_peak(&xs, &v, 10.0).unwrap();
        assert_eq!(p.index, 4);
        assert_eq!(p.location, 7.0);
        assert_eq!(mobile_wall_peak(&xs[..3], &v[..3], 10.0).unwrap().index, 1);
    }

    #[test]
    fn oversized_mode_sets_are_rejected() {
        let c = cfg();
        let err = DeltaRho3D::new(&c, ModeSet3::boxed(2000, 400), CutoffWeight::none()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
