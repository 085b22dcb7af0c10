//! WebAssembly bindings for the demo page in `www/`.
//!
//! Three operations, all in SI units: a 1D energy-density profile, an axial
//! photon spectrum, and a 3D energy-density profile at modest cutoffs.

use mobile_wall::cavity1d::profile_1d;
use mobile_wall::cavity3d::{density_profile_3d, photon_spectrum};
use mobile_wall::grid::Grid;
use mobile_wall::{Cavity1DParams, Cavity3DParams, ModeIndex3, SumControl};
use wasm_bindgen::prelude::*;

/// Largest 3D cutoff the page accepts; the coefficient table grows as ω_cut³.
pub const MAX_OMEGA_CUT_3D: f64 = 4e14;

#[wasm_bindgen]
pub struct Profile1D {
    x: Vec<f64>,
    e2: Vec<f64>,
    b2: Vec<f64>,
    rho: Vec<f64>,
    peak_location: f64,
    fwhm: f64,
}

#[wasm_bindgen]
impl Profile1D {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    /// First-order `⟨E²⟩`, J/m.
    #[wasm_bindgen(getter)]
    pub fn e2(&self) -> Vec<f64> {
        self.e2.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn b2(&self) -> Vec<f64> {
        self.b2.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn rho(&self) -> Vec<f64> {
        self.rho.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn peak_location(&self) -> f64 {
        self.peak_location
    }

    #[wasm_bindgen(getter)]
    pub fn fwhm(&self) -> f64 {
        self.fwhm
    }
}

#[wasm_bindgen]
pub struct Profile3D {
    x: Vec<f64>,
    rho0: Vec<f64>,
    delta_rho: Vec<f64>,
    peak_location: f64,
    casimir_constant: f64,
}

#[wasm_bindgen]
impl Profile3D {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    /// Zeroth-order density without the constant `p_x = 0` offset, J/m³.
    #[wasm_bindgen(getter)]
    pub fn rho0(&self) -> Vec<f64> {
        self.rho0.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn delta_rho(&self) -> Vec<f64> {
        self.delta_rho.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn peak_location(&self) -> f64 {
        self.peak_location
    }

    #[wasm_bindgen(getter)]
    pub fn casimir_constant(&self) -> f64 {
        self.casimir_constant
    }
}

fn grid(length: f64, points: usize, window: f64) -> Result<Grid, String> {
    let g = if window > 0.0 && window < length {
        Grid::window(length, points, window)
    } else {
        Grid::uniform(length, points)
    };
    g.map_err(|e| e.to_string())
}

pub fn compute_profile_1d(
    l0: f64,
    mass: f64,
    omega_osc: f64,
    omega_cut: f64,
    points: usize,
    window: f64,
) -> Result<Profile1D, String> {
    let cfg = Cavity1DParams {
        L0: l0,
        M: mass,
        omega_osc,
        omega_cut,
        constants: Default::default(),
    }
    .validate()
    .map_err(|e| e.to_string())?;
    let p = profile_1d(&cfg, &SumControl::default(), &grid(l0, points, window)?).map_err(|e| e.to_string())?;
    let peak = p.peak();
    Ok(Profile1D {
        x: p.grid,
        e2: p.e2_1,
        b2: p.b2_1,
        rho: p.rho_corr,
        peak_location: peak.location,
        fwhm: peak.fwhm,
    })
}

fn cavity_3d(l0: f64, side: f64, mass: f64, omega_osc: f64, omega_cut: f64) -> Result<mobile_wall::Cavity3D, String> {
    Cavity3DParams {
        L0: l0,
        Ly: side,
        Lz: side,
        M: mass,
        omega_osc,
        omega_cut,
        constants: Default::default(),
    }
    .validate()
    .map_err(|e| e.to_string())
}

/// Occupations of `(m_x, m_y, m_z)` for `m_x = 1..=max_axial`.
#[allow(clippy::too_many_arguments)]
pub fn compute_spectrum(
    l0: f64,
    side: f64,
    mass: f64,
    omega_osc: f64,
    omega_cut: f64,
    max_axial: u32,
    m_y: i32,
    m_z: i32,
) -> Result<Vec<f64>, String> {
    let cfg = cavity_3d(l0, side, mass, omega_osc, omega_cut)?;
    let modes = (1..=max_axial)
        .map(|nx| ModeIndex3::new(nx, m_y, m_z))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let s = photon_spectrum(&modes, &cfg, &SumControl::default()).map_err(|e| e.to_string())?;
    Ok(s.entries.into_iter().map(|e| e.1).collect())
}

pub fn compute_profile_3d(
    l0: f64,
    side: f64,
    mass: f64,
    omega_osc: f64,
    omega_cut: f64,
    points: usize,
) -> Result<Profile3D, String> {
    if omega_cut > MAX_OMEGA_CUT_3D {
        return Err(format!("the demo limits omega_cut to {MAX_OMEGA_CUT_3D:e} 1/s in 3D"));
    }
    let cfg = cavity_3d(l0, side, mass, omega_osc, omega_cut)?;
    let control = SumControl {
        rel_tol: 1e-4,
        ..SumControl::default()
    };
    let p = density_profile_3d(&cfg, &control, &grid(l0, points, 0.0)?).map_err(|e| e.to_string())?;
    Ok(Profile3D {
        x: p.grid,
        rho0: p.rho0,
        delta_rho: p.delta_rho,
        peak_location: p.meta.peak.location,
        casimir_constant: p.casimir_constant,
    })
}

#[wasm_bindgen(js_name = profile1d)]
pub fn profile1d(
    l0: f64,
    mass: f64,
    omega_osc: f64,
    omega_cut: f64,
    points: usize,
    window: f64,
) -> Result<Profile1D, JsError> {
    compute_profile_1d(l0, mass, omega_osc, omega_cut, points, window).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn spectrum(
    l0: f64,
    side: f64,
    mass: f64,
    omega_osc: f64,
    omega_cut: f64,
    max_axial: u32,
    m_y: i32,
    m_z: i32,
) -> Result<Vec<f64>, JsError> {
    compute_spectrum(l0, side, mass, omega_osc, omega_cut, max_axial, m_y, m_z).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = profile3d)]
pub fn profile3d(
    l0: f64,
    side: f64,
    mass: f64,
    omega_osc: f64,
    omega_cut: f64,
    points: usize,
) -> Result<Profile3D, JsError> {
    compute_profile_3d(l0, side, mass, omega_osc, omega_cut, points).map_err(|e| JsError::new(&e))
}
