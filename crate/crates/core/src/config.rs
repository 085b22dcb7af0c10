//! Validated scenario configurations.
//!
//! Raw parameter blocks (`*Params`) are plain serde structs. The validated
//! forms ([`Cavity1D`], [`Cavity3D`]) can only be obtained through
//! validation and are immutable afterwards, so every downstream operation can
//! assume the invariants hold.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::modesum::{CutoffScheme, CutoffWeight};

/// Every violated invariant of a configuration, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self {
            violations: vec![msg.into()],
        }
    }

    fn from_list(violations: Vec<String>) -> Result<(), Self> {
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Self { violations })
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.violations.join("; "))
    }
}

impl std::error::Error for ConfigError {}

fn positive(name: &str, v: f64, out: &mut Vec<String>) {
    if !(v > 0.0 && v.is_finite()) {
        out.push(format!("{name} must be > 0"));
    }
}

/// Raw parameters of the one-dimensional cavity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct Cavity1DParams {
    /// Equilibrium cavity length, m.
    pub L0: f64,
    /// Mobile wall mass, kg.
    pub M: f64,
    /// Wall oscillation frequency, 1/s.
    pub omega_osc: f64,
    /// Ultraviolet cutoff frequency, 1/s.
    pub omega_cut: f64,
    #[serde(default)]
    pub constants: PhysicalConstants,
}

impl Cavity1DParams {
    /// Parameters of a typical MEMS mirror: 10 μm cavity, 10⁻¹¹ kg wall,
    /// ω_osc = 10⁵ s⁻¹, ω_cut = 10¹⁵ s⁻¹.
    pub fn mems() -> Self {
        Self {
            L0: 10e-6,
            M: 1e-11,
            omega_osc: 1e5,
            omega_cut: 1e15,
            constants: PhysicalConstants::default(),
        }
    }

    pub fn validate(self) -> Result<Cavity1D, ConfigError> {
        Cavity1D::new(self)
    }
}

/// A validated one-dimensional cavity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cavity1D {
    params: Cavity1DParams,
}

impl Cavity1D {
    pub fn new(params: Cavity1DParams) -> Result<Self, ConfigError> {
        let mut v = Vec::new();
        params.constants.violations(&mut v);
        positive("L0", params.L0, &mut v);
        positive("M", params.M, &mut v);
        positive("omega_osc", params.omega_osc, &mut v);
        positive("omega_cut", params.omega_cut, &mut v);
        if params.omega_cut <= params.omega_osc {
            v.push("omega_cut must be > omega_osc".to_string());
        }
        ConfigError::from_list(v)?;
        Ok(Self { params })
    }

    pub fn params(&self) -> Cavity1DParams {
        self.params
    }

    pub fn length(&self) -> f64 {
        self.params.L0
    }

    pub fn mass(&self) -> f64 {
        self.params.M
    }

    pub fn omega_osc(&self) -> f64 {
        self.params.omega_osc
    }

    pub fn omega_cut(&self) -> f64 {
        self.params.omega_cut
    }

    pub fn hbar(&self) -> f64 {
        self.params.constants.hbar
    }

    pub fn c(&self) -> f64 {
        self.params.constants.c
    }

    /// Same cavity with one parameter replaced, revalidated.
    pub fn with(&self, f: impl FnOnce(&mut Cavity1DParams)) -> Result<Self, ConfigError> {
        let mut p = self.params;
        f(&mut p);
        Self::new(p)
    }
}

/// Raw parameters of the three-dimensional cavity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct Cavity3DParams {
    /// Equilibrium length along x (the mobile wall's axis), m.
    pub L0: f64,
    /// Transverse periodic lengths, m. Must be equal.
    pub Ly: f64,
    pub Lz: f64,
    pub M: f64,
    pub omega_osc: f64,
    pub omega_cut: f64,
    #[serde(default)]
    pub constants: PhysicalConstants,
}

impl Cavity3DParams {
    /// The 10 μm × (50 μm)² cavity with a 10⁻¹¹ kg wall.
    pub fn mems() -> Self {
        Self {
            L0: 10e-6,
            Ly: 0.5e-4,
            Lz: 0.5e-4,
            M: 1e-11,
            omega_osc: 1e5,
            omega_cut: 1e15,
            constants: PhysicalConstants::default(),
        }
    }

    pub fn validate(self) -> Result<Cavity3D, ConfigError> {
        Cavity3D::new(self)
    }
}

/// A validated three-dimensional cavity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cavity3D {
    params: Cavity3DParams,
}

impl Cavity3D {
    pub fn new(params: Cavity3DParams) -> Result<Self, ConfigError> {
        let mut v = Vec::new();
        params.constants.violations(&mut v);
        positive("L0", params.L0, &mut v);
        positive("Ly", params.Ly, &mut v);
        positive("Lz", params.Lz, &mut v);
        positive("M", params.M, &mut v);
        positive("omega_osc", params.omega_osc, &mut v);
        positive("omega_cut", params.omega_cut, &mut v);
        if params.Ly != params.Lz {
            v.push("Ly must equal Lz".to_string());
        }
        if params.omega_cut <= params.omega_osc {
            v.push("omega_cut must be > omega_osc".to_string());
        }
        ConfigError::from_list(v)?;
        Ok(Self { params })
    }

    pub fn params(&self) -> Cavity3DParams {
        self.params
    }

    pub fn length(&self) -> f64 {
        self.params.L0
    }

    /// Transverse area `S = Ly·Lz`, m².
    pub fn area(&self) -> f64 {
        self.params.Ly * self.params.Lz
    }

    pub fn mass(&self) -> f64 {
        self.params.M
    }

    pub fn omega_osc(&self) -> f64 {
        self.params.omega_osc
    }

    pub fn omega_cut(&self) -> f64 {
        self.params.omega_cut
    }

    pub fn hbar(&self) -> f64 {
        self.params.constants.hbar
    }

    pub fn c(&self) -> f64 {
        self.params.constants.c
    }

    pub fn with(&self, f: impl FnOnce(&mut Cavity3DParams)) -> Result<Self, ConfigError> {
        let mut p = self.params;
        f(&mut p);
        Self::new(p)
    }
}

/// Truncation and regularization settings shared by every mode sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumControl {
    /// Hard upper bound on the axial (x) mode index.
    pub max_axial: usize,
    /// Hard upper bound on |n_y| and |n_z|.
    pub max_transverse: usize,
    /// Target relative tail tolerance.
    pub rel_tol: f64,
    pub cutoff_scheme: CutoffScheme,
}

impl Default for SumControl {
    fn default() -> Self {
        Self {
            max_axial: 20_000,
            max_transverse: 4_000,
            rel_tol: 1e-6,
            cutoff_scheme: CutoffScheme::Exponential,
        }
    }
}

impl SumControl {
    pub fn validate(self) -> Result<Self, ConfigError> {
        let mut v = Vec::new();
        if self.max_axial < 1 {
            v.push("max_axial must be >= 1".to_string());
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            v.push("rel_tol must lie in (0, 1)".to_string());
        }
        ConfigError::from_list(v)?;
        Ok(self)
    }

    /// Cutoff weight of this control's scheme at the given cutoff frequency.
    pub fn weight(&self, omega_cut: f64) -> CutoffWeight {
        CutoffWeight::new(self.cutoff_scheme, omega_cut)
    }
}
