//! Mode labels and their kinematics.
//!
//! The one-dimensional cavity has Dirichlet modes `k_j = jπ/L0`, `j ≥ 1`. The
//! three-dimensional cavity has Dirichlet modes along x and periodic modes
//! along y and z, labelled by `(n_x ≥ 1, n_y, n_z)`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::{Cavity1D, Cavity3D};
use crate::error::{Error, Result};

/// Mode label of the three-dimensional cavity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex3 {
    nx: u32,
    ny: i32,
    nz: i32,
}

impl ModeIndex3 {
    pub fn new(nx: u32, ny: i32, nz: i32) -> Result<Self> {
        if nx == 0 {
            return Err(Error::domain("n_x must be >= 1 (Dirichlet modes vanish for n_x = 0)"));
        }
        Ok(Self { nx, ny, nz })
    }

    /// A mode with no transverse momentum.
    pub fn axial(nx: u32) -> Result<Self> {
        Self::new(nx, 0, 0)
    }

    pub fn nx(&self) -> u32 {
        self.nx
    }

    pub fn ny(&self) -> i32 {
        self.ny
    }

    pub fn nz(&self) -> i32 {
        self.nz
    }

    /// `n_y² + n_z²`; the frequency depends on the transverse indices only
    /// through this.
    pub fn transverse_norm2(&self) -> u64 {
        let y = self.ny as i64;
        let z = self.nz as i64;
        (y * y + z * z) as u64
    }
}

impl fmt::Display for ModeIndex3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.nx, self.ny, self.nz)
    }
}

impl Cavity1D {
    /// Wavenumber `k_j = jπ/L0`, 1/m.
    pub fn wavenumber(&self, j: u32) -> Result<f64> {
        if j == 0 {
            return Err(Error::domain("mode index j must be >= 1"));
        }
        Ok(j as f64 * PI / self.length())
    }

    /// Mode frequency `ω_j = jπc/L0`, 1/s.
    pub fn omega(&self, j: u32) -> Result<f64> {
        Ok(self.c() * self.wavenumber(j)?)
    }

    /// Fundamental frequency `πc/L0`.
    pub fn omega_unit(&self) -> f64 {
        PI * self.c() / self.length()
    }
}

impl Cavity3D {
    /// Axial wavenumber unit `π/L0`.
    pub fn axial_unit(&self) -> f64 {
        PI / self.length()
    }

    /// Transverse wavenumber unit `2π/√S`.
    pub fn transverse_unit(&self) -> f64 {
        2.0 * PI / self.area().sqrt()
    }

    /// `q_x = n_xπ/L0` and `q_∥ = (2π/√S)(n_y, n_z)`, 1/m.
    pub fn wavenumbers(&self, n: ModeIndex3) -> (f64, [f64; 2]) {
        let t = self.transverse_unit();
        (
            n.nx() as f64 * self.axial_unit(),
            [n.ny() as f64 * t, n.nz() as f64 * t],
        )
    }

    /// Frequency from an axial index and `n_y² + n_z²`.
    pub fn omega_parts(&self, nx: u32, transverse_norm2: u64) -> f64 {
        if transverse_norm2 == 0 {
            // same rounding as the one-dimensional `c·k_j`
            return self.c() * (nx as f64 * PI / self.length());
        }
        let qx = nx as f64 * self.axial_unit();
        let t = self.transverse_unit();
        let q_par2 = transverse_norm2 as f64 * t * t;
        self.c() * (qx * qx + q_par2).sqrt()
    }

    /// `ω_n = c·√((n_xπ/L0)² + (2π)²(n_y² + n_z²)/S)`, 1/s.
    pub fn omega(&self, n: ModeIndex3) -> f64 {
        self.omega_parts(n.nx(), n.transverse_norm2())
    }
}
