use serde::{Deserialize, Serialize};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// The two constants every formula in the crate depends on.
///
/// Kept as explicit fields rather than set to one, so every output carries SI
/// units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            c: SPEED_OF_LIGHT,
        }
    }
}

impl PhysicalConstants {
    pub(crate) fn violations(&self, out: &mut Vec<String>) {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            out.push("hbar must be > 0".to_string());
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            out.push("c must be > 0".to_string());
        }
    }
}
