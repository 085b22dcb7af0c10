//! Trigonometric functions of `π·t`.
//!
//! Mode functions `sin(jπx/L0)` are evaluated as `sin_pi(j·x/L0)`, which
//! reduces the argument exactly and returns exact zeros at the walls.

use std::f64::consts::PI;

#[inline]
fn reduce(t: f64) -> (i64, f64) {
    let n = (2.0 * t).round();
    // |f| <= 1/4, exact because n/2 is representable and t - n/2 is Sterbenz-exact
    // for the magnitudes that arise here.
    let f = t - 0.5 * n;
    ((n as i64).rem_euclid(4), f)
}

/// `sin(π t)`, exactly zero at integer `t`.
#[inline]
pub fn sin_pi(t: f64) -> f64 {
    let (q, f) = reduce(t);
    let a = PI * f;
    match q {
        0 => a.sin(),
        1 => a.cos(),
        2 => -a.sin(),
        _ => -a.cos(),
    }
}

/// `cos(π t)`, exactly zero at half-integer `t`.
#[inline]
pub fn cos_pi(t: f64) -> f64 {
    let (q, f) = reduce(t);
    let a = PI * f;
    match q {
        0 => a.cos(),
        1 => -a.sin(),
        2 => -a.cos(),
        _ => a.sin(),
    }
}
