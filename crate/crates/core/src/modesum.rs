//! Regularized mode-sum engine.
//!
//! Every first-order observable in this crate has the shape
//!
//! ```text
//! Σ_j w_j · (Σ_l a(j,l) u_l) · (Σ_r a'(j,r) v_r)
//! ```
//!
//! where `j` is a mode shared by both amplitudes of a `D·D` product and the
//! basis values `u_l`, `v_r` depend on the evaluation point. [`BilinearSum`]
//! evaluates it in `O(|J|·|L|)` per point by forming the two partial sums for
//! each `j` first. All accumulation is compensated and runs in ascending index
//! order, so results are bit-reproducible regardless of how callers
//! parallelize over evaluation points.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::SumControl;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffScheme {
    /// `exp(-ω/ω_cut)`.
    Exponential,
    /// `1` for `ω ≤ ω_cut`, `0` above.
    Sharp,
}

/// Ultraviolet suppression factor applied to every mode in a sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffWeight {
    pub scheme: CutoffScheme,
    pub omega_cut: f64,
}

impl CutoffWeight {
    pub fn new(scheme: CutoffScheme, omega_cut: f64) -> Self {
        Self { scheme, omega_cut }
    }

    /// No suppression at all: a sharp step at infinity.
    pub fn none() -> Self {
        Self::new(CutoffScheme::Sharp, f64::INFINITY)
    }

    pub fn weight(&self, omega: f64) -> Result<f64> {
        if !(omega >= 0.0) {
            return Err(Error::domain(format!("cutoff weight needs omega >= 0, got {omega:e}")));
        }
        Ok(self.factor(omega))
    }

    /// [`weight`](Self::weight) without the domain check.
    #[inline]
    pub fn factor(&self, omega: f64) -> f64 {
        match self.scheme {
            CutoffScheme::Exponential => (-omega / self.omega_cut).exp(),
            CutoffScheme::Sharp => {
                if omega <= self.omega_cut {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Ratio between successive terms of a series whose index steps the
    /// frequency by `step`, used for tail bounds. A sharp cutoff has no tail
    /// unless the truncation was clamped below it, in which case the tail is
    /// unbounded.
    pub fn decay_ratio(&self, step: f64, clamped: bool) -> f64 {
        match self.scheme {
            CutoffScheme::Exponential => (-step / self.omega_cut).exp(),
            CutoffScheme::Sharp => {
                if clamped {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Knuth two-sum accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline(always)]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        let bp = t - self.sum;
        self.comp += (self.sum - (t - bp)) + (v - bp);
        self.sum = t;
    }

    #[inline(always)]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of `terms` in iteration order. Empty input gives 0.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// Outcome of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumResult {
    pub value: f64,
    /// Estimated relative size of the discarded tail, measured against
    /// `magnitude`.
    pub tail_estimate: f64,
    pub terms_used: usize,
    /// `Σ |t_j|` over the outer terms.
    pub magnitude: f64,
}

impl SumResult {
    pub(crate) fn from_terms(value: f64, magnitude: f64, last: f64, ratio: f64, terms_used: usize) -> Self {
        Self {
            value,
            tail_estimate: tail_bound(last, ratio, magnitude),
            terms_used,
            magnitude,
        }
    }

    /// Fail with [`Error::NonConvergence`] when the tail exceeds `tol`.
    pub fn check(self, what: &'static str, tol: f64) -> Result<Self> {
        if self.tail_estimate > tol {
            Err(Error::NonConvergence {
                what,
                tail: self.tail_estimate,
                tol,
            })
        } else {
            Ok(self)
        }
    }
}

/// Geometric bound `|last|·r/(1-r)` relative to `magnitude`.
pub(crate) fn tail_bound(last: f64, ratio: f64, magnitude: f64) -> f64 {
    let last = last.abs();
    if last == 0.0 {
        return 0.0;
    }
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    if magnitude == 0.0 {
        return f64::INFINITY;
    }
    last * ratio / (1.0 - ratio) / magnitude
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }
}

/// Coefficients `a(j,l)` of one side of a [`BilinearSum`], stored as a view
/// of a shared matrix so both sides of a `D·D` product can use one copy.
#[derive(Clone, Debug)]
pub enum Coefficients {
    /// `a(j,l) = M[j][l]`.
    Rows(Arc<Matrix>),
    /// `a(j,l) = M[l][j]`.
    Columns(Arc<Matrix>),
}

impl Coefficients {
    pub fn rows(m: Matrix) -> Self {
        Coefficients::Rows(Arc::new(m))
    }

    /// Number of outer indices `j`.
    pub fn outer_len(&self) -> usize {
        match self {
            Coefficients::Rows(m) => m.rows(),
            Coefficients::Columns(m) => m.cols(),
        }
    }

    /// Number of inner indices `l`.
    pub fn inner_len(&self) -> usize {
        match self {
            Coefficients::Rows(m) => m.cols(),
            Coefficients::Columns(m) => m.rows(),
        }
    }

    /// `out[k][j] = Σ_l a(j,l) bases[k][l]`, accumulated in ascending `l`.
    fn partials(&self, bases: &[&[f64]], out: &mut [Vec<f64>]) {
        let nj = self.outer_len();
        match self {
            Coefficients::Rows(m) => {
                for (k, o) in out.iter_mut().enumerate() {
                    o.clear();
                    let b = bases[k];
                    o.extend((0..nj).map(|j| {
                        let mut acc = CompensatedSum::new();
                        for (a, u) in m.row(j).iter().zip(b) {
                            acc.add(a * u);
                        }
                        acc.value()
                    }));
                }
            }
            Coefficients::Columns(m) => {
                // Walk the stored rows (inner index l) once, updating every
                // outer accumulator; each out[k][j] still sums in ascending l.
                for (k, o) in out.iter_mut().enumerate() {
                    let b = bases[k];
                    let mut sum = vec![0.0; nj];
                    let mut comp = vec![0.0; nj];
                    for l in 0..m.rows() {
                        let z = b[l];
                        if z == 0.0 {
                            continue;
                        }
                        for ((s, c), a) in sum.iter_mut().zip(comp.iter_mut()).zip(m.row(l)) {
                            let v = a * z;
                            let t = *s + v;
                            let bp = t - *s;
                            *c += (*s - (t - bp)) + (v - bp);
                            *s = t;
                        }
                    }
                    o.clear();
                    o.extend(sum.iter().zip(&comp).map(|(s, c)| s + c));
                }
            }
        }
    }
}

/// `Σ_j w_j · (Σ_l a(j,l) u_l) · (Σ_r a'(j,r) v_r)` with the coefficient
/// matrices stored once and the basis values supplied per evaluation point.
#[derive(Clone, Debug)]
pub struct BilinearSum {
    outer: Vec<f64>,
    left: Coefficients,
    right: Option<Coefficients>,
    decay: f64,
}

impl BilinearSum {
    /// Symmetric form, `a' = a`.
    pub fn symmetric(outer: Vec<f64>, coefficients: Matrix) -> Result<Self> {
        Self::new(outer, Coefficients::rows(coefficients), None)
    }

    /// `right = None` means `a' = a`.
    pub fn new(outer: Vec<f64>, left: Coefficients, right: Option<Coefficients>) -> Result<Self> {
        if outer.is_empty() || left.inner_len() == 0 {
            return Err(Error::domain("bilinear sum needs non-empty index ranges"));
        }
        if left.outer_len() != outer.len() {
            return Err(Error::domain("left coefficients must have one row per outer index"));
        }
        if let Some(r) = &right {
            if r.outer_len() != outer.len() || r.inner_len() == 0 {
                return Err(Error::domain("right coefficients must have one row per outer index"));
            }
        }
        Ok(Self {
            outer,
            left,
            right,
            decay: 0.0,
        })
    }

    /// Ratio between successive outer terms beyond the truncation, used for
    /// the tail estimate.
    pub fn with_decay(mut self, ratio: f64) -> Self {
        self.decay = ratio;
        self
    }

    pub fn outer_len(&self) -> usize {
        self.outer.len()
    }

    pub fn left_len(&self) -> usize {
        self.left.inner_len()
    }

    pub fn right_len(&self) -> usize {
        self.right.as_ref().unwrap_or(&self.left).inner_len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.right.is_none()
    }

    /// Evaluate at one point given the basis values there.
    pub fn eval(&self, u: &[f64], v: &[f64]) -> Result<SumResult> {
        Ok(self.eval_many(&[(u, v)])?[0])
    }

    /// Evaluate several basis pairs sharing the same coefficients, reading
    /// each coefficient matrix once.
    pub fn eval_many(&self, pairs: &[(&[f64], &[f64])]) -> Result<Vec<SumResult>> {
        for (u, v) in pairs {
            if u.len() != self.left_len() || v.len() != self.right_len() {
                return Err(Error::domain("basis length does not match coefficient shape"));
            }
        }
        let k = pairs.len();
        let mut left = vec![Vec::new(); k];
        let lefts: Vec<&[f64]> = pairs.iter().map(|p| p.0).collect();
        self.left.partials(&lefts, &mut left);

        // The symmetric form with identical bases needs only one side.
        let reuse = self.right.is_none() && pairs.iter().all(|(u, v)| std::ptr::eq(*u, *v));
        let mut right = Vec::new();
        if !reuse {
            right = vec![Vec::new(); k];
            let rights: Vec<&[f64]> = pairs.iter().map(|p| p.1).collect();
            self.right.as_ref().unwrap_or(&self.left).partials(&rights, &mut right);
        }

        Ok((0..k)
            .map(|i| {
                let p = &left[i];
                let q = if reuse { &left[i] } else { &right[i] };
                let mut total = CompensatedSum::new();
                let mut magnitude = CompensatedSum::new();
                let mut last = 0.0;
                for ((w, a), b) in self.outer.iter().zip(p).zip(q) {
                    let t = w * a * b;
                    total.add(t);
                    magnitude.add(t.abs());
                    last = t;
                }
                SumResult::from_terms(total.value(), magnitude.value(), last, self.decay, self.outer.len())
            })
            .collect())
    }
}

/// Extra decades of cutoff suppression the evaluators demand beyond
/// `rel_tol` when choosing a truncation. Summands grow polynomially with the
/// mode index, so stopping exactly where the weight reaches `rel_tol` leaves a
/// tail of that same order.
pub const TRUNCATION_MARGIN: f64 = 1e-2;

/// Control used by the evaluators for truncation: `rel_tol` tightened by
/// [`TRUNCATION_MARGIN`]. Tail checks still use the caller's tolerance.
pub fn evaluation_control(control: &SumControl) -> SumControl {
    SumControl {
        rel_tol: control.rel_tol * TRUNCATION_MARGIN,
        ..*control
    }
}

/// Which hard bound of [`SumControl`] a truncation is clamped to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Index starts at 1, clamped to `max_axial`.
    Axial,
    /// Index starts at 0, clamped to `max_transverse`.
    Transverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    /// Largest retained index (inclusive).
    pub bound: usize,
    /// The cutoff asked for more terms than the control allows.
    pub clamped: bool,
}

/// Truncation bound for a series along one axis.
///
/// For the exponential scheme this is the smallest index whose weight falls
/// below `rel_tol`. For the sharp scheme it is the largest index still inside
/// the cutoff, since every later term is exactly zero. `omega_of_index` must
/// be non-decreasing.
pub fn truncation_for(
    control: &SumControl,
    axis: Axis,
    weight: &CutoffWeight,
    omega_of_index: impl Fn(usize) -> f64,
) -> Truncation {
    let (start, max) = match axis {
        Axis::Axial => (1, control.max_axial.max(1)),
        Axis::Transverse => (0, control.max_transverse),
    };
    if control.rel_tol >= 1.0 {
        return Truncation {
            bound: start.max(1).min(max.max(start)),
            clamped: false,
        };
    }
    match weight.scheme {
        CutoffScheme::Exponential => {
            for i in start..=max {
                if weight.factor(omega_of_index(i)) < control.rel_tol {
                    return Truncation { bound: i, clamped: false };
                }
            }
            Truncation { bound: max, clamped: true }
        }
        CutoffScheme::Sharp => {
            for i in start..=max + 1 {
                if omega_of_index(i) > weight.omega_cut {
                    return Truncation {
                        bound: if i > start { i - 1 } else { start },
                        clamped: false,
                    };
                }
            }
            Truncation { bound: max, clamped: true }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn compensation_keeps_small_terms() {
        assert_eq!(compensated_sum([1.0, -1.0, 1e-16]), 1e-16);
        assert_eq!(compensated_sum([1e16, 1.0, -1e16]), 1.0);
        assert_eq!(compensated_sum(std::iter::empty()), 0.0);
        let s = compensated_sum(std::iter::repeat(0.1).take(1_000_000));
        assert!(((s - 1e5) / 1e5).abs() < 1e-9);
        // naive accumulation drifts visibly on the same input
        let naive: f64 = std::iter::repeat(0.1).take(1_000_000).sum();
        assert!((s - 1e5).abs() < (naive - 1e5).abs());
    }

    #[test]
    fn weights() {
        let e = CutoffWeight::new(CutoffScheme::Exponential, 1e15);
        let s = CutoffWeight::new(CutoffScheme::Sharp, 1e15);
        assert!((e.weight(1e15).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        assert!((e.weight(1e15).unwrap() - 0.367879).abs() < 1e-6);
        assert_eq!(e.weight(0.0).unwrap(), 1.0);
        assert_eq!(s.weight(0.0).unwrap(), 1.0);
        assert_eq!(s.weight(1.01e15).unwrap(), 0.0);
        assert!(e.weight(-1.0).is_err());
        assert!(s.weight(f64::NAN).is_err());
        assert_eq!(CutoffWeight::none().weight(1e300).unwrap(), 1.0);
    }

    #[test]
    fn identity_coefficients() {
        let n = 5;
        let a = Matrix::from_fn(n, n, |j, l| if j == l { 1.0 } else { 0.0 });
        let s = BilinearSum::symmetric(vec![1.0; n], a).unwrap();
        let ones = vec![1.0; n];
        assert_eq!(s.eval(&ones, &ones).unwrap().value, 5.0);
    }

    #[test]
    fn shape_errors() {
        assert!(BilinearSum::symmetric(vec![], Matrix::from_fn(0, 3, |_, _| 0.0)).is_err());
        let s = BilinearSum::symmetric(vec![1.0; 2], Matrix::from_fn(2, 3, |_, _| 1.0)).unwrap();
        assert!(s.eval(&[1.0; 2], &[1.0; 3]).is_err());
    }

    fn fig1_control(scheme: CutoffScheme, rel_tol: f64) -> (SumControl, CutoffWeight) {
        let c = SumControl {
            rel_tol,
            cutoff_scheme: scheme,
            ..SumControl::default()
        };
        (c, c.weight(1e15))
    }

    fn omega_fig1(j: usize) -> f64 {
        j as f64 * PI * crate::constants::SPEED_OF_LIGHT / 1e-5
    }

    #[test]
    fn truncation_bounds() {
        let (c, w) = fig1_control(CutoffScheme::Exponential, 1e-6);
        // ⌈ω_cut L0 ln(10⁶)/(πc)⌉ = ⌈146.69⌉
        assert_eq!(truncation_for(&c, Axis::Axial, &w, omega_fig1), Truncation { bound: 147, clamped: false });
        let (c, w) = fig1_control(CutoffScheme::Sharp, 1e-6);
        // ⌊ω_cut L0/(πc)⌋ = ⌊10.62⌋
        assert_eq!(truncation_for(&c, Axis::Axial, &w, omega_fig1).bound, 10);
        let (c, w) = fig1_control(CutoffScheme::Exponential, 1.0);
        assert_eq!(truncation_for(&c, Axis::Axial, &w, omega_fig1).bound, 1);
        let (mut c, w) = fig1_control(CutoffScheme::Exponential, 1e-6);
        c.max_axial = 20;
        assert_eq!(truncation_for(&c, Axis::Axial, &w, omega_fig1), Truncation { bound: 20, clamped: true });
        let t = truncation_for(&c, Axis::Axial, &CutoffWeight::none(), omega_fig1);
        assert_eq!(t, Truncation { bound: 20, clamped: true });
    }

    #[test]
    fn retained_terms_grow_with_cutoff() {
        let c = SumControl::default();
        for scheme in [CutoffScheme::Exponential, CutoffScheme::Sharp] {
            let mut prev = 0;
            for k in 1..40 {
                let w = CutoffWeight::new(scheme, k as f64 * 2.5e14);
                let b = truncation_for(&c, Axis::Axial, &w, omega_fig1).bound;
                assert!(b >= prev, "{scheme:?}");
                prev = b;
            }
        }
    }

    #[test]
    fn tail_bound_cases() {
        assert_eq!(tail_bound(0.0, 1.0, 0.0), 0.0);
        assert_eq!(tail_bound(1.0, 1.0, 10.0), f64::INFINITY);
        assert!((tail_bound(1.0, 0.5, 10.0) - 0.1).abs() < 1e-15);
    }
}
