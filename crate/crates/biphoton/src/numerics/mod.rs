//! Self-contained numerical kernels: sampled curves and FWHM analysis,
//! adaptive quadrature, special functions, and the dense symmetric
//! eigenproblem behind the Schmidt decomposition.

mod eigen;
mod quad;
mod special;

pub use eigen::{svd_schmidt, symmetric_eigenvalues, SchmidtSpectrum};
pub use quad::{integrate_1d, integrate_1d_complex, Quadrature, MAX_INTERVALS};
pub use special::{erf_complex, erf_real, erfc_complex, fresnel_tail, sinc, sinc_convolution_check};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    /// The curve never falls below half of its maximum on the given side;
    /// the sampling window is too narrow and must be widened by the caller.
    #[error("no half-maximum crossing on the {side} side of the peak (window too narrow)")]
    NoHalfCrossing { side: &'static str },
    /// Adaptive quadrature exhausted its subdivision budget; the integrand is
    /// too singular or oscillatory and must be transformed first.
    #[error("quadrature did not converge within {intervals} intervals (error estimate {error:.3e})")]
    NonConvergence { intervals: usize, error: f64 },
    /// The unscaled error function would overflow f64; use asymptotics.
    #[error("erf({re} + {im}i) overflows f64")]
    DomainOverflow { re: f64, im: f64 },
    /// All matrix entries are (numerically) zero.
    #[error("kernel matrix is identically zero")]
    ZeroKernel,
    #[error("invalid curve: {0}")]
    InvalidCurve(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

/// Axis metadata carried by a sampled curve.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CurveMeta {
    pub x_label: String,
    pub x_unit: String,
    pub y_label: String,
}

impl CurveMeta {
    pub fn new(x_label: &str, x_unit: &str, y_label: &str) -> Self {
        Self {
            x_label: x_label.to_string(),
            x_unit: x_unit.to_string(),
            y_label: y_label.to_string(),
        }
    }
}

/// A sampled 1D real function: strictly increasing `xs`, non-negative `ys`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    pub meta: CurveMeta,
}

impl Curve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, meta: CurveMeta) -> Result<Self, NumericsError> {
        if xs.len() != ys.len() {
            return Err(NumericsError::InvalidCurve("xs and ys differ in length"));
        }
        if xs.len() < 3 {
            return Err(NumericsError::InvalidCurve("need at least 3 samples"));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(NumericsError::InvalidCurve("xs must be strictly increasing"));
        }
        if !ys.iter().all(|y| y.is_finite() && *y >= 0.0) {
            return Err(NumericsError::InvalidCurve("ys must be finite and non-negative"));
        }
        Ok(Self { xs, ys, meta })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Rescale so that the maximum sample equals 1.
    pub fn peak_normalized(mut self) -> Self {
        let peak = self.ys.iter().cloned().fold(0.0_f64, f64::max);
        if peak > 0.0 {
            for y in &mut self.ys {
                *y /= peak;
            }
        }
        self
    }
}

/// Full width at half maximum measured between the outermost crossings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FwhmResult {
    pub width: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub peak_x: f64,
    pub peak_y: f64,
}

/// Measure the FWHM of a sampled curve.
///
/// The crossings of `y = peak/2` are the OUTERMOST ones, so plateau-shaped
/// curves report the total plateau span. Each crossing is refined inside its
/// bracketing sample interval by bisection on the linear interpolant to a
/// relative x-tolerance of 1e-10.
pub fn fwhm(curve: &Curve) -> Result<FwhmResult, NumericsError> {
    let xs = curve.xs();
    let ys = curve.ys();
    let (peak_idx, peak_y) = ys
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |(bi, by), (i, &y)| {
            if y > by {
                (i, y)
            } else {
                (bi, by)
            }
        });
    if !(peak_y > 0.0) {
        return Err(NumericsError::InvalidCurve("curve has no positive maximum"));
    }
    let half = 0.5 * peak_y;

    // Outermost left crossing: first index (scanning from the left end)
    // where the curve rises through the half level before the peak.
    let left = (0..peak_idx)
        .find(|&i| ys[i] < half && ys[i + 1] >= half)
        .ok_or(NumericsError::NoHalfCrossing { side: "left" })?;
    // Outermost right crossing: last falling passage after the peak.
    let right = (peak_idx..xs.len() - 1)
        .rev()
        .find(|&i| ys[i] >= half && ys[i + 1] < half)
        .ok_or(NumericsError::NoHalfCrossing { side: "right" })?;

    let x_left = bisect_crossing(xs[left], ys[left], xs[left + 1], ys[left + 1], half);
    let x_right = bisect_crossing(xs[right], ys[right], xs[right + 1], ys[right + 1], half);
    Ok(FwhmResult {
        width: x_right - x_left,
        x_left,
        x_right,
        peak_x: xs[peak_idx],
        peak_y,
    })
}

/// Bisection on the linear interpolant of a bracketing sample interval.
fn bisect_crossing(xa: f64, ya: f64, xb: f64, yb: f64, level: f64) -> f64 {
    let (mut a, mut b) = (xa, xb);
    let f = |x: f64| ya + (yb - ya) * (x - xa) / (xb - xa) - level;
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    let tol = 1e-10 * (xa.abs().max(xb.abs()).max(f64::MIN_POSITIVE));
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa > 0.0) == (fm > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LN2: f64 = std::f64::consts::LN_2;

    fn curve_of(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Curve {
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        Curve::new(xs, ys, CurveMeta::default()).unwrap()
    }

    #[test]
    fn gaussian_fwhm_identity() {
        // exp(-x^2 tau^2 / (4 ln 2)) has FWHM 4 ln 2 / tau.
        let tau = 3.7e-2;
        let c = curve_of(
            |x| (-x * x * tau * tau / (4.0 * LN2)).exp(),
            -400.0,
            400.0,
            20001,
        );
        let w = fwhm(&c).unwrap();
        let expect = 4.0 * LN2 / tau;
        assert!((w.width - expect).abs() / expect < 1e-6);
        assert!(w.x_left < w.peak_x && w.peak_x < w.x_right);
    }

    #[test]
    fn sinc_squared_fwhm() {
        let c = curve_of(|x| sinc(x).powi(2), -8.0, 8.0, 30001);
        let w = fwhm(&c).unwrap();
        // Frozen: 2*u with sin(u)/u = 1/sqrt(2).
        assert!((w.width - 2.7831147565030203).abs() < 1e-4);
    }

    #[test]
    fn bimodal_outermost_crossings() {
        let g = |x: f64, mu: f64| (-(x - mu) * (x - mu) / 2.0).exp();
        let c = curve_of(|x| g(x, -3.0).max(g(x, 3.0)), -12.0, 12.0, 24001);
        let w = fwhm(&c).unwrap();
        // Brute-force scan oracle for the outermost half-max samples.
        let ys = c.ys();
        let xs = c.xs();
        let half = 0.5;
        let first = xs[ys.iter().position(|&y| y >= half).unwrap()];
        let last = xs[ys.len() - 1 - ys.iter().rev().position(|&y| y >= half).unwrap()];
        assert!(w.x_left <= first && first - w.x_left < 2e-3);
        assert!(w.x_right >= last && w.x_right - last < 2e-3);
        // Both lobes are spanned.
        assert!(w.x_left < -3.0 && w.x_right > 3.0);
        assert!((w.width - (6.0 + 2.0 * (2.0 * LN2).sqrt())).abs() < 1e-3);
    }

    #[test]
    fn narrow_window_reports_missing_side() {
        let c = curve_of(|x| (-x * x).exp(), -0.2, 3.0, 101);
        match fwhm(&c) {
            Err(NumericsError::NoHalfCrossing { side }) => assert_eq!(side, "left"),
            other => panic!("expected NoHalfCrossing, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn gaussian_fwhm_over_six_decades(log_sigma in -3.0f64..3.0) {
            let sigma = 10f64.powf(log_sigma);
            let c = curve_of(
                |x| (-x * x / (2.0 * sigma * sigma)).exp(),
                -8.0 * sigma,
                8.0 * sigma,
                8001,
            );
            let w = fwhm(&c).unwrap();
            let expect = 2.0 * sigma * (2.0 * LN2).sqrt();
            prop_assert!((w.width - expect).abs() / expect < 1e-6);
        }
    }
}
