//! Special functions: sinc, real and complex error functions, and the
//! closed form of the endpoint-singular Fresnel-type integral.

use super::NumericsError;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

/// `sin(x)/x` with the removable singularity handled by a Taylor series.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Real error function, accurate to ~1e-15.
///
/// Maclaurin series for |x| <= 2, Lentz continued fraction for the
/// complementary function beyond.
pub fn erf_real(x: f64) -> f64 {
    if x < 0.0 {
        return -erf_real(-x);
    }
    if x <= 2.0 {
        // erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 1usize;
        loop {
            term *= -x2 / n as f64;
            let contrib = term / (2 * n + 1) as f64;
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs().max(1e-300) || n > 80 {
                break;
            }
            n += 1;
        }
        (2.0 / PI.sqrt()) * sum
    } else if x >= 6.5 {
        1.0
    } else {
        1.0 - erfc_cf(x)
    }
}

/// erfc(x) for x >= 2 via the Laplace continued fraction (modified Lentz).
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    // erfc(x) sqrt(pi) e^{x^2} = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    for k in 0..200 {
        let (a, b) = if k == 0 { (1.0, x) } else { (k as f64 / 2.0, x) };
        d = b + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f * (-x * x).exp() / PI.sqrt()
}

/// Error function of a complex argument, relative accuracy ~1e-12 for
/// |Im z| up to a few tens.
///
/// Uses the trigonometric series expansion of erf(x+iy) about the real-axis
/// value erf(x), with all exponentials combined before evaluation so no
/// intermediate cosh/sinh overflows. Fails with [`NumericsError::DomainOverflow`]
/// when |erf(z)| itself exceeds f64 range (Im^2 - Re^2 beyond ~708); callers
/// must switch to a scaled asymptotic form there.
pub fn erf_complex(z: Complex64) -> Result<Complex64, NumericsError> {
    if z.im == 0.0 {
        return Ok(Complex64::new(erf_real(z.re), 0.0));
    }
    let (x, y) = (z.re.abs(), z.im.abs());
    if y * y - x * x > 708.0 {
        return Err(NumericsError::DomainOverflow { re: z.re, im: z.im });
    }
    // Reduce to the first quadrant with erf(-z) = -erf(z) and
    // erf(conj z) = conj(erf z).
    let mut w = erf_first_quadrant(x, y);
    if z.re < 0.0 {
        w = -w.conj();
    }
    if z.im < 0.0 {
        w = w.conj();
    }
    Ok(w)
}

fn erf_first_quadrant(x: f64, y: f64) -> Complex64 {
    let base_re = erf_real(x);
    let two_xy = 2.0 * x * y;
    let (sin2, cos2) = two_xy.sin_cos();
    let emx2 = (-x * x).exp();

    // First correction term; stable forms around x = 0 where the raw
    // expression has a 0/0.
    let (t_re, t_im) = if x < 1e-6 {
        let s = sinc(x * y);
        (
            emx2 * x * y * y / PI * s * s,
            emx2 * y / PI * sinc(two_xy),
        )
    } else {
        let sxy = (x * y).sin();
        (
            emx2 * sxy * sxy / (PI * x),
            emx2 * sin2 / (2.0 * PI * x),
        )
    };

    let n_max = (2.0 * y).ceil() as usize + 18;
    let mut s_re = 0.0;
    let mut s_im = 0.0;
    for n in 1..=n_max {
        let nn = n as f64;
        // Combine exp(-x^2) exp(-n^2/4) {cosh,sinh}(n y) in the exponent.
        let log_common = -x * x - 0.25 * nn * nn;
        let ep = (log_common + nn * y).exp();
        let em = (log_common - nn * y).exp();
        let ch = 0.5 * (ep + em);
        let sh = 0.5 * (ep - em);
        let denom = nn * nn + 4.0 * x * x;
        let f_n = 2.0 * x * log_common.exp() - 2.0 * x * ch * cos2 + nn * sh * sin2;
        let g_n = 2.0 * x * ch * sin2 + nn * sh * cos2;
        s_re += f_n / denom;
        s_im += g_n / denom;
    }
    Complex64::new(
        base_re + t_re + (2.0 / PI) * s_re,
        t_im + (2.0 / PI) * s_im,
    )
}

/// Complementary error function of a complex argument.
///
/// Switches to the divergent-series asymptotic form where `1 - erf` would
/// lose all significant digits.
pub fn erfc_complex(z: Complex64) -> Result<Complex64, NumericsError> {
    if z.re < 0.0 {
        return Ok(Complex64::new(2.0, 0.0) - erfc_complex(-z)?);
    }
    let zz = z * z;
    if z.norm() >= 8.0 || zz.re > 25.0 {
        // erfc(z) ~ e^{-z^2}/(z sqrt(pi)) * sum (-1)^k (2k-1)!!/(2 z^2)^k
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let inv2zz = 0.5 / zz;
        for k in 1..40 {
            let next = term * inv2zz * (2.0 * k as f64 - 1.0) * (-1.0);
            if next.norm() >= term.norm() {
                break;
            }
            term = next;
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        if zz.re > 708.0 {
            // erfc underflows to zero long before erf loses accuracy.
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok((-zz).exp() / (z * PI.sqrt()) * sum)
    } else {
        Ok(Complex64::new(1.0, 0.0) - erf_complex(z)?)
    }
}

/// Closed form of `int_0^X x^(-1/2) exp(i beta / x) dx` for `beta >= 0`.
///
/// The substitution `s = beta/x` turns the endpoint essential oscillation
/// into a rotated-contour Gaussian, giving
/// `2 sqrt(X) e^{i beta/X} + 2 i sqrt(pi beta) e^{i pi/4} erfc(sqrt(beta/X) e^{-i pi/4})`.
pub fn fresnel_tail(beta: f64, x_max: f64) -> Result<Complex64, NumericsError> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(NumericsError::InvalidInput("beta must be >= 0"));
    }
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(NumericsError::InvalidInput("X must be > 0"));
    }
    let sqrt_x = x_max.sqrt();
    if beta == 0.0 {
        return Ok(Complex64::new(2.0 * sqrt_x, 0.0));
    }
    let endpoint = 2.0 * sqrt_x * Complex64::new(0.0, beta / x_max).exp();
    let arg = (beta / x_max).sqrt() * Complex64::from_polar(1.0, -FRAC_PI_4);
    let tail = Complex64::new(0.0, 2.0 * (PI * beta).sqrt())
        * Complex64::from_polar(1.0, FRAC_PI_4)
        * erfc_complex(arg)?;
    Ok(endpoint + tail)
}

/// Direct numerical check of the sinc-convolution identity
/// `int sinc(x) sinc(x+y) dx = pi sinc(y)`.
///
/// The product decays only as 1/x^2, so the window is taken wide enough
/// (|x| <= 1e5) to push the truncated tail below 1e-5.
pub fn sinc_convolution_check(y: f64) -> Result<f64, NumericsError> {
    if !y.is_finite() {
        return Err(NumericsError::InvalidInput("y must be finite"));
    }
    let half = 1e5;
    let center = -0.5 * y;
    let q = super::integrate_1d(
        |x| sinc(x) * sinc(x + y),
        center - half,
        center + half,
        1e-7,
    )?;
    Ok(q.value)
}
