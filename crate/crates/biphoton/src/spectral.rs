//! Joint spectral amplitude and the spectral observables derived from it:
//! phase mismatch, phase-matching curve, coincidence / single-particle / pump
//! spectra with their widths, and the entanglement parameter `R`.
//!
//! Detunings `nu` are angular-frequency offsets from the degenerate central
//! frequency `omega0/2`. Spectra can be sampled against detuning or against
//! wavelength; wavelength curves are sampled directly on a uniform lambda
//! grid (`lambda = 2 pi c / omega`, no Jacobian reweighting) and widths are
//! measured on whichever axis the curve lives on.

use crate::numerics::{self, fwhm, integrate_1d, sinc, Curve, CurveMeta, FwhmResult, NumericsError};
use crate::params::{derive, DerivedConstants, ParamsError, PhysicalConfig, SPEED_OF_LIGHT};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const LN2: f64 = std::f64::consts::LN_2;
const PI: f64 = std::f64::consts::PI;

/// FWHM of sinc^2 (full width of the central lobe at half maximum).
pub const SINC_SQ_FWHM: f64 = 2.7831147565030203;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    /// The phase-matching quadratic has no real root on the physical branch.
    #[error("detuning nu2 = {nu2:.6e} rad/s is outside the phase-matched branch")]
    OutOfBranch { nu2: f64 },
    /// The short-pulse analytic single-particle form was requested beyond its
    /// soft validity boundary eta <= 0.3.
    #[error("analytic short-pulse form requested at eta = {eta:.3} (> 0.3)")]
    AnalyticOutOfRegime { eta: f64 },
}

/// One uniform detuning axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetuningAxis {
    pub center: f64,
    pub half_width: f64,
    pub points: usize,
}

impl DetuningAxis {
    pub fn new(center: f64, half_width: f64, points: usize) -> Result<Self, NumericsError> {
        if points < 16 {
            return Err(NumericsError::InvalidInput("axis needs at least 16 points"));
        }
        if !(half_width > 0.0) {
            return Err(NumericsError::InvalidInput("half-width must be positive"));
        }
        Ok(Self {
            center,
            half_width,
            points,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        let span = 2.0 * self.half_width;
        self.center - self.half_width + span * i as f64 / (self.points - 1) as f64
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

/// Uniform grid over the two detunings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub nu1: DetuningAxis,
    pub nu2: DetuningAxis,
}

/// Complex joint spectral amplitude sampled on a [`SpectralGrid`]
/// (unnormalized; all overall constants are dropped).
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeGrid {
    pub grid: SpectralGrid,
    /// Row-major `nu1.points x nu2.points`.
    pub values: Vec<Complex64>,
}

impl AmplitudeGrid {
    pub fn sample(cfg: &PhysicalConfig, grid: SpectralGrid) -> Result<Self, SpectralError> {
        let d = derive(cfg)?;
        let nu1s = grid.nu1.values();
        let nu2s = grid.nu2.values();
        let values: Vec<Complex64> = nu1s
            .par_iter()
            .flat_map_iter(|&nu1| {
                let cfg = *cfg;
                nu2s.iter()
                    .map(move |&nu2| jsa_with(&cfg, &d, nu1, nu2))
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(Self { grid, values })
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.nu2.points + j]
    }
}

/// Spectral and Schmidt-number summary of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub eta: f64,
    pub r_short: f64,
    pub r_long: f64,
    pub r_interp: f64,
    pub k_short: f64,
    pub k_long: f64,
    pub k_interp: f64,
    /// Discretized-SVD Schmidt number, present when the expensive numeric
    /// route was requested.
    pub k_numeric: Option<f64>,
    pub kr_ratio: f64,
}

/// Longitudinal phase mismatch `Delta(nu1, nu2)` [1/m] in the quadratic
/// expansion around degeneracy.
pub fn mismatch(cfg: &PhysicalConfig, omega0: f64, nu1: f64, nu2: f64) -> f64 {
    let diff = nu1 - nu2;
    (cfg.walk_off * (nu1 + nu2) - cfg.dispersion * diff * diff / omega0) / SPEED_OF_LIGHT
}

/// Exact phase-matched root `nu1(nu2)` of `Delta = 0` on the physical branch.
pub fn phase_match_nu1(cfg: &PhysicalConfig, omega0: f64, nu2: f64) -> Result<f64, SpectralError> {
    let ratio = cfg.walk_off * omega0 / (4.0 * cfg.dispersion);
    let radicand = ratio * ratio + 2.0 * ratio * nu2 - nu2 * nu2;
    if radicand < 0.0 {
        return Err(SpectralError::OutOfBranch { nu2 });
    }
    Ok(ratio - radicand.sqrt())
}

/// Small-detuning approximation of the phase-matching curve,
/// `nu1 = -nu2 + 4 B nu2^2 / (A omega0)`.
pub fn phase_match_nu1_approx(cfg: &PhysicalConfig, omega0: f64, nu2: f64) -> f64 {
    -nu2 + 4.0 * cfg.dispersion * nu2 * nu2 / (cfg.walk_off * omega0)
}

fn jsa_with(cfg: &PhysicalConfig, d: &DerivedConstants, nu1: f64, nu2: f64) -> Complex64 {
    let tau = cfg.pump_duration;
    let sum = nu1 + nu2;
    let pump = (-(sum * sum) * tau * tau / (8.0 * LN2)).exp();
    let phase_match = sinc(0.5 * cfg.crystal_length * mismatch(cfg, d.omega0, nu1, nu2));
    Complex64::new(pump * phase_match, 0.0)
}

/// Joint spectral amplitude at one detuning pair (real-valued by
/// construction, typed complex for uniformity).
pub fn jsa(cfg: &PhysicalConfig, nu1: f64, nu2: f64) -> Result<Complex64, SpectralError> {
    let d = derive(cfg)?;
    Ok(jsa_with(cfg, &d, nu1, nu2))
}

/// Which axis a spectrum is sampled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumAxis {
    /// Detuning `nu1` [rad/s].
    Detuning,
    /// Wavelength `lambda1` [m].
    Wavelength,
}

/// A peak-normalized curve together with its measured FWHM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredCurve {
    pub curve: Curve,
    pub fwhm: FwhmResult,
}

/// Convert a detuning of photon 1 to its wavelength.
pub fn wavelength_of_detuning(omega0: f64, nu: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / (0.5 * omega0 + nu)
}

/// Convert a wavelength to the detuning from omega0/2.
pub fn detuning_of_wavelength(omega0: f64, lambda: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / lambda - 0.5 * omega0
}

/// Sinc-limited coincidence width in detuning, `2.78 * 2c / (A L)`.
pub fn coincidence_width_analytic(cfg: &PhysicalConfig) -> f64 {
    SINC_SQ_FWHM * 2.0 * SPEED_OF_LIGHT / (cfg.walk_off * cfg.crystal_length)
}

/// Short-pulse analytic single-particle width `sqrt(2 A ln2 omega0 / (B tau))`.
pub fn single_width_short_analytic(cfg: &PhysicalConfig, omega0: f64) -> f64 {
    (2.0 * cfg.walk_off * LN2 * omega0 / (cfg.dispersion * cfg.pump_duration)).sqrt()
}

/// Long-pulse analytic single-particle width `sqrt(2.78 c omega0 / (L B))`.
pub fn single_width_long_analytic(cfg: &PhysicalConfig, omega0: f64) -> f64 {
    (SINC_SQ_FWHM * SPEED_OF_LIGHT * omega0 / (cfg.crystal_length * cfg.dispersion)).sqrt()
}

/// Pump intensity width in detuning, `4 ln2 / tau`.
pub fn pump_width_analytic(cfg: &PhysicalConfig) -> f64 {
    4.0 * LN2 / cfg.pump_duration
}

fn sample_peak_normalized(
    xs: Vec<f64>,
    f: impl Fn(f64) -> Result<f64, NumericsError> + Sync,
    meta: CurveMeta,
) -> Result<Curve, NumericsError> {
    let ys: Result<Vec<f64>, NumericsError> = xs.par_iter().map(|&x| f(x)).collect();
    Ok(Curve::new(xs, ys?, meta)?.peak_normalized())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Measure a curve, widening the window (up to 3 doublings) when the half-max
/// crossings fall outside it.
fn measure_with_widening(
    center: f64,
    mut half_width: f64,
    n: usize,
    meta: CurveMeta,
    f: impl Fn(f64) -> Result<f64, NumericsError> + Sync + Copy,
    lo_clamp: Option<f64>,
) -> Result<MeasuredCurve, SpectralError> {
    let mut attempt = 0;
    loop {
        let mut lo = center - half_width;
        let hi = center + half_width;
        if let Some(clamp) = lo_clamp {
            lo = lo.max(clamp);
        }
        let curve = sample_peak_normalized(linspace(lo, hi, n), f, meta.clone())?;
        match fwhm(&curve) {
            Ok(w) => return Ok(MeasuredCurve { curve, fwhm: w }),
            Err(NumericsError::NoHalfCrossing { .. }) if attempt < 3 => {
                half_width *= 2.0;
                attempt += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
}

/// Coincidence spectrum: `|Psi(nu1, nu2)|^2` at fixed `nu2`, peak-normalized.
///
/// The default window spans +-6 sinc widths around the phase-matched `nu1`
/// and widens automatically if the half-max crossings are not contained.
pub fn coincidence_spectrum(
    cfg: &PhysicalConfig,
    nu2: f64,
    axis: SpectrumAxis,
    window: Option<f64>,
    n: usize,
) -> Result<MeasuredCurve, SpectralError> {
    let d = derive(cfg)?;
    let sinc_width = coincidence_width_analytic(cfg);
    let pump_width = pump_width_analytic(cfg);
    // The slice is limited by the narrower of the two factors; center there.
    let center_nu = if sinc_width <= pump_width {
        phase_match_nu1(cfg, d.omega0, nu2)?
    } else {
        -nu2
    };
    let half = window.unwrap_or(6.0 * sinc_width.min(pump_width));
    let cfg_c = *cfg;
    let value = move |nu1: f64| Ok(jsa_with(&cfg_c, &d, nu1, nu2).norm_sqr());
    match axis {
        SpectrumAxis::Detuning => measure_with_widening(
            center_nu,
            half,
            n,
            CurveMeta::new("nu1", "rad/s", "coincidence probability (peak = 1)"),
            value,
            None,
        ),
        SpectrumAxis::Wavelength => {
            let lam = move |l: f64| value(detuning_of_wavelength(d.omega0, l));
            let center_l = wavelength_of_detuning(d.omega0, center_nu);
            let half_l = half * lam_slope(d.omega0, center_nu);
            measure_with_widening(
                center_l,
                half_l,
                n,
                CurveMeta::new("lambda1", "m", "coincidence probability (peak = 1)"),
                lam,
                Some(1e-9),
            )
        }
    }
}

fn lam_slope(omega0: f64, nu: f64) -> f64 {
    let omega = 0.5 * omega0 + nu;
    2.0 * PI * SPEED_OF_LIGHT / (omega * omega)
}

/// Evaluation route for the single-particle spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingleParticleMethod {
    /// Numeric integration of `|Psi|^2` over `nu2` (valid everywhere).
    Numeric,
    /// Short-pulse closed form (delta-sheet approximation of the sinc).
    AnalyticShort,
    /// Long-pulse closed form `sinc^2(2 L B nu1^2 / (c omega0))`.
    AnalyticLong,
}

fn single_particle_density(
    cfg: &PhysicalConfig,
    d: &DerivedConstants,
    method: SingleParticleMethod,
    nu1: f64,
    tol: f64,
) -> f64 {
    match method {
        SingleParticleMethod::Numeric => {
            // Support in nu2 sits around the pump sheet nu2 = -nu1 with the
            // sinc structure on top; cover both scales generously.
            let pump_w = pump_width_analytic(cfg);
            let sinc_w = coincidence_width_analytic(cfg);
            let half = 8.0 * pump_w.max(sinc_w);
            let center = -nu1;
            let cfg_c = *cfg;
            let dd = *d;
            integrate_1d(
                move |nu2| jsa_with(&cfg_c, &dd, nu1, nu2).norm_sqr(),
                center - half,
                center + half,
                tol,
            )
            .map(|q| q.value)
            .unwrap_or(f64::NAN)
        }
        SingleParticleMethod::AnalyticShort => {
            let a = cfg.walk_off;
            let b = cfg.dispersion;
            let omega0 = d.omega0;
            let radicand = a * a * omega0 * omega0 + 8.0 * a * b * omega0 * nu1;
            if radicand <= 0.0 {
                return 0.0;
            }
            let nu_sum = (a * omega0 + 4.0 * b * nu1 - radicand.sqrt()) / (2.0 * b);
            let tau = cfg.pump_duration;
            (-(nu_sum * nu_sum) * tau * tau / (4.0 * LN2)).exp() / radicand.sqrt()
        }
        SingleParticleMethod::AnalyticLong => {
            let arg = 2.0 * cfg.crystal_length * cfg.dispersion * nu1 * nu1
                / (SPEED_OF_LIGHT * d.omega0);
            let s = sinc(arg);
            s * s
        }
    }
}

/// Single-particle spectrum of photon 1, peak-normalized.
pub fn single_particle_spectrum(
    cfg: &PhysicalConfig,
    method: SingleParticleMethod,
    axis: SpectrumAxis,
    window: Option<f64>,
    n: usize,
    tol: f64,
) -> Result<MeasuredCurve, SpectralError> {
    let d = derive(cfg)?;
    if method == SingleParticleMethod::AnalyticShort && d.eta > 0.3 {
        return Err(SpectralError::AnalyticOutOfRegime { eta: d.eta });
    }
    let width_s = single_width_short_analytic(cfg, d.omega0);
    let width_l = single_width_long_analytic(cfg, d.omega0);
    let analytic_width = if d.eta <= 1.0 { width_s } else { width_l };
    let half = window.unwrap_or(4.0 * analytic_width);
    let cfg_c = *cfg;
    let f = move |nu1: f64| single_particle_density(&cfg_c, &d, method, nu1, tol);
    match axis {
        SpectrumAxis::Detuning => measure_with_widening(
            0.0,
            half,
            n,
            CurveMeta::new("nu1", "rad/s", "single-particle probability (peak = 1)"),
            f,
            Some(-0.49 * d.omega0),
        ),
        SpectrumAxis::Wavelength => {
            let lam = move |l: f64| f(detuning_of_wavelength(d.omega0, l));
            let center_l = wavelength_of_detuning(d.omega0, 0.0);
            let half_l = half * lam_slope(d.omega0, 0.0);
            measure_with_widening(
                center_l,
                half_l,
                n,
                CurveMeta::new("lambda1", "m", "single-particle probability (peak = 1)"),
                lam,
                Some(1e-9),
            )
        }
    }
}

/// Pump intensity spectrum, either vs `nu1` at fixed `nu2` or vs `lambda1`
/// at fixed `lambda2`.
pub fn pump_spectrum(
    cfg: &PhysicalConfig,
    axis: SpectrumAxis,
    fixed_partner: f64,
    window: Option<f64>,
    n: usize,
) -> Result<MeasuredCurve, SpectralError> {
    let d = derive(cfg)?;
    let tau = cfg.pump_duration;
    match axis {
        SpectrumAxis::Detuning => {
            let nu2 = fixed_partner;
            let half = window.unwrap_or(4.0 * pump_width_analytic(cfg));
            measure_with_widening(
                -nu2,
                half,
                n,
                CurveMeta::new("nu1", "rad/s", "pump intensity (peak = 1)"),
                move |nu1| {
                    let s = nu1 + nu2;
                    (-(s * s) * tau * tau / (4.0 * LN2)).exp()
                },
                None,
            )
        }
        SpectrumAxis::Wavelength => {
            // E_p^2 ~ exp{-pi^2 c^2 tau^2 / ln2 (1/l1 + 1/l2 - 1/l0)^2}.
            let lambda2 = fixed_partner;
            let lambda0 = cfg.pump_wavelength;
            let inv_center = 1.0 / lambda0 - 1.0 / lambda2;
            let center = 1.0 / inv_center;
            let c = SPEED_OF_LIGHT;
            let half = window.unwrap_or({
                let dinv = 2.0 * LN2 / (PI * c * tau);
                4.0 * (1.0 / (inv_center - dinv) - 1.0 / (inv_center + dinv)).abs() / 2.0
            });
            measure_with_widening(
                center,
                half,
                n,
                CurveMeta::new("lambda1", "m", "pump intensity (peak = 1)"),
                move |l1: f64| {
                    let mismatch = 1.0 / l1 + 1.0 / lambda2 - 1.0 / lambda0;
                    (-PI * PI * c * c * tau * tau / LN2 * mismatch * mismatch).exp()
                },
                Some(1e-9),
            )
        }
    }
}

/// Analytic entanglement parameters `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RParameters {
    /// `0.7507 (A / sqrt(B eta)) sqrt(L / lambda0)`, valid for eta << 1.
    pub r_short: f64,
    /// `0.7537 (A eta / sqrt(B)) sqrt(L / lambda0)`, valid for eta >> 1.
    pub r_long: f64,
    /// Square-root interpolation `sqrt(r_short^2 + r_long^2)`.
    pub r_interp: f64,
}

/// Crystal prefactor `(A / sqrt(B)) sqrt(L / lambda0)` shared by all R and K
/// forms.
pub fn crystal_prefactor(cfg: &PhysicalConfig) -> f64 {
    cfg.walk_off / cfg.dispersion.sqrt() * (cfg.crystal_length / cfg.pump_wavelength).sqrt()
}

/// Exact coefficients of the asymptotic R forms.
pub const R_SHORT_COEFF: f64 = 0.750_685; // sqrt(2 pi ln2) / 2.7831
pub const R_LONG_COEFF: f64 = 0.753_685; // sqrt(2.7831 pi) / (2^{5/2} ln2)

/// The asymptotic and interpolated entanglement parameter R.
pub fn r_parameter(cfg: &PhysicalConfig) -> Result<RParameters, SpectralError> {
    let d = derive(cfg)?;
    let x = crystal_prefactor(cfg);
    let r_short = R_SHORT_COEFF * x / d.eta.sqrt();
    let r_long = R_LONG_COEFF * x * d.eta;
    Ok(RParameters {
        r_short,
        r_long,
        r_interp: (r_short * r_short + r_long * r_long).sqrt(),
    })
}

/// Unified single-coefficient form `0.75 X sqrt(eta^2 + 1/eta)` used by the
/// scan command.
pub fn r_unified(cfg: &PhysicalConfig, eta: f64) -> f64 {
    0.75 * crystal_prefactor(cfg) * (eta * eta + 1.0 / eta).sqrt()
}

/// Locate the minimum of the interpolated R over eta by golden-section
/// search; returns `(eta_min, r_min)`.
pub fn r_interp_minimum(cfg: &PhysicalConfig) -> (f64, f64) {
    let x = crystal_prefactor(cfg);
    let r = |eta: f64| {
        let s = R_SHORT_COEFF * x / eta.sqrt();
        let l = R_LONG_COEFF * x * eta;
        (s * s + l * l).sqrt()
    };
    let (mut a, mut b) = (0.1_f64, 10.0_f64);
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-10 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if r(c) < r(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let eta_min = 0.5 * (a + b);
    (eta_min, r(eta_min))
}

/// Numerically measured `R`: FWHM of the numeric single-particle spectrum
/// over FWHM of the coincidence spectrum at `nu2 = 0`, both in detuning.
pub fn r_measured(cfg: &PhysicalConfig, n: usize, tol: f64) -> Result<f64, SpectralError> {
    let single = single_particle_spectrum(
        cfg,
        SingleParticleMethod::Numeric,
        SpectrumAxis::Detuning,
        None,
        n,
        tol,
    )?;
    let coincidence = coincidence_spectrum(cfg, 0.0, SpectrumAxis::Detuning, None, n)?;
    Ok(single.fwhm.width / coincidence.fwhm.width)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn liio3(tau: f64) -> PhysicalConfig {
        PhysicalConfig::new(0.17, 0.069, 0.5e-2, 400e-9, tau).unwrap()
    }

    fn omega0(cfg: &PhysicalConfig) -> f64 {
        derive(cfg).unwrap().omega0
    }

    #[test]
    fn mismatch_values() {
        let cfg = liio3(50e-15);
        let w0 = omega0(&cfg);
        assert_eq!(mismatch(&cfg, w0, 0.0, 0.0), 0.0);
        // Pure dispersion branch: nu2 = -nu1 gives -(4B/omega0 c) nu1^2.
        let nu = 3.7e13;
        let expect = -4.0 * 0.069 * nu * nu / (w0 * SPEED_OF_LIGHT);
        assert!((mismatch(&cfg, w0, nu, -nu) - expect).abs() / expect.abs() < 1e-12);
        // Independent arithmetic at (1e13, 0):
        // (0.17e13 - 0.069e26/omega0)/c = 5665.7 1/m.
        let got = mismatch(&cfg, w0, 1e13, 0.0);
        assert!((got - 5665.70).abs() < 0.05, "got {got}");
    }

    #[test]
    fn phase_match_curve_roots() {
        let cfg = liio3(50e-15);
        let w0 = omega0(&cfg);
        assert_eq!(phase_match_nu1(&cfg, w0, 0.0).unwrap(), 0.0);
        // Approximate form at nu2 = 2e14: -nu2 + 1.379e13.
        let nu2 = 2e14;
        let approx = phase_match_nu1_approx(&cfg, w0, nu2);
        assert!((approx - (-nu2 + 1.379049e13)).abs() < 1e9);
        let exact = phase_match_nu1(&cfg, w0, nu2).unwrap();
        assert!((exact - approx).abs() / approx.abs() < 0.01);
        // The mismatch vanishes on the exact root.
        let delta = mismatch(&cfg, w0, exact, nu2);
        assert!(delta.abs() < 1e-6 * mismatch(&cfg, w0, exact + 1e12, nu2).abs());
        // Even quadratic term: nu1(nu2) + nu1(-nu2) > 0.
        let plus = phase_match_nu1(&cfg, w0, nu2).unwrap();
        let minus = phase_match_nu1(&cfg, w0, -nu2).unwrap();
        assert!(plus + minus > 0.0);
        // Out-of-branch detunings are rejected.
        let huge = 0.9 * cfg.walk_off * w0 / (2.0 * cfg.dispersion);
        assert!(matches!(
            phase_match_nu1(&cfg, w0, -huge),
            Err(SpectralError::OutOfBranch { .. })
        ));
    }

    #[test]
    fn jsa_basics() {
        let cfg = liio3(50e-15);
        let w0 = omega0(&cfg);
        assert_eq!(jsa(&cfg, 0.0, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        // Exchange symmetry at scattered points.
        for &(a, b) in &[(1e13, -2e13), (5e12, 4e14), (-3e14, 2e14)] {
            let fwd = jsa(&cfg, a, b).unwrap().norm();
            let rev = jsa(&cfg, b, a).unwrap().norm();
            assert!((fwd - rev).abs() <= 1e-15 * fwd.max(1e-300));
        }
        // Along the phase-matching curve the sinc factor is 1.
        for &nu2 in &[1e13, -5e13, 2e14] {
            let nu1 = phase_match_nu1(&cfg, w0, nu2).unwrap();
            let tau = cfg.pump_duration;
            let s = nu1 + nu2;
            let pump = (-(s * s) * tau * tau / (8.0 * LN2)).exp();
            let v = jsa(&cfg, nu1, nu2).unwrap().re;
            assert!((v / pump - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn coincidence_width_at_degeneracy() {
        let cfg = liio3(50e-15);
        let m = coincidence_spectrum(&cfg, 0.0, SpectrumAxis::Detuning, None, 4001).unwrap();
        let expect = coincidence_width_analytic(&cfg);
        assert!((expect - 1.9633e12).abs() / 1.9633e12 < 1e-3);
        assert!(
            (m.fwhm.width - expect).abs() / expect < 2e-3,
            "width {} vs {}",
            m.fwhm.width,
            expect
        );
        // In wavelength at lambda2 = 800 nm: 0.658 nm within 2%.
        let lam = coincidence_spectrum(&cfg, 0.0, SpectrumAxis::Wavelength, None, 4001).unwrap();
        assert!(
            (lam.fwhm.width - 0.658e-9).abs() / 0.658e-9 < 0.02,
            "width {}",
            lam.fwhm.width
        );
    }

    #[test]
    fn coincidence_width_long_pulse_is_pump_limited() {
        let cfg = liio3(7e-12);
        let m = coincidence_spectrum(&cfg, 0.0, SpectrumAxis::Detuning, None, 4001).unwrap();
        let expect = 4.0 * LN2 / cfg.pump_duration;
        assert!(
            (m.fwhm.width - expect).abs() / expect < 0.02,
            "width {} vs {}",
            m.fwhm.width,
            expect
        );
    }

    #[test]
    fn coincidence_width_nu2_dependence_follows_slope_correction() {
        // The FWHM in detuning grows with |nu2| through the quadratic term
        // of the mismatch: ratio = 1/(1 - 2B(nu1*-nu2)/(A omega0)).
        let cfg = liio3(50e-15);
        let w0 = omega0(&cfg);
        let nu2 = detuning_of_wavelength(w0, 870e-9);
        let at0 = coincidence_spectrum(&cfg, 0.0, SpectrumAxis::Detuning, None, 4001).unwrap();
        let shifted = coincidence_spectrum(&cfg, nu2, SpectrumAxis::Detuning, None, 4001).unwrap();
        let nu1 = phase_match_nu1(&cfg, w0, nu2).unwrap();
        let slope = 1.0 - 2.0 * cfg.dispersion * (nu1 - nu2) / (cfg.walk_off * w0);
        let predicted = at0.fwhm.width / slope;
        assert!(
            (shifted.fwhm.width - predicted).abs() / predicted < 0.01,
            "width {} predicted {}",
            shifted.fwhm.width,
            predicted
        );
    }

    #[test]
    fn pump_width_in_detuning_and_wavelength() {
        let cfg = liio3(50e-15);
        let m = pump_spectrum(&cfg, SpectrumAxis::Detuning, 0.0, None, 2001).unwrap();
        let expect = 4.0 * LN2 / cfg.pump_duration;
        assert!((m.fwhm.width - expect).abs() / expect < 1e-4);
        let lam = pump_spectrum(&cfg, SpectrumAxis::Wavelength, 800e-9, None, 2001).unwrap();
        assert!(
            (lam.fwhm.width - 18.8e-9).abs() / 18.8e-9 < 0.02,
            "width {}",
            lam.fwhm.width
        );
    }

    #[test]
    fn single_particle_widths_short_pulse() {
        let cfg = liio3(50e-15);
        let w0 = omega0(&cfg);
        assert!((single_width_short_analytic(&cfg, w0) - 5.6717e14).abs() / 5.6717e14 < 1e-3);
        let numeric = single_particle_spectrum(
            &cfg,
            SingleParticleMethod::Numeric,
            SpectrumAxis::Detuning,
            None,
            1201,
            1e-7,
        )
        .unwrap();
        let analytic = single_particle_spectrum(
            &cfg,
            SingleParticleMethod::AnalyticShort,
            SpectrumAxis::Detuning,
            None,
            1201,
            1e-7,
        )
        .unwrap();
        assert!(
            (numeric.fwhm.width - analytic.fwhm.width).abs() / analytic.fwhm.width < 0.05,
            "numeric {} analytic {}",
            numeric.fwhm.width,
            analytic.fwhm.width
        );
        // 195 nm at 800 nm within 3%.
        let lam = single_particle_spectrum(
            &cfg,
            SingleParticleMethod::Numeric,
            SpectrumAxis::Wavelength,
            None,
            1201,
            1e-7,
        )
        .unwrap();
        assert!(
            (lam.fwhm.width - 195e-9).abs() / 195e-9 < 0.03,
            "width {}",
            lam.fwhm.width
        );
    }

    #[test]
    fn single_particle_width_long_pulse() {
        let cfg = liio3(7e-12);
        let w0 = omega0(&cfg);
        let numeric = single_particle_spectrum(
            &cfg,
            SingleParticleMethod::Numeric,
            SpectrumAxis::Detuning,
            None,
            1201,
            1e-7,
        )
        .unwrap();
        let expect = single_width_long_analytic(&cfg, w0);
        assert!(
            (numeric.fwhm.width - expect).abs() / expect < 0.03,
            "numeric {} analytic {}",
            numeric.fwhm.width,
            expect
        );
        // Short-pulse analytic form is refused out of regime.
        assert!(matches!(
            single_particle_spectrum(
                &cfg,
                SingleParticleMethod::AnalyticShort,
                SpectrumAxis::Detuning,
                None,
                1201,
                1e-7,
            ),
            Err(SpectralError::AnalyticOutOfRegime { .. })
        ));
    }

    #[test]
    fn r_parameter_values() {
        let cfg = liio3(50e-15);
        let r = r_parameter(&cfg).unwrap();
        assert!((r.r_short - 295.0).abs() / 295.0 < 0.03, "r_short {}", r.r_short);
        let r7 = r_parameter(&liio3(7e-12)).unwrap();
        assert!((r7.r_long - 269.0).abs() / 269.0 < 0.03, "r_long {}", r7.r_long);
        let (eta_min, r_min) = r_interp_minimum(&cfg);
        assert!((eta_min - 0.7937).abs() / 0.7937 < 0.02, "eta_min {eta_min}");
        assert!((r_min - 73.0).abs() / 73.0 < 0.05, "r_min {r_min}");
        // Unified 0.75-coefficient form agrees with the interpolation within
        // its rounding.
        let d = derive(&cfg).unwrap();
        assert!((r_unified(&cfg, d.eta) - r.r_interp).abs() / r.r_interp < 0.01);
    }

    #[test]
    fn measured_r_tracks_asymptotics() {
        let short = liio3(50e-15);
        let r = r_parameter(&short).unwrap();
        let measured = r_measured(&short, 1201, 1e-7).unwrap();
        assert!(
            (measured - r.r_short).abs() / r.r_short < 0.10,
            "measured {measured} vs {}",
            r.r_short
        );
        let long = liio3(7e-12);
        let rl = r_parameter(&long).unwrap();
        let measured_l = r_measured(&long, 1201, 1e-7).unwrap();
        assert!(
            (measured_l - rl.r_long).abs() / rl.r_long < 0.10,
            "measured {measured_l} vs {}",
            rl.r_long
        );
    }

    #[test]
    fn measured_r_scales_as_sqrt_length_at_fixed_eta() {
        // At fixed eta, R ~ L / sqrt(c tau) with tau ~ L, i.e. exponent 1/2.
        let base = liio3(50e-15);
        let eta = derive(&base).unwrap().eta;
        let mut points = Vec::new();
        for scale in [1.0, 2.0, 4.0] {
            let mut cfg = base;
            cfg.crystal_length *= scale;
            cfg.pump_duration = cfg.pump_duration_for_eta(eta);
            let r = r_measured(&cfg, 901, 1e-6).unwrap();
            points.push(((scale as f64).ln(), r.ln()));
        }
        let slope = (points[2].1 - points[0].1) / (points[2].0 - points[0].0);
        assert!((slope - 0.5).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn coincidence_peak_sits_on_phase_match_curve() {
        let cfg = liio3(50e-15);
        let w0 = omega0(&cfg);
        for &nu2 in &[0.0, 1e14, -1.8944e14] {
            let m = coincidence_spectrum(&cfg, nu2, SpectrumAxis::Detuning, None, 4001).unwrap();
            let expect = phase_match_nu1(&cfg, w0, nu2).unwrap();
            let step = m.curve.xs()[1] - m.curve.xs()[0];
            assert!(
                (m.fwhm.peak_x - expect).abs() <= step,
                "peak {} expect {expect}",
                m.fwhm.peak_x
            );
        }
    }
}
