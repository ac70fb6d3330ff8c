//! Numerical model of collinear degenerate type-I SPDC with a pulsed pump.
//!
//! The crate evaluates the biphoton joint spectral amplitude of a type-I
//! down-conversion crystal pumped by Gaussian pulses, and everything that
//! follows from it:
//!
//! - coincidence, single-particle and pump spectra with their widths,
//! - the spectral entanglement parameter `R` (ratio of single-particle to
//!   coincidence widths) in its short-pulse, long-pulse and interpolated forms,
//! - the Schmidt number `K` three independent ways (discretized singular-value
//!   decomposition, the 4D overlap-integral definition, and the asymptotic
//!   closed forms), plus the universal `K/R` ratio,
//! - the two-time temporal wave packet at the crystal exit face, its
//!   localization geometry, coincidence/single-particle temporal signals and
//!   the temporal entanglement parameter `R_t` for long pulses.
//!
//! Everything is strict SI internally (seconds, meters, rad/s). Frequency
//! detunings `nu` are measured from the degenerate central frequency
//! `omega0/2`. Curves are peak-normalized to 1.
//!
//! The crystal enters only through the dimensionless walk-off constant `A`,
//! the dimensionless dispersion constant `B`, the length `L` and the pump
//! central wavelength `lambda0`; see [`params::PhysicalConfig`].

pub mod numerics;
pub mod params;
pub mod schmidt;
pub mod spectral;
pub mod temporal;

pub use numerics::{Curve, CurveMeta, FwhmResult, NumericsError};
pub use params::{DerivedConstants, ParamsError, PhysicalConfig, SPEED_OF_LIGHT};
pub use spectral::EntanglementReport;
