//! Physical configuration of the crystal and pump, and derived constants.
//!
//! The model is parameterized by four crystal/pump numbers:
//!
//! - `walk_off` (the dimensionless constant `A`): group-delay mismatch between
//!   the extraordinary pump and the ordinary down-converted waves,
//!   `A = c (1/v_g_pump - 1/v_g_ordinary)`;
//! - `dispersion` (the dimensionless constant `B`): second-order dispersion of
//!   the ordinary wave, `B = (c/4) omega0 k''(omega0/2)`;
//! - `crystal_length` (`L`, meters);
//! - `pump_wavelength` (`lambda0`, meters); the pump is centered at
//!   `omega0 = 2 pi c / lambda0` and photons at the degenerate `omega0 / 2`;
//! - `pump_duration` (`tau`, seconds): FWHM-convention duration of the
//!   Gaussian pump amplitude `exp[-(omega - omega0)^2 tau^2 / (8 ln 2)]`.
//!
//! Group velocities are representable only through `A`; refractive-index
//! (Sellmeier) models are deliberately out of scope.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

/// Exact SI speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamsError {
    /// A field failed validation; carries the field name and the offending value.
    #[error("invalid configuration: `{field}` must be {requirement}, got {value}")]
    Validation {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },
    /// The key=value config text could not be parsed.
    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config is missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("could not read config file: {0}")]
    Io(String),
}

/// Crystal and pump parameters. All lengths in meters, times in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConfig {
    /// Dimensionless temporal walk-off constant `A`.
    pub walk_off: f64,
    /// Dimensionless dispersion constant `B`.
    pub dispersion: f64,
    /// Crystal length `L` [m].
    pub crystal_length: f64,
    /// Pump central wavelength `lambda0` [m].
    pub pump_wavelength: f64,
    /// Pump pulse duration `tau` [s].
    pub pump_duration: f64,
}

/// Scalar constants derived from a [`PhysicalConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Pump central angular frequency `omega0 = 2 pi c / lambda0` [rad/s].
    pub omega0: f64,
    /// Dimensionless pump-pulse duration `eta = 2 c tau / (A L)`, the control
    /// parameter separating short (`eta << 1`) and long (`eta >> 1`) pulses.
    pub eta: f64,
    /// Dimensionless constant `pi c tau A / (16 sqrt(2 ln 2) B lambda0)`
    /// governing the quartic temporal localization exponent.
    pub quartic_const: f64,
    /// Long-pulse photon correlation time
    /// `tau0 = sqrt(8 B lambda0 L / pi) / c` [s]; independent of `tau` and `A`.
    pub correlation_time: f64,
}

/// Constants of the angular-entanglement mapping in the parallel geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularParameters {
    /// Walk-off analogue `pi c n_p' / (lambda0 n_p)`.
    pub a_tilde: f64,
    /// Dispersion analogue `pi^2 c^2 / (2 n_p lambda0)`.
    pub b_tilde: f64,
    /// Control parameter `4 ln 2 lambda0 n_p / (pi alpha0 L n_p')`.
    pub eta_tilde: f64,
    /// Minimum of the angular entanglement parameter,
    /// `n_p' sqrt(2 L / (n_p lambda0))`.
    pub r_min_angular: f64,
}

impl PhysicalConfig {
    pub fn new(
        walk_off: f64,
        dispersion: f64,
        crystal_length: f64,
        pump_wavelength: f64,
        pump_duration: f64,
    ) -> Result<Self, ParamsError> {
        let cfg = Self {
            walk_off,
            dispersion,
            crystal_length,
            pump_wavelength,
            pump_duration,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let positive = |field: &'static str, value: f64| -> Result<(), ParamsError> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(ParamsError::Validation {
                    field,
                    requirement: "finite and positive",
                    value,
                })
            }
        };
        positive("A", self.walk_off)?;
        positive("B", self.dispersion)?;
        positive("L", self.crystal_length)?;
        positive("lambda0", self.pump_wavelength)?;
        positive("tau", self.pump_duration)?;
        Ok(())
    }

    /// Same crystal, different pump duration.
    pub fn with_pump_duration(mut self, tau: f64) -> Self {
        self.pump_duration = tau;
        self
    }

    /// Pump duration that realizes a given control parameter `eta` on this crystal.
    pub fn pump_duration_for_eta(&self, eta: f64) -> f64 {
        eta * self.walk_off * self.crystal_length / (2.0 * SPEED_OF_LIGHT)
    }

    /// Parse the flat `key = value` config format.
    ///
    /// Keys are `A`, `B` (dimensionless), `L`, `lambda0` (lengths), `tau`
    /// (time). Values may carry a unit suffix (`0.5 cm`, `50fs`, `400 nm`);
    /// bare numbers are SI. `#` starts a comment.
    pub fn from_config_str(text: &str) -> Result<Self, ParamsError> {
        let mut a = None;
        let mut b = None;
        let mut length = None;
        let mut lambda0 = None;
        let mut tau = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ParamsError::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse = |dim: Dimension| -> Result<f64, ParamsError> {
                parse_quantity(value, dim).map_err(|message| ParamsError::Parse {
                    line: line_no,
                    message,
                })
            };
            match key {
                "A" => a = Some(parse(Dimension::Bare)?),
                "B" => b = Some(parse(Dimension::Bare)?),
                "L" => length = Some(parse(Dimension::Length)?),
                "lambda0" => lambda0 = Some(parse(Dimension::Length)?),
                "tau" => tau = Some(parse(Dimension::Time)?),
                other => {
                    return Err(ParamsError::Parse {
                        line: line_no,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        PhysicalConfig::new(
            a.ok_or(ParamsError::MissingKey("A"))?,
            b.ok_or(ParamsError::MissingKey("B"))?,
            length.ok_or(ParamsError::MissingKey("L"))?,
            lambda0.ok_or(ParamsError::MissingKey("lambda0"))?,
            tau.ok_or(ParamsError::MissingKey("tau"))?,
        )
    }

    pub fn from_config_file(path: &Path) -> Result<Self, ParamsError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ParamsError::Io(format!("{path:?}: {e}")))?;
        Self::from_config_str(&text)
    }
}

/// Compute all derived scalar constants. Pure: equal configs give
/// bit-identical outputs.
pub fn derive(config: &PhysicalConfig) -> Result<DerivedConstants, ParamsError> {
    config.validate()?;
    let c = SPEED_OF_LIGHT;
    let omega0 = 2.0 * PI * c / config.pump_wavelength;
    let eta = 2.0 * c * config.pump_duration / (config.walk_off * config.crystal_length);
    let quartic_const = PI * c * config.pump_duration * config.walk_off
        / (16.0 * (2.0 * LN2).sqrt() * config.dispersion * config.pump_wavelength);
    let correlation_time = (8.0 * config.dispersion * config.pump_wavelength
        * config.crystal_length
        / PI)
        .sqrt()
        / c;
    Ok(DerivedConstants {
        omega0,
        eta,
        quartic_const,
        correlation_time,
    })
}

/// Map the spectral model onto angular entanglement in the parallel geometry.
///
/// `np` is the pump refractive index, `np_prime` its angular derivative and
/// `alpha0` the pump angular divergence (takes over the role of `tau`).
pub fn angular_parameters(
    config: &PhysicalConfig,
    np: f64,
    np_prime: f64,
    alpha0: f64,
) -> Result<AngularParameters, ParamsError> {
    config.validate()?;
    if !(np.is_finite() && np > 0.0) {
        return Err(ParamsError::Validation {
            field: "np",
            requirement: "finite and positive",
            value: np,
        });
    }
    if !(alpha0.is_finite() && alpha0 > 0.0) {
        return Err(ParamsError::Validation {
            field: "alpha0",
            requirement: "finite and positive",
            value: alpha0,
        });
    }
    if !np_prime.is_finite() || np_prime < 0.0 {
        return Err(ParamsError::Validation {
            field: "np_prime",
            requirement: "finite and non-negative",
            value: np_prime,
        });
    }
    let c = SPEED_OF_LIGHT;
    let lambda0 = config.pump_wavelength;
    let length = config.crystal_length;
    Ok(AngularParameters {
        a_tilde: PI * c * np_prime / (lambda0 * np),
        b_tilde: PI * PI * c * c / (2.0 * np * lambda0),
        eta_tilde: 4.0 * LN2 * lambda0 * np / (PI * alpha0 * length * np_prime),
        r_min_angular: np_prime * (2.0 * length / (np * lambda0)).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Bare,
    Length,
    Time,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Bare => write!(f, "dimensionless"),
            Dimension::Length => write!(f, "length"),
            Dimension::Time => write!(f, "time"),
        }
    }
}

/// Parse a number with an optional unit suffix into SI.
///
/// Lengths: `m`, `cm`, `mm`, `um`, `nm`, `pm`. Times: `s`, `ms`, `us`, `ns`,
/// `ps`, `fs`. Whitespace between number and unit is optional.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|(_, ch)| ch.is_ascii_alphabetic())
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (num_part, unit_part) = text.split_at(split);
    let value: f64 = num_part
        .trim()
        .parse()
        .map_err(|_| format!("`{text}`: not a number"))?;
    let unit = unit_part.trim();
    let factor = match (dim, unit) {
        (Dimension::Bare, "") => 1.0,
        (Dimension::Length, "") | (Dimension::Length, "m") => 1.0,
        (Dimension::Length, "cm") => 1e-2,
        (Dimension::Length, "mm") => 1e-3,
        (Dimension::Length, "um") => 1e-6,
        (Dimension::Length, "nm") => 1e-9,
        (Dimension::Length, "pm") => 1e-12,
        (Dimension::Time, "") | (Dimension::Time, "s") => 1.0,
        (Dimension::Time, "ms") => 1e-3,
        (Dimension::Time, "us") => 1e-6,
        (Dimension::Time, "ns") => 1e-9,
        (Dimension::Time, "ps") => 1e-12,
        (Dimension::Time, "fs") => 1e-15,
        _ => return Err(format!("`{unit}` is not a {dim} unit")),
    };
    Ok(value * factor)
}
