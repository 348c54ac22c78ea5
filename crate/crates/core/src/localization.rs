//! Cube-detector localization kernel and Compton scaling factors.
//!
//! This module works in SI units. A cube of edge `l` gives the momentum-space
//! kernel
//! `Delta(dp) = (lambda / hbar)^3 prod_j (tau / pi) sinc(tau dp_j / (m c))`
//! with `tau = l / (2 lambda)`, where `lambda = hbar / (m c)` is the reduced
//! Compton wavelength (divided by the Lorentz factor for moving particles).

use crate::error::{Error, Result};

/// Reduced Planck constant, J s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m / s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reduced Compton wavelengths at rest, in metres.
pub const MUON_COMPTON_REDUCED: f64 = 1.87e-15;
pub const ELECTRON_COMPTON_REDUCED: f64 = 3.86e-13;

/// `sin(z) / z` with `sinc(0) = 1`.
pub fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        // next term of the series is z^4 / 120, below double precision here
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationParams {
    edge_length: f64,
    compton_reduced: f64,
    gamma: f64,
}

impl LocalizationParams {
    pub fn new(edge_length: f64, compton_reduced: f64, gamma: f64) -> Result<Self> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(edge_length) {
            return Err(Error::Domain(format!(
                "edge length must be positive, got {edge_length}"
            )));
        }
        if !positive(compton_reduced) {
            return Err(Error::Domain(format!(
                "Compton wavelength must be positive, got {compton_reduced}"
            )));
        }
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(Error::Domain(format!(
                "Lorentz factor must be >= 1, got {gamma}"
            )));
        }
        Ok(Self {
            edge_length,
            compton_reduced,
            gamma,
        })
    }

    pub fn edge_length(&self) -> f64 {
        self.edge_length
    }

    pub fn compton_reduced(&self) -> f64 {
        self.compton_reduced
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `lambda / gamma`.
    pub fn effective_compton(&self) -> f64 {
        self.compton_reduced / self.gamma
    }
}

/// `tau = l / (2 lambda_eff)`.
pub fn scaling_factor(p: &LocalizationParams) -> f64 {
    p.edge_length / (2.0 * p.effective_compton())
}

/// The kernel split into its dimensionful prefactor `(lambda/hbar)^3` (SI) and
/// the dimensionless shape `prod_j (tau/pi) sinc(tau dp_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaCube {
    pub prefactor: f64,
    pub shape: f64,
}

impl DeltaCube {
    pub fn value(&self) -> f64 {
        self.prefactor * self.shape
    }
}

/// `dp` holds momentum differences in units of `m c`.
pub fn delta_cube(dp: [f64; 3], p: &LocalizationParams) -> DeltaCube {
    let tau = scaling_factor(p);
    let shape = dp
        .iter()
        .map(|&q| tau / std::f64::consts::PI * sinc(q * tau))
        .product();
    DeltaCube {
        prefactor: (p.effective_compton() / HBAR).powi(3),
        shape,
    }
}
