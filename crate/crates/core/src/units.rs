//! Physical constants (CODATA 2018 exact SI values) and unit conversions.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = PLANCK / (2.0 * PI);
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Superconducting flux quantum h/(2e) in weber.
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);
/// 2π/Φ0, converts flux to junction phase.
pub const PHASE_PER_FLUX: f64 = 2.0 * PI / FLUX_QUANTUM;

pub const NANO: f64 = 1e-9;
pub const FEMTO: f64 = 1e-15;
pub const GIGA: f64 = 1e9;

pub fn nh(value: f64) -> f64 {
    value * NANO
}

pub fn ff(value: f64) -> f64 {
    value * FEMTO
}

pub fn to_nh(henry: f64) -> f64 {
    henry / NANO
}

/// Energy in joule to E/h in GHz.
pub fn energy_to_ghz(energy: f64) -> f64 {
    energy / PLANCK / GIGA
}

pub fn ghz_to_energy(ghz: f64) -> f64 {
    ghz * GIGA * PLANCK
}

/// Angular frequency (rad/s) to ω/2π in GHz.
pub fn angular_to_ghz(omega: f64) -> f64 {
    omega / (2.0 * PI) / GIGA
}

/// Josephson energy [Φ0/(2π)]²/L_J for a given Josephson inductance.
pub fn josephson_energy(l_j: f64) -> f64 {
    let reduced = FLUX_QUANTUM / (2.0 * PI);
    reduced * reduced / l_j
}

/// Inverse of [`josephson_energy`].
pub fn josephson_inductance(e_j: f64) -> f64 {
    let reduced = FLUX_QUANTUM / (2.0 * PI);
    reduced * reduced / e_j
}

/// Absolute temperature in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Temperature(f64);

impl Temperature {
    pub const ZERO: Temperature = Temperature(0.0);

    /// Negative or non-finite values are rejected by callers that need a
    /// physical temperature; construction itself is unchecked.
    pub fn kelvin(t: f64) -> Self {
        Temperature(t)
    }

    /// Temperature such that k_B·T/h equals `ghz` GHz.
    pub fn from_ghz(ghz: f64) -> Self {
        Temperature(ghz_to_energy(ghz) / BOLTZMANN)
    }

    pub fn as_kelvin(self) -> f64 {
        self.0
    }

    /// Thermal energy k_B·T in joule.
    pub fn thermal_energy(self) -> f64 {
        BOLTZMANN * self.0
    }

    pub fn as_ghz(self) -> f64 {
        energy_to_ghz(self.thermal_energy())
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_josephson_energy_is_218_ghz() {
        let e_j = josephson_energy(nh(0.75));
        assert!((energy_to_ghz(e_j) - 217.95).abs() < 0.01);
        assert!((josephson_inductance(e_j) - nh(0.75)).abs() < 1e-24);
    }

    #[test]
    fn temperature_round_trip() {
        let t = Temperature::from_ghz(20.0);
        assert!((t.as_ghz() - 20.0).abs() < 1e-12);
        assert!((t.as_kelvin() - 0.9598).abs() < 1e-3);
    }
}
