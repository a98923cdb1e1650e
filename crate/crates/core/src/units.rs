//! Physical constants and unit conversions.
//!
//! Internally every formula runs in natural units (hbar = c = 1) with lengths
//! measured in micrometres; SI values appear only at the observable boundary.

/// hbar * c in J m (CODATA 2018).
pub const HBAR_C: f64 = 3.161_526_77e-26;

/// Boltzmann constant in J/K (exact since the 2019 SI redefinition).
pub const K_B: f64 = 1.380_649e-23;

/// Apery's constant zeta(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// Metres per micrometre.
pub const MICRON: f64 = 1.0e-6;

/// Newtons per piconewton.
pub const PICONEWTON: f64 = 1.0e-12;

/// hbar c / L^2 in newtons for a length `length_um` in micrometres.
pub fn force_unit(length_um: f64) -> f64 {
    let l = length_um * MICRON;
    HBAR_C / (l * l)
}

/// hbar c / L in joules for a length `length_um` in micrometres.
pub fn energy_unit(length_um: f64) -> f64 {
    HBAR_C / (length_um * MICRON)
}

/// Thermal length hbar c / (k_B T) in micrometres.
pub fn thermal_length_um(temperature_k: f64) -> f64 {
    HBAR_C / (K_B * temperature_k) / MICRON
}

/// Temperature in kelvin whose thermal length hbar c / (k_B T) equals `beta_um`.
pub fn temperature_from_length(beta_um: f64) -> f64 {
    HBAR_C / (K_B * beta_um * MICRON)
}
