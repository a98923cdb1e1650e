//! Casimir force and free energy for a perfectly conducting sphere of radius
//! `a` held concentrically inside a perfectly conducting spherical dip of
//! radius `b`.
//!
//! * [`riccati`]: scaled modified Riccati-Bessel tables and their Debye form.
//! * [`modes`]: reflection coefficients, the mutual logarithm and two-point integrands.
//! * [`observables`]: zero-temperature force and energy, Matsubara free energies.
//! * [`asymptotics`]: narrow-gap force, correction factors, stray-field factor.
//! * [`selfcheck`]: invariant suites runnable from the command line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod modes;
pub mod observables;
pub mod quadrature;
pub mod riccati;
pub mod selfcheck;
pub mod summation;
pub mod units;

pub use asymptotics::{
    correction_factor, factor_table, hemisphere_projection, pfa_force, plate_pressure,
    stray_field_factor, CorrectionFactor, CorrectionModel, FactorTable, PfaForce, StrayFieldModel,
};
pub use error::{CasimirError, Result};
pub use modes::{Geometry, ModeSpectrum, ModeTerm};
pub use observables::{
    energy_zero_t, force_zero_t, free_energy, free_energy_high_t_plate, free_energy_narrow,
    free_energy_static, free_energy_sum, matsubara_grid, Diagnostics, MatsubaraSum, NumericsPolicy,
    Observable, PlateFreeEnergy, ThermalState,
};
pub use riccati::{riccati_debye, riccati_table, RiccatiEntry, RiccatiTable};
pub use selfcheck::{run_all, run_suite, CheckResult, SelfcheckOptions, Suite};
