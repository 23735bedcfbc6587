//! Physical constants of the atom–cavity–reservoir model.
//!
//! Everything is expressed in units of the reservoir coupling `γ₀`: rates are
//! multiples of `γ₀` and times are `γ₀t`. `γ₀` itself is carried explicitly and
//! is always 1 so the rate formulas read the same as their textbook form.

use serde::Serialize;

use crate::error::{Error, Result};

/// Atomic Bohr frequency used when a scenario does not fix one. Every QFI
/// quantity is independent of it; it only shows up in the phases.
pub const DEFAULT_OMEGA0: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysParams {
    gamma0: f64,
    lambda: f64,
    omega_big: f64,
    omega0: f64,
}

impl PhysParams {
    /// `lambda` is the Lorentzian width, `omega_big` the atom–cavity coupling
    /// `Ω` and `omega0` the Bohr frequency, all in units of `γ₀`.
    pub fn new(lambda: f64, omega_big: f64, omega0: f64) -> Result<Self> {
        let params = PhysParams {
            gamma0: 1.0,
            lambda,
            omega_big,
            omega0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_default_omega0(lambda: f64, omega_big: f64) -> Result<Self> {
        Self::new(lambda, omega_big, DEFAULT_OMEGA0)
    }

    pub fn with_omega0(self, omega0: f64) -> Result<Self> {
        Self::new(self.lambda, self.omega_big, omega0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParams(format!(
                "lambda must be positive and finite, got {}",
                self.lambda
            )));
        }
        if !(self.omega_big.is_finite() && self.omega_big >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "coupling omega must be non-negative and finite, got {}",
                self.omega_big
            )));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega0 must be positive and finite, got {}",
                self.omega0
            )));
        }
        Ok(())
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Atom–cavity coupling `Ω`.
    pub fn omega_big(&self) -> f64 {
        self.omega_big
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Peak of the Lorentzian, pinned to the `|E₁₋⟩` transition.
    pub fn omega1(&self) -> f64 {
        self.omega0 - self.omega_big
    }

    /// Reservoir correlation time `1/λ`.
    pub fn tau_reservoir(&self) -> f64 {
        1.0 / self.lambda
    }

    /// Relaxation time `1/γ₀`.
    pub fn tau_system(&self) -> f64 {
        1.0 / self.gamma0
    }

    pub fn is_markovian(&self) -> bool {
        self.lambda > 2.0 * self.gamma0
    }

    pub fn is_strong_coupling(&self) -> bool {
        self.omega_big > 2.0 * self.gamma0
    }
}

/// The four figure parameter sets plus the large-coupling inset, as
/// `(λ, Ω)` pairs.
pub const PRESET_RATES: [(f64, f64); 5] = [
    (5.0, 0.05),
    (5.0, 3.0),
    (0.05, 0.05),
    (0.05, 3.0),
    (5.0, 20.0),
];

/// [`PRESET_RATES`] at the default Bohr frequency.
pub fn preset_params() -> Vec<PhysParams> {
    PRESET_RATES
        .iter()
        .map(|&(lambda, omega)| {
            PhysParams::with_default_omega0(lambda, omega).expect("preset rates are valid")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega1_is_exact_difference() {
        let p = PhysParams::new(5.0, 3.0, 50.0).unwrap();
        assert_eq!(p.omega1(), 47.0);
        assert_eq!(p.gamma0(), 1.0);
        assert_eq!(p.tau_reservoir(), 0.2);
    }

    #[test]
    fn regime_flags() {
        let p = PhysParams::with_default_omega0(5.0, 0.05).unwrap();
        assert!(p.is_markovian());
        assert!(!p.is_strong_coupling());
        let q = PhysParams::with_default_omega0(0.05, 3.0).unwrap();
        assert!(!q.is_markovian());
        assert!(q.is_strong_coupling());
        // the threshold itself is neither
        let r = PhysParams::with_default_omega0(2.0, 2.0).unwrap();
        assert!(!r.is_markovian());
        assert!(!r.is_strong_coupling());
    }

    #[test]
    fn rejects_invalid() {
        assert!(PhysParams::new(0.0, 1.0, 50.0).is_err());
        assert!(PhysParams::new(1.0, -1.0, 50.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, 0.0).is_err());
        assert!(PhysParams::new(f64::NAN, 1.0, 50.0).is_err());
        assert!(PhysParams::new(1.0, 0.0, 50.0).is_ok());
    }
}
