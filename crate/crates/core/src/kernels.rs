//! Lorentzian reservoir kernels.
//!
//! The reservoir enters the dynamics only through two time-dependent decay
//! rates, one per dressed state, and their running integrals `I∓(t)`. The
//! propagator coefficients of the dressed-basis density matrix are simple
//! exponentials of those integrals.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::PhysParams;

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

/// Selects one of the two dressed-state decay channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecayChannel {
    /// `|E₁₋⟩`, rate `γ(ω₀−Ω, t)`, sitting on the Lorentzian peak.
    Minus,
    /// `|E₁₊⟩`, rate `γ(ω₀+Ω, t)`, detuned by `2Ω` from the peak.
    Plus,
}

/// Lorentzian spectral density `J(ω)` centred on `ω₁ = ω₀ − Ω`.
pub fn spectral_density(omega: f64, p: &PhysParams) -> f64 {
    let detuning = p.omega1() - omega;
    let lambda = p.lambda();
    p.gamma0() * lambda * lambda / (2.0 * PI * (detuning * detuning + lambda * lambda))
}

/// Decay rate of `|E₁₋⟩`: `γ₀(1 − e^{−λt})`.
pub fn gamma_minus(t: f64, p: &PhysParams) -> Result<f64> {
    check_time(t)?;
    Ok(-p.gamma0() * (-p.lambda() * t).exp_m1())
}

/// Decay rate of `|E₁₊⟩`. Goes transiently negative for narrow spectra; that
/// is part of the model and is not clamped.
pub fn gamma_plus(t: f64, p: &PhysParams) -> Result<f64> {
    check_time(t)?;
    let lambda = p.lambda();
    let two_omega = 2.0 * p.omega_big();
    let prefactor = p.gamma0() * lambda * lambda / (two_omega * two_omega + lambda * lambda);
    let bracket = (two_omega / lambda) * (two_omega * t).sin() - (two_omega * t).cos();
    Ok(prefactor * (1.0 + bracket * (-lambda * t).exp()))
}

pub fn decay_rate(channel: DecayChannel, t: f64, p: &PhysParams) -> Result<f64> {
    match channel {
        DecayChannel::Minus => gamma_minus(t, p),
        DecayChannel::Plus => gamma_plus(t, p),
    }
}

/// Time integrals of the two decay rates at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelIntegrals {
    pub t: f64,
    pub i_minus: f64,
    pub i_plus: f64,
}

/// Closed-form `I₋(t)` and `I₊(t)`.
pub fn kernel_integrals(t: f64, p: &PhysParams) -> Result<KernelIntegrals> {
    check_time(t)?;
    let g0 = p.gamma0();
    let lambda = p.lambda();
    let omega = p.omega_big();
    let decay = (-lambda * t).exp();
    let decay_m1 = (-lambda * t).exp_m1();

    let i_minus = g0 * t + (g0 / lambda) * decay_m1;

    let four_omega_sq = 4.0 * omega * omega;
    let denom = four_omega_sq + lambda * lambda;
    let phase = 2.0 * omega * t;
    // e^{−λt}cos(2Ωt) − 1, rearranged so small λt does not cancel
    let cos_term = decay_m1 * phase.cos() - 2.0 * (0.5 * phase).sin().powi(2);
    let i_plus = (g0 * lambda * lambda / denom)
        * (t - 4.0 * omega * decay * phase.sin() / denom
            + (lambda * lambda - four_omega_sq) * cos_term / (lambda * denom));

    Ok(KernelIntegrals { t, i_minus, i_plus })
}

/// Composite Simpson integral of one decay rate over `[0, t]` with `panels`
/// subintervals. Independent of the closed forms in [`kernel_integrals`].
pub fn quadrature_oracle(
    t: f64,
    channel: DecayChannel,
    p: &PhysParams,
    panels: usize,
) -> Result<f64> {
    check_time(t)?;
    if panels == 0 || panels % 2 != 0 {
        return Err(Error::InvalidPanels(panels));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let h = t / panels as f64;
    let f = |s: f64| decay_rate(channel, s, p).expect("grid point is non-negative");
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..panels {
        let s = k as f64 * h;
        if k % 2 == 1 {
            odd += f(s);
        } else {
            even += f(s);
        }
    }
    Ok(h / 3.0 * (f(0.0) + 4.0 * odd + 2.0 * even + f(t)))
}

/// Propagator coefficients of the dressed-basis density matrix at time `t`.
///
/// Basis order is `(|E₁₊⟩, |E₁₋⟩, |E₀⟩)`. Only the upper triangle is stored;
/// the lower one follows by conjugation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorCoeffs {
    pub t: f64,
    pub a11: f64,
    pub a22: f64,
    pub a12: Complex64,
    pub a13: Complex64,
    pub a23: Complex64,
    pub a33_11: f64,
    pub a33_22: f64,
}

impl PropagatorCoeffs {
    pub fn a21(&self) -> Complex64 {
        self.a12.conj()
    }

    pub fn a31(&self) -> Complex64 {
        self.a13.conj()
    }

    pub fn a32(&self) -> Complex64 {
        self.a23.conj()
    }
}

pub fn propagator_coeffs(t: f64, p: &PhysParams) -> Result<PropagatorCoeffs> {
    let k = kernel_integrals(t, p)?;
    Ok(coeffs_from_integrals(&k, p))
}

pub(crate) fn coeffs_from_integrals(k: &KernelIntegrals, p: &PhysParams) -> PropagatorCoeffs {
    let t = k.t;
    let omega = p.omega_big();
    let omega0 = p.omega0();
    let a11 = (-0.5 * k.i_plus).exp();
    let a22 = (-0.5 * k.i_minus).exp();
    let a12 = Complex64::from_polar((-0.25 * (k.i_plus + k.i_minus)).exp(), -2.0 * omega * t);
    let a13 = Complex64::from_polar((-0.25 * k.i_plus).exp(), -(omega0 + omega) * t);
    let a23 = Complex64::from_polar((-0.25 * k.i_minus).exp(), -(omega0 - omega) * t);
    PropagatorCoeffs {
        t,
        a11,
        a22,
        a12,
        a13,
        a23,
        a33_11: 1.0 - a11,
        a33_22: 1.0 - a22,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(lambda: f64, omega: f64) -> PhysParams {
        PhysParams::with_default_omega0(lambda, omega).unwrap()
    }

    #[test]
    fn spectral_density_peak_and_half_width() {
        let p = params(5.0, 3.0);
        let peak = spectral_density(p.omega1(), &p);
        assert_abs_diff_eq!(peak, 1.0 / (2.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(peak, 0.159155, epsilon = 1e-6);
        let half = spectral_density(p.omega1() + p.lambda(), &p);
        assert_abs_diff_eq!(half, 0.5 * peak, epsilon = 1e-15);
        let half = spectral_density(p.omega1() - p.lambda(), &p);
        assert_abs_diff_eq!(half, 0.5 * peak, epsilon = 1e-15);
        assert!(spectral_density(p.omega1() + 1e6, &p) > 0.0);
        assert!(spectral_density(p.omega1() + 0.1, &p) < peak);
    }

    #[test]
    fn spectral_density_normalization() {
        // Simpson over ω₁ ± 10⁴λ; the tails beyond carry 2·(1/π)·atan-remainder
        // ≈ λ²/(π·10⁴λ) of the mass, so compare to the analytic truncated integral.
        let p = params(5.0, 3.0);
        let lambda = p.lambda();
        let half_range = 1e4 * lambda;
        let n = 2_000_000usize;
        let a = p.omega1() - half_range;
        let h = 2.0 * half_range / n as f64;
        let mut sum = spectral_density(a, &p) + spectral_density(a + 2.0 * half_range, &p);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * spectral_density(a + k as f64 * h, &p);
        }
        let numeric = sum * h / 3.0;
        let truncated = p.gamma0() * lambda / PI * (half_range / lambda).atan();
        assert_abs_diff_eq!(numeric, truncated, epsilon = 1e-9);
        // and the full-line value γ₀λ/2 within the known tail mass
        assert_abs_diff_eq!(numeric, p.gamma0() * lambda / 2.0, epsilon = 2e-4 * lambda);
    }

    #[test]
    fn gamma_minus_values() {
        let p = params(5.0, 3.0);
        assert_eq!(gamma_minus(0.0, &p).unwrap(), 0.0);
        // 1 − e^{−5}, with e^{−5} summed as a series
        let e5: f64 = (0..60).map(|k| (-5.0f64).powi(k) / factorial(k)).sum();
        assert_abs_diff_eq!(gamma_minus(1.0, &p).unwrap(), 1.0 - e5, epsilon = 1e-12);
        assert_abs_diff_eq!(gamma_minus(1.0, &p).unwrap(), 0.993262, epsilon = 1e-6);
        for lambda in [0.05, 0.5, 5.0] {
            let q = params(lambda, 1.0);
            assert_abs_diff_eq!(gamma_minus(1e3, &q).unwrap(), 1.0, epsilon = 1e-10);
        }
        assert!(gamma_minus(-1e-3, &p).is_err());
    }

    fn factorial(k: i32) -> f64 {
        (1..=k).map(f64::from).product()
    }

    #[test]
    fn gamma_plus_values() {
        let p = params(5.0, 3.0);
        assert_eq!(gamma_plus(0.0, &p).unwrap(), 0.0);
        // mpmath, 30 digits
        assert_abs_diff_eq!(
            gamma_plus(1.0, &p).unwrap(),
            0.406258688244814846,
            epsilon = 1e-14
        );
        let weak = params(5.0, 0.05);
        assert_abs_diff_eq!(
            gamma_plus(1e3, &weak).unwrap(),
            25.0 / 25.01,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(gamma_plus(1e3, &weak).unwrap(), 0.99960, epsilon = 1e-5);
        assert!(gamma_plus(-1.0, &p).is_err());
    }

    #[test]
    fn gamma_plus_goes_negative_without_clamping() {
        let p = params(0.05, 3.0);
        let min = (0..2001)
            .map(|k| gamma_plus(k as f64 * 0.01, &p).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(min < 0.0, "expected transient negativity, min = {min}");
    }

    #[test]
    fn integrals_values() {
        let p = params(5.0, 3.0);
        let zero = kernel_integrals(0.0, &p).unwrap();
        assert_eq!((zero.i_minus, zero.i_plus), (0.0, 0.0));
        let k = kernel_integrals(1.0, &p).unwrap();
        assert_abs_diff_eq!(k.i_minus, 0.801347589399817093, epsilon = 1e-13);
        assert_abs_diff_eq!(k.i_plus, 0.424673200574493725, epsilon = 1e-13);
        let q = params(0.05, 3.0);
        let k = kernel_integrals(1.0, &q).unwrap();
        assert_abs_diff_eq!(k.i_plus, 1.95924216785453587e-4, epsilon = 1e-15);
        assert!(kernel_integrals(-0.5, &p).is_err());
    }

    #[test]
    fn oracle_matches_closed_form_at_examples() {
        let p = params(5.0, 3.0);
        let minus = quadrature_oracle(1.0, DecayChannel::Minus, &p, 10_000).unwrap();
        assert_abs_diff_eq!(minus, 0.801348, epsilon = 1e-6);
        assert_abs_diff_eq!(
            minus,
            kernel_integrals(1.0, &p).unwrap().i_minus,
            epsilon = 1e-8
        );
        let plus = quadrature_oracle(1.0, DecayChannel::Plus, &p, 10_000).unwrap();
        assert_abs_diff_eq!(plus, 0.424673, epsilon = 1e-6);
        let q = params(0.05, 3.0);
        let plus = quadrature_oracle(1.0, DecayChannel::Plus, &q, 10_000).unwrap();
        assert_abs_diff_eq!(plus, 1.959e-4, epsilon = 1e-7);
        assert_abs_diff_eq!(
            plus,
            kernel_integrals(1.0, &q).unwrap().i_plus,
            epsilon = 1e-12
        );
        assert_eq!(
            quadrature_oracle(0.0, DecayChannel::Plus, &p, 2).unwrap(),
            0.0
        );
    }

    #[test]
    fn strong_coupling_inset_rate_dips_negative() {
        let p = params(5.0, 20.0);
        assert!(gamma_plus(0.12, &p).unwrap() < 0.0);
        assert!(gamma_plus(0.5, &p).unwrap() > 0.0);
    }

    #[test]
    fn oracle_rejects_bad_panels() {
        let p = params(5.0, 3.0);
        assert_eq!(
            quadrature_oracle(1.0, DecayChannel::Minus, &p, 0),
            Err(Error::InvalidPanels(0))
        );
        assert_eq!(
            quadrature_oracle(1.0, DecayChannel::Minus, &p, 7),
            Err(Error::InvalidPanels(7))
        );
    }

    #[test]
    fn oracle_converges_at_fourth_order() {
        let p = params(5.0, 3.0);
        let exact = kernel_integrals(2.0, &p).unwrap().i_plus;
        let e1 = (quadrature_oracle(2.0, DecayChannel::Plus, &p, 40).unwrap() - exact).abs();
        let e2 = (quadrature_oracle(2.0, DecayChannel::Plus, &p, 80).unwrap() - exact).abs();
        let ratio = e1 / e2;
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn derivative_of_integrals_is_rate() {
        let h = 1e-5;
        for p in crate::params::preset_params() {
            for k in 1..200 {
                let t = k as f64 * 0.1;
                let up = kernel_integrals(t + h, &p).unwrap();
                let down = kernel_integrals(t - h, &p).unwrap();
                let d_minus = (up.i_minus - down.i_minus) / (2.0 * h);
                let d_plus = (up.i_plus - down.i_plus) / (2.0 * h);
                assert_abs_diff_eq!(d_minus, gamma_minus(t, &p).unwrap(), epsilon = 1e-6);
                assert_abs_diff_eq!(d_plus, gamma_plus(t, &p).unwrap(), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn coefficients_at_zero_and_identities() {
        let p = params(5.0, 3.0);
        let c = propagator_coeffs(0.0, &p).unwrap();
        assert_eq!((c.a11, c.a22), (1.0, 1.0));
        assert_eq!(c.a12, Complex64::new(1.0, 0.0));
        assert_eq!(c.a13, Complex64::new(1.0, 0.0));
        assert_eq!(c.a23, Complex64::new(1.0, 0.0));
        assert_eq!((c.a33_11, c.a33_22), (0.0, 0.0));

        let c = propagator_coeffs(1.0, &p).unwrap();
        assert_abs_diff_eq!(c.a13.norm(), 0.899273287515833702, epsilon = 1e-13);
        assert_abs_diff_eq!(c.a13.norm(), 0.899274, epsilon = 1e-6);
        for k in 0..500 {
            let t = k as f64 * 0.04;
            let c = propagator_coeffs(t, &p).unwrap();
            assert_abs_diff_eq!(c.a12.norm(), (c.a11 * c.a22).sqrt(), epsilon = 1e-14);
            assert_eq!(c.a33_11 + c.a11, 1.0);
            assert_eq!(c.a33_22 + c.a22, 1.0);
            assert_eq!(c.a21(), c.a12.conj());
        }
    }

    #[test]
    fn markovian_rates_are_non_negative() {
        // the four figure sets; the Ω = 20 inset dips below zero for γ₀t < 0.42
        for p in crate::params::preset_params()[..4]
            .iter()
            .filter(|p| p.is_markovian())
        {
            for k in 0..2001 {
                let t = k as f64 * 0.01;
                assert!(gamma_plus(t, p).unwrap() >= 0.0);
                assert!(gamma_minus(t, p).unwrap() >= 0.0);
            }
        }
    }
}
