//! Direct numerical integration of the second-order time-convolutionless
//! master equation in the dressed basis.
//!
//! This is the cross-check for the analytic propagator: it never touches the
//! closed-form integrals `I±` or the propagator coefficients, only the decay
//! rates. Integration runs in the Schrödinger picture, so the `ω₀` phases are
//! resolved step by step.
//!
//! With the ½ sandwich and ¼ anticommutator prefactors the populations of
//! `|E₁±⟩` decay as `e^{−I±/2}` and their coherences with `|E₀⟩` as
//! `e^{−I±/4}`, which is exactly what the analytic propagator prescribes. No
//! reconciliation of prefactors is needed.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::dynamics::{max_abs, DressedMatrix, DressedState};
use crate::error::{Error, Result};
use crate::kernels::{check_time, gamma_minus, gamma_plus};
use crate::params::PhysParams;

/// Single-step trace drift above which the step size is rejected.
pub const MAX_STEP_TRACE_DRIFT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_max: f64,
    pub record_every: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_max: f64, record_every: usize) -> Result<Self> {
        let cfg = IntegratorConfig {
            dt,
            t_max,
            record_every,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Uses [`default_step`].
    pub fn default_for(p: &PhysParams, t_max: f64) -> Result<Self> {
        Self::new(default_step(p), t_max, 1)
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_max.is_finite() && self.t_max >= self.dt) {
            return Err(Error::InvalidConfig(format!(
                "t_max must be at least dt, got {}",
                self.t_max
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig(
                "record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Number of RK4 steps; the horizon is rounded to a whole number of steps.
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

/// Largest `(ω₀ + Ω)·dt` accepted by [`default_step`]. RK4's phase error per
/// step is `(ω dt)⁵/120`, so this keeps the accumulated error over a unit
/// horizon near 10⁻⁸.
pub const MAX_PHASE_PER_STEP: f64 = 0.025;

/// Coarse step: `10⁻³`, or `10⁻⁴` once `Ω ≥ 10` so the `2Ω` beat is resolved.
pub fn coarse_step(p: &PhysParams) -> f64 {
    if p.omega_big() >= 10.0 {
        1e-4
    } else {
        1e-3
    }
}

/// [`coarse_step`] divided by the smallest integer that keeps the fastest
/// phase, `(ω₀ + Ω)·dt`, below [`MAX_PHASE_PER_STEP`].
pub fn default_step(p: &PhysParams) -> f64 {
    let coarse = coarse_step(p);
    let fastest = p.omega0() + p.omega_big();
    let split = (coarse * fastest / MAX_PHASE_PER_STEP).ceil().max(1.0);
    coarse / split
}

fn basis(k: usize) -> Vector3<Complex64> {
    let mut v = Vector3::zeros();
    v[k] = Complex64::new(1.0, 0.0);
    v
}

fn anticommutator(a: &DressedMatrix, b: &DressedMatrix) -> DressedMatrix {
    a * b + b * a
}

/// `dR/dt` of the master equation at time `t`.
pub fn master_rhs(r: &DressedMatrix, t: f64, p: &PhysParams) -> Result<DressedMatrix> {
    check_time(t)?;
    let g_plus = gamma_plus(t, p)?;
    let g_minus = gamma_minus(t, p)?;
    Ok(rhs_with_rates(r, p, g_plus, g_minus))
}

fn rhs_with_rates(r: &DressedMatrix, p: &PhysParams, g_plus: f64, g_minus: f64) -> DressedMatrix {
    let half_w0 = 0.5 * p.omega0();
    let omega = p.omega_big();
    let h = DressedMatrix::from_diagonal(&Vector3::new(
        Complex64::new(half_w0 + omega, 0.0),
        Complex64::new(half_w0 - omega, 0.0),
        Complex64::new(-half_w0, 0.0),
    ));
    let e_plus = basis(0);
    let e_minus = basis(1);
    let e_ground = basis(2);

    let unitary = (h * r - r * h) * (-Complex64::i());

    let mut out = unitary;
    for (rate, excited) in [(g_plus, &e_plus), (g_minus, &e_minus)] {
        let lower = e_ground * excited.adjoint();
        let projector = excited * excited.adjoint();
        let sandwich = lower * r * lower.adjoint();
        let dissipator = sandwich.scale(0.5) - anticommutator(&projector, r).scale(0.25);
        out += dissipator.scale(rate);
    }
    out
}

/// Output of [`integrate`].
#[derive(Debug, Clone)]
pub struct OracleTrajectory {
    pub states: Vec<DressedState>,
    /// Largest `max|R − R†|` seen before the per-step symmetrization.
    pub max_hermiticity_drift: f64,
    /// Largest single-step trace change.
    pub max_step_trace_drift: f64,
}

/// Fixed-step classic RK4 from `t = 0`. The initial state is always the first
/// sample; after that every `record_every`-th step is kept.
pub fn integrate(
    r0: &DressedState,
    cfg: &IntegratorConfig,
    p: &PhysParams,
) -> Result<OracleTrajectory> {
    cfg.validate()?;
    if r0.t != 0.0 {
        return Err(Error::UnsupportedState(
            "integration must start from a t = 0 state",
        ));
    }
    let dt = cfg.dt;
    let steps = cfg.steps();
    let mut r = r0.r;
    let mut states = Vec::with_capacity(steps / cfg.record_every + 2);
    states.push(r0.clone());
    let mut max_herm: f64 = 0.0;
    let mut max_drift: f64 = 0.0;

    for k in 0..steps {
        let t = k as f64 * dt;
        let t_mid = t + 0.5 * dt;
        let t_next = (k + 1) as f64 * dt;
        let (gp0, gm0) = (gamma_plus(t, p)?, gamma_minus(t, p)?);
        let (gp1, gm1) = (gamma_plus(t_mid, p)?, gamma_minus(t_mid, p)?);
        let (gp2, gm2) = (gamma_plus(t_next, p)?, gamma_minus(t_next, p)?);

        let k1 = rhs_with_rates(&r, p, gp0, gm0);
        let k2 = rhs_with_rates(&(r + k1.scale(0.5 * dt)), p, gp1, gm1);
        let k3 = rhs_with_rates(&(r + k2.scale(0.5 * dt)), p, gp1, gm1);
        let k4 = rhs_with_rates(&(r + k3.scale(dt)), p, gp2, gm2);
        let next = r + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0);

        let drift = (next.trace() - r.trace()).norm();
        if !(drift <= MAX_STEP_TRACE_DRIFT) {
            return Err(Error::StepTooLarge {
                drift: if drift.is_nan() { f64::INFINITY } else { drift },
                t: t_next,
            });
        }
        max_drift = max_drift.max(drift);
        max_herm = max_herm.max(max_abs(&(next - next.adjoint())));
        r = (next + next.adjoint()).scale(0.5);

        if (k + 1) % cfg.record_every == 0 {
            states.push(DressedState { t: t_next, r });
        }
    }

    Ok(OracleTrajectory {
        states,
        max_hermiticity_drift: max_herm,
        max_step_trace_drift: max_drift,
    })
}
