//! Oracle cross-checks run by the `validate` subcommand.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};
use std::fmt;

use cavity_qfi::kernels::quadrature_oracle;
use cavity_qfi::params::preset_params;
use cavity_qfi::qfi::{
    cavity_excitation_series, dphi_rho, qfi_closed, qfi_flow_closed, qfi_series, qubit_state,
};
use cavity_qfi::tcl_oracle::{coarse_step, default_step};
use cavity_qfi::{
    evolve_dressed, initial_dressed_state, integrate, kernel_integrals, reduce_to_qubit,
    ClosedForm, DecayChannel, InitialStateSpec, IntegratorConfig, Mode, PhysParams, TimeGrid,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(CliError::BadArgument(format!("unknown level '{other}'"))),
        }
    }
}

/// Deliberate model corruptions used to show that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// Flips the sign of the cross term in the dressed closed form.
    FlipDressedCrossTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl Check {
    fn at_most(name: &'static str, measured: f64, tolerance: f64) -> Self {
        Check {
            name,
            measured,
            tolerance,
            passed: measured <= tolerance,
            note: String::new(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<22} measured={:.3e} tolerance={:.1e}",
            self.name, self.measured, self.tolerance
        )?;
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

fn grid(t_max: f64, samples: usize) -> Result<TimeGrid, CliError> {
    Ok(TimeGrid::new(t_max, samples)?)
}

fn phase_families() -> Result<Vec<(InitialStateSpec, Mode)>, CliError> {
    Ok(vec![
        (InitialStateSpec::dressed(FRAC_PI_2, 0.0)?, Mode::Rederived),
        (
            InitialStateSpec::dressed(FRAC_PI_2, 0.0)?,
            Mode::PaperFaithful,
        ),
        (InitialStateSpec::standard(FRAC_PI_2, 0.0)?, Mode::Rederived),
        (
            InitialStateSpec::standard(FRAC_PI_2, 0.0)?,
            Mode::PaperFaithful,
        ),
    ])
}

fn max_deviation<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, |acc, x| {
        if x.is_nan() {
            f64::INFINITY
        } else {
            acc.max(x.abs())
        }
    })
}

/// Closed-form kernel integrals against composite Simpson.
pub fn check_quadrature(level: Level) -> Result<Check, CliError> {
    let samples = match level {
        Level::Quick => 21,
        Level::Full => 2001,
    };
    let g = grid(20.0, samples)?;
    let mut worst: f64 = 0.0;
    for p in preset_params() {
        for t in g.times() {
            let k = kernel_integrals(t, &p)?;
            let minus = quadrature_oracle(t, DecayChannel::Minus, &p, 10_000)?;
            let plus = quadrature_oracle(t, DecayChannel::Plus, &p, 10_000)?;
            worst = worst.max(max_deviation([k.i_minus - minus, k.i_plus - plus]));
        }
    }
    Ok(Check::at_most("kernels_vs_simpson", worst, 1e-7)
        .with_note(format!("points={samples} panels=10000")))
}

pub struct Rk4Run {
    pub max_error: f64,
    pub max_trace_error: f64,
    pub max_hermiticity_drift: f64,
}

/// Integrates from `spec` with step `dt` to `horizon` and compares every step
/// with the analytic propagator.
pub fn rk4_against_analytic(
    spec: &InitialStateSpec,
    p: &PhysParams,
    dt: f64,
    horizon: f64,
) -> Result<Rk4Run, CliError> {
    let r0 = initial_dressed_state(spec)?;
    let cfg = IntegratorConfig::new(dt, horizon, 1)?;
    let run = integrate(&r0, &cfg, p)?;
    let mut max_error: f64 = 0.0;
    let mut max_trace_error: f64 = 0.0;
    for s in &run.states {
        let exact = evolve_dressed(&r0, s.t, p)?;
        let diff = max_deviation((s.r - exact.r).iter().map(|z| z.norm()));
        max_error = max_error.max(diff);
        max_trace_error = max_trace_error.max((s.trace() - 1.0).norm());
    }
    Ok(Rk4Run {
        max_error,
        max_trace_error,
        max_hermiticity_drift: run.max_hermiticity_drift,
    })
}

/// RK4 agreement, order and conservation. Agreement uses [`default_step`];
/// the order is measured from the coarse step, where truncation error
/// dominates round-off.
pub fn check_rk4(level: Level) -> Result<Vec<Check>, CliError> {
    let specs = match level {
        Level::Quick => vec![InitialStateSpec::dressed(FRAC_PI_2, 0.0)?],
        Level::Full => vec![
            InitialStateSpec::dressed(FRAC_PI_2, 0.0)?,
            InitialStateSpec::standard(FRAC_PI_2, 0.0)?,
        ],
    };
    let mut error: f64 = 0.0;
    let mut trace: f64 = 0.0;
    let mut herm: f64 = 0.0;
    for p in preset_params() {
        for spec in &specs {
            let run = rk4_against_analytic(spec, &p, default_step(&p), 1.0)?;
            error = error.max(run.max_error);
            trace = trace.max(run.max_trace_error);
            herm = herm.max(run.max_hermiticity_drift);
        }
    }
    let p = PhysParams::with_default_omega0(5.0, 3.0)?;
    let spec = InitialStateSpec::dressed(FRAC_PI_2, 0.0)?;
    let dt = coarse_step(&p);
    let coarse = rk4_against_analytic(&spec, &p, dt, 1.0)?.max_error;
    let fine = rk4_against_analytic(&spec, &p, 0.5 * dt, 1.0)?.max_error;
    let ratio = coarse / fine;
    let order = Check {
        name: "rk4_order",
        measured: ratio,
        tolerance: 16.0,
        passed: (12.0..=20.0).contains(&ratio),
        note: format!("halving ratio, accepted in [12, 20]; errors {coarse:.3e} -> {fine:.3e}"),
    };
    Ok(vec![
        Check::at_most("rk4_vs_analytic", error, 1e-6).with_note("default step, horizon 1"),
        order,
        Check::at_most("rk4_trace", trace, 1e-10),
        Check::at_most("rk4_hermiticity_drift", herm, 1e-10),
    ])
}

fn closed_for(
    spec: &InitialStateSpec,
    mode: Mode,
    mutation: Mutation,
) -> Result<ClosedForm, CliError> {
    let family = ClosedForm::for_state(spec, mode)?;
    Ok(match (family, mutation) {
        (ClosedForm::Dressed, Mutation::FlipDressedCrossTerm) => ClosedForm::Standard,
        (family, _) => family,
    })
}

/// Generic SLD QFI against the closed forms.
pub fn check_sld(level: Level, mutation: Mutation) -> Result<Check, CliError> {
    let samples = match level {
        Level::Quick => 201,
        Level::Full => 2001,
    };
    let g = grid(20.0, samples)?;
    let mut worst: f64 = 0.0;
    for p in preset_params() {
        for (spec, mode) in phase_families()? {
            let family = closed_for(&spec, mode, mutation)?;
            for s in qfi_series(&spec, &p, &g, mode)? {
                let closed = qfi_closed(family, s.t, FRAC_PI_2, &p)?;
                worst = worst.max(max_deviation([s.f_sld - closed]));
            }
        }
        for s in cavity_excitation_series(FRAC_PI_2, 0.0, &p, &g)? {
            worst = worst.max(max_deviation([s.f_sld - s.f_closed]));
        }
    }
    Ok(Check::at_most("sld_vs_closed", worst, 1e-9).with_note(format!("points={samples}")))
}

/// Analytic `∂ρ/∂φ` against a central difference with `h = 10⁻⁶`.
pub fn check_dphi(level: Level) -> Result<Check, CliError> {
    let samples = match level {
        Level::Quick => 21,
        Level::Full => 201,
    };
    let g = grid(20.0, samples)?;
    let h = 1e-6;
    let phi = 0.4;
    let mut worst: f64 = 0.0;
    for p in preset_params() {
        for (spec, mode) in phase_families()? {
            let theta = spec.theta().unwrap_or(FRAC_PI_2);
            let build = |phi: f64| match spec {
                InitialStateSpec::Dressed { .. } => InitialStateSpec::dressed(theta, phi),
                _ => InitialStateSpec::standard(theta, phi),
            };
            let (at, up, down) = (build(phi)?, build(phi + h)?, build(phi - h)?);
            for t in g.times() {
                let analytic = dphi_rho(&at, t, &p, mode)?;
                let fd = (qubit_state(&up, t, &p, mode)?.rho
                    - qubit_state(&down, t, &p, mode)?.rho)
                    .scale(0.5 / h);
                worst = worst.max(max_deviation((analytic - fd).iter().map(|z| z.norm())));
            }
        }
    }
    Ok(Check::at_most("dphi_vs_difference", worst, 1e-8)
        .with_note(format!("points={samples} h=1e-6")))
}

/// Trapezoid integral of the analytic flow against `F(T) − F(0)`, and the
/// sign of the flow on the Markovian weak-coupling preset.
pub fn check_flow() -> Result<Vec<Check>, CliError> {
    let horizon = 10.0;
    let g = grid(horizon, 10_001)?;
    let h = g.step();
    let mut worst: f64 = 0.0;
    for p in preset_params() {
        for family in [ClosedForm::Dressed, ClosedForm::Standard] {
            let flow: Vec<f64> = g
                .times()
                .map(|t| qfi_flow_closed(family, t, FRAC_PI_2, &p))
                .collect::<Result<_, _>>()?;
            let integral = h * (flow.iter().sum::<f64>() - 0.5 * (flow[0] + flow[flow.len() - 1]));
            let change = qfi_closed(family, horizon, FRAC_PI_2, &p)?
                - qfi_closed(family, 0.0, FRAC_PI_2, &p)?;
            worst = worst.max(max_deviation([integral - change]));
        }
    }
    let markovian = PhysParams::with_default_omega0(5.0, 0.05)?;
    let mut highest = f64::NEG_INFINITY;
    for t in g.times() {
        highest = highest.max(qfi_flow_closed(
            ClosedForm::Dressed,
            t,
            FRAC_PI_2,
            &markovian,
        )?);
    }
    Ok(vec![
        Check::at_most("flow_integral", worst, 1e-3).with_note("T=10 points=10001"),
        Check::at_most("flow_sign_markovian", highest, 1e-9).with_note("largest flow, λ=5 Ω=0.05"),
    ])
}

/// `ω₀`, `φ` and `θ` dependence of the QFI curves.
pub fn check_invariance(level: Level) -> Result<Vec<Check>, CliError> {
    let samples = match level {
        Level::Quick => 201,
        Level::Full => 2001,
    };
    let g = grid(20.0, samples)?;
    let mut omega0_dev: f64 = 0.0;
    let mut phi_dev: f64 = 0.0;
    let mut theta_dev: f64 = 0.0;
    for p in preset_params() {
        for (spec, mode) in phase_families()? {
            let dressed = matches!(spec, InitialStateSpec::Dressed { .. });
            let make = |theta: f64, phi: f64| {
                if dressed {
                    InitialStateSpec::dressed(theta, phi)
                } else {
                    InitialStateSpec::standard(theta, phi)
                }
            };
            let reference = qfi_series(&spec, &p, &g, mode)?;
            for omega0 in [10.0, 100.0] {
                let q = p.with_omega0(omega0)?;
                for (a, b) in reference.iter().zip(qfi_series(&spec, &q, &g, mode)?) {
                    omega0_dev =
                        omega0_dev.max(max_deviation([a.f_closed - b.f_closed, a.f_sld - b.f_sld]));
                }
            }
            for phi in [FRAC_PI_3, 1.7] {
                for (a, b) in
                    reference
                        .iter()
                        .zip(qfi_series(&make(FRAC_PI_2, phi)?, &p, &g, mode)?)
                {
                    phi_dev =
                        phi_dev.max(max_deviation([a.f_closed - b.f_closed, a.f_sld - b.f_sld]));
                }
            }
            for theta in [0.0, FRAC_PI_4, 1.0] {
                let scale = theta.sin().powi(2);
                for (a, b) in reference
                    .iter()
                    .zip(qfi_series(&make(theta, 0.0)?, &p, &g, mode)?)
                {
                    theta_dev = theta_dev.max(max_deviation([b.f_closed - scale * a.f_closed]));
                }
            }
        }
    }
    Ok(vec![
        Check::at_most("omega0_invariance", omega0_dev, 1e-12).with_note("ω₀ ∈ {10, 50, 100}"),
        Check::at_most("phi_invariance", phi_dev, 1e-12).with_note("φ ∈ {0, π/3, 1.7}"),
        Check::at_most("theta_factorization", theta_dev, 1e-12),
    ])
}

/// Trace, Hermiticity and positivity of the analytic evolution.
pub fn check_conservation(level: Level) -> Result<Vec<Check>, CliError> {
    let samples = match level {
        Level::Quick => 201,
        Level::Full => 2001,
    };
    let g = grid(20.0, samples)?;
    let mut trace: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut lowest = f64::INFINITY;
    for p in preset_params() {
        for (spec, _) in phase_families()?.into_iter().step_by(2) {
            let r0 = initial_dressed_state(&spec)?;
            for t in g.times() {
                let r = evolve_dressed(&r0, t, &p)?;
                let rho = reduce_to_qubit(&r);
                trace = trace.max(max_deviation([
                    (r.trace() - 1.0).norm(),
                    (rho.trace() - 1.0).norm(),
                ]));
                herm = herm.max(r.hermiticity_deviation().max(rho.hermiticity_deviation()));
                lowest = lowest.min(rho.min_eigenvalue());
            }
        }
    }
    Ok(vec![
        Check::at_most("analytic_trace", trace, 1e-12),
        Check::at_most("analytic_hermiticity", herm, 1e-12),
        Check {
            name: "min_rho_eigenvalue",
            measured: lowest,
            tolerance: -1e-9,
            passed: lowest >= -1e-9,
            note: "accepted at or above the tolerance".into(),
        },
    ])
}

pub fn run_validation(level: Level, mutation: Mutation) -> Result<Report, CliError> {
    let mut checks = vec![check_quadrature(level)?];
    checks.extend(check_rk4(level)?);
    checks.push(check_sld(level, mutation)?);
    checks.push(check_dphi(level)?);
    checks.extend(check_flow()?);
    checks.extend(check_invariance(level)?);
    checks.extend(check_conservation(level)?);
    Ok(Report { checks })
}
