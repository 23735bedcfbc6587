//! Quantum Fisher information of a two-level atom coupled to a leaky cavity.
//!
//! The cavity leaks into a zero-temperature reservoir with a Lorentzian
//! spectrum. In the one-excitation sector the atom–cavity density matrix
//! evolves under a second-order time-convolutionless master equation whose
//! solution is known in closed form; this crate evaluates that solution,
//! reduces it to the atom, and computes the QFI of the phase `φ` encoded in
//! the initial state.
//!
//! - [`kernels`]: spectral density, decay rates, their integrals, propagator
//!   coefficients and a Simpson quadrature cross-check.
//! - [`dynamics`]: initial states, analytic evolution, partial trace.
//! - [`tcl_oracle`]: RK4 integration of the master equation.
//! - [`qfi`]: SLD engine, closed forms, QFI flow and the Cramér–Rao bound.

pub mod dynamics;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod params;
pub mod qfi;
pub mod tcl_oracle;

pub use dynamics::{
    evolve_dressed, initial_dressed_state, qubit_trajectory, reduce_to_qubit, DressedState,
    InitialStateSpec, QubitState,
};
pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use kernels::{
    gamma_minus, gamma_plus, kernel_integrals, propagator_coeffs, quadrature_oracle,
    spectral_density, DecayChannel, KernelIntegrals, PropagatorCoeffs,
};
pub use params::PhysParams;
pub use qfi::{
    cramer_rao_bound, dphi_rho, qfi_closed_dressed, qfi_closed_standard, qfi_series, sld_qfi,
    ClosedForm, EstimationBound, Mode, QfiSample,
};
pub use tcl_oracle::{integrate, master_rhs, IntegratorConfig};
