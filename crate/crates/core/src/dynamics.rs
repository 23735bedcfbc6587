//! One-excitation dynamics in the dressed basis and reduction to the atom.
//!
//! Basis order everywhere is `(|E₁₊⟩, |E₁₋⟩, |E₀⟩)` with
//! `|E₁±⟩ = (|1g⟩ ± |0e⟩)/√2` and `|E₀⟩ = |0g⟩`.
//!
//! The 2×2 atomic matrix follows the partial-trace formulas as written:
//! entry `(0,0)` collects every population with the atom in `g` (it receives
//! `R₃₃`), entry `(1,1)` is the `|0e⟩` population, and the off-diagonal
//! `(0,1)` entry is `⟨e|ρ|g⟩ = (R₁₃ − R₂₃)/√2`. That is the transpose of the
//! physical matrix in `(g, e)` order; spectrum, purity and QFI are unaffected.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::kernels::{check_time, propagator_coeffs, PropagatorCoeffs};
use crate::params::PhysParams;

pub type DressedMatrix = Matrix3<Complex64>;
pub type QubitMatrix = Matrix2<Complex64>;

const NORM_TOLERANCE: f64 = 1e-12;

/// How the initial atom–cavity state is prepared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialStateSpec {
    /// `e^{iφ}sin(θ/2)(|E₁₊⟩ − |E₁₋⟩)/√2 + cos(θ/2)|E₀⟩`.
    Dressed { theta: f64, phi: f64 },
    /// Atom in `cos(θ/2)|e⟩ + e^{iφ}sin(θ/2)|g⟩`, cavity in vacuum.
    Standard { theta: f64, phi: f64 },
    /// Explicit dressed-basis amplitudes.
    Raw { amplitudes: [Complex64; 3] },
}

impl InitialStateSpec {
    pub fn dressed(theta: f64, phi: f64) -> Result<Self> {
        check_angles(theta, phi)?;
        Ok(InitialStateSpec::Dressed { theta, phi })
    }

    pub fn standard(theta: f64, phi: f64) -> Result<Self> {
        check_angles(theta, phi)?;
        Ok(InitialStateSpec::Standard { theta, phi })
    }

    pub fn raw(amplitudes: [Complex64; 3]) -> Result<Self> {
        let spec = InitialStateSpec::Raw { amplitudes };
        spec.validate()?;
        Ok(spec)
    }

    /// `cos(θ/2)|1g⟩ + e^{iφ}sin(θ/2)|0g⟩`: the excitation sits in the cavity
    /// and the atom starts in its ground state.
    pub fn cavity_excitation(theta: f64, phi: f64) -> Result<Self> {
        check_angles(theta, phi)?;
        Self::raw(cavity_excitation_amplitudes(theta, phi))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            InitialStateSpec::Dressed { theta, phi }
            | InitialStateSpec::Standard { theta, phi } => check_angles(theta, phi),
            InitialStateSpec::Raw { amplitudes } => {
                let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
                if (norm - 1.0).abs() > NORM_TOLERANCE || !norm.is_finite() {
                    Err(Error::NotNormalized(norm))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            InitialStateSpec::Dressed { theta, .. } | InitialStateSpec::Standard { theta, .. } => {
                Some(theta)
            }
            InitialStateSpec::Raw { .. } => None,
        }
    }

    /// Dressed-basis amplitudes of the initial pure state.
    pub fn amplitudes(&self) -> [Complex64; 3] {
        match *self {
            InitialStateSpec::Dressed { theta, phi } => {
                let (s, c) = (0.5 * theta).sin_cos();
                let excited = Complex64::from_polar(s * FRAC_1_SQRT_2, phi);
                [excited, -excited, Complex64::new(c, 0.0)]
            }
            InitialStateSpec::Standard { theta, phi } => {
                // |0e⟩ = (|E₁₊⟩ − |E₁₋⟩)/√2, |0g⟩ = |E₀⟩
                let (s, c) = (0.5 * theta).sin_cos();
                let excited = Complex64::new(c * FRAC_1_SQRT_2, 0.0);
                [excited, -excited, Complex64::from_polar(s, phi)]
            }
            InitialStateSpec::Raw { amplitudes } => amplitudes,
        }
    }

    /// `∂|ψ⟩/∂φ` in the dressed basis, for the families that carry `φ`.
    pub fn phase_derivative(&self) -> Option<[Complex64; 3]> {
        let i = Complex64::i();
        match *self {
            InitialStateSpec::Dressed { .. } => {
                let [a, b, _] = self.amplitudes();
                Some([i * a, i * b, Complex64::new(0.0, 0.0)])
            }
            InitialStateSpec::Standard { .. } => {
                let [_, _, g] = self.amplitudes();
                Some([Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), i * g])
            }
            InitialStateSpec::Raw { .. } => None,
        }
    }
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidParams(format!(
            "theta must lie in [0, π], got {theta}"
        )));
    }
    if !phi.is_finite() {
        return Err(Error::InvalidParams(format!(
            "phi must be finite, got {phi}"
        )));
    }
    Ok(())
}

/// Dressed-basis amplitudes of `cos(θ/2)|1g⟩ + e^{iφ}sin(θ/2)|0g⟩`.
pub fn cavity_excitation_amplitudes(theta: f64, phi: f64) -> [Complex64; 3] {
    let (s, c) = (0.5 * theta).sin_cos();
    let excited = Complex64::new(c * FRAC_1_SQRT_2, 0.0);
    [excited, excited, Complex64::from_polar(s, phi)]
}

/// `∂/∂φ` of [`cavity_excitation_amplitudes`].
pub fn cavity_excitation_phase_derivative(theta: f64, phi: f64) -> [Complex64; 3] {
    let [_, _, g] = cavity_excitation_amplitudes(theta, phi);
    let zero = Complex64::new(0.0, 0.0);
    [zero, zero, Complex64::i() * g]
}

/// Atom–cavity density matrix in the dressed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedState {
    pub t: f64,
    pub r: DressedMatrix,
}

impl DressedState {
    pub fn trace(&self) -> Complex64 {
        self.r.trace()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(self.r - self.r.adjoint()))
    }

    /// Smallest eigenvalue of the Hermitian part. Reported, never repaired.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.r + self.r.adjoint()).scale(0.5);
        SymmetricEigen::new(herm).eigenvalues.min()
    }
}

/// Reduced density matrix of the atom.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    pub t: f64,
    pub rho: QubitMatrix,
}

impl QubitState {
    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn purity(&self) -> f64 {
        (self.rho * self.rho).trace().re
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(self.rho - self.rho.adjoint()))
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues_2x2(&self.rho)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Ascending eigenvalues of the Hermitian part of a 2×2 matrix.
pub(crate) fn hermitian_eigenvalues_2x2(m: &QubitMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - radius, mean + radius]
}

pub(crate) fn max_abs<R: nalgebra::Dim, C: nalgebra::Dim, S>(
    m: &nalgebra::Matrix<Complex64, R, C, S>,
) -> f64
where
    S: nalgebra::RawStorage<Complex64, R, C>,
{
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `|ψ⟩⟨ψ|` for the prepared state.
pub fn initial_dressed_state(spec: &InitialStateSpec) -> Result<DressedState> {
    spec.validate()?;
    let psi = Vector3::from(spec.amplitudes());
    Ok(DressedState {
        t: 0.0,
        r: psi * psi.adjoint(),
    })
}

/// Applies the analytic propagator to any dressed-basis matrix whose lower
/// triangle is the conjugate of its upper one. Linear in `r`.
pub fn apply_propagator(r: &DressedMatrix, c: &PropagatorCoeffs) -> DressedMatrix {
    let r11 = r[(0, 0)] * c.a11;
    let r22 = r[(1, 1)] * c.a22;
    let r33 = r[(0, 0)] * c.a33_11 + r[(1, 1)] * c.a33_22 + r[(2, 2)];
    let r12 = r[(0, 1)] * c.a12;
    let r13 = r[(0, 2)] * c.a13;
    let r23 = r[(1, 2)] * c.a23;
    DressedMatrix::new(
        r11,
        r12,
        r13,
        r12.conj(),
        r22,
        r23,
        r13.conj(),
        r23.conj(),
        r33,
    )
}

/// Evolves a `t = 0` dressed state to time `t` with the analytic propagator.
pub fn evolve_dressed(r0: &DressedState, t: f64, p: &PhysParams) -> Result<DressedState> {
    if r0.t != 0.0 {
        return Err(Error::UnsupportedState(
            "evolution must start from a t = 0 state",
        ));
    }
    let coeffs = propagator_coeffs(t, p)?;
    Ok(DressedState {
        t,
        r: apply_propagator(&r0.r, &coeffs),
    })
}

/// Partial trace over the cavity, written in the dressed basis. Linear in `r`.
pub fn partial_trace(r: &DressedMatrix) -> QubitMatrix {
    let half = 0.5;
    let rho11 = (r[(0, 0)] + r[(0, 1)] + r[(1, 0)] + r[(1, 1)] + r[(2, 2)] * 2.0) * half;
    let rho12 = (r[(0, 2)] - r[(1, 2)]) * FRAC_1_SQRT_2;
    let rho21 = (r[(2, 0)] - r[(2, 1)]) * FRAC_1_SQRT_2;
    let rho22 = (r[(0, 0)] - r[(0, 1)] - r[(1, 0)] + r[(1, 1)]) * half;
    QubitMatrix::new(rho11, rho12, rho21, rho22)
}

pub fn reduce_to_qubit(r: &DressedState) -> QubitState {
    QubitState {
        t: r.t,
        rho: partial_trace(&r.r),
    }
}

/// Atomic state at every point of `grid`. Each sample is evaluated
/// independently from `t = 0`.
pub fn qubit_trajectory(
    spec: &InitialStateSpec,
    p: &PhysParams,
    grid: &TimeGrid,
) -> Result<Vec<QubitState>> {
    let r0 = initial_dressed_state(spec)?;
    grid.times()
        .map(|t| {
            check_time(t)?;
            evolve_dressed(&r0, t, p).map(|r| reduce_to_qubit(&r))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_matrix_eq(a: &DressedMatrix, b: &DressedMatrix, tol: f64) {
        let d = max_abs(&(a - b));
        assert!(d <= tol, "matrices differ by {d:e}\n{a}\n{b}");
    }

    #[test]
    fn dressed_ground_state() {
        let r = initial_dressed_state(&InitialStateSpec::dressed(0.0, 1.0).unwrap()).unwrap();
        let mut expected = DressedMatrix::zeros();
        expected[(2, 2)] = c(1.0);
        assert_matrix_eq(&r.r, &expected, 0.0);
    }

    #[test]
    fn dressed_half_angle_outer_product() {
        let r = initial_dressed_state(&InitialStateSpec::dressed(FRAC_PI_2, 0.0).unwrap())
            .unwrap()
            .r;
        let s = 0.5 * 2f64.sqrt().recip();
        assert_abs_diff_eq!(r[(0, 0)].re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(1, 1)].re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(2, 2)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(0, 1)].re, -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(0, 2)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(1, 2)].re, -s, epsilon = 1e-15);
    }

    #[test]
    fn standard_half_angle_outer_product() {
        let r = initial_dressed_state(&InitialStateSpec::standard(FRAC_PI_2, 0.0).unwrap())
            .unwrap()
            .r;
        let s = 0.5 * 2f64.sqrt().recip();
        assert_abs_diff_eq!(r[(0, 0)].re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(1, 1)].re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(0, 1)].re, -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(2, 2)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(0, 2)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(1, 2)].re, -s, epsilon = 1e-15);
    }

    #[test]
    fn raw_amplitudes_must_be_normalized() {
        let bad = [c(1.0), c(0.1), c(0.0)];
        assert!(matches!(
            InitialStateSpec::raw(bad),
            Err(Error::NotNormalized(_))
        ));
        let good = [c(0.6), c(0.0), Complex64::new(0.0, 0.8)];
        let r = initial_dressed_state(&InitialStateSpec::raw(good).unwrap()).unwrap();
        assert_abs_diff_eq!(r.trace().re, 1.0, epsilon = 1e-15);
        // rank one: R² = R
        assert_matrix_eq(&(r.r * r.r), &r.r, 1e-15);
    }

    #[test]
    fn evolution_at_zero_is_identity() {
        let p = PhysParams::with_default_omega0(5.0, 3.0).unwrap();
        let r0 = initial_dressed_state(&InitialStateSpec::dressed(1.1, 0.4).unwrap()).unwrap();
        let r = evolve_dressed(&r0, 0.0, &p).unwrap();
        assert_matrix_eq(&r.r, &r0.r, 0.0);
        assert!(evolve_dressed(&r0, -1.0, &p).is_err());
        assert!(evolve_dressed(&r, 1.0, &p).is_ok());
        let later = DressedState { t: 1.0, r: r0.r };
        assert!(evolve_dressed(&later, 1.0, &p).is_err());
    }

    #[test]
    fn ground_state_is_stationary() {
        let p = PhysParams::with_default_omega0(0.05, 3.0).unwrap();
        let r0 = initial_dressed_state(&InitialStateSpec::dressed(0.0, 0.0).unwrap()).unwrap();
        for k in 0..100 {
            let r = evolve_dressed(&r0, k as f64 * 0.37, &p).unwrap();
            assert_matrix_eq(&r.r, &r0.r, 0.0);
        }
    }

    #[test]
    fn excited_population_decay_example() {
        let p = PhysParams::with_default_omega0(5.0, 3.0).unwrap();
        let r0 =
            initial_dressed_state(&InitialStateSpec::dressed(FRAC_PI_2, 0.0).unwrap()).unwrap();
        let r = evolve_dressed(&r0, 1.0, &p).unwrap();
        // mpmath: e^{−I₊/2}/4
        assert_abs_diff_eq!(r.r[(0, 0)].re, 0.202173111409883827, epsilon = 1e-13);
        assert_abs_diff_eq!(r.trace().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn reduction_examples() {
        let mut ground = DressedMatrix::zeros();
        ground[(2, 2)] = c(1.0);
        let rho = partial_trace(&ground);
        assert_eq!(rho, QubitMatrix::new(c(1.0), c(0.0), c(0.0), c(0.0)));

        for spec in [
            InitialStateSpec::standard(FRAC_PI_2, 0.0).unwrap(),
            InitialStateSpec::dressed(FRAC_PI_2, 0.0).unwrap(),
        ] {
            let q = reduce_to_qubit(&initial_dressed_state(&spec).unwrap());
            assert_abs_diff_eq!(q.rho[(1, 1)].re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(q.rho[(0, 1)].norm(), 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(q.purity(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn standard_state_reduces_to_atom_state() {
        // atom ⊗ vacuum must come back as the atom's own density matrix
        let (theta, phi) = (1.2, 0.7);
        let q = reduce_to_qubit(
            &initial_dressed_state(&InitialStateSpec::standard(theta, phi).unwrap()).unwrap(),
        );
        let (s, cth) = (0.5 * theta).sin_cos();
        let e = c(cth);
        let g = Complex64::from_polar(s, phi);
        // ground population first, coherence ⟨e|ρ|g⟩
        let expected = QubitMatrix::new(g * g.conj(), e * g.conj(), g * e.conj(), e * e.conj());
        assert!(max_abs(&(q.rho - expected)) < 1e-15);
    }

    #[test]
    fn trajectory_conserves_trace() {
        let p = PhysParams::with_default_omega0(5.0, 0.05).unwrap();
        let grid = TimeGrid::new(10.0, 1001).unwrap();
        let spec = InitialStateSpec::dressed(FRAC_PI_2, 0.0).unwrap();
        let traj = qubit_trajectory(&spec, &p, &grid).unwrap();
        assert_eq!(traj.len(), 1001);
        for q in &traj {
            assert!((q.trace() - 1.0).norm() < 1e-12);
            assert_eq!(q.hermiticity_deviation(), 0.0);
        }
    }

    #[test]
    fn trajectory_is_independent_of_chunking() {
        let p = PhysParams::with_default_omega0(0.05, 3.0).unwrap();
        let spec = InitialStateSpec::standard(1.0, 0.3).unwrap();
        let full = qubit_trajectory(&spec, &p, &TimeGrid::new(2.0, 201).unwrap()).unwrap();
        let r0 = initial_dressed_state(&spec).unwrap();
        for k in (0..201).rev() {
            let t = full[k].t;
            let single = reduce_to_qubit(&evolve_dressed(&r0, t, &p).unwrap());
            assert_eq!(single, full[k]);
        }
    }

    #[test]
    fn eigenvalues_2x2() {
        let m = QubitMatrix::new(
            c(0.7),
            Complex64::new(0.1, 0.2),
            Complex64::new(0.1, -0.2),
            c(0.3),
        );
        let [lo, hi] = hermitian_eigenvalues_2x2(&m);
        let full = SymmetricEigen::new(m).eigenvalues;
        assert_abs_diff_eq!(lo, full.min(), epsilon = 1e-14);
        assert_abs_diff_eq!(hi, full.max(), epsilon = 1e-14);
    }
}
