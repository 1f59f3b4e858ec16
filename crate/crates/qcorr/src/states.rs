//! Two-qubit density matrices and the Bell-diagonal family.
//!
//! A Bell-diagonal state is fixed by the correlation triple
//! `c_i = Tr(rho sigma_i (x) sigma_i)`; it is a physical state exactly when
//! the triple lies in the tetrahedron with vertices (1,-1,1), (-1,1,1),
//! (1,1,-1), (-1,-1,-1), equivalently when all four Bell-basis eigenvalues
//! are nonnegative.

use num_complex::Complex64;
use thiserror::Error;

use crate::qmat::{hermitian_eig, kron, Complex, ComplexMatrix};

/// Physicality floor on Bell eigenvalues: boundary (rank-deficient) states pass.
pub const PHYSICALITY_TOL: f64 = 1e-12;
/// Validation tolerances for general density matrices.
pub const DENSITY_HERMITICITY_TOL: f64 = 1e-10;
pub const DENSITY_TRACE_TOL: f64 = 1e-10;
pub const DENSITY_PSD_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("correlation coefficient {name} = {value} outside [-1, 1]")]
    CoefficientOutOfRange { name: &'static str, value: f64 },
    #[error("unphysical correlation vector: {eigenvalue} = {value:.6} < 0")]
    Unphysical {
        eigenvalue: &'static str,
        value: f64,
    },
    #[error("density matrix must be 4x4, got {rows}x{cols}")]
    WrongDimensions { rows: usize, cols: usize },
    #[error("density matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("density matrix trace is {0:.12}, expected 1")]
    NotUnitTrace(f64),
    #[error("density matrix has negative eigenvalue {0:.6e}")]
    NotPositive(f64),
}

/// The correlation triple `(c1, c2, c3)` of a Bell-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CorrelationVector {
    /// Each coefficient must be finite and in `[-1, 1]`. Physicality is a
    /// separate, stronger condition checked by [`CorrelationVector::is_physical`].
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self, StateError> {
        for (name, value) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !value.is_finite() || value.abs() > 1.0 {
                return Err(StateError::CoefficientOutOfRange { name, value });
            }
        }
        Ok(Self { c1, c2, c3 })
    }

    /// Internal constructor for values produced by traces of valid states,
    /// which may overshoot the unit box by rounding error.
    pub(crate) fn from_traces(c1: f64, c2: f64, c3: f64) -> Self {
        let clamp = |x: f64| {
            debug_assert!(x.abs() <= 1.0 + 1e-9, "trace value {x} far outside [-1,1]");
            x.clamp(-1.0, 1.0)
        };
        Self {
            c1: clamp(c1),
            c2: clamp(c2),
            c3: clamp(c3),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Index (0-based) of the smallest `|c_i|`; ties go to the lowest index.
    pub fn argmin_abs(&self) -> usize {
        let a = self.as_array().map(f64::abs);
        let mut best = 0;
        for i in 1..3 {
            if a[i] < a[best] {
                best = i;
            }
        }
        best
    }

    /// Index (0-based) of the largest `|c_i|`; ties go to the lowest index.
    pub fn argmax_abs(&self) -> usize {
        let a = self.as_array().map(f64::abs);
        let mut best = 0;
        for i in 1..3 {
            if a[i] > a[best] {
                best = i;
            }
        }
        best
    }

    pub fn min_abs(&self) -> f64 {
        self.as_array()[self.argmin_abs()].abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array()[self.argmax_abs()].abs()
    }

    /// True when all four Bell eigenvalues are at least `-PHYSICALITY_TOL`.
    pub fn is_physical(&self) -> bool {
        bd_eigenvalues(self).min().1 >= -PHYSICALITY_TOL
    }

    pub(crate) fn require_physical(&self) -> Result<(), StateError> {
        let (name, value) = bd_eigenvalues(self).min();
        if value < -PHYSICALITY_TOL {
            return Err(StateError::Unphysical {
                eigenvalue: name,
                value,
            });
        }
        Ok(())
    }
}

/// Bell-basis spectrum of a Bell-diagonal state.
///
/// Conventions: `psi_pm = (|00> pm |11>)/sqrt(2)`, `phi_pm = (|01> pm |10>)/sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSpectrum {
    pub lambda_psi_plus: f64,
    pub lambda_psi_minus: f64,
    pub lambda_phi_plus: f64,
    pub lambda_phi_minus: f64,
}

impl BellSpectrum {
    pub fn as_array(&self) -> [f64; 4] {
        [
            self.lambda_psi_plus,
            self.lambda_psi_minus,
            self.lambda_phi_plus,
            self.lambda_phi_minus,
        ]
    }

    pub fn labels() -> [&'static str; 4] {
        [
            "lambda_psi_plus",
            "lambda_psi_minus",
            "lambda_phi_plus",
            "lambda_phi_minus",
        ]
    }

    /// Smallest eigenvalue with its label.
    pub fn min(&self) -> (&'static str, f64) {
        let vals = self.as_array();
        let mut best = 0;
        for i in 1..4 {
            if vals[i] < vals[best] {
                best = i;
            }
        }
        (Self::labels()[best], vals[best])
    }

    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }
}

/// Closed-form Bell-basis eigenvalues:
/// `lambda_psi_pm = (1 pm c1 mp c2 + c3)/4`, `lambda_phi_pm = (1 pm c1 pm c2 - c3)/4`.
///
/// The `-c3` sign in the phi pair comes from diagonalizing the density matrix
/// directly; see `verify` for the documented sign discrepancy against the
/// commonly printed `+c3` variant, which assigns a negative weight to the
/// valid Bell state (1,1,-1).
pub fn bd_eigenvalues(c: &CorrelationVector) -> BellSpectrum {
    let CorrelationVector { c1, c2, c3 } = *c;
    BellSpectrum {
        lambda_psi_plus: (1.0 + c1 - c2 + c3) / 4.0,
        lambda_psi_minus: (1.0 - c1 + c2 + c3) / 4.0,
        lambda_phi_plus: (1.0 + c1 + c2 - c3) / 4.0,
        lambda_phi_minus: (1.0 - c1 - c2 - c3) / 4.0,
    }
}

/// The printed-with-a-typo phi eigenvalues (`+c3` instead of `-c3`), kept so
/// the verification report can show the contradiction explicitly.
pub fn bd_eigenvalues_phi_sign_variant(c: &CorrelationVector) -> [f64; 2] {
    let CorrelationVector { c1, c2, c3 } = *c;
    [
        (1.0 + c1 + c2 + c3) / 4.0,
        (1.0 - c1 - c2 + c3) / 4.0,
    ]
}

/// A validated two-qubit density matrix in the computational basis
/// |00>, |01>, |10>, |11>.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: ComplexMatrix,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: ComplexMatrix) -> Result<Self, StateError> {
        if rho.rows() != 4 || rho.cols() != 4 {
            return Err(StateError::WrongDimensions {
                rows: rho.rows(),
                cols: rho.cols(),
            });
        }
        let defect = rho.hermiticity_defect();
        if defect > DENSITY_HERMITICITY_TOL {
            return Err(StateError::NotHermitian(defect));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(StateError::NotUnitTrace(tr.re));
        }
        let eig = hermitian_eig(&rho).map_err(|_| StateError::NotHermitian(defect))?;
        let min = eig
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min < -DENSITY_PSD_TOL {
            return Err(StateError::NotPositive(min));
        }
        Ok(Self { rho })
    }

    /// For internal constructions that are valid by algebra (dephasing,
    /// CPTP outputs of validated channels). Checked only in debug builds.
    pub(crate) fn from_matrix_unchecked(rho: ComplexMatrix) -> Self {
        debug_assert!(rho.rows() == 4 && rho.cols() == 4);
        debug_assert!(rho.hermiticity_defect() <= 1e-9);
        debug_assert!((rho.trace().re - 1.0).abs() <= 1e-9);
        Self { rho }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Spectrum of the density matrix, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.rho)
            .expect("validated state is Hermitian")
            .eigenvalues
    }

    /// True when `Tr(rho^2)` is 1 within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        let purity = (&self.rho * &self.rho).trace().re;
        (purity - 1.0).abs() <= tol
    }
}

/// Bell-diagonal density matrix from its correlation triple:
/// diagonal `(1 pm c3)/4`, anti-diagonal corners `(c1 - c2)/4`, inner
/// off-diagonal `(c1 + c2)/4`.
pub fn bd_from_c(c: &CorrelationVector) -> Result<TwoQubitState, StateError> {
    c.require_physical()?;
    let CorrelationVector { c1, c2, c3 } = *c;
    let mut rho = ComplexMatrix::zeros(4, 4);
    let re = |x: f64| Complex::new(x, 0.0);
    rho[(0, 0)] = re((1.0 + c3) / 4.0);
    rho[(1, 1)] = re((1.0 - c3) / 4.0);
    rho[(2, 2)] = re((1.0 - c3) / 4.0);
    rho[(3, 3)] = re((1.0 + c3) / 4.0);
    rho[(0, 3)] = re((c1 - c2) / 4.0);
    rho[(3, 0)] = re((c1 - c2) / 4.0);
    rho[(1, 2)] = re((c1 + c2) / 4.0);
    rho[(2, 1)] = re((c1 + c2) / 4.0);
    Ok(TwoQubitState::from_matrix_unchecked(rho))
}

/// Correlation triple of any two-qubit state: `c_i = Tr(rho sigma_i (x) sigma_i)`.
pub fn c_from_state(state: &TwoQubitState) -> CorrelationVector {
    let mut c = [0.0; 3];
    for (i, sigma) in ComplexMatrix::paulis().iter().enumerate() {
        let obs = kron(sigma, sigma);
        c[i] = (&obs * state.matrix()).trace().re;
    }
    CorrelationVector::from_traces(c[0], c[1], c[2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace over the complementary subsystem; returns the 2x2 marginal.
pub fn marginal(state: &TwoQubitState, subsystem: Subsystem) -> ComplexMatrix {
    let rho = state.matrix();
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                let (row, col) = match subsystem {
                    Subsystem::A => (2 * i + k, 2 * j + k), // trace out B
                    Subsystem::B => (2 * k + i, 2 * k + j), // trace out A
                };
                sum += rho[(row, col)];
            }
            out[(i, j)] = sum;
        }
    }
    out
}

/// Bloch vector of the `a` marginal: `x_i = Tr(rho sigma_i (x) I)`.
pub fn bloch_of_marginal(state: &TwoQubitState) -> [f64; 3] {
    let i2 = ComplexMatrix::identity(2);
    let mut x = [0.0; 3];
    for (i, sigma) in ComplexMatrix::paulis().iter().enumerate() {
        let obs = kron(sigma, &i2);
        x[i] = (&obs * state.matrix()).trace().re;
    }
    x
}

/// Uniform sample from the physical tetrahedron (rejection from the cube).
pub fn sample_physical_c<R: rand::Rng>(rng: &mut R) -> CorrelationVector {
    loop {
        let c = CorrelationVector {
            c1: rng.gen_range(-1.0..=1.0),
            c2: rng.gen_range(-1.0..=1.0),
            c3: rng.gen_range(-1.0..=1.0),
        };
        if c.is_physical() {
            return c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::frobenius_norm_sq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cv(c1: f64, c2: f64, c3: f64) -> CorrelationVector {
        CorrelationVector::new(c1, c2, c3).unwrap()
    }

    #[test]
    fn maximally_mixed_matrix() {
        let rho = bd_from_c(&cv(0.0, 0.0, 0.0)).unwrap();
        let expect = ComplexMatrix::identity(4).scale(0.25);
        assert!(rho.matrix().max_abs_diff(&expect) <= 1e-15);
    }

    #[test]
    fn bell_state_projectors() {
        // (1,-1,1) is the projector onto (|00> + |11>)/sqrt(2).
        let rho = bd_from_c(&cv(1.0, -1.0, 1.0)).unwrap();
        let mut psi_plus = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            psi_plus[(i, j)] = Complex::new(0.5, 0.0);
        }
        assert!(rho.matrix().max_abs_diff(&psi_plus) <= 1e-15);

        // (1,1,-1) is the projector onto (|01> + |10>)/sqrt(2).
        let rho = bd_from_c(&cv(1.0, 1.0, -1.0)).unwrap();
        let mut phi_plus = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            phi_plus[(i, j)] = Complex::new(0.5, 0.0);
        }
        assert!(rho.matrix().max_abs_diff(&phi_plus) <= 1e-15);
    }

    #[test]
    fn bd_rejects_unphysical() {
        let err = bd_from_c(&cv(1.0, 1.0, 1.0)).unwrap_err();
        match err {
            StateError::Unphysical { eigenvalue, value } => {
                assert_eq!(eigenvalue, "lambda_phi_minus");
                assert!((value + 0.5).abs() <= 1e-15);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn correlation_round_trip() {
        let c = cv(0.5, -0.4, 0.5);
        let back = c_from_state(&bd_from_c(&c).unwrap());
        assert!((back.c1 - c.c1).abs() <= 1e-12);
        assert!((back.c2 - c.c2).abs() <= 1e-12);
        assert!((back.c3 - c.c3).abs() <= 1e-12);

        let mm = c_from_state(&bd_from_c(&cv(0.0, 0.0, 0.0)).unwrap());
        assert_eq!(mm.as_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn round_trip_random_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let c = sample_physical_c(&mut rng);
            let back = c_from_state(&bd_from_c(&c).unwrap());
            for (a, b) in back.as_array().iter().zip(c.as_array()) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn bell_state_c_vector() {
        let mut psi_plus = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            psi_plus[(i, j)] = Complex::new(0.5, 0.0);
        }
        let c = c_from_state(&TwoQubitState::new(psi_plus).unwrap());
        assert!((c.c1 - 1.0).abs() <= 1e-12);
        assert!((c.c2 + 1.0).abs() <= 1e-12);
        assert!((c.c3 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn closed_spectrum_examples() {
        let s = bd_eigenvalues(&cv(0.0, 0.0, 0.0));
        assert_eq!(s.as_array(), [0.25; 4]);

        let s = bd_eigenvalues(&cv(1.0, -1.0, 1.0));
        assert_eq!(s.as_array(), [1.0, 0.0, 0.0, 0.0]);

        let s = bd_eigenvalues(&cv(1.0, 0.3, -0.3));
        let expect = [0.35, 0.0, 0.65, 0.0];
        for (a, b) in s.as_array().iter().zip(expect) {
            assert!((a - b).abs() <= 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn closed_spectrum_matches_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..1000 {
            let c = sample_physical_c(&mut rng);
            let mut closed = bd_eigenvalues(&c).as_array().to_vec();
            closed.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let numeric = bd_from_c(&c).unwrap().eigenvalues();
            for (a, b) in closed.iter().zip(&numeric) {
                assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn tetrahedron_membership_matches_eigenvalue_sign() {
        // The four Bell vertices are physical; pushing past any face is not.
        for v in [
            (1.0, -1.0, 1.0),
            (-1.0, 1.0, 1.0),
            (1.0, 1.0, -1.0),
            (-1.0, -1.0, -1.0),
        ] {
            assert!(cv(v.0, v.1, v.2).is_physical());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut inside = 0usize;
        for _ in 0..2000 {
            let c = CorrelationVector {
                c1: rng.gen_range(-1.0..=1.0),
                c2: rng.gen_range(-1.0..=1.0),
                c3: rng.gen_range(-1.0..=1.0),
            };
            // Tetrahedron as intersection of four half-spaces: these are the
            // Bell eigenvalues again but written as plane equations.
            let planes = [
                1.0 + c.c1 - c.c2 + c.c3,
                1.0 - c.c1 + c.c2 + c.c3,
                1.0 + c.c1 + c.c2 - c.c3,
                1.0 - c.c1 - c.c2 - c.c3,
            ];
            let geometric = planes.iter().all(|&p| p >= 0.0);
            assert_eq!(geometric, c.is_physical());
            inside += geometric as usize;
        }
        // Volume ratio tetrahedron : cube is 1/3.
        assert!((inside as f64 / 2000.0 - 1.0 / 3.0).abs() < 0.05);
    }

    #[test]
    fn marginals_of_bd_states_are_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let half = ComplexMatrix::identity(2).scale(0.5);
        for _ in 0..100 {
            let c = sample_physical_c(&mut rng);
            let rho = bd_from_c(&c).unwrap();
            for sub in [Subsystem::A, Subsystem::B] {
                assert!(marginal(&rho, sub).max_abs_diff(&half) <= 1e-14);
            }
        }
    }

    #[test]
    fn marginals_of_product_state() {
        let mut ket00 = ComplexMatrix::zeros(4, 4);
        ket00[(0, 0)] = Complex::new(1.0, 0.0);
        let rho = TwoQubitState::new(ket00).unwrap();
        for sub in [Subsystem::A, Subsystem::B] {
            let m = marginal(&rho, sub);
            assert!((m[(0, 0)].re - 1.0).abs() <= 1e-15);
            assert!(m[(1, 1)].norm() <= 1e-15);
        }
        assert_eq!(bloch_of_marginal(&rho), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn bloch_of_plus_zero_product() {
        // (|0> + |1>)/sqrt(2) (x) |0>
        let amp = Complex::new(0.5, 0.0);
        let mut rho = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
            rho[(i, j)] = amp;
        }
        let state = TwoQubitState::new(rho).unwrap();
        let x = bloch_of_marginal(&state);
        assert!((x[0] - 1.0).abs() <= 1e-12);
        assert!(x[1].abs() <= 1e-12);
        assert!(x[2].abs() <= 1e-12);
    }

    #[test]
    fn bloch_of_bd_state_vanishes() {
        let rho = bd_from_c(&cv(0.7, 0.2, -0.4)).unwrap();
        for x in bloch_of_marginal(&rho) {
            assert!(x.abs() <= 1e-14);
        }
    }

    #[test]
    fn state_validation_rejects_bad_input() {
        assert!(matches!(
            TwoQubitState::new(ComplexMatrix::identity(2)),
            Err(StateError::WrongDimensions { .. })
        ));
        assert!(matches!(
            TwoQubitState::new(ComplexMatrix::identity(4)),
            Err(StateError::NotUnitTrace(_))
        ));
        // Hermitian, trace one, but indefinite.
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = Complex::new(1.5, 0.0);
        m[(1, 1)] = Complex::new(-0.5, 0.0);
        assert!(matches!(
            TwoQubitState::new(m),
            Err(StateError::NotPositive(_))
        ));
    }

    #[test]
    fn coefficient_range_is_enforced() {
        assert!(CorrelationVector::new(1.2, 0.0, 0.0).is_err());
        assert!(CorrelationVector::new(0.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn bd_matrix_purity_matches_spectrum() {
        let pure = bd_from_c(&cv(1.0, 1.0, -1.0)).unwrap();
        assert!(pure.is_pure(1e-12));
        let mixed = bd_from_c(&cv(0.5, -0.4, 0.5)).unwrap();
        assert!(!mixed.is_pure(1e-6));
        assert!((frobenius_norm_sq(mixed.matrix()) - 0.415).abs() <= 1e-12);
    }
}
