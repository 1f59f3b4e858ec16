//! Dense complex linear algebra for the 2x2 and 4x4 matrices this crate
//! lives on: products, tensor products, Hermitian eigendecomposition, PSD
//! matrix functions and the norms used by the correlation measures.
//!
//! Everything here is deterministic: the eigensolver is a cyclic Jacobi
//! iteration with complex rotations, eigenvalues are returned in descending
//! order and eigenvector phases are fixed so repeated runs give identical
//! results.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Hermiticity tolerance accepted by [`hermitian_eig`] (max entry of `A - A†`).
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues above this (negative) floor are clamped to zero by [`psd_sqrt`].
pub const PSD_CLAMP_TOL: f64 = 1e-10;
/// Tolerance on `sum(eigenvalues) - 1` accepted by [`entropy_base2`].
pub const DISTRIBUTION_TOL: f64 = 1e-8;

const JACOBI_SWEEP_BUDGET: usize = 100;

#[derive(Debug, Error)]
pub enum QmatError {
    #[error("matrix is not Hermitian (max |a - a*| entry {0:.3e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.6e})")]
    NotPSD(f64),
    #[error("eigenvalues are not a probability distribution ({0})")]
    NotADistribution(String),
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Build from nested rows. Panics on ragged input or non-finite entries.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Self {
        let r = rows.len();
        assert!(r > 0, "matrix must have at least one row");
        let c = rows[0].len();
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    /// Pauli sigma_x.
    pub fn sigma_x() -> Self {
        let mut m = Self::zeros(2, 2);
        m[(0, 1)] = Complex::new(1.0, 0.0);
        m[(1, 0)] = Complex::new(1.0, 0.0);
        m
    }

    /// Pauli sigma_y.
    pub fn sigma_y() -> Self {
        let mut m = Self::zeros(2, 2);
        m[(0, 1)] = Complex::new(0.0, -1.0);
        m[(1, 0)] = Complex::new(0.0, 1.0);
        m
    }

    /// Pauli sigma_z.
    pub fn sigma_z() -> Self {
        let mut m = Self::zeros(2, 2);
        m[(0, 0)] = Complex::new(1.0, 0.0);
        m[(1, 1)] = Complex::new(-1.0, 0.0);
        m
    }

    /// The Pauli triple (sigma_x, sigma_y, sigma_z).
    pub fn paulis() -> [Self; 3] {
        [Self::sigma_x(), Self::sigma_y(), Self::sigma_z()]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        let mut m = self.clone();
        for z in &mut m.entries {
            *z = z.conj();
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(Complex::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex) -> Self {
        let mut m = self.clone();
        for z in &mut m.entries {
            *z *= s;
        }
        m
    }

    /// Max entry magnitude of `A - A†`; zero for exactly Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Max entry magnitude of the difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut m = self.clone();
        for (z, w) in m.entries.iter_mut().zip(&rhs.entries) {
            *z += w;
        }
        m
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut m = self.clone();
        for (z, w) in m.entries.iter_mut().zip(&rhs.entries) {
            *z -= w;
        }
        m
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut m = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    m[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        m
    }
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let za = a[(ia, ja)];
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    m[(ia * b.rows() + ib, ja * b.cols() + jb)] = za * b[(ib, jb)];
                }
            }
        }
    }
    m
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; eigenvectors are the corresponding
/// columns of `eigenvectors`, each with its first non-negligible component
/// rotated to the positive real axis.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    /// `V diag(eigenvalues) V†`, for residual checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut d = ComplexMatrix::zeros(n, n);
        for (i, &lam) in self.eigenvalues.iter().enumerate() {
            d[(i, i)] = Complex::new(lam, 0.0);
        }
        &(v * &d) * &v.adjoint()
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigenSystem, QmatError> {
    assert!(a.is_square(), "eigendecomposition of a non-square matrix");
    assert!(a.is_finite(), "non-finite matrix entry");
    let defect = a.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(QmatError::NotHermitian(defect));
    }

    let n = a.rows();
    // Symmetrize so the iteration starts from an exactly Hermitian matrix.
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = (a[(i, j)] + a[(j, i)].conj()) * Complex::new(0.5, 0.0);
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = frobenius_norm_sq(&h).sqrt().max(1.0);
    let off_tol = 1e-15 * scale;

    let mut converged = false;
    for _sweep in 0..JACOBI_SWEEP_BUDGET {
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off_sq += h[(p, q)].norm_sqr();
            }
        }
        if off_sq.sqrt() <= off_tol {
            converged = true;
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                let r = hpq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = hpq / r; // e^{i alpha}
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // H <- R† H R with R the plane rotation
                //   R_pp = c, R_pq = s e^{i alpha}, R_qp = -s e^{-i alpha}, R_qq = c.
                let new_pp = app * c * c - 2.0 * r * s * c + aqq * s * s;
                let new_qq = app * s * s + 2.0 * r * s * c + aqq * c * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let hkp = h[(k, p)];
                    let hkq = h[(k, q)];
                    let np = hkp * c - hkq * (phase.conj() * s);
                    let nq = hkp * (phase * s) + hkq * c;
                    h[(k, p)] = np;
                    h[(p, k)] = np.conj();
                    h[(k, q)] = nq;
                    h[(q, k)] = nq.conj();
                }
                h[(p, p)] = Complex::new(new_pp, 0.0);
                h[(q, q)] = Complex::new(new_qq, 0.0);
                h[(p, q)] = Complex::new(0.0, 0.0);
                h[(q, p)] = Complex::new(0.0, 0.0);

                // V <- V R
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * (phase.conj() * s);
                    v[(k, q)] = vkp * (phase * s) + vkq * c;
                }
            }
        }
    }
    if !converged {
        return Err(QmatError::NoConvergence(JACOBI_SWEEP_BUDGET));
    }

    // Sort descending by eigenvalue; stable so degenerate blocks keep the
    // deterministic Jacobi ordering.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(j, j)].re.partial_cmp(&h[(i, i)].re).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        eigenvalues.push(h[(src, src)].re);
        // Phase convention: first component above threshold made real-positive.
        let mut phase = Complex::new(1.0, 0.0);
        for k in 0..n {
            let z = v[(k, src)];
            if z.norm() > 1e-8 {
                phase = z.conj() / z.norm();
                break;
            }
        }
        for k in 0..n {
            eigenvectors[(k, col)] = v[(k, src)] * phase;
        }
    }

    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Hermitian square root of a PSD matrix.
///
/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are clamped to zero; anything more
/// negative is rejected.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix, QmatError> {
    let eig = hermitian_eig(a)?;
    if let Some(&min) = eig
        .eigenvalues
        .iter()
        .min_by(|x, y| x.partial_cmp(y).unwrap())
    {
        if min < -PSD_CLAMP_TOL {
            return Err(QmatError::NotPSD(min));
        }
    }
    let n = eig.eigenvalues.len();
    let v = &eig.eigenvectors;
    let mut d = ComplexMatrix::zeros(n, n);
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        d[(i, i)] = Complex::new(lam.max(0.0).sqrt(), 0.0);
    }
    let b = &(v * &d) * &v.adjoint();
    // Force the result exactly Hermitian.
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (b[(i, j)] + b[(j, i)].conj()) * Complex::new(0.5, 0.0);
        }
    }
    Ok(out)
}

/// Trace norm: sum of singular values, via the spectrum of `A†A`.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    assert!(a.is_square(), "trace norm of a non-square matrix");
    let gram = &a.adjoint() * a;
    let eig = hermitian_eig(&gram).expect("A†A is Hermitian by construction");
    eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum()
}

/// Squared Frobenius (Hilbert-Schmidt) norm.
pub fn frobenius_norm_sq(a: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            s += a[(i, j)].norm_sqr();
        }
    }
    s
}

/// Shannon entropy (base 2) of a spectrum, with `0 log 0 = 0`.
pub fn entropy_base2(eigenvalues: &[f64]) -> Result<f64, QmatError> {
    let sum: f64 = eigenvalues.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(QmatError::NotADistribution(format!(
            "sum = {sum:.12}, expected 1"
        )));
    }
    if let Some(&min) = eigenvalues
        .iter()
        .min_by(|x, y| x.partial_cmp(y).unwrap())
    {
        if min < -PSD_CLAMP_TOL {
            return Err(QmatError::NotADistribution(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
    }
    let mut h = 0.0;
    for &lam in eigenvalues {
        let l = lam.max(0.0);
        if l > 0.0 {
            h -= l * l.log2();
        }
    }
    Ok(h)
}

/// Random Hermitian matrix with entries of order one, for tests and the
/// verification suites.
pub fn sample_hermitian<R: rand::Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = (g[(i, j)] + g[(j, i)].conj()) * Complex::new(0.5, 0.0);
        }
    }
    h
}

/// Random unitary matrix: Gram-Schmidt on a random complex matrix.
pub fn sample_unitary<R: rand::Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        if let Some(u) = gram_schmidt(&g) {
            return u;
        }
    }
}

fn gram_schmidt(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = g.rows();
    let mut u = g.clone();
    for j in 0..n {
        // Two passes of re-orthogonalization for stability.
        for _ in 0..2 {
            for prev in 0..j {
                let mut dot = Complex::new(0.0, 0.0);
                for k in 0..n {
                    dot += u[(k, prev)].conj() * u[(k, j)];
                }
                for k in 0..n {
                    let correction = dot * u[(k, prev)];
                    u[(k, j)] -= correction;
                }
            }
        }
        let norm: f64 = (0..n).map(|k| u[(k, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None; // nearly dependent columns, resample
        }
        for k in 0..n {
            u[(k, j)] /= Complex::new(norm, 0.0);
        }
    }
    Some(u)
}
