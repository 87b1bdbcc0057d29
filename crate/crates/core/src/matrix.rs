//! Dense complex matrices sized for few-qubit operators (up to 32x32 here),
//! with Kronecker products and a cyclic Jacobi eigensolver for Hermitian
//! inputs. Entries are stored row-major as explicit (re, im) pairs.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum absolute off-diagonal magnitude at which the Jacobi iteration stops.
const JACOBI_EPS: f64 = 1e-13;
/// Upper bound on Jacobi sweeps; the matrices handled here converge in well
/// under ten.
const JACOBI_MAX_SWEEPS: usize = 100;

/// A dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension (`dim >= 1`).
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)` for every entry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a
    /// perfect square.
    pub fn from_rows(entries: Vec<Complex64>) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, entries.len(), "entry count must be a square");
        assert!(dim >= 1);
        Self { dim, data: entries }
    }

    /// Diagonal matrix from real entries.
    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Pauli X.
    pub fn pauli_x() -> Self {
        Self::from_rows(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
    }

    /// Pauli Y.
    pub fn pauli_y() -> Self {
        Self::from_rows(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ])
    }

    /// Pauli Z.
    pub fn pauli_z() -> Self {
        Self::diag(&[1.0, -1.0])
    }

    /// Kronecker (tensor) product; entry `((i*b.dim + k), (j*b.dim + l))` is
    /// `a(i,j) * b(k,l)`.
    pub fn kron(&self, other: &Self) -> Self {
        let bd = other.dim;
        let dim = self.dim * bd;
        let mut out = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a_ij = self.get(i, j);
                if a_ij == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..bd {
                    for l in 0..bd {
                        out.set(i * bd + k, j * bd + l, a_ij * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Standard matrix product; both operands must share a dimension.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a_ik = self.get(i, k);
                if a_ik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a_ik * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let n = self.dim;
        let out = (0..n)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .map(|(j, x)| self.get(i, j) * x)
                    .sum()
            })
            .collect();
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> Self {
        let f = factor.into();
        Self::from_fn(self.dim, |i, j| f * self.get(i, j))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(Self::from_fn(self.dim, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(Self::from_fn(self.dim, |i, j| {
            self.get(i, j) - other.get(i, j)
        }))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude of `self - other`; errors on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest magnitude of `a(i,j) - conj(a(j,i))` over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Real eigenvalues of a Hermitian matrix, sorted ascending.
    ///
    /// The input must satisfy `max |a - a†| <= tol`. Uses cyclic Jacobi
    /// rotations with a phase factored out of each pivot so the 2x2 update
    /// reduces to the real symmetric case.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        let dev = self.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian { max_dev: dev, tol });
        }
        let n = self.dim;
        // Work on the symmetrized copy so roundoff in the input cannot leak
        // imaginary parts into the diagonal.
        let mut a: Vec<Complex64> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(0.5 * (self.get(i, j) + self.get(j, i).conj()));
            }
        }
        if n == 1 {
            return Ok(vec![a[0].re]);
        }

        let mut converged = false;
        let mut off = 0.0;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a[p * n + q].norm());
                }
            }
            if off <= JACOBI_EPS {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    let r = apq.norm();
                    if r < 1e-300 {
                        continue;
                    }
                    let phase = apq / r; // e^{i phi}
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let tau = (aqq - app) / (2.0 * r);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let phase_conj = phase.conj();
                    // Column update: A <- A V with V = diag(1, e^{-i phi}) . J.
                    for i in 0..n {
                        let x = a[i * n + p];
                        let y = a[i * n + q] * phase_conj;
                        a[i * n + p] = c * x - s * y;
                        a[i * n + q] = s * x + c * y;
                    }
                    // Row update: A <- V† A.
                    for j in 0..n {
                        let u = a[p * n + j];
                        let v = a[q * n + j] * phase;
                        a[p * n + j] = c * u - s * v;
                        a[q * n + j] = s * u + c * v;
                    }
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                }
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
                off,
            });
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
        Ok(eigs)
    }
}
