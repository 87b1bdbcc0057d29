//! Subsystem bookkeeping and quantum states: labeled tensor-factor layouts,
//! normalized state vectors, and density operators with partial traces over
//! arbitrary label subsets.
//!
//! Basis ordering convention: the leftmost factor of a layout is the most
//! significant index digit, so a layout `[(Q,2),(R,2)]` orders its basis as
//! `|00>, |01>, |10>, |11>` with `Q` first. Factors keep their construction
//! order everywhere, which is what makes entrywise matrix comparisons against
//! closed-form displays meaningful.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Norm tolerance for state vectors.
const KET_NORM_TOL: f64 = 1e-12;
/// Hermiticity and trace tolerance for density operators.
const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues in `[-POSITIVITY_FLOOR, 0)` are treated as roundoff zeros;
/// anything lower is an invariant failure.
pub const POSITIVITY_FLOOR: f64 = 1e-9;

/// An ordered list of labeled tensor factors with dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    factors: Vec<(String, usize)>,
}

impl SubsystemLayout {
    /// Builds a layout from `(label, dim)` pairs; labels must be unique and
    /// dimensions positive.
    pub fn new<L: Into<String>>(factors: Vec<(L, usize)>) -> Result<Self> {
        let factors: Vec<(String, usize)> =
            factors.into_iter().map(|(l, d)| (l.into(), d)).collect();
        for (i, (label, dim)) in factors.iter().enumerate() {
            assert!(*dim >= 1, "factor dimension must be at least 1");
            if factors[..i].iter().any(|(other, _)| other == label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { factors })
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|(l, _)| l.as_str())
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| d).product()
    }

    /// Position of a label in the factor list.
    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Returns a new layout with one more factor appended on the right.
    pub fn with_factor(&self, label: &str, dim: usize) -> Result<Self> {
        if self.position(label).is_ok() {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        let mut factors = self.factors.clone();
        factors.push((label.to_string(), dim));
        Self::new(factors)
    }

    /// Splits a flat basis index into per-factor digits, leftmost factor most
    /// significant.
    pub(crate) fn split_index(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0usize; self.factors.len()];
        for (slot, (_, dim)) in self.factors.iter().enumerate().rev() {
            digits[slot] = index % dim;
            index /= dim;
        }
        digits
    }

    /// Recombines per-factor digits into a flat basis index.
    pub(crate) fn join_index(&self, digits: &[usize]) -> usize {
        self.factors
            .iter()
            .zip(digits)
            .fold(0usize, |acc, ((_, dim), &digit)| acc * dim + digit)
    }
}

/// A normalized pure state over a [`SubsystemLayout`].
#[derive(Debug, Clone)]
pub struct Ket {
    layout: SubsystemLayout,
    amplitudes: Vec<Complex64>,
}

impl Ket {
    /// Wraps amplitudes over a layout; the vector must have the layout's
    /// total dimension and unit norm within 1e-12.
    pub fn new(layout: SubsystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                left: layout.total_dim(),
                right: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > KET_NORM_TOL {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(Self { layout, amplitudes })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Appends a fresh qubit ancilla prepared in `|0>`.
    pub fn extend_with_ancilla(&self, label: &str) -> Result<Self> {
        let layout = self.layout.with_factor(label, 2)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.amplitudes.len() * 2];
        for (i, amp) in self.amplitudes.iter().enumerate() {
            amplitudes[2 * i] = *amp;
        }
        Ket::new(layout, amplitudes)
    }

    /// Applies an operator on the full layout dimension.
    pub fn apply(&self, op: &ComplexMatrix) -> Result<Self> {
        let amplitudes = op.mul_vec(&self.amplitudes)?;
        Ket::new(self.layout.clone(), amplitudes)
    }

    /// The outer product `|psi><psi|` as a density operator.
    pub fn density(&self) -> DensityOp {
        let mat = ComplexMatrix::from_fn(self.amplitudes.len(), |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        DensityOp::new(self.layout.clone(), mat)
            .expect("outer product of a normalized ket is a valid density operator")
    }
}

/// The purified maximally mixed qubit `(|00> + |11>)/sqrt(2)` on `(Q, R)`;
/// tracing out the reference `R` leaves `Q` maximally mixed with unit entropy.
pub fn purified_mixed_input() -> Ket {
    let layout = SubsystemLayout::new(vec![("Q", 2), ("R", 2)]).expect("labels are unique");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amplitudes = vec![
        Complex64::new(h, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
    ];
    Ket::new(layout, amplitudes).expect("amplitudes are normalized")
}

/// A density operator tied to a subsystem layout.
///
/// Construction checks Hermiticity and unit trace (within 1e-10). Positivity
/// is enforced where eigenvalues are consumed: values in `[-1e-9, 0)` are
/// clamped to zero as roundoff, anything below `-1e-9` is an error.
#[derive(Debug, Clone)]
pub struct DensityOp {
    layout: SubsystemLayout,
    mat: ComplexMatrix,
}

impl DensityOp {
    pub fn new(layout: SubsystemLayout, mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                left: layout.total_dim(),
                right: mat.dim(),
            });
        }
        let dev = mat.hermiticity_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian {
                max_dev: dev,
                tol: DENSITY_TOL,
            });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        Ok(Self { layout, mat })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// The real diagonal, i.e. outcome probabilities in the computational
    /// product basis.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.mat.dim()).map(|i| self.mat.get(i, i).re).collect()
    }

    /// Purity `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let sq = self.mat.matmul(&self.mat).expect("same dimension");
        sq.trace().re
    }

    /// Eigenvalues sorted ascending, with the `[-1e-9, 0)` roundoff band
    /// clamped to zero; an eigenvalue below the band is an error.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let raw = self.mat.hermitian_eigenvalues(DENSITY_TOL)?;
        let mut eigs = Vec::with_capacity(raw.len());
        for lambda in raw {
            if lambda < -POSITIVITY_FLOOR {
                return Err(Error::NegativeEigenvalue(lambda));
            }
            eigs.push(lambda.max(0.0));
        }
        Ok(eigs)
    }

    /// Full invariant check: Hermiticity, unit trace, positivity.
    pub fn validate(&self) -> Result<()> {
        let dev = self.mat.hermiticity_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian {
                max_dev: dev,
                tol: DENSITY_TOL,
            });
        }
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        self.eigenvalues().map(|_| ())
    }

    /// Reduced density operator on the factors named in `keep`, which must be
    /// a nonempty subset of the layout labels. Kept factors stay in their
    /// original relative order regardless of the order given.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityOp> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        for label in keep {
            self.layout.position(label)?;
        }
        let kept_slots: Vec<usize> = (0..self.layout.factor_count())
            .filter(|slot| {
                let label = self.layout.factors[*slot].0.as_str();
                keep.contains(&label)
            })
            .collect();
        let traced_slots: Vec<usize> = (0..self.layout.factor_count())
            .filter(|slot| !kept_slots.contains(slot))
            .collect();

        let out_layout = SubsystemLayout::new(
            kept_slots
                .iter()
                .map(|&slot| self.layout.factors[slot].clone())
                .collect::<Vec<_>>(),
        )?;
        let traced_dim: usize = traced_slots
            .iter()
            .map(|&slot| self.layout.factors[slot].1)
            .product();
        let out_dim = out_layout.total_dim();

        let mut out = ComplexMatrix::zeros(out_dim);
        let mut digits_row = vec![0usize; self.layout.factor_count()];
        let mut digits_col = vec![0usize; self.layout.factor_count()];
        for i in 0..out_dim {
            let kept_row = out_layout.split_index(i);
            for j in 0..out_dim {
                let kept_col = out_layout.split_index(j);
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..traced_dim {
                    // Scatter kept and traced digits back into full-layout slots.
                    let mut rem = t;
                    for &slot in traced_slots.iter().rev() {
                        let dim = self.layout.factors[slot].1;
                        digits_row[slot] = rem % dim;
                        digits_col[slot] = rem % dim;
                        rem /= dim;
                    }
                    for (k, &slot) in kept_slots.iter().enumerate() {
                        digits_row[slot] = kept_row[k];
                        digits_col[slot] = kept_col[k];
                    }
                    let row = self.layout.join_index(&digits_row);
                    let col = self.layout.join_index(&digits_col);
                    acc += self.mat.get(row, col);
                }
                out.set(i, j, acc);
            }
        }
        DensityOp::new(out_layout, out)
    }
}
