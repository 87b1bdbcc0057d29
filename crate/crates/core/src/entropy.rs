//! Entropy functionals in bits: binary and Shannon entropy, von Neumann
//! entropy from eigenvalues, and tripartite entropy Venn diagrams.

use crate::error::{Error, Result};
use crate::state::DensityOp;

/// Inputs this far outside `[0, 1]` are rejected rather than clamped.
const PROB_SLACK: f64 = 1e-12;
/// Tolerance on the normalization of explicit distributions.
const DIST_SUM_TOL: f64 = 1e-9;

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy `H[x] = -x log2 x - (1-x) log2(1-x)`, with roundoff just
/// outside `[0, 1]` clamped.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&x) {
        return Err(Error::ProbabilityOutOfRange(x));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(-xlog2x(x) - xlog2x(1.0 - x))
}

/// Shannon entropy of a probability vector, `0 log 0 := 0`.
pub fn shannon(p: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &x in p {
        if x < -PROB_SLACK {
            return Err(Error::NegativeProbability(x));
        }
        sum += x;
    }
    if (sum - 1.0).abs() > DIST_SUM_TOL {
        return Err(Error::NotADistribution(sum));
    }
    Ok((-p.iter().map(|&x| xlog2x(x.max(0.0))).sum::<f64>()).max(0.0))
}

/// Von Neumann entropy `-Tr(rho log2 rho)` from the clamped eigenvalues.
/// Roundoff can leave an eigenvalue a few ulps above 1; the result is floored
/// at zero since the exact value cannot be negative.
pub fn von_neumann(rho: &DensityOp) -> Result<f64> {
    let eigs = rho.eigenvalues()?;
    Ok((-eigs.into_iter().map(xlog2x).sum::<f64>()).max(0.0))
}

/// Entropies of every subsystem subset of a three-factor state.
#[derive(Debug, Clone, Copy)]
pub struct SubsetEntropies3 {
    /// `S(X0), S(X1), S(X2)`.
    pub single: [f64; 3],
    /// Pairwise entropies ordered `(X0 X1), (X0 X2), (X1 X2)`.
    pub pair: [f64; 3],
    /// `S(X0 X1 X2)`.
    pub triple: f64,
}

/// Computes all seven subset entropies of a three-factor density operator.
pub fn subset_entropies(rho: &DensityOp) -> Result<SubsetEntropies3> {
    let labels: Vec<String> = rho.layout().labels().map(str::to_string).collect();
    if labels.len() != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            got: labels.len(),
        });
    }
    let l: Vec<&str> = labels.iter().map(String::as_str).collect();
    let s = |keep: &[&str]| -> Result<f64> { von_neumann(&rho.partial_trace(keep)?) };
    Ok(SubsetEntropies3 {
        single: [s(&[l[0]])?, s(&[l[1]])?, s(&[l[2]])?],
        pair: [s(&[l[0], l[1]])?, s(&[l[0], l[2]])?, s(&[l[1], l[2]])?],
        triple: von_neumann(rho)?,
    })
}

/// The seven regions of a tripartite entropy Venn diagram, all in bits.
///
/// `solo[i]` is the conditional entropy of party `i` given the other two;
/// the lens between parties `i` and `j` is their conditional mutual
/// information given the third; `center` is the triple mutual information.
/// The regions sum to the total entropy `S(X0 X1 X2)`.
#[derive(Debug, Clone)]
pub struct VennEntries3 {
    labels: [String; 3],
    solo: [f64; 3],
    pair_cond: [f64; 3], // ordered (0:1), (0:2), (1:2)
    center: f64,
    total: f64,
}

impl VennEntries3 {
    pub fn labels(&self) -> [&str; 3] {
        [&self.labels[0], &self.labels[1], &self.labels[2]]
    }

    /// `S(Xi | rest)`.
    pub fn solo(&self, party: usize) -> f64 {
        self.solo[party]
    }

    /// Conditional mutual information between two parties given the third.
    pub fn cond_mutual(&self, a: usize, b: usize) -> f64 {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        match (lo, hi) {
            (0, 1) => self.pair_cond[0],
            (0, 2) => self.pair_cond[1],
            (1, 2) => self.pair_cond[2],
            _ => panic!("parties must be distinct indices below 3"),
        }
    }

    /// Triple mutual information (the only region allowed to be negative
    /// classically as well as quantum mechanically).
    pub fn center(&self) -> f64 {
        self.center
    }

    /// Joint entropy of all three parties.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Smallest conditional mutual information; nonnegative up to roundoff by
    /// strong subadditivity.
    pub fn min_cond_mutual(&self) -> f64 {
        self.pair_cond.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Inclusion-exclusion consistency: regions minus total, ideally zero.
    pub fn closure_defect(&self) -> f64 {
        let sum: f64 =
            self.solo.iter().sum::<f64>() + self.pair_cond.iter().sum::<f64>() + self.center;
        sum - self.total
    }
}

/// Assembles the Venn regions from precomputed subset entropies.
pub fn venn_from_subsets(labels: [&str; 3], s: &SubsetEntropies3) -> VennEntries3 {
    let [s1, s2, s3] = s.single;
    let [s12, s13, s23] = s.pair;
    let t = s.triple;
    VennEntries3 {
        labels: labels.map(str::to_string),
        solo: [t - s23, t - s13, t - s12],
        pair_cond: [
            s13 + s23 - s3 - t, // I(X0:X1|X2)
            s12 + s23 - s2 - t, // I(X0:X2|X1)
            s12 + s13 - s1 - t, // I(X1:X2|X0)
        ],
        center: s1 + s2 + s3 - s12 - s13 - s23 + t,
        total: t,
    }
}

/// Tripartite entropy Venn diagram of a three-factor density operator.
pub fn venn3(rho: &DensityOp) -> Result<VennEntries3> {
    let subsets = subset_entropies(rho)?;
    let labels: Vec<&str> = rho.layout().labels().collect();
    Ok(venn_from_subsets([labels[0], labels[1], labels[2]], &subsets))
}
