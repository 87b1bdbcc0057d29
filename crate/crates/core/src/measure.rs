//! Measurement bases, strong and weak measurement unitaries, and the full
//! three-measurement protocol.
//!
//! A measurement at basis angle `theta` couples the system qubit to a fresh
//! ancilla: the ancilla is left alone on the `|theta>` branch and driven away
//! from `|0>` on the orthogonal `|theta-bar>` branch. For a strong coupling
//! the drive is a flip; for strength `epsilon < 1` it is a partial rotation
//! taking `|0>` to `sqrt(1 - eps^2)|0> + eps|1>`, which reduces to the strong
//! case (up to a sign on the already-flipped ancilla component that never
//! enters the protocol) as `epsilon -> 1` and to the identity as
//! `epsilon -> 0`.
//!
//! Angle convention: `|theta> = cos(theta/2)|0'> + sin(theta/2)|1'>` and
//! `|theta-bar> = -sin(theta/2)|0'> + cos(theta/2)|1'>`, each angle measured
//! relative to the previous measurement basis `{|0'>, |1'>}`. Relative angles
//! compose additively in this convention, so the protocol tracks the running
//! basis angle internally and never exposes lab-frame angles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::state::{purified_mixed_input, DensityOp, Ket, SubsystemLayout};

/// One measurement step: basis angle (radians, relative to the previous
/// basis) and coupling strength in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSpec {
    theta: f64,
    epsilon: f64,
}

impl MeasurementSpec {
    pub fn new(theta: f64, epsilon: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteAngle(theta));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        Ok(Self { theta, epsilon })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// The orthonormal basis pair `(|theta>, |theta-bar>)` expressed in the
/// previous basis. Components are real in this convention.
pub fn basis_pair(theta: f64) -> ([f64; 2], [f64; 2]) {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    ([c, s], [-s, c])
}

/// Embeds a two-factor operator (4x4, system tensor ancilla) into the full
/// layout, acting as the identity on every other factor.
fn embed_pair_op(
    block: &ComplexMatrix,
    system_label: &str,
    ancilla_label: &str,
    layout: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    let sys_slot = layout.position(system_label)?;
    let anc_slot = layout.position(ancilla_label)?;
    let dim = layout.total_dim();
    let digit_table: Vec<Vec<usize>> = (0..dim).map(|i| layout.split_index(i)).collect();

    let mut out = ComplexMatrix::zeros(dim);
    for (row, row_digits) in digit_table.iter().enumerate() {
        for (col, col_digits) in digit_table.iter().enumerate() {
            let identity_elsewhere = (0..row_digits.len())
                .filter(|slot| *slot != sys_slot && *slot != anc_slot)
                .all(|slot| row_digits[slot] == col_digits[slot]);
            if !identity_elsewhere {
                continue;
            }
            let block_row = row_digits[sys_slot] * 2 + row_digits[anc_slot];
            let block_col = col_digits[sys_slot] * 2 + col_digits[anc_slot];
            out.set(row, col, block.get(block_row, block_col));
        }
    }
    Ok(out)
}

/// The 4x4 system-ancilla coupling block at basis angle `theta`: identity on
/// the `|theta>` branch, `drive` on the ancilla in the `|theta-bar>` branch.
fn coupling_block(theta: f64, drive: &ComplexMatrix) -> ComplexMatrix {
    let (plus, minus) = basis_pair(theta);
    let proj = |v: [f64; 2]| {
        ComplexMatrix::from_fn(2, |i, j| Complex64::new(v[i] * v[j], 0.0))
    };
    let eye = ComplexMatrix::identity(2);
    proj(plus)
        .kron(&eye)
        .add(&proj(minus).kron(drive))
        .expect("blocks share dimension 4")
}

/// Strong (projective) measurement unitary at basis angle `theta`, coupling
/// `system_label` to `ancilla_label` and acting as the identity elsewhere.
pub fn strong_unitary(
    theta: f64,
    system_label: &str,
    ancilla_label: &str,
    layout: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    let spec = MeasurementSpec::new(theta, 1.0)?;
    let block = coupling_block(spec.theta(), &ComplexMatrix::pauli_x());
    embed_pair_op(&block, system_label, ancilla_label, layout)
}

/// Weak measurement unitary of strength `epsilon`: on the `|theta-bar>`
/// branch the ancilla is rotated `|0> -> sqrt(1-eps^2)|0> + eps|1>` and
/// `|1> -> -eps|0> + sqrt(1-eps^2)|1>`; the `|theta>` branch is untouched.
/// Built in closed form on the 4-dim block, no matrix exponential involved.
pub fn weak_unitary(
    theta: f64,
    epsilon: f64,
    system_label: &str,
    ancilla_label: &str,
    layout: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    let spec = MeasurementSpec::new(theta, epsilon)?;
    let cos_g = (1.0 - spec.epsilon() * spec.epsilon()).sqrt();
    let drive = ComplexMatrix::from_rows(vec![
        Complex64::new(cos_g, 0.0),
        Complex64::new(-spec.epsilon(), 0.0),
        Complex64::new(spec.epsilon(), 0.0),
        Complex64::new(cos_g, 0.0),
    ]);
    let block = coupling_block(spec.theta(), &drive);
    embed_pair_op(&block, system_label, ancilla_label, layout)
}

/// Joint detector state and its marginals after the three measurements.
#[derive(Debug, Clone)]
pub struct ProtocolResult {
    /// Final pure state over `(Q, R, A1, A2, A3)`.
    pub final_ket: Ket,
    /// Joint detector state over `(A1, A2, A3)`.
    pub rho123: DensityOp,
    pub rho12: DensityOp,
    pub rho23: DensityOp,
    pub rho13: DensityOp,
    /// Marginal of the middle detector.
    pub rho2: DensityOp,
}

/// Runs the full protocol on the purified maximally mixed input.
///
/// The first measurement is strong in the computational basis, the second is
/// at `theta1` relative to the first with strength `epsilon2`, the third is
/// strong at `theta2` relative to the second. Relative angles add in the
/// half-angle convention, so the running absolute angles are `0`, `theta1`,
/// `theta1 + theta2`.
pub fn run_protocol(theta1: f64, theta2: f64, epsilon2: f64) -> Result<ProtocolResult> {
    let second = MeasurementSpec::new(theta1, epsilon2)?;
    let third = MeasurementSpec::new(theta2, 1.0)?;

    let psi = purified_mixed_input().extend_with_ancilla("A1")?;
    let u1 = strong_unitary(0.0, "Q", "A1", psi.layout())?;
    let psi = psi.apply(&u1)?;

    let psi = psi.extend_with_ancilla("A2")?;
    let u2 = weak_unitary(
        second.theta(),
        second.epsilon(),
        "Q",
        "A2",
        psi.layout(),
    )?;
    let psi = psi.apply(&u2)?;

    let psi = psi.extend_with_ancilla("A3")?;
    let u3 = strong_unitary(second.theta() + third.theta(), "Q", "A3", psi.layout())?;
    let psi = psi.apply(&u3)?;

    let rho123 = psi.density().partial_trace(&["A1", "A2", "A3"])?;
    let rho12 = rho123.partial_trace(&["A1", "A2"])?;
    let rho23 = rho123.partial_trace(&["A2", "A3"])?;
    let rho13 = rho123.partial_trace(&["A1", "A3"])?;
    let rho2 = rho123.partial_trace(&["A2"])?;

    Ok(ProtocolResult {
        final_ket: psi,
        rho123,
        rho12,
        rho23,
        rho13,
        rho2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::von_neumann;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Joint detector matrix the protocol must reproduce at `epsilon = 1`:
    /// diagonal `(c1^2 c2^2, c1^2 s2^2, s1^2 s2^2, s1^2 c2^2, s1^2 c2^2,
    /// s1^2 s2^2, c1^2 s2^2, c1^2 c2^2)/2` with off-diagonal pairs
    /// `-+x, +x, +x, -x` at (0,2), (1,3), (4,6), (5,7), `x = s1 c1 s2 c2 / 2`.
    fn expected_strong_joint(theta1: f64, theta2: f64) -> ComplexMatrix {
        let (c1, s1) = ((theta1 / 2.0).cos(), (theta1 / 2.0).sin());
        let (c2, s2) = ((theta2 / 2.0).cos(), (theta2 / 2.0).sin());
        let mut m = ComplexMatrix::zeros(8);
        let diag = [
            c1 * c1 * c2 * c2,
            c1 * c1 * s2 * s2,
            s1 * s1 * s2 * s2,
            s1 * s1 * c2 * c2,
            s1 * s1 * c2 * c2,
            s1 * s1 * s2 * s2,
            c1 * c1 * s2 * s2,
            c1 * c1 * c2 * c2,
        ];
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, c(d / 2.0, 0.0));
        }
        let x = s1 * c1 * s2 * c2 / 2.0;
        for (i, j, sign) in [(0, 2, -1.0), (1, 3, 1.0), (4, 6, 1.0), (5, 7, -1.0)] {
            m.set(i, j, c(sign * x, 0.0));
            m.set(j, i, c(sign * x, 0.0));
        }
        m
    }

    fn two_factor_layout() -> SubsystemLayout {
        SubsystemLayout::new(vec![("Q", 2), ("A", 2)]).unwrap()
    }

    fn protocol_layout() -> SubsystemLayout {
        SubsystemLayout::new(vec![("Q", 2), ("R", 2), ("A1", 2), ("A2", 2), ("A3", 2)]).unwrap()
    }

    #[test]
    fn basis_pair_reference_angles() {
        let (plus, minus) = basis_pair(0.0);
        assert_eq!(plus, [1.0, 0.0]);
        assert_eq!(minus, [0.0, 1.0]);

        let (plus, minus) = basis_pair(PI);
        assert!((plus[0]).abs() < 1e-15 && (plus[1] - 1.0).abs() < 1e-15);
        assert!((minus[0] + 1.0).abs() < 1e-15 && (minus[1]).abs() < 1e-15);

        let (plus, minus) = basis_pair(PI / 2.0);
        assert!((plus[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((plus[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((minus[0] + FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((minus[1] - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn basis_pair_is_orthonormal() {
        for k in 0..=16 {
            let theta = k as f64 * PI / 8.0 - PI;
            let (plus, minus) = basis_pair(theta);
            let dot = plus[0] * minus[0] + plus[1] * minus[1];
            assert!(dot.abs() < 1e-14);
            assert!((plus[0] * plus[0] + plus[1] * plus[1] - 1.0).abs() < 1e-14);
            assert!((minus[0] * minus[0] + minus[1] * minus[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn strong_unitary_matches_kron_construction() {
        // On (Q, R, A1) the coupling acts on the outer factors with the
        // reference untouched in between, so a Kronecker chain with an
        // identity in the middle slot must give the same matrix.
        let layout = SubsystemLayout::new(vec![("Q", 2), ("R", 2), ("A1", 2)]).unwrap();
        let u = strong_unitary(0.0, "Q", "A1", &layout).unwrap();
        let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag(&[0.0, 1.0]);
        let eye = ComplexMatrix::identity(2);
        let expected = p0
            .kron(&eye)
            .kron(&eye)
            .add(&p1.kron(&eye).kron(&ComplexMatrix::pauli_x()))
            .unwrap();
        assert!(u.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn strong_unitary_is_an_involution() {
        let layout = two_factor_layout();
        for theta in [0.0, 0.4, PI / 2.0, 2.4] {
            let u = strong_unitary(theta, "Q", "A", &layout).unwrap();
            let uu = u.matmul(&u).unwrap();
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(4)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn strong_unitary_copies_the_flipped_branch() {
        // |1>|0> -> |1>|1> for a computational-basis measurement.
        let layout = two_factor_layout();
        let u = strong_unitary(0.0, "Q", "A", &layout).unwrap();
        let ket = Ket::new(
            layout,
            vec![c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)],
        )
        .unwrap();
        let out = ket.apply(&u).unwrap();
        assert!((out.amplitudes()[3].re - 1.0).abs() < 1e-15);
        assert!(out.amplitudes().iter().take(3).all(|a| a.norm() < 1e-15));
    }

    #[test]
    fn unknown_labels_are_rejected() {
        let layout = two_factor_layout();
        assert!(matches!(
            strong_unitary(0.0, "Q", "B", &layout),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            weak_unitary(0.0, 0.5, "X", "A", &layout),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn weak_unitary_limits() {
        let layout = two_factor_layout();
        for theta in [0.0, 0.7, PI / 2.0, 3.0] {
            // Zero strength: no measurement takes place.
            let u0 = weak_unitary(theta, 0.0, "Q", "A", &layout).unwrap();
            assert!(u0.max_abs_diff(&ComplexMatrix::identity(4)).unwrap() < 1e-14);

            // Full strength: strong unitary up to the sign of the ancilla
            // |1> -> -|0> component on the driven branch.
            let u1 = weak_unitary(theta, 1.0, "Q", "A", &layout).unwrap();
            let (_, minus) = basis_pair(theta);
            let proj_minus =
                ComplexMatrix::from_fn(2, |i, j| c(minus[i] * minus[j], 0.0));
            let proj_plus = ComplexMatrix::identity(2).sub(&proj_minus).unwrap();
            let rot = ComplexMatrix::from_rows(vec![
                c(0., 0.),
                c(-1., 0.),
                c(1., 0.),
                c(0., 0.),
            ]);
            let expected = proj_plus
                .kron(&ComplexMatrix::identity(2))
                .add(&proj_minus.kron(&rot))
                .unwrap();
            assert!(u1.max_abs_diff(&expected).unwrap() < 1e-14);

            // On an ancilla prepared in |0> the sign never enters, so the
            // two operators agree column by column there.
            let strong = strong_unitary(theta, "Q", "A", &layout).unwrap();
            for col in [0, 2] {
                for row in 0..4 {
                    assert!((u1.get(row, col) - strong.get(row, col)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn weak_unitary_rotates_ancilla_on_the_driven_branch() {
        let layout = two_factor_layout();
        let theta = 0.9f64;
        let u = weak_unitary(theta, 0.6, "Q", "A", &layout).unwrap();
        let (plus, minus) = basis_pair(theta);

        // System on the driven |theta-bar> branch: ancilla |0> -> (0.8, 0.6).
        let ket = Ket::new(
            layout.clone(),
            vec![c(minus[0], 0.), c(0., 0.), c(minus[1], 0.), c(0., 0.)],
        )
        .unwrap();
        let out = ket.apply(&u).unwrap();
        let anc0 = out.amplitudes()[0] * c(minus[0], 0.) + out.amplitudes()[2] * c(minus[1], 0.);
        let anc1 = out.amplitudes()[1] * c(minus[0], 0.) + out.amplitudes()[3] * c(minus[1], 0.);
        assert!((anc0.re - 0.8).abs() < 1e-12);
        assert!((anc1.re - 0.6).abs() < 1e-12);

        // System on the |theta> branch: nothing happens.
        let ket = Ket::new(
            layout,
            vec![c(plus[0], 0.), c(0., 0.), c(plus[1], 0.), c(0., 0.)],
        )
        .unwrap();
        let out = ket.apply(&u).unwrap();
        assert!((out.amplitudes()[0].re - plus[0]).abs() < 1e-12);
        assert!((out.amplitudes()[2].re - plus[1]).abs() < 1e-12);
        assert!(out.amplitudes()[1].norm() < 1e-12);
        assert!(out.amplitudes()[3].norm() < 1e-12);
    }

    #[test]
    fn epsilon_out_of_range_is_rejected() {
        let layout = two_factor_layout();
        assert!(matches!(
            weak_unitary(0.0, 1.5, "Q", "A", &layout),
            Err(Error::EpsilonOutOfRange(_))
        ));
        assert!(matches!(
            run_protocol(0.0, 0.0, -0.1),
            Err(Error::EpsilonOutOfRange(_))
        ));
    }

    #[test]
    fn constructed_operators_are_unitary_on_the_protocol_layout() {
        let layout = protocol_layout();
        let eye = ComplexMatrix::identity(32);
        for k in 0..=8 {
            let theta = k as f64 * PI / 8.0;
            let u = strong_unitary(theta, "Q", "A3", &layout).unwrap();
            assert!(u.matmul(&u.adjoint()).unwrap().max_abs_diff(&eye).unwrap() <= 1e-12);
            for epsilon in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let w = weak_unitary(theta, epsilon, "Q", "A2", &layout).unwrap();
                assert!(
                    w.matmul(&w.adjoint()).unwrap().max_abs_diff(&eye).unwrap() <= 1e-12
                );
            }
        }
    }

    #[test]
    fn protocol_ket_is_normalized_across_the_grid() {
        for k1 in 0..=4 {
            for k2 in 0..=4 {
                for epsilon in [0.0, 0.5, 1.0] {
                    let t1 = k1 as f64 * PI / 4.0;
                    let t2 = k2 as f64 * PI / 4.0;
                    let result = run_protocol(t1, t2, epsilon).unwrap();
                    assert!((result.final_ket.norm() - 1.0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn aligned_strong_measurements_copy_perfectly() {
        let result = run_protocol(0.0, 0.0, 1.0).unwrap();
        let diag = result.rho123.diagonal();
        assert!((diag[0] - 0.5).abs() < 1e-14);
        assert!((diag[7] - 0.5).abs() < 1e-14);
        for p in &diag[1..7] {
            assert!(p.abs() < 1e-14);
        }
    }

    #[test]
    fn right_angle_strong_measurements_give_uniform_outcomes() {
        let result = run_protocol(PI / 2.0, PI / 2.0, 1.0).unwrap();
        for p in result.rho123.diagonal() {
            assert!((p - 0.125).abs() < 1e-13);
        }
    }

    #[test]
    fn strong_joint_matrix_matches_closed_form() {
        for (t1, t2) in [
            (0.0, 0.0),
            (PI / 3.0, PI / 5.0),
            (PI / 2.0, PI / 2.0),
            (2.7, 0.3),
            (1.0, 2.0),
        ] {
            let result = run_protocol(t1, t2, 1.0).unwrap();
            let expected = expected_strong_joint(t1, t2);
            let dev = result.rho123.matrix().max_abs_diff(&expected).unwrap();
            assert!(dev <= 1e-12, "deviation {dev:e} at ({t1}, {t2})");
        }
    }

    #[test]
    fn zero_strength_leaves_middle_detector_untouched() {
        let result = run_protocol(1.1, 0.4, 0.0).unwrap();
        let expected = ComplexMatrix::diag(&[1.0, 0.0]);
        assert!(result.rho2.matrix().max_abs_diff(&expected).unwrap() < 1e-13);

        // Mutual information between the outer detectors at zero strength.
        let t1: f64 = 1.1;
        let t2: f64 = 0.4;
        let arg = ((t1 + t2) / 2.0).cos().powi(2);
        let h = -arg * arg.log2() - (1.0 - arg) * (1.0 - arg).log2();
        let s13 = von_neumann(&result.rho13).unwrap();
        let s1 = von_neumann(&result.rho13.partial_trace(&["A1"]).unwrap()).unwrap();
        let s3 = von_neumann(&result.rho13.partial_trace(&["A3"]).unwrap()).unwrap();
        let mutual = s1 + s3 - s13;
        assert!((mutual - (1.0 - h)).abs() < 1e-10);
    }

    #[test]
    fn middle_detector_is_determined_by_the_outer_ones_when_strong() {
        let result = run_protocol(0.8, 2.1, 1.0).unwrap();
        let s123 = von_neumann(&result.rho123).unwrap();
        let s13 = von_neumann(&result.rho13).unwrap();
        assert!((s123 - s13).abs() < 1e-9);
    }

    #[test]
    fn middle_detector_decouples_at_zero_strength() {
        let result = run_protocol(0.8, 2.1, 0.0).unwrap();
        let s123 = von_neumann(&result.rho123).unwrap();
        let s13 = von_neumann(&result.rho13).unwrap();
        let s2 = von_neumann(&result.rho2).unwrap();
        let mutual = s2 + s13 - s123;
        assert!(mutual.abs() < 1e-10);
    }

    #[test]
    fn marginals_are_consistent_partial_traces() {
        let result = run_protocol(1.7, 0.6, 0.35).unwrap();
        let rho12 = result.rho123.partial_trace(&["A1", "A2"]).unwrap();
        assert!(result.rho12.matrix().max_abs_diff(rho12.matrix()).unwrap() < 1e-14);
        let rho2 = result.rho12.partial_trace(&["A2"]).unwrap();
        assert!(result.rho2.matrix().max_abs_diff(rho2.matrix()).unwrap() < 1e-14);
    }
}
