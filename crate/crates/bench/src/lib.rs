//! Shared fixtures for the benchmark targets.

/// Representative `(theta1, theta2, epsilon)` probes: aligned, generic
/// strong, generic weak, and zero-strength.
pub fn probe_points() -> [(f64, f64, f64); 4] {
    use std::f64::consts::PI;
    [
        (0.0, 0.0, 1.0),
        (PI / 3.0, PI / 5.0, 1.0),
        (1.1, 2.3, 0.5),
        (PI / 4.0, PI / 4.0, 0.0),
    ]
}
