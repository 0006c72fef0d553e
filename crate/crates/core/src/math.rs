//! Scalar helpers that must work without `std`.

pub(crate) use libm::{acosh, asinh, atan2, cos, cosh, exp, log, sin, sinh, sqrt};

/// Threshold below which the series branches of `theta / sin(theta)` and
/// `theta / sinh(theta)` are used.
pub(crate) const SERIES_CUTOFF: f64 = 1e-4;

/// `theta / sin(theta)`, finite on `(-pi, pi)`.
pub fn sinc_inv(theta: f64) -> f64 {
    if theta.abs() < SERIES_CUTOFF {
        let t2 = theta * theta;
        1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0
    } else {
        theta / sin(theta)
    }
}

/// `theta / sinh(theta)`, in `(0, 1]`.
pub fn sinhc_inv(theta: f64) -> f64 {
    if theta.abs() < SERIES_CUTOFF {
        let t2 = theta * theta;
        1.0 - t2 / 6.0 + 7.0 * t2 * t2 / 360.0
    } else {
        theta / sinh(theta)
    }
}

/// `theta * cot(theta)`; equals 1 at 0 and vanishes at `pi / 2`.
pub fn theta_cot(theta: f64) -> f64 {
    if theta.abs() < SERIES_CUTOFF {
        let t2 = theta * theta;
        1.0 - t2 / 3.0 - t2 * t2 / 45.0
    } else {
        theta * cos(theta) / sin(theta)
    }
}

/// `theta * coth(theta)`; at least 1.
pub fn theta_coth(theta: f64) -> f64 {
    if theta.abs() < SERIES_CUTOFF {
        let t2 = theta * theta;
        1.0 + t2 / 3.0 - t2 * t2 / 45.0
    } else {
        theta * cosh(theta) / sinh(theta)
    }
}
