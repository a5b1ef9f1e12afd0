//! Angle helpers. Every phase stored in this crate lives on (−π, π].

use std::f64::consts::{PI, TAU};

/// Wrap an angle to the half-open interval (−π, π].
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Difference `a − b` wrapped to (−π, π].
pub fn wrapped_diff(a: f64, b: f64) -> f64 {
    wrap_phase(a - b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_into_half_open_interval() {
        assert_eq!(wrap_phase(0.0), 0.0);
        assert_eq!(wrap_phase(PI), PI);
        // −π is identified with +π, the included endpoint.
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-2.5 * PI) + 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn wrapped_diff_handles_branch_cut() {
        let d = wrapped_diff(PI - 1e-3, -PI + 1e-3);
        assert!((d + 2e-3).abs() < 1e-12);
    }
}
