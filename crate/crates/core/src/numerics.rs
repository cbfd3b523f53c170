//! Root finding for the displacement equation y + sin y = x, plus the
//! clamped arcsine used by scattering.

use crate::error::{Error, Result};

/// Tolerances for [`solve_displacement`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    /// Residual bound on |y + sin y - x|.
    pub abs_tolerance: f64,
    pub max_iterations: u32,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { abs_tolerance: 1e-12, max_iterations: 200 }
    }
}

/// Solves y + sin y = x for the unique y >= 0.
///
/// f(y) = y + sin y is nondecreasing (f' = 1 + cos y >= 0), so the root is
/// unique. Safeguarded Newton inside a maintained sign bracket, falling back
/// to the midpoint whenever the Newton step leaves the bracket or the
/// derivative vanishes near odd multiples of pi. Accepts only when the
/// residual is within tolerance and the next step would be negligible; the
/// latter keeps the answer pinned in y even where f' ~ 0 and the residual
/// alone stops constraining it.
pub fn solve_displacement(x: f64, settings: &SolverSettings) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "displacement argument must be finite and nonnegative, got {x}"
        )));
    }
    debug_assert!(settings.abs_tolerance > 0.0 && settings.max_iterations >= 1);

    // Representation floor: for large x the residual cannot beat rounding.
    let f_tol = settings.abs_tolerance.max(4.0 * f64::EPSILON * x);
    let y_tol = settings.abs_tolerance.max(4.0 * f64::EPSILON * (1.0 + x));

    let mut lo = 0.0_f64; // f(0) = -x <= 0
    // sin x >= 0 makes x itself an upper bracket; otherwise pad past the
    // crest so f(hi) = (hi - x) + sin hi >= 1.
    let mut hi = if x.sin() >= 0.0 { x } else { x + 2.0 };
    let mut y = 0.5 * (lo + hi);

    for _ in 0..settings.max_iterations {
        let f = y + y.sin() - x;
        if f >= 0.0 {
            hi = y;
        }
        if f <= 0.0 {
            lo = y;
        }
        let df = 1.0 + y.cos();
        let newton = y - f / df; // df == 0 gives inf/nan, rejected below
        let next =
            if newton.is_finite() && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if f.abs() <= f_tol && (next - y).abs() <= y_tol {
            return Ok(y);
        }
        y = next;
    }
    Err(Error::NoConvergence { x, iterations: settings.max_iterations })
}

/// arcsin with the argument clamped to [-1, 1].
///
/// Out-of-range magnitudes map to grazing +-pi/2 rays instead of being
/// rejected; only non-finite input is an error.
pub fn arcsin_clamped(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("arcsin argument must be finite, got {p}")));
    }
    Ok(p.clamp(-1.0, 1.0).asin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_6, PI};

    /// Independent oracle: plain interval halving on [0, x], valid for
    /// x in [0, pi] where f(x) = sin x >= 0. Written before the solver;
    /// shares no code with it.
    fn bisect_oracle(x: f64, steps: u32) -> f64 {
        let (mut lo, mut hi) = (0.0_f64, x);
        for _ in 0..steps {
            let mid = 0.5 * (lo + hi);
            if mid + mid.sin() - x <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    // Reference roots frozen from an independent 300-step interval-halving
    // run at extended precision; the coarse 5-digit checks below guard the
    // same values the way a reader would quote them.
    const SOLVE_AT_ONE: f64 = 0.510_973_429_388_569;
    const SOLVE_AT_INV_TWO_PI: f64 = 0.079_619_519_004_028_64;

    fn solve(x: f64) -> f64 {
        solve_displacement(x, &SolverSettings::default()).unwrap()
    }

    #[test]
    fn fixed_points() {
        assert_eq!(solve(0.0), 0.0);
        // x = PI sits where f' = 1 + cos y vanishes: the float evaluation
        // of y + sin y - PI is rounding noise across a window of width
        // ~(6*eps)^(1/3) ~ 1e-5, so no sign-driven method can localize the
        // root tighter than that. The residual certificate still holds at
        // full strength; the ordinate check gets the conditioning-limited
        // bound with margin.
        let y = solve(PI);
        assert!((y - PI).abs() < 1e-4, "y = {y}");
        assert!((y + y.sin() - PI).abs() <= 1e-12);
    }

    #[test]
    fn frozen_oracle_values() {
        assert!((solve(1.0) - SOLVE_AT_ONE).abs() < 1e-10);
        assert!((solve(1.0) - 0.51097).abs() < 1e-4);

        let x = 1.0 / (2.0 * PI);
        assert!((solve(x) - SOLVE_AT_INV_TWO_PI).abs() < 1e-10);
        assert!((solve(x) - 0.0796).abs() < 1e-3);

        // the in-file oracle reproduces the frozen constants too
        assert!((bisect_oracle(1.0, 200) - SOLVE_AT_ONE).abs() < 1e-12);
        assert!((bisect_oracle(x, 200) - SOLVE_AT_INV_TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_domain() {
        assert!(solve_displacement(-1e-9, &SolverSettings::default()).is_err());
        assert!(solve_displacement(f64::NAN, &SolverSettings::default()).is_err());
        assert!(solve_displacement(f64::INFINITY, &SolverSettings::default()).is_err());
    }

    #[test]
    fn converges_where_the_upper_bracket_needs_padding() {
        // sin x < 0 here, so [0, x] alone would not bracket the root
        for &x in &[4.0, 5.5, 10.0, 1e6] {
            let y = solve(x);
            let floor = 1e-12_f64.max(4.0 * f64::EPSILON * x);
            assert!((y + y.sin() - x).abs() <= floor, "x = {x}");
        }
    }

    #[test]
    fn arcsin_clamps_and_rejects_non_finite() {
        assert_eq!(arcsin_clamped(0.0).unwrap(), 0.0);
        assert!((arcsin_clamped(0.5).unwrap() - FRAC_PI_6).abs() < 1e-15);
        assert!((arcsin_clamped(1.2).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((arcsin_clamped(-7.0).unwrap() + PI / 2.0).abs() < 1e-15);
        assert!(arcsin_clamped(f64::NAN).is_err());
        assert!(arcsin_clamped(f64::NEG_INFINITY).is_err());
    }

    proptest! {
        // Residual certificate plus agreement with the independent oracle.
        #[test]
        fn residual_and_oracle_agreement(x in 0.0f64..PI) {
            let y = solve(x);
            prop_assert!((y + y.sin() - x).abs() <= 1e-12);
            prop_assert!((y - bisect_oracle(x, 200)).abs() <= 1e-10);
        }

        // Monotone in x, contracting on (0, pi).
        #[test]
        fn monotone_and_contracting(a in 0.0f64..PI, b in 0.0f64..PI) {
            let (x1, x2) = if a <= b { (a, b) } else { (b, a) };
            let (y1, y2) = (solve(x1), solve(x2));
            prop_assert!(y1 <= y2 + 1e-10);
            if x1 > 0.0 {
                prop_assert!(y1 < x1);
            }
        }
    }
}
