//! Per-particle pipeline at the atom: interference against the spin
//! register, vertical displacement, spin flip, and semicircular scattering.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::model::{nearest_orbit, ModelParams, OrbitRegister, Sign, SlitTag};
use crate::numerics::{arcsin_clamped, solve_displacement, SolverSettings};

/// What interference did to one particle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferenceEffect {
    /// Vertical ordinate after the (possible) displacement.
    pub ordinate: f64,
    pub displaced: bool,
    /// 1-based index of the nearest orbit.
    pub orbit: usize,
    /// Distance to that orbit before, absolute units.
    pub dist_before: f64,
    /// Distance after; equals `dist_before` when not displaced.
    pub dist_after: f64,
}

/// Displaces the particle iff the nearest orbit's spin name matches the slit
/// name, flipping that spin on a match.
///
/// On a match the distance x to the orbit shrinks to the root y of
/// y + sin y = x (both in units of pi * orbit spacing), so the particle moves
/// toward the orbit, staying on its original side; the ordinate's sign is
/// preserved. A zero-distance match still flips.
pub fn apply_interference(
    y_at_atom: f64,
    slit: SlitTag,
    register: &mut OrbitRegister,
    params: &ModelParams,
    solver: &SolverSettings,
) -> Result<InterferenceEffect> {
    let rho = y_at_atom.abs();
    let (orbit, dist) = nearest_orbit(rho, params);
    if register.spin(orbit) != slit.matching_spin() {
        return Ok(InterferenceEffect {
            ordinate: y_at_atom,
            displaced: false,
            orbit,
            dist_before: dist,
            dist_after: dist,
        });
    }
    register.flip(orbit);

    let unit = PI * params.orbit_spacing();
    let dist_after = solve_displacement(dist / unit, solver)? * unit;
    let r_k = params.orbit_radius(orbit);
    let rho_new = if rho >= r_k { r_k + dist_after } else { r_k - dist_after };
    let ordinate = if y_at_atom < 0.0 { -rho_new } else { rho_new };
    Ok(InterferenceEffect { ordinate, displaced: true, orbit, dist_before: dist, dist_after })
}

/// Scattering angle off the atom: sign * arcsin(y_final / R).
pub fn scatter(y_final: f64, sign: Sign, params: &ModelParams) -> f64 {
    let p = y_final / params.atom_radius;
    // pipeline ordinates are finite, so the clamped arcsine cannot fail
    sign.factor() * arcsin_clamped(p).expect("finite impact parameter")
}

/// Maps a scattering angle to its 1-degree screen bin in [-90, 89].
///
/// The screen is far enough away that only the angle matters; bin b covers
/// [b, b+1) degrees and exactly +90 degrees lands in bin 89.
pub fn register_on_screen(angle: f64) -> Result<i32> {
    if !(angle.is_finite() && angle.abs() <= FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "scattering angle must lie in [-pi/2, pi/2], got {angle}"
        )));
    }
    Ok((angle.to_degrees().floor() as i32).clamp(-90, 89))
}
