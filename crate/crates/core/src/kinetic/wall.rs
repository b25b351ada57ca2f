//! Fully accommodating Maxwell walls.
//!
//! The distribution at the wall is the gas distribution for molecules moving
//! toward the wall and a wall Maxwellian for molecules leaving it. The wall
//! Maxwellian's density is fixed by zero net normal mass flux.

use serde::{Deserialize, Serialize};

use super::halfspace::{half_space_transform, HalfSpace};
use crate::error::{Error, Result};
use crate::moment::{adapt, Expansion, MomentState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Half space of velocities pointing into the wall.
    fn incoming(self) -> HalfSpace {
        match self {
            Side::Left => HalfSpace::Negative,
            Side::Right => HalfSpace::Positive,
        }
    }

    fn emitted(self) -> HalfSpace {
        match self {
            Side::Left => HalfSpace::Positive,
            Side::Right => HalfSpace::Negative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallBoundary {
    u_wall: [f64; 3],
    theta_wall: f64,
}

impl WallBoundary {
    /// `u_wall[0]` is the normal component and must vanish.
    pub fn new(u_wall: [f64; 3], theta_wall: f64) -> Result<Self> {
        if u_wall[0] != 0.0 {
            return Err(Error::Config(format!(
                "wall velocity must be tangential, got normal component {}",
                u_wall[0]
            )));
        }
        if !(theta_wall > 0.0 && theta_wall.is_finite()) {
            return Err(Error::Config(format!(
                "wall temperature must be positive, got {theta_wall}"
            )));
        }
        Ok(WallBoundary { u_wall, theta_wall })
    }

    pub fn stationary(theta_wall: f64) -> Result<Self> {
        Self::new([0.0; 3], theta_wall)
    }

    pub fn u_wall(&self) -> [f64; 3] {
        self.u_wall
    }

    pub fn theta_wall(&self) -> f64 {
        self.theta_wall
    }

    /// Full accommodation is the only supported setting.
    pub fn accommodation(&self) -> f64 {
        1.0
    }
}

/// Density of the re-emitted Maxwellian balancing the incoming mass flux of `gas`.
pub fn wall_density(gas: &Expansion, wall: &WallBoundary, side: Side) -> Result<f64> {
    let incoming = half_space_transform(gas, side.incoming(), true, gas.u, gas.theta, 0)?;
    let emitted_unit = (wall.theta_wall / (2.0 * std::f64::consts::PI)).sqrt();
    let rho = match side {
        Side::Left => -incoming.coeffs[0] / emitted_unit,
        Side::Right => incoming.coeffs[0] / emitted_unit,
    };
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::realizability(rho, wall.theta_wall));
    }
    Ok(rho)
}

/// The re-emitted Maxwellian for an interior state, at the state's order.
pub fn wall_ghost_state(interior: &MomentState, wall: &WallBoundary, side: Side) -> Result<MomentState> {
    let rho = wall_density(interior.expansion(), wall, side)?;
    MomentState::maxwellian(interior.order(), rho, wall.u_wall, wall.theta_wall)
}

fn composite(
    gas: &Expansion,
    wall: &WallBoundary,
    side: Side,
    with_xi: bool,
    u_out: [f64; 3],
    theta_out: f64,
    order: usize,
) -> Result<Expansion> {
    let rho = wall_density(gas, wall, side)?;
    let maxw = Expansion::maxwellian(order, rho, wall.u_wall, wall.theta_wall);
    let mut out = half_space_transform(gas, side.incoming(), with_xi, u_out, theta_out, order)?;
    let back = half_space_transform(&maxw, side.emitted(), with_xi, u_out, theta_out, order)?;
    for (a, b) in out.coeffs.iter_mut().zip(&back.coeffs) {
        *a += b;
    }
    Ok(out)
}

/// The wall distribution (incoming gas plus emitted Maxwellian) in adapted form.
/// Used as the missing neighbour when reconstructing next to a wall.
pub fn wall_trace_state(interior: &MomentState, wall: &WallBoundary, side: Side) -> Result<MomentState> {
    let e = interior.expansion();
    let raw = composite(e, wall, side, false, e.u, e.theta, interior.order())?;
    adapt(&raw)
}

/// Kinetic flux int xi_1 f_wall H_alpha through the wall, in the basis
/// (u_out, theta_out) at order `order`. `edge` is the gas state next to the wall.
/// Its mass component vanishes.
pub fn wall_flux(
    edge: &Expansion,
    wall: &WallBoundary,
    side: Side,
    u_out: [f64; 3],
    theta_out: f64,
    order: usize,
) -> Result<Expansion> {
    composite(edge, wall, side, true, u_out, theta_out, order)
}
