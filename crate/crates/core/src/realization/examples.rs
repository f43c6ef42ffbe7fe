//! Shipped realizations: the differential axle, its small-angle
//! approximation and a two-channel PI controller.
//!
//! Axle, with `u1` the mean wheel speed and `u2` the speed difference:
//!
//! ```text
//! ż1 = cos(z3) u1,  ż2 = sin(z3) u1,  ż3 = u2,  y = (z1, z2),  z(0) = 0
//! ```
//!
//! Controller: `ż4 = ũ1`, `ż5 = ũ2`, `ỹ = (2 z4, 10 z5)`, `z(0) = (2, 2)`.

use super::Realization;
use crate::error::Result;

pub const AXLE_JSON: &str = include_str!("../../fixtures/axle.json");
pub const SMALL_ANGLE_AXLE_JSON: &str = include_str!("../../fixtures/small_angle_axle.json");
pub const PI_CONTROLLER_JSON: &str = include_str!("../../fixtures/pi_controller.json");

pub fn axle_plant(degree: usize) -> Result<Realization> {
    Realization::from_json(AXLE_JSON, degree)
}

/// The axle with `cos z3 ≈ 1` and `sin z3 ≈ z3`.
pub fn small_angle_axle(degree: usize) -> Result<Realization> {
    Realization::from_json(SMALL_ANGLE_AXLE_JSON, degree)
}

pub fn pi_controller(degree: usize) -> Result<Realization> {
    Realization::from_json(PI_CONTROLLER_JSON, degree)
}
