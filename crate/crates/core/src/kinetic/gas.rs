use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moment::CollisionModel;

/// Dependence of the collision frequency on Kn, w and Pr.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyLaw {
    /// nu = sqrt(pi/2) Pr/Kn rho theta^{1-w}
    HardSpherePower,
    /// nu = sqrt(2/pi) (5-2w)(7-2w) Pr / (15 Kn) rho theta^{1-w}
    VariableHardSphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    pub collision: CollisionModel,
    pub knudsen: f64,
    pub viscosity_index: f64,
    pub frequency_law: FrequencyLaw,
    /// Constant acceleration F acting on the molecules.
    pub force: [f64; 3],
}

impl GasModel {
    pub fn new(
        collision: CollisionModel,
        knudsen: f64,
        viscosity_index: f64,
        frequency_law: FrequencyLaw,
        force: [f64; 3],
    ) -> Result<Self> {
        if !(knudsen > 0.0) {
            return Err(Error::Config(format!("Knudsen number must be positive, got {knudsen}")));
        }
        Ok(GasModel {
            collision,
            knudsen,
            viscosity_index,
            frequency_law,
            force,
        })
    }
}

pub fn collision_frequency(rho: f64, theta: f64, gas: &GasModel) -> f64 {
    let pr = gas.collision.prandtl();
    let w = gas.viscosity_index;
    let prefactor = match gas.frequency_law {
        FrequencyLaw::HardSpherePower => (std::f64::consts::PI / 2.0).sqrt() * pr / gas.knudsen,
        FrequencyLaw::VariableHardSphere => {
            (2.0 / std::f64::consts::PI).sqrt() * (5.0 - 2.0 * w) * (7.0 - 2.0 * w) * pr / (15.0 * gas.knudsen)
        }
    };
    prefactor * rho * theta.powf(1.0 - w)
}
