use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::basis::{basis_size, slots, MomentBasis};
use super::state::MacroQuantities;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollisionKind {
    #[serde(alias = "bgk")]
    Bgk,
    #[serde(alias = "shakhov")]
    Shakhov,
    #[serde(alias = "esbgk", alias = "es-bgk", alias = "ESBGK")]
    EsBgk,
}

/// BGK-type relaxation model Q = nu (f^E - f).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionModel {
    kind: CollisionKind,
    prandtl: f64,
}

impl CollisionModel {
    pub fn new(kind: CollisionKind, prandtl: f64) -> Result<Self> {
        if !(prandtl > 0.0) {
            return Err(Error::Config(format!("Prandtl number must be positive, got {prandtl}")));
        }
        let prandtl = if kind == CollisionKind::Bgk { 1.0 } else { prandtl };
        Ok(CollisionModel { kind, prandtl })
    }

    pub fn bgk() -> Self {
        CollisionModel {
            kind: CollisionKind::Bgk,
            prandtl: 1.0,
        }
    }

    pub fn kind(&self) -> CollisionKind {
        self.kind
    }

    pub fn prandtl(&self) -> f64 {
        self.prandtl
    }

    /// lambda_ij = theta delta_ij + (1 - 1/Pr) sigma_ij / rho.
    pub fn es_tensor(&self, m: &MacroQuantities) -> Matrix3<f64> {
        let k = 1.0 - 1.0 / self.prandtl;
        Matrix3::from_fn(|i, j| {
            let diag = if i == j { m.theta } else { 0.0 };
            diag + k * m.sigma[i][j] / m.rho
        })
    }
}

/// Expansion coefficients of the model equilibrium f^E in the basis
/// H_alpha^{[u, theta]} built from the macroscopic quantities.
pub fn equilibrium_coeffs(macros: &MacroQuantities, model: &CollisionModel, order: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; basis_size(order)];
    out[0] = macros.rho;
    if model.prandtl == 1.0 {
        return Ok(out);
    }
    match model.kind {
        CollisionKind::Bgk => {}
        CollisionKind::Shakhov => {
            if order >= 3 {
                let k = (1.0 - model.prandtl) / 5.0;
                for i in 0..3 {
                    let c = k * macros.q[i];
                    for d in 0..3 {
                        out[slots::triple(d, d, i)] = c;
                    }
                }
            }
        }
        CollisionKind::EsBgk => {
            let lambda = model.es_tensor(macros);
            if lambda.cholesky().is_none() {
                return Err(Error::ModelBreakdown(format!(
                    "ES-BGK tensor is not positive definite: {lambda:?}"
                )));
            }
            fill_anisotropic_gaussian(&mut out, order, macros, model);
        }
    }
    Ok(out)
}

/// Coefficients of rho exp(1/2 t^T D t) with D = Lambda - theta I: the
/// anisotropic Gaussian is the heat-flow image of the isotropic one.
/// alpha_k c_alpha = sum_j D_kj c_{alpha - e_k - e_j}, with k the first
/// non-zero direction of alpha; odd orders vanish.
fn fill_anisotropic_gaussian(out: &mut [f64], order: usize, macros: &MacroQuantities, model: &CollisionModel) {
    let k_es = 1.0 - 1.0 / model.prandtl;
    let dmat: [[f64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| k_es * macros.sigma[i][j] / macros.rho));
    let basis = MomentBasis::of(order);
    for i in 1..out.len() {
        let a = basis.multi_index(i);
        if a.degree() % 2 == 1 {
            continue;
        }
        let k = (0..3).find(|&d| a.0[d] > 0).unwrap();
        let base = basis.lower(k, i).unwrap();
        let mut acc = 0.0;
        for (j, row) in dmat[k].iter().enumerate() {
            if let Some(t) = basis.lower(j, base) {
                acc += row * out[t];
            }
        }
        out[i] = acc / a.0[k] as f64;
    }
}
