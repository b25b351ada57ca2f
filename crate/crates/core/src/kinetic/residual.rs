use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::flux::{numerical_flux, regularization_into};
use super::gas::{collision_frequency, GasModel};
use super::mesh::Mesh1D;
use super::reconstruct::{reconstruct_with_ghosts, EdgeStates, Reconstruction};
use super::wall::{wall_flux, wall_trace_state, Side, WallBoundary};
use crate::error::{Error, Result};
use crate::moment::projection::project_expansion;
use crate::moment::{equilibrium_coeffs, extract_macros, Expansion, MomentState};

/// One level's unknowns: a state per cell, all at the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub cells: Vec<MomentState>,
    pub mesh: Arc<Mesh1D>,
}

impl GridSolution {
    pub fn new(cells: Vec<MomentState>, mesh: Arc<Mesh1D>) -> Result<Self> {
        if cells.len() != mesh.cells() {
            return Err(Error::Config(format!(
                "{} states for a mesh of {} cells",
                cells.len(),
                mesh.cells()
            )));
        }
        let order = cells[0].order();
        if cells.iter().any(|c| c.order() != order) {
            return Err(Error::Config("cells differ in order".into()));
        }
        Ok(GridSolution { cells, mesh })
    }

    pub fn uniform_maxwellian(mesh: Arc<Mesh1D>, order: usize, rho: f64, u: [f64; 3], theta: f64) -> Result<Self> {
        let cell = MomentState::maxwellian(order, rho, u, theta)?;
        Self::new(vec![cell; mesh.cells()], mesh)
    }

    pub fn order(&self) -> usize {
        self.cells[0].order()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// sum_i rho_i dx_i
    pub fn total_mass(&self) -> f64 {
        self.cells.iter().zip(self.mesh.widths()).map(|(c, w)| c.rho() * w).sum()
    }
}

/// Gas, walls and reconstruction scheme shared by all levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Physics {
    pub gas: GasModel,
    pub left: WallBoundary,
    pub right: WallBoundary,
    #[serde(default)]
    pub reconstruction: Reconstruction,
}

impl Physics {
    pub fn new(gas: GasModel, left: WallBoundary, right: WallBoundary) -> Self {
        Physics {
            gas,
            left,
            right,
            reconstruction: Reconstruction::Linear,
        }
    }
}

/// Per-cell residual R_i, each in its cell's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub cells: Vec<Expansion>,
    /// Cells whose slopes were zeroed by the positivity fallback.
    pub slope_fallbacks: usize,
}

impl ResidualField {
    pub fn zeros_like(sol: &GridSolution) -> Self {
        ResidualField {
            cells: sol.cells.iter().map(|c| Expansion::zeros(c.order(), c.u(), c.theta())).collect(),
            slope_fallbacks: 0,
        }
    }
}

/// Q_alpha = nu (f^E_alpha - f_alpha).
pub fn collision_coeffs(state: &MomentState, gas: &GasModel) -> Result<Vec<f64>> {
    let macros = extract_macros(state);
    let mut q = equilibrium_coeffs(&macros, &gas.collision, state.order())?;
    let nu = collision_frequency(state.rho(), state.theta(), gas);
    for (qa, fa) in q.iter_mut().zip(state.coeffs()) {
        *qa = nu * (*qa - fa);
    }
    Ok(q)
}

/// G_alpha = sum_d F_d f_{alpha - e_d} + Q_alpha.
pub fn source_coeffs(state: &MomentState, gas: &GasModel) -> Result<Vec<f64>> {
    let mut g = collision_coeffs(state, gas)?;
    let basis = state.expansion().basis();
    let f = state.coeffs();
    for d in 0..3 {
        let fd = gas.force[d];
        if fd == 0.0 {
            continue;
        }
        for (i, lo) in basis.lower_raw(d).iter().enumerate() {
            if *lo != usize::MAX {
                g[i] += fd * f[*lo];
            }
        }
    }
    Ok(g)
}

fn wall_traces(sol: &GridSolution, physics: &Physics) -> Result<(MomentState, MomentState)> {
    let n = sol.len();
    let left = wall_trace_state(&sol.cells[0], &physics.left, Side::Left)
        .map_err(|e| e.with_context(None, Some(0), Some("left wall")))?;
    let right = wall_trace_state(&sol.cells[n - 1], &physics.right, Side::Right)
        .map_err(|e| e.with_context(None, Some(n - 1), Some("right wall")))?;
    Ok((left, right))
}

/// Edge states of cell `i`, wall traces included.
pub fn reconstruct(sol: &GridSolution, physics: &Physics, i: usize) -> Result<EdgeStates> {
    let (l, r) = wall_traces(sol, physics)?;
    Ok(reconstruct_with_ghosts(&sol.cells, &sol.mesh, (&l, &r), physics.reconstruction, i))
}

/// R_i = [F_{i+1/2} - F_{i-1/2}] / dx_i - G_i - P_i, interface fluxes projected
/// into the cell's basis after the HLL combination. P_i is the hyperbolic
/// regularization, with gradients of u and theta taken between the interface
/// means.
pub fn residual(sol: &GridSolution, physics: &Physics) -> Result<ResidualField> {
    let n = sol.len();
    let order = sol.order();
    let (gl, gr) = wall_traces(sol, physics)?;
    let edges: Vec<EdgeStates> = (0..n)
        .into_par_iter()
        .map(|i| reconstruct_with_ghosts(&sol.cells, &sol.mesh, (&gl, &gr), physics.reconstruction, i))
        .collect();
    let slope_fallbacks = edges.iter().filter(|e| e.fallback).count();

    // interior interfaces j = 1..n-1 in the mean basis of their two edge states
    let interior: Vec<Expansion> = (1..n)
        .into_par_iter()
        .map(|j| {
            numerical_flux(&edges[j - 1].right, &edges[j].left, order)
                .map_err(|e| e.with_context(None, Some(j), Some("interface flux")))
        })
        .collect::<Result<_>>()?;

    let first = &sol.cells[0];
    let last = &sol.cells[n - 1];
    let left_wall = wall_flux(&edges[0].left, &physics.left, Side::Left, first.u(), first.theta(), order)
        .map_err(|e| e.with_context(None, Some(0), Some("left wall flux")))?;
    let right_wall = wall_flux(&edges[n - 1].right, &physics.right, Side::Right, last.u(), last.theta(), order)
        .map_err(|e| e.with_context(None, Some(n - 1), Some("right wall flux")))?;

    // interface velocity and temperature: means of the two sides, as in the flux basis
    let mean = |a: &Expansion, b: &Expansion| {
        let u = [0.5 * (a.u[0] + b.u[0]), 0.5 * (a.u[1] + b.u[1]), 0.5 * (a.u[2] + b.u[2])];
        (u, 0.5 * (a.theta + b.theta))
    };
    let params: Vec<([f64; 3], f64)> = (0..=n)
        .map(|j| match j {
            0 => mean(gl.expansion(), &edges[0].left),
            j if j == n => mean(&edges[n - 1].right, gr.expansion()),
            j => mean(&edges[j - 1].right, &edges[j].left),
        })
        .collect();

    let cells: Vec<Expansion> = (0..n)
        .into_par_iter()
        .map(|i| {
            let cell = &sol.cells[i];
            let ctx = |e: Error| e.with_context(None, Some(i), Some("residual"));
            let minus = if i == 0 {
                left_wall.clone()
            } else {
                project_expansion(&interior[i - 1], cell.u(), cell.theta(), order).map_err(ctx)?
            };
            let plus = if i + 1 == n {
                right_wall.clone()
            } else {
                project_expansion(&interior[i], cell.u(), cell.theta(), order).map_err(ctx)?
            };
            let g = source_coeffs(cell, &physics.gas).map_err(ctx)?;
            let inv = 1.0 / sol.mesh.width(i);
            let ((ua, ta), (ub, tb)) = (params[i], params[i + 1]);
            let grad_u = [(ub[0] - ua[0]) * inv, (ub[1] - ua[1]) * inv, (ub[2] - ua[2]) * inv];
            let mut reg = vec![0.0; g.len()];
            regularization_into(cell.expansion(), grad_u, (tb - ta) * inv, &mut reg);
            let coeffs = plus
                .coeffs
                .iter()
                .zip(&minus.coeffs)
                .zip(g.iter().zip(&reg))
                .map(|((p, m), (g, r))| (p - m) * inv - g - r)
                .collect();
            Ok(Expansion::new(cell.u(), cell.theta(), coeffs))
        })
        .collect::<Result<_>>()?;
    Ok(ResidualField { cells, slope_fallbacks })
}
