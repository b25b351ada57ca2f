//! Heun's two-stage pseudo-time iteration for R(f) = r.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetic::{max_wave_speed, residual, GridSolution, Mesh1D, Physics};
use crate::moment::projection::project_expansion;
use crate::moment::{adapt, Expansion};
use crate::record::{ConvergenceRecord, HistoryEntry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmootherConfig {
    cfl: f64,
    renormalize_mass: bool,
    target_mass: f64,
}

impl SmootherConfig {
    pub const DEFAULT_CFL: f64 = 0.45;

    pub fn new(cfl: f64, renormalize_mass: bool, target_mass: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1), got {cfl}")));
        }
        if renormalize_mass && !(target_mass > 0.0) {
            return Err(Error::Config(format!("target mass must be positive, got {target_mass}")));
        }
        Ok(SmootherConfig {
            cfl,
            renormalize_mass,
            target_mass,
        })
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub fn renormalize_mass(&self) -> bool {
        self.renormalize_mass
    }

    pub fn target_mass(&self) -> f64 {
        self.target_mass
    }

    /// Same settings without mass renormalization (used on correction levels).
    pub fn without_renormalization(self) -> Self {
        SmootherConfig {
            renormalize_mass: false,
            ..self
        }
    }
}

/// Right-hand side r of R(f) = r. Each cell's function is stored in the basis
/// it was built in and re-expressed in the current cell basis on demand.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RhsField {
    cells: Option<Vec<Expansion>>,
}

impl RhsField {
    pub fn zero() -> Self {
        RhsField { cells: None }
    }

    pub fn from_cells(cells: Vec<Expansion>) -> Self {
        RhsField { cells: Some(cells) }
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_none()
    }

    pub fn cells(&self) -> Option<&[Expansion]> {
        self.cells.as_deref()
    }

    /// Coefficients of r_i in the basis of `sol.cells[i]`, or None for r = 0.
    pub fn in_bases(&self, sol: &GridSolution) -> Result<Option<Vec<Vec<f64>>>> {
        let Some(cells) = &self.cells else {
            return Ok(None);
        };
        if cells.len() != sol.len() {
            return Err(Error::Config(format!(
                "right-hand side has {} cells, solution {}",
                cells.len(),
                sol.len()
            )));
        }
        let order = sol.order();
        cells
            .par_iter()
            .zip(&sol.cells)
            .map(|(r, c)| {
                if r.order() != order {
                    return Err(Error::Config(format!(
                        "right-hand side order {} differs from solution order {order}",
                        r.order()
                    )));
                }
                if r.same_params(c.u(), c.theta()) {
                    Ok(r.coeffs.clone())
                } else {
                    Ok(project_expansion(r, c.u(), c.theta(), order)?.coeffs)
                }
            })
            .collect::<Result<_>>()
            .map(Some)
    }
}

/// omega = cfl / max_i (lambda_i / dx_i)
pub fn step_size(sol: &GridSolution, cfg: &SmootherConfig) -> f64 {
    let rate = sol
        .cells
        .iter()
        .zip(sol.mesh.widths())
        .map(|(c, w)| max_wave_speed(c) / w)
        .fold(0.0_f64, f64::max);
    cfg.cfl / rate
}

/// sqrt(sum_i dx_i sum_alpha d_{i,alpha}^2)
pub fn residual_norm(field: &[Vec<f64>], mesh: &Mesh1D) -> f64 {
    field
        .iter()
        .zip(mesh.widths())
        .map(|(c, w)| w * c.iter().map(|x| x * x).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

/// Defect r - R(f) per cell in the cell bases, and the number of slope fallbacks.
pub fn defect(sol: &GridSolution, rhs: &RhsField, physics: &Physics) -> Result<(Vec<Vec<f64>>, usize)> {
    let res = residual(sol, physics)?;
    let r = rhs.in_bases(sol)?;
    let mut d: Vec<Vec<f64>> = res.cells.into_iter().map(|e| e.coeffs).collect();
    match r {
        None => d.iter_mut().flatten().for_each(|x| *x = -*x),
        Some(r) => {
            for (di, ri) in d.iter_mut().zip(&r) {
                for (x, y) in di.iter_mut().zip(ri) {
                    *x = y - *x;
                }
            }
        }
    }
    Ok((d, res.slope_fallbacks))
}

/// The state at the old step plus what was learned while taking it.
#[derive(Debug, Clone)]
pub struct StepReport {
    /// Norm of r - R(f^n), measured before the step.
    pub defect_norm: f64,
    pub omega: f64,
    pub slope_fallbacks: usize,
}

fn update(
    sol: &GridSolution,
    direction: &[Vec<f64>],
    omega: f64,
    stage: &'static str,
) -> Result<GridSolution> {
    let cells = sol
        .cells
        .par_iter()
        .zip(direction)
        .enumerate()
        .map(|(i, (c, d))| {
            let mut e = c.expansion().clone();
            for (x, y) in e.coeffs.iter_mut().zip(d) {
                *x += omega * y;
            }
            adapt(&e).map_err(|err| err.with_context(None, Some(i), Some(stage)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridSolution {
        cells,
        mesh: sol.mesh.clone(),
    })
}

/// One Heun step given the precomputed defect d^n = r - R(f^n).
pub fn heun_step_from_defect(
    sol: &GridSolution,
    d_n: &[Vec<f64>],
    rhs: &RhsField,
    physics: &Physics,
    cfg: &SmootherConfig,
) -> Result<(GridSolution, usize)> {
    let omega = step_size(sol, cfg);
    let star = update(sol, d_n, omega, "heun stage 1")?;
    let (d_star, fallbacks) = defect(&star, rhs, physics)?;

    // bring r - R(f*) from the f* bases back to the f^n bases
    let order = sol.order();
    let avg: Vec<Vec<f64>> = sol
        .cells
        .par_iter()
        .zip(star.cells.par_iter().zip(d_star.into_par_iter()))
        .zip(d_n.par_iter())
        .map(|((c, (s, ds)), dn)| {
            let back = if s.u() == c.u() && s.theta() == c.theta() {
                ds
            } else {
                project_expansion(&Expansion::new(s.u(), s.theta(), ds), c.u(), c.theta(), order)?.coeffs
            };
            Ok(back.iter().zip(dn).map(|(a, b)| 0.5 * (a + b)).collect())
        })
        .collect::<Result<_>>()?;
    let mut next = update(sol, &avg, omega, "heun stage 2")?;
    if cfg.renormalize_mass {
        let factor = cfg.target_mass / next.total_mass();
        next.cells = next.cells.iter().map(|c| c.scaled(factor)).collect();
    }
    Ok((next, fallbacks))
}

pub fn heun_step(
    sol: &GridSolution,
    rhs: &RhsField,
    physics: &Physics,
    cfg: &SmootherConfig,
) -> Result<(GridSolution, StepReport)> {
    let (d_n, f0) = defect(sol, rhs, physics)?;
    let defect_norm = residual_norm(&d_n, &sol.mesh);
    let omega = step_size(sol, cfg);
    let (next, f1) = heun_step_from_defect(sol, &d_n, rhs, physics, cfg)?;
    Ok((
        next,
        StepReport {
            defect_norm,
            omega,
            slope_fallbacks: f0 + f1,
        },
    ))
}

/// Heun steps until |r - R(f)| < tol or `max_iters` steps have been taken.
pub fn solve_single_level(
    mut sol: GridSolution,
    rhs: &RhsField,
    physics: &Physics,
    cfg: &SmootherConfig,
    tol: f64,
    max_iters: usize,
) -> Result<(GridSolution, ConvergenceRecord)> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let start = Instant::now();
    let mut history = Vec::new();
    let mut fallbacks = 0;
    let mut k = 0;
    loop {
        let (d, f) = defect(&sol, rhs, physics)?;
        fallbacks += f;
        let norm = residual_norm(&d, &sol.mesh);
        history.push(HistoryEntry {
            iteration: k,
            residual_norm: norm,
            work_units: k as f64,
            seconds: start.elapsed().as_secs_f64(),
        });
        if !norm.is_finite() {
            return Err(Error::realizability(f64::NAN, f64::NAN).with_context(Some(0), None, Some("residual norm")));
        }
        let converged = norm < tol;
        if converged || k >= max_iters {
            let record = ConvergenceRecord {
                iterations: k,
                work_units: k as f64,
                wall_seconds: start.elapsed().as_secs_f64(),
                history,
                converged,
                slope_fallbacks: fallbacks,
            };
            return Ok((sol, record));
        }
        let (next, f) = heun_step_from_defect(&sol, &d, rhs, physics, cfg)?;
        fallbacks += f;
        sol = next;
        k += 1;
    }
}
