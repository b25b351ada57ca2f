//! The three planar microflows (Couette, Poiseuille, Fourier) and the sweep
//! harness comparing multilevel runs against the single-level baseline.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetic::{FrequencyLaw, GasModel, GridSolution, Mesh1D, Physics, Reconstruction, WallBoundary};
use crate::moment::{CollisionKind, CollisionModel};
use crate::multilevel::{make_sequence, solve_nmlm, NmlmConfig, OrderSequence, Strategy};
use crate::record::ConvergenceRecord;
use crate::smoother::{solve_single_level, RhsField, SmootherConfig};

pub const COUETTE_WALL_SPEED: f64 = 1.2577;
pub const POISEUILLE_FORCE: f64 = 0.2555;
pub const FOURIER_WALL_TEMPERATURES: (f64, f64) = (0.2894, 1.0769);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseName {
    #[serde(alias = "couette")]
    Couette,
    #[serde(alias = "poiseuille")]
    Poiseuille,
    #[serde(alias = "fourier")]
    Fourier,
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseName::Couette => "Couette",
            CaseName::Poiseuille => "Poiseuille",
            CaseName::Fourier => "Fourier",
        };
        f.write_str(s)
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "couette" => Ok(CaseName::Couette),
            "poiseuille" => Ok(CaseName::Poiseuille),
            "fourier" => Ok(CaseName::Fourier),
            other => Err(Error::Config(format!("unknown benchmark '{other}'"))),
        }
    }
}

/// A value replacing one of a case's default parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OverrideValue {
    Number(f64),
    Text(String),
}

impl OverrideValue {
    fn number(&self, key: &str) -> Result<f64> {
        match self {
            OverrideValue::Number(x) => Ok(*x),
            OverrideValue::Text(_) => Err(Error::Config(format!("override '{key}' must be a number"))),
        }
    }

    fn text(&self, key: &str) -> Result<&str> {
        match self {
            OverrideValue::Text(s) => Ok(s),
            OverrideValue::Number(_) => Err(Error::Config(format!("override '{key}' must be a string"))),
        }
    }
}

pub type Overrides = BTreeMap<String, OverrideValue>;

/// Keys accepted by [`make_case`].
pub const OVERRIDE_KEYS: &[&str] = &[
    "collision",
    "domain_length",
    "force",
    "frequency_law",
    "knudsen",
    "prandtl",
    "reconstruction",
    "theta_left",
    "theta_right",
    "viscosity_index",
    "wall_speed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkCase {
    pub name: CaseName,
    pub domain_length: f64,
    pub physics: Physics,
    pub cells: usize,
    pub order: usize,
}

fn parse_kind(s: &str) -> Result<CollisionKind> {
    match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
        "bgk" => Ok(CollisionKind::Bgk),
        "shakhov" => Ok(CollisionKind::Shakhov),
        "esbgk" => Ok(CollisionKind::EsBgk),
        _ => Err(Error::Config(format!("unknown collision model '{s}'"))),
    }
}

fn parse_law(s: &str) -> Result<FrequencyLaw> {
    match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
        "hardspherepower" => Ok(FrequencyLaw::HardSpherePower),
        "variablehardsphere" | "vhs" => Ok(FrequencyLaw::VariableHardSphere),
        _ => Err(Error::Config(format!("unknown frequency law '{s}'"))),
    }
}

fn parse_reconstruction(s: &str) -> Result<Reconstruction> {
    match s.to_ascii_lowercase().as_str() {
        "linear" => Ok(Reconstruction::Linear),
        "constant" => Ok(Reconstruction::Constant),
        _ => Err(Error::Config(format!("unknown reconstruction '{s}'"))),
    }
}

/// Case `name` at order `order` on `cells` uniform cells. Couette walls move
/// tangentially (along x_2) at -u_W/2 and +u_W/2.
pub fn make_case(name: CaseName, order: usize, cells: usize, overrides: &Overrides) -> Result<BenchmarkCase> {
    if let Some(bad) = overrides.keys().find(|k| !OVERRIDE_KEYS.contains(&k.as_str())) {
        return Err(Error::Config(format!("unknown override key '{bad}'")));
    }
    if !(2..=crate::moment::MAX_ORDER).contains(&order) {
        return Err(Error::Config(format!(
            "order must lie in 2..={}, got {order}",
            crate::moment::MAX_ORDER
        )));
    }
    let (mut kn, mut w, mut law) = match name {
        CaseName::Couette => (0.1199, 0.81, FrequencyLaw::HardSpherePower),
        CaseName::Poiseuille => (0.1, 0.5, FrequencyLaw::VariableHardSphere),
        CaseName::Fourier => (0.1044, 0.657, FrequencyLaw::VariableHardSphere),
    };
    let (mut th_l, mut th_r) = match name {
        CaseName::Fourier => FOURIER_WALL_TEMPERATURES,
        _ => (1.0, 1.0),
    };
    let mut wall_speed = if name == CaseName::Couette { COUETTE_WALL_SPEED } else { 0.0 };
    let mut force = if name == CaseName::Poiseuille { POISEUILLE_FORCE } else { 0.0 };
    let mut kind = CollisionKind::EsBgk;
    let mut pr = 2.0 / 3.0;
    let mut length = 1.0;
    let mut reconstruction = Reconstruction::Linear;

    for (key, value) in overrides {
        match key.as_str() {
            "collision" => kind = parse_kind(value.text(key)?)?,
            "domain_length" => length = value.number(key)?,
            "force" => force = value.number(key)?,
            "frequency_law" => law = parse_law(value.text(key)?)?,
            "knudsen" => kn = value.number(key)?,
            "prandtl" => pr = value.number(key)?,
            "reconstruction" => reconstruction = parse_reconstruction(value.text(key)?)?,
            "theta_left" => th_l = value.number(key)?,
            "theta_right" => th_r = value.number(key)?,
            "viscosity_index" => w = value.number(key)?,
            "wall_speed" => wall_speed = value.number(key)?,
            _ => unreachable!(),
        }
    }
    if kind == CollisionKind::Bgk {
        pr = 1.0;
    }
    let collision = CollisionModel::new(kind, pr)?;
    let gas = GasModel::new(collision, kn, w, law, [0.0, force, 0.0])?;
    let left = WallBoundary::new([0.0, -0.5 * wall_speed, 0.0], th_l)?;
    let right = WallBoundary::new([0.0, 0.5 * wall_speed, 0.0], th_r)?;
    if !(length > 0.0) || cells == 0 {
        return Err(Error::Config(format!("need a positive length and cell count, got {length} and {cells}")));
    }
    Ok(BenchmarkCase {
        name,
        domain_length: length,
        physics: Physics {
            gas,
            left,
            right,
            reconstruction,
        },
        cells,
        order,
    })
}

impl BenchmarkCase {
    pub fn mesh(&self) -> Result<Arc<Mesh1D>> {
        Ok(Arc::new(Mesh1D::uniform(self.domain_length, self.cells)?))
    }

    /// Initial mass: rho = 1 over the whole domain.
    pub fn target_mass(&self) -> f64 {
        self.domain_length
    }

    pub fn with_order(&self, order: usize) -> BenchmarkCase {
        BenchmarkCase { order, ..self.clone() }
    }

    pub fn with_cells(&self, cells: usize) -> BenchmarkCase {
        BenchmarkCase { cells, ..self.clone() }
    }
}

/// Global Maxwellian rho = 1, u = 0, theta = 1 in every cell.
pub fn initial_state(case: &BenchmarkCase) -> Result<GridSolution> {
    GridSolution::uniform_maxwellian(case.mesh()?, case.order, 1.0, [0.0; 3], 1.0)
}

/// Solver knobs shared by single- and multi-level runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub cfl: f64,
    pub tol: f64,
    pub tau: f64,
    pub gamma: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    /// Cap on top-level cycles of a multilevel run.
    pub max_cycles: usize,
    /// Cap on Heun steps of a single-level run.
    pub max_iters: usize,
    pub renormalize_mass: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            cfl: SmootherConfig::DEFAULT_CFL,
            tol: 1e-8,
            tau: NmlmConfig::DEFAULT_TAU,
            gamma: 1,
            s1: 2,
            s2: 2,
            s3: 5,
            max_cycles: 20_000,
            max_iters: 200_000,
            renormalize_mass: true,
        }
    }
}

impl SolverSettings {
    pub fn smoother(&self, case: &BenchmarkCase) -> Result<SmootherConfig> {
        SmootherConfig::new(self.cfl, self.renormalize_mass, case.target_mass())
    }

    pub fn nmlm(&self, case: &BenchmarkCase, sequence: OrderSequence) -> Result<NmlmConfig> {
        let cfg = NmlmConfig {
            sequence,
            gamma: self.gamma,
            s1: self.s1,
            s2: self.s2,
            s3: self.s3,
            tau: self.tau,
            smoother: self.smoother(case)?,
            tol: self.tol,
            max_cycles: self.max_cycles,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// How a run is solved: plain Heun, or NMLM with `levels` orders from `strategy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolverChoice {
    SingleLevel,
    Multilevel { strategy: Strategy, levels: usize },
}

impl SolverChoice {
    pub fn levels(&self) -> usize {
        match self {
            SolverChoice::SingleLevel => 1,
            SolverChoice::Multilevel { levels, .. } => *levels,
        }
    }

    pub fn strategy_name(&self) -> &'static str {
        match self {
            SolverChoice::SingleLevel => "single",
            SolverChoice::Multilevel { strategy, .. } => strategy.name(),
        }
    }
}

impl SolverChoice {
    /// The order sequence for a case of order `order`; None for a single level.
    pub fn sequence(&self, order: usize) -> Result<Option<OrderSequence>> {
        match *self {
            SolverChoice::SingleLevel => Ok(None),
            SolverChoice::Multilevel { strategy, levels } => make_sequence(order, strategy, levels).map(Some),
        }
    }
}

/// Solve `case` from the initial state: plain Heun when `sequence` is None,
/// NMLM otherwise.
pub fn solve_case(
    case: &BenchmarkCase,
    sequence: Option<OrderSequence>,
    settings: &SolverSettings,
) -> Result<(GridSolution, ConvergenceRecord)> {
    let init = initial_state(case)?;
    match sequence {
        None => solve_single_level(
            init,
            &RhsField::zero(),
            &case.physics,
            &settings.smoother(case)?,
            settings.tol,
            settings.max_iters,
        ),
        Some(seq) => {
            let cfg = settings.nmlm(case, seq)?;
            solve_nmlm(init, &cfg, &case.physics)
        }
    }
}

pub fn run_case(
    case: &BenchmarkCase,
    choice: SolverChoice,
    settings: &SolverSettings,
) -> Result<(GridSolution, ConvergenceRecord)> {
    solve_case(case, choice.sequence(case.order)?, settings)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub case: CaseName,
    pub order: usize,
    pub cells: usize,
    pub choice: SolverChoice,
    pub gamma: usize,
    pub tau: f64,
    pub outcome: std::result::Result<ConvergenceRecord, String>,
    /// K_s / K against the single-level run at the same (M, N).
    pub k_ratio: Option<f64>,
    /// work_s / work against the same baseline.
    pub work_ratio: Option<f64>,
}

impl SweepRow {
    pub fn converged(&self) -> bool {
        matches!(&self.outcome, Ok(r) if r.converged)
    }
}

/// One baseline row per grid in `cells`, followed by one row per entry of
/// `choices`. Rows run concurrently; a failing row is recorded, not fatal.
pub fn run_sweep(case: &BenchmarkCase, cells: &[usize], choices: &[SolverChoice], settings: &SolverSettings) -> Vec<SweepRow> {
    let mut jobs = Vec::new();
    for &n in cells {
        jobs.push((n, SolverChoice::SingleLevel));
        for &c in choices {
            if c != SolverChoice::SingleLevel {
                jobs.push((n, c));
            }
        }
    }
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(n, choice)| {
            let c = case.with_cells(n);
            run_case(&c, choice, settings).map(|(_, r)| r).map_err(|e| e.to_string())
        })
        .collect();

    let baseline: BTreeMap<usize, ConvergenceRecord> = jobs
        .iter()
        .zip(&outcomes)
        .filter(|((_, c), o)| *c == SolverChoice::SingleLevel && matches!(o, Ok(r) if r.converged))
        .map(|((n, _), o)| (*n, o.clone().unwrap()))
        .collect();

    jobs.into_iter()
        .zip(outcomes)
        .map(|((n, choice), outcome)| {
            let (k_ratio, work_ratio) = match (&outcome, baseline.get(&n)) {
                (Ok(r), Some(b)) if r.converged && r.iterations > 0 && r.work_units > 0.0 => (
                    Some(b.iterations as f64 / r.iterations as f64),
                    Some(b.work_units / r.work_units),
                ),
                _ => (None, None),
            };
            SweepRow {
                case: case.name,
                order: case.order,
                cells: n,
                choice,
                gamma: settings.gamma,
                tau: settings.tau,
                outcome,
                k_ratio,
                work_ratio,
            }
        })
        .collect()
}
