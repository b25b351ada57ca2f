//! Nonlinear multi-level moment iteration: a full-approximation-scheme cycle
//! in which the coarse levels are lower-order moment models on the same mesh.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetic::{residual, GridSolution, Physics};
use crate::moment::{adapt, basis_size, Expansion, MomentState};
use crate::record::{ConvergenceRecord, HistoryEntry};
use crate::smoother::{defect, heun_step_from_defect, residual_norm, RhsField, SmootherConfig};

/// Rule producing m_{l-1} from m_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(alias = "minus_one")]
    MinusOne,
    #[serde(alias = "minus_two")]
    MinusTwo,
    #[serde(alias = "minus_four")]
    MinusFour,
    #[serde(alias = "half_ceil")]
    HalfCeil,
    #[serde(alias = "explicit")]
    Explicit,
}

impl Strategy {
    fn reduce(self, m: usize) -> Option<usize> {
        match self {
            Strategy::MinusOne => m.checked_sub(1),
            Strategy::MinusTwo => m.checked_sub(2),
            Strategy::MinusFour => m.checked_sub(4),
            Strategy::HalfCeil => Some(m.div_ceil(2)),
            Strategy::Explicit => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::MinusOne => "MinusOne",
            Strategy::MinusTwo => "MinusTwo",
            Strategy::MinusFour => "MinusFour",
            Strategy::HalfCeil => "HalfCeil",
            Strategy::Explicit => "Explicit",
        }
    }
}

/// Orders m_0 < m_1 < ... < m_L, with m_0 >= 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSequence {
    orders: Vec<usize>,
    strategy: Strategy,
}

impl OrderSequence {
    pub fn explicit(orders: Vec<usize>) -> Result<Self> {
        Self::checked(orders, Strategy::Explicit)
    }

    /// A single level at order `m`.
    pub fn single(m: usize) -> Result<Self> {
        Self::checked(vec![m], Strategy::Explicit)
    }

    fn checked(orders: Vec<usize>, strategy: Strategy) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::Config("order sequence is empty".into()));
        }
        if orders[0] < 2 {
            return Err(Error::Config(format!("lowest order must be at least 2, got {}", orders[0])));
        }
        if orders.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("orders must increase strictly: {orders:?}")));
        }
        Ok(OrderSequence { orders, strategy })
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Number of levels L + 1.
    pub fn levels(&self) -> usize {
        self.orders.len()
    }

    pub fn top(&self) -> usize {
        *self.orders.last().unwrap()
    }
}

/// Chain of `levels` orders descending from `m` by `strategy`, returned ascending.
pub fn make_sequence(m: usize, strategy: Strategy, levels: usize) -> Result<OrderSequence> {
    if levels == 0 {
        return Err(Error::Config("at least one level is required".into()));
    }
    if strategy == Strategy::Explicit && levels > 1 {
        return Err(Error::Config("explicit sequences are built with OrderSequence::explicit".into()));
    }
    let mut chain = vec![m];
    while chain.len() < levels {
        let last = *chain.last().unwrap();
        match strategy.reduce(last) {
            Some(next) if next >= 2 && next < last => chain.push(next),
            _ => {
                return Err(Error::Config(format!(
                    "{} from order {m} cannot provide {levels} levels of order >= 2",
                    strategy.name()
                )))
            }
        }
    }
    chain.reverse();
    OrderSequence::checked(chain, strategy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NmlmConfig {
    pub sequence: OrderSequence,
    /// 1 for V-cycles, 2 for W-cycles.
    pub gamma: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub tau: f64,
    pub smoother: SmootherConfig,
    pub tol: f64,
    pub max_cycles: usize,
}

impl NmlmConfig {
    pub const DEFAULT_TAU: f64 = 0.9;

    /// Defaults s1 = s2 = 2, s3 = 5, tau = 0.9, V-cycles.
    pub fn with_defaults(sequence: OrderSequence, smoother: SmootherConfig, tol: f64, max_cycles: usize) -> Self {
        NmlmConfig {
            sequence,
            gamma: 1,
            s1: 2,
            s2: 2,
            s3: 5,
            tau: Self::DEFAULT_TAU,
            smoother,
            tol,
            max_cycles,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma == 0 {
            return Err(Error::Config("gamma must be at least 1".into()));
        }
        if self.s1 == 0 || self.s2 == 0 || self.s3 == 0 {
            return Err(Error::Config("smoothing counts must be positive".into()));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::Config(format!("tau must lie in (0, 1], got {}", self.tau)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Keep (u, theta) and the first basis_size(m) coefficients of every cell.
pub fn restrict_solution(sol: &GridSolution, m: usize) -> Result<GridSolution> {
    if m > sol.order() {
        return Err(Error::Domain(format!("cannot restrict order {} to {m}", sol.order())));
    }
    let cells = sol
        .cells
        .iter()
        .map(|c| MomentState::from_expansion(c.expansion().truncated(m)))
        .collect::<Result<_>>()?;
    Ok(GridSolution {
        cells,
        mesh: sol.mesh.clone(),
    })
}

/// Coefficient-prefix truncation of a per-cell field.
pub fn restrict_residual(field: &[Expansion], m: usize) -> Vec<Expansion> {
    field.iter().map(|e| e.truncated(m)).collect()
}

/// Coarse problem R_m(f_m) = R_m(I f) + I (r - R(f)) for the fine defect
/// `fine_defect` = r - R(f) given in the fine cell bases.
pub fn assemble_lower_problem(
    fine_sol: &GridSolution,
    fine_defect: &[Vec<f64>],
    m: usize,
    physics: &Physics,
) -> Result<(GridSolution, RhsField)> {
    let coarse = restrict_solution(fine_sol, m)?;
    let r_m = residual(&coarse, physics)?;
    let n = basis_size(m);
    let cells = r_m
        .cells
        .into_iter()
        .zip(fine_defect)
        .map(|(mut e, d)| {
            for (x, y) in e.coeffs.iter_mut().zip(&d[..n]) {
                *x += y;
            }
            e
        })
        .collect();
    Ok((coarse, RhsField::from_cells(cells)))
}

/// Relaxed correction: the low-order block of the fine solution (u, theta and
/// f_alpha for |alpha| <= m) moves a fraction tau of the way from
/// `coarse_before` to `coarse_after`; higher coefficients are kept. When
/// `coarse_before` is the restriction of `fine`, this is the convex blend
/// (1 - tau) fine + tau coarse_after of the low block.
pub fn correct(
    fine: &GridSolution,
    coarse_before: &GridSolution,
    coarse_after: &GridSolution,
    tau: f64,
) -> Result<GridSolution> {
    let cells = fine
        .cells
        .iter()
        .zip(coarse_before.cells.iter().zip(&coarse_after.cells))
        .enumerate()
        .map(|(i, (f, (b, a)))| {
            let mut e = f.expansion().clone();
            for d in 0..3 {
                e.u[d] += tau * (a.u()[d] - b.u()[d]);
            }
            e.theta += tau * (a.theta() - b.theta());
            for (x, (pa, pb)) in e.coeffs.iter_mut().zip(a.coeffs().iter().zip(b.coeffs())) {
                *x += tau * (pa - pb);
            }
            if !(e.theta > 0.0) {
                return Err(Error::realizability(e.coeffs[0], e.theta).with_context(None, Some(i), Some("correction")));
            }
            adapt(&e).map_err(|err| err.with_context(None, Some(i), Some("correction")))
        })
        .collect::<Result<_>>()?;
    Ok(GridSolution {
        cells,
        mesh: fine.mesh.clone(),
    })
}

/// Heun steps taken per level, and the fine-equivalent work they represent.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkLedger {
    orders: Vec<usize>,
    pub steps: Vec<usize>,
    pub slope_fallbacks: usize,
}

impl WorkLedger {
    pub fn new(sequence: &OrderSequence) -> Self {
        WorkLedger {
            orders: sequence.orders().to_vec(),
            steps: vec![0; sequence.levels()],
            slope_fallbacks: 0,
        }
    }

    /// sum_l steps_l basis_size(m_l) / basis_size(m_L)
    pub fn work_units(&self) -> f64 {
        let top = basis_size(*self.orders.last().unwrap()) as f64;
        self.orders
            .iter()
            .zip(&self.steps)
            .map(|(m, s)| *s as f64 * basis_size(*m) as f64 / top)
            .sum()
    }
}

struct Cycle<'a> {
    cfg: &'a NmlmConfig,
    physics: &'a Physics,
    ledger: WorkLedger,
}

impl Cycle<'_> {
    fn smoother(&self, level: usize) -> SmootherConfig {
        if level + 1 == self.cfg.sequence.levels() {
            self.cfg.smoother
        } else {
            self.cfg.smoother.without_renormalization()
        }
    }

    fn smooth(
        &mut self,
        level: usize,
        mut sol: GridSolution,
        rhs: &RhsField,
        steps: usize,
        mut first_defect: Option<Vec<Vec<f64>>>,
    ) -> Result<GridSolution> {
        let cfg = self.smoother(level);
        for _ in 0..steps {
            let d = match first_defect.take() {
                Some(d) => d,
                None => {
                    let (d, f) = defect(&sol, rhs, self.physics)?;
                    self.ledger.slope_fallbacks += f;
                    d
                }
            };
            let (next, f) = heun_step_from_defect(&sol, &d, rhs, self.physics, &cfg)?;
            self.ledger.slope_fallbacks += f;
            self.ledger.steps[level] += 1;
            sol = next;
        }
        Ok(sol)
    }

    fn run(
        &mut self,
        level: usize,
        sol: GridSolution,
        rhs: &RhsField,
        first_defect: Option<Vec<Vec<f64>>>,
    ) -> Result<GridSolution> {
        let tag = |e: Error| e.with_context(Some(level), None, None);
        if level == 0 {
            return self.smooth(0, sol, rhs, self.cfg.s3, first_defect).map_err(tag);
        }
        let pre = self.smooth(level, sol, rhs, self.cfg.s1, first_defect).map_err(tag)?;
        let (d, f) = defect(&pre, rhs, self.physics).map_err(tag)?;
        self.ledger.slope_fallbacks += f;
        let m = self.cfg.sequence.orders()[level - 1];
        let (before, coarse_rhs) = assemble_lower_problem(&pre, &d, m, self.physics).map_err(tag)?;
        let mut after = before.clone();
        for _ in 0..self.cfg.gamma {
            after = self.run(level - 1, after, &coarse_rhs, None)?;
        }
        let corrected = correct(&pre, &before, &after, self.cfg.tau).map_err(tag)?;
        self.smooth(level, corrected, rhs, self.cfg.s2, None).map_err(tag)
    }
}

/// One cycle at `level` for R_{m_level}(f) = rhs. Returns the new solution and
/// the work it took.
pub fn nmlm_cycle(
    level: usize,
    sol: GridSolution,
    rhs: &RhsField,
    cfg: &NmlmConfig,
    physics: &Physics,
) -> Result<(GridSolution, WorkLedger)> {
    if level >= cfg.sequence.levels() {
        return Err(Error::Config(format!("level {level} is outside the order sequence")));
    }
    if sol.order() != cfg.sequence.orders()[level] {
        return Err(Error::Config(format!(
            "solution order {} does not match level order {}",
            sol.order(),
            cfg.sequence.orders()[level]
        )));
    }
    let mut c = Cycle {
        cfg,
        physics,
        ledger: WorkLedger::new(&cfg.sequence),
    };
    let out = c.run(level, sol, rhs, None)?;
    Ok((out, c.ledger))
}

/// Top-level cycles until |R(f)| < tol or `max_cycles` cycles. The recorded
/// iteration count is the number of top-level cycles.
pub fn solve_nmlm(initial: GridSolution, cfg: &NmlmConfig, physics: &Physics) -> Result<(GridSolution, ConvergenceRecord)> {
    cfg.validate()?;
    let top = cfg.sequence.levels() - 1;
    if initial.order() != cfg.sequence.top() {
        return Err(Error::Config(format!(
            "initial order {} does not match top order {}",
            initial.order(),
            cfg.sequence.top()
        )));
    }
    let start = Instant::now();
    let zero = RhsField::zero();
    let mut c = Cycle {
        cfg,
        physics,
        ledger: WorkLedger::new(&cfg.sequence),
    };
    let mut sol = initial;
    let mut history = Vec::new();
    let mut k = 0;
    loop {
        let (d, f) = defect(&sol, &zero, physics)?;
        c.ledger.slope_fallbacks += f;
        let norm = residual_norm(&d, &sol.mesh);
        let work = c.ledger.work_units();
        history.push(HistoryEntry {
            iteration: k,
            residual_norm: norm,
            work_units: work,
            seconds: start.elapsed().as_secs_f64(),
        });
        if !norm.is_finite() {
            return Err(Error::realizability(f64::NAN, f64::NAN).with_context(Some(top), None, Some("residual norm")));
        }
        let converged = norm < cfg.tol;
        if converged || k >= cfg.max_cycles {
            let record = ConvergenceRecord {
                iterations: k,
                work_units: work,
                wall_seconds: start.elapsed().as_secs_f64(),
                history,
                converged,
                slope_fallbacks: c.ledger.slope_fallbacks,
            };
            return Ok((sol, record));
        }
        sol = c.run(top, sol, &zero, Some(d))?;
        k += 1;
    }
}
