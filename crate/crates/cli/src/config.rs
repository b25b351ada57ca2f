//! TOML run and sweep configurations, validated before any compute.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use nmlm_core::benchmarks::{make_case, BenchmarkCase, CaseName, Overrides, SolverChoice, SolverSettings};
use nmlm_core::multilevel::{make_sequence, OrderSequence, Strategy};
use serde::{Deserialize, Serialize};

/// Directory used when neither `--out` nor `output` is given.
pub const DEFAULT_OUTPUT: &str = "nmlm-out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultilevelSpec {
    pub strategy: Strategy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    /// Ascending orders, required for the Explicit strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
}

impl MultilevelSpec {
    pub fn sequence(&self, order: usize) -> Result<OrderSequence> {
        match (self.strategy, &self.orders, self.levels) {
            (Strategy::Explicit, Some(orders), _) => {
                let seq = OrderSequence::explicit(orders.clone())?;
                if seq.top() != order {
                    bail!("explicit orders {orders:?} must end at the model order {order}");
                }
                Ok(seq)
            }
            (Strategy::Explicit, None, _) => bail!("the Explicit strategy needs an 'orders' list"),
            (_, Some(_), _) => bail!("'orders' is only valid with the Explicit strategy"),
            (s, None, Some(levels)) => Ok(make_sequence(order, s, levels)?),
            (_, None, None) => bail!("multilevel runs need 'levels'"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub case: CaseName,
    pub order: usize,
    pub cells: usize,
    #[serde(default, skip_serializing_if = "Overrides::is_empty")]
    pub overrides: Overrides,
    #[serde(default)]
    pub solver: SolverSettings,
    /// Absent: single-level Heun iteration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multilevel: Option<MultilevelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// A run whose every parameter has been checked.
#[derive(Debug, Clone)]
pub struct ValidatedRun {
    pub config: RunConfig,
    pub case: BenchmarkCase,
    pub sequence: Option<OrderSequence>,
}

fn check_settings(s: &SolverSettings, case: &BenchmarkCase) -> Result<()> {
    s.smoother(case)?;
    if !(s.tol > 0.0) {
        bail!("tolerance must be positive, got {}", s.tol);
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read(path)?).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(self) -> Result<ValidatedRun> {
        let case = make_case(self.case, self.order, self.cells, &self.overrides)?;
        check_settings(&self.solver, &case)?;
        let sequence = match &self.multilevel {
            None => None,
            Some(ml) => {
                let seq = ml.sequence(self.order)?;
                self.solver.nmlm(&case, seq.clone())?;
                Some(seq)
            }
        };
        Ok(ValidatedRun {
            config: self,
            case,
            sequence,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepEntry {
    pub strategy: Strategy,
    pub levels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub case: CaseName,
    pub order: usize,
    pub cells: Vec<usize>,
    #[serde(default, skip_serializing_if = "Overrides::is_empty")]
    pub overrides: Overrides,
    #[serde(default)]
    pub solver: SolverSettings,
    /// Multilevel configurations compared against the single-level baseline.
    #[serde(default)]
    pub runs: Vec<SweepEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct ValidatedSweep {
    pub config: SweepConfig,
    pub case: BenchmarkCase,
    pub choices: Vec<SolverChoice>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read(path)?).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(self) -> Result<ValidatedSweep> {
        if self.cells.is_empty() {
            bail!("sweep needs at least one grid size");
        }
        let mut case = None;
        for &n in &self.cells {
            case = Some(make_case(self.case, self.order, n, &self.overrides)?);
        }
        let case = case.unwrap();
        check_settings(&self.solver, &case)?;
        let mut choices = Vec::new();
        for e in &self.runs {
            if e.strategy == Strategy::Explicit {
                bail!("sweeps take generated strategies, not Explicit");
            }
            let choice = if e.levels == 1 {
                SolverChoice::SingleLevel
            } else {
                SolverChoice::Multilevel {
                    strategy: e.strategy,
                    levels: e.levels,
                }
            };
            if let Some(seq) = choice.sequence(self.order)? {
                self.solver.nmlm(&case, seq)?;
            }
            choices.push(choice);
        }
        Ok(ValidatedSweep {
            config: self,
            case,
            choices,
        })
    }
}
