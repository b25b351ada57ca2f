//! CSV and TOML writers. Floats are written as `{:.16e}` (17 significant
//! digits), which Rust formats identically under every locale.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use nmlm_core::benchmarks::SweepRow;
use nmlm_core::moment::extract_macros;
use nmlm_core::record::ConvergenceRecord;
use nmlm_core::kinetic::GridSolution;
use serde::Serialize;

pub const PROFILE_HEADER: &str = "x,rho,u1,u2,u3,theta,sigma11,sigma12,q1,q2";
pub const HISTORY_HEADER: &str = "iteration,residual_norm,work_units,seconds";
pub const SWEEP_HEADER: &str = "case,M,N,strategy,levels,gamma,tau,K,work_units,K_ratio,work_ratio,converged";
pub const TIMING_HEADER: &str = "case,M,N,strategy,levels,seconds";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn profile_csv(sol: &GridSolution) -> String {
    let mut s = String::from(PROFILE_HEADER);
    s.push('\n');
    for (i, cell) in sol.cells.iter().enumerate() {
        let m = extract_macros(cell);
        let row = [
            sol.mesh.center(i),
            m.rho,
            m.u[0],
            m.u[1],
            m.u[2],
            m.theta,
            m.sigma[0][0],
            m.sigma[0][1],
            m.q[0],
            m.q[1],
        ];
        let fields: Vec<String> = row.iter().map(|&v| num(v)).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

/// One row per performed iteration; the initial residual goes to the summary.
pub fn history_csv(record: &ConvergenceRecord) -> String {
    let mut s = String::from(HISTORY_HEADER);
    s.push('\n');
    for h in record.history.iter().filter(|h| h.iteration > 0) {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            h.iteration,
            num(h.residual_norm),
            num(h.work_units),
            num(h.seconds)
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub converged: bool,
    pub iterations: usize,
    pub work_units: f64,
    pub wall_seconds: f64,
    pub initial_norm: f64,
    pub final_norm: f64,
    pub slope_fallbacks: usize,
    pub total_mass: f64,
}

impl Summary {
    pub fn new(sol: &GridSolution, record: &ConvergenceRecord) -> Self {
        Summary {
            converged: record.converged,
            iterations: record.iterations,
            work_units: record.work_units,
            wall_seconds: record.wall_seconds,
            initial_norm: record.history.first().map_or(f64::NAN, |h| h.residual_norm),
            final_norm: record.final_norm(),
            slope_fallbacks: record.slope_fallbacks,
            total_mass: sol.total_mass(),
        }
    }
}

fn row_prefix(r: &SweepRow) -> String {
    format!(
        "{},{},{},{},{}",
        r.case,
        r.order,
        r.cells,
        r.choice.strategy_name(),
        r.choice.levels()
    )
}

/// The deterministic part of a sweep; timings go to [`sweep_timing_csv`].
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let (k, work) = match &r.outcome {
            Ok(rec) => (rec.iterations.to_string(), num(rec.work_units)),
            Err(_) => (String::new(), String::new()),
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            row_prefix(r),
            r.gamma,
            num(r.tau),
            k,
            work,
            opt(r.k_ratio),
            opt(r.work_ratio),
            r.converged()
        );
    }
    s
}

pub fn sweep_timing_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(TIMING_HEADER);
    s.push('\n');
    for r in rows {
        let secs = r.outcome.as_ref().ok().map(|rec| rec.wall_seconds);
        let _ = writeln!(s, "{},{}", row_prefix(r), opt(secs));
    }
    s
}

/// Write every `(name, contents)` pair into `dir`, creating it if needed.
pub fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nmlm_core::record::HistoryEntry;

    #[test]
    fn full_precision_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn history_skips_initial_entry() {
        let entry = |k| HistoryEntry {
            iteration: k,
            residual_norm: 1.0,
            work_units: k as f64,
            seconds: 0.0,
        };
        let rec = ConvergenceRecord {
            iterations: 1,
            work_units: 1.0,
            wall_seconds: 0.0,
            history: vec![entry(0), entry(1)],
            converged: false,
            slope_fallbacks: 0,
        };
        let csv = history_csv(&rec);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.ends_with('\n'));
    }
}
