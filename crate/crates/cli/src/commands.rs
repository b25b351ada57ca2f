//! The `run`, `sweep` and `verify` subcommands. Each returns a process exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Result;
use nmlm_core::benchmarks::{run_sweep, solve_case};
use nmlm_core::verify::{run_oracle_suite, Subject, VerifyReport};

use crate::config::{RunConfig, SweepConfig, DEFAULT_OUTPUT};
use crate::output::{history_csv, profile_csv, sweep_csv, sweep_timing_csv, write_all, Summary};

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNCONVERGED: i32 = 2;

/// Orders covered by `verify` unless told otherwise.
pub const VERIFY_ORDERS: [usize; 5] = [2, 3, 4, 5, 6];

#[derive(Debug, Clone, Default)]
pub struct GlobalOptions {
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

impl GlobalOptions {
    fn out_dir(&self, from_config: Option<&PathBuf>) -> PathBuf {
        self.out
            .clone()
            .or_else(|| from_config.cloned())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT))
    }
}

fn report_error(e: &anyhow::Error) -> i32 {
    eprintln!("error: {e:#}");
    EXIT_ERROR
}

pub fn cmd_run(path: &Path, opts: &GlobalOptions) -> i32 {
    match try_run(path, opts) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    }
}

fn try_run(path: &Path, opts: &GlobalOptions) -> Result<i32> {
    let run = RunConfig::load(path)?.validate()?;
    let dir = opts.out_dir(run.config.output.as_ref());
    let (sol, record) = solve_case(&run.case, run.sequence.clone(), &run.config.solver)?;
    let summary = Summary::new(&sol, &record);
    write_all(
        &dir,
        &[
            ("profile.csv", profile_csv(&sol)),
            ("history.csv", history_csv(&record)),
            ("summary.toml", toml::to_string(&summary)?),
            ("config.toml", run.config.to_toml()?),
        ],
    )?;
    if !opts.quiet {
        let status = if record.converged { "converged" } else { "not converged" };
        println!(
            "{status}: K = {}, work = {:.1}, final norm = {:.3e}, {:.2} s -> {}",
            record.iterations,
            record.work_units,
            record.final_norm(),
            record.wall_seconds,
            dir.display()
        );
    }
    Ok(if record.converged { EXIT_CONVERGED } else { EXIT_UNCONVERGED })
}

pub fn cmd_sweep(path: &Path, opts: &GlobalOptions) -> i32 {
    match try_sweep(path, opts) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    }
}

fn try_sweep(path: &Path, opts: &GlobalOptions) -> Result<i32> {
    let sweep = SweepConfig::load(path)?.validate()?;
    let dir = opts.out_dir(sweep.config.output.as_ref());
    let rows = run_sweep(&sweep.case, &sweep.config.cells, &sweep.choices, &sweep.config.solver);
    for r in &rows {
        if let Err(msg) = &r.outcome {
            eprintln!(
                "error: N = {}, {} ({} levels): {msg}",
                r.cells,
                r.choice.strategy_name(),
                r.choice.levels()
            );
        }
    }
    write_all(
        &dir,
        &[
            ("sweep.csv", sweep_csv(&rows)),
            ("sweep_timing.csv", sweep_timing_csv(&rows)),
            ("config.toml", sweep.config.to_toml()?),
        ],
    )?;
    let all = rows.iter().all(|r| r.converged());
    if !opts.quiet {
        let done = rows.iter().filter(|r| r.converged()).count();
        println!("{done}/{} rows converged -> {}", rows.len(), dir.display());
    }
    Ok(if all { EXIT_CONVERGED } else { EXIT_UNCONVERGED })
}

/// Print a pass/fail line per check and a closing tally.
pub fn print_report(report: &VerifyReport, quiet: bool, out: &mut dyn Write) -> std::io::Result<()> {
    for c in &report.checks {
        if quiet && c.passed() {
            continue;
        }
        writeln!(
            out,
            "{} M={} {:<30} max error {:.3e} (tol {:.0e}, {} cases)",
            if c.passed() { "PASS" } else { "FAIL" },
            c.order,
            c.name,
            c.max_error,
            c.tolerance,
            c.cases
        )?;
    }
    let failed = report.checks.iter().filter(|c| !c.passed()).count();
    writeln!(out, "{} checks, {failed} failed", report.checks.len())
}

pub fn cmd_verify(subject: &dyn Subject, orders: &[usize], cases: usize, opts: &GlobalOptions) -> i32 {
    if orders.is_empty() || orders.iter().any(|&m| m < 2) || cases == 0 {
        eprintln!("error: verify needs orders >= 2 and at least one case");
        return EXIT_ERROR;
    }
    let report = run_oracle_suite(subject, orders, cases);
    let mut text = Vec::new();
    let _ = print_report(&report, opts.quiet, &mut text);
    print!("{}", String::from_utf8_lossy(&text));
    if report.all_passed() {
        EXIT_CONVERGED
    } else {
        EXIT_ERROR
    }
}
