//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails. Built with `harness = false`, so the report is
//! printed by a plain `cargo test`.

use std::fs;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use nmlm_core::benchmarks::{
    initial_state, make_case, solve_case, BenchmarkCase, CaseName, Overrides, SolverSettings,
};
use nmlm_core::kinetic::{
    collision_coeffs, residual, FrequencyLaw, GasModel, GridSolution, Mesh1D, Physics, WallBoundary,
};
use nmlm_core::moment::{extract_macros, project_to_params, CollisionKind, CollisionModel};
use nmlm_core::multilevel::{make_sequence, nmlm_cycle, OrderSequence, Strategy};
use nmlm_core::record::ConvergenceRecord;
use nmlm_core::smoother::{heun_step, residual_norm, RhsField};
use nmlm_core::verify::{run_oracle_suite, sample_adapted_state, Library, Weyl, ORACLE_TOLERANCE};
use rayon::prelude::*;

const ORACLE_STATES: usize = 200;
const STEADY_TOL: f64 = 1e-12;
const MIN_K_RATIO: f64 = 5.0;
const MIN_WORK_RATIO: f64 = 1.5;
const GRID_RATIO: (f64, f64) = (1.6, 2.4);
const SOLVER_AGREEMENT: f64 = 1e-6;
const BULK: (f64, f64) = (0.25, 0.75);
const BULK_SPREAD: f64 = 0.02;
/// RMS misfit of the best symmetric parabola, relative to the range of theta.
const MIN_PARABOLA_MISFIT: f64 = 0.05;
const MASS_TOL: f64 = 1e-14;
const INVARIANT_TOL: f64 = 1e-12;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn settings() -> SolverSettings {
    SolverSettings {
        tol: 1e-8,
        ..SolverSettings::default()
    }
}

fn case(name: CaseName, order: usize, cells: usize) -> BenchmarkCase {
    make_case(name, order, cells, &Overrides::new()).unwrap()
}

fn solve(case: &BenchmarkCase, seq: Option<OrderSequence>) -> (GridSolution, ConvergenceRecord) {
    solve_case(case, seq, &settings()).unwrap()
}

fn minus_two(order: usize, levels: usize) -> Option<OrderSequence> {
    Some(make_sequence(order, Strategy::MinusTwo, levels).unwrap())
}

fn c1_oracle() -> Outcome {
    let report = run_oracle_suite(&Library, &[2, 3, 4, 5, 6], ORACLE_STATES);
    let worst = report.checks.iter().map(|c| c.max_error).fold(0.0, f64::max);
    let failed: Vec<_> = report
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{} M={}", c.name, c.order))
        .collect();
    outcome(
        report.all_passed() && worst <= ORACLE_TOLERANCE,
        format!("{} checks x {ORACLE_STATES} states, max error {worst:.2e}, failed {failed:?}", report.checks.len()),
    )
}

fn c2_steady_maxwellian() -> Outcome {
    let gas = GasModel::new(
        CollisionModel::new(CollisionKind::EsBgk, 2.0 / 3.0).unwrap(),
        0.1199,
        0.81,
        FrequencyLaw::HardSpherePower,
        [0.0; 3],
    )
    .unwrap();
    let wall = WallBoundary::stationary(1.0).unwrap();
    let physics = Physics::new(gas, wall, wall);
    let mesh = Arc::new(Mesh1D::uniform(1.0, 50).unwrap());
    let mut norms = Vec::new();
    for order in [4, 10] {
        let sol = GridSolution::uniform_maxwellian(mesh.clone(), order, 1.0, [0.0; 3], 1.0).unwrap();
        let r = residual(&sol, &physics).unwrap();
        let field: Vec<Vec<f64>> = r.cells.into_iter().map(|e| e.coeffs).collect();
        norms.push(residual_norm(&field, &mesh));
    }
    outcome(
        norms.iter().all(|&n| n <= STEADY_TOL),
        format!("|R| at M=4: {:.2e}, M=10: {:.2e}", norms[0], norms[1]),
    )
}

fn c3_c6_order_four() -> (Outcome, Outcome) {
    let c100 = case(CaseName::Couette, 4, 100);
    let c50 = case(CaseName::Couette, 4, 50);
    let runs: Vec<ConvergenceRecord> = [(&c100, None), (&c100, minus_two(4, 2)), (&c50, None)]
        .into_par_iter()
        .map(|(c, s)| solve(c, s).1)
        .collect();
    let (single, ml, coarse) = (&runs[0], &runs[1], &runs[2]);
    let k_ratio = single.iterations as f64 / ml.iterations as f64;
    let w_ratio = single.work_units / ml.work_units;
    let c3 = outcome(
        single.converged && ml.converged && k_ratio >= MIN_K_RATIO && w_ratio >= MIN_WORK_RATIO,
        format!(
            "K_s = {}, K = {}, K_s/K = {k_ratio:.2}, work_s/work = {w_ratio:.2}",
            single.iterations, ml.iterations
        ),
    );
    let g = single.iterations as f64 / coarse.iterations as f64;
    let c6 = outcome(
        single.converged && coarse.converged && (GRID_RATIO.0..=GRID_RATIO.1).contains(&g),
        format!("K(100) = {}, K(50) = {}, ratio {g:.3}", single.iterations, coarse.iterations),
    );
    (c3, c6)
}

/// Criteria 4 and 5, plus the multilevel monotonicity regression along HalfCeil.
fn c4_c5_order_ten() -> (Outcome, Outcome, Outcome) {
    let c = case(CaseName::Couette, 10, 100);
    let seq = |s, l| Some(make_sequence(10, s, l).unwrap());
    let jobs = vec![
        seq(Strategy::MinusTwo, 2),
        seq(Strategy::MinusTwo, 3),
        seq(Strategy::MinusTwo, 4),
        seq(Strategy::HalfCeil, 2),
        seq(Strategy::MinusOne, 2),
        seq(Strategy::HalfCeil, 3),
        None,
    ];
    let r: Vec<ConvergenceRecord> = jobs.into_par_iter().map(|s| solve(&c, s).1).collect();
    let all = r.iter().all(|x| x.converged);
    let k: Vec<usize> = r.iter().map(|x| x.iterations).collect();
    let w: Vec<f64> = r.iter().map(|x| x.work_units).collect();
    let c4 = outcome(
        all && k[0] > k[1] && k[1] > k[2] && w[3] < w[0],
        format!(
            "MinusTwo K: {} > {} > {}; work HalfCeil(2) {:.0} < MinusTwo(2) {:.0}",
            k[0], k[1], k[2], w[3], w[0]
        ),
    );
    let c5 = outcome(
        all && w[3] <= w[0] && w[0] <= w[4],
        format!("work HalfCeil {:.0} <= MinusTwo {:.0} <= MinusOne {:.0}", w[3], w[0], w[4]),
    );
    let mono = outcome(
        all && k[5] <= k[3] && k[3] <= k[6],
        format!("HalfCeil(3) K = {} <= HalfCeil(2) K = {} <= single-level K = {}", k[5], k[3], k[6]),
    );
    (c4, c5, mono)
}

/// Weighted L2 distance with b re-expressed in a's cell bases.
fn solution_distance(a: &GridSolution, b: &GridSolution) -> f64 {
    let sum: f64 = a
        .cells
        .iter()
        .zip(&b.cells)
        .zip(a.mesh.widths())
        .map(|((x, y), w)| {
            let y = project_to_params(y, x.u(), x.theta(), x.order()).unwrap();
            w * x.coeffs().iter().zip(y.coeffs()).map(|(p, q)| (p - q) * (p - q)).sum::<f64>()
        })
        .sum();
    sum.sqrt()
}

fn c7_solver_agreement() -> Outcome {
    let names = [CaseName::Couette, CaseName::Poiseuille, CaseName::Fourier];
    let d: Vec<(f64, bool)> = names
        .par_iter()
        .map(|&n| {
            let c = case(n, 4, 50);
            let (a, ra) = solve(&c, None);
            let (b, rb) = solve(&c, Some(make_sequence(4, Strategy::MinusOne, 3).unwrap()));
            (solution_distance(&a, &b), ra.converged && rb.converged)
        })
        .collect();
    outcome(
        d.iter().all(|&(x, ok)| ok && x <= SOLVER_AGREEMENT),
        format!(
            "distance Couette {:.2e}, Poiseuille {:.2e}, Fourier {:.2e}",
            d[0].0, d[1].0, d[2].0
        ),
    )
}

fn bulk_spread(sol: &GridSolution, value: impl Fn(&nmlm_core::moment::MacroQuantities) -> f64) -> f64 {
    let v: Vec<f64> = (0..sol.len())
        .filter(|&i| (BULK.0..=BULK.1).contains(&sol.mesh.center(i)))
        .map(|i| value(&extract_macros(&sol.cells[i])))
        .collect();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let (lo, hi) = v.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    (hi - lo) / mean.abs()
}

/// Least-squares fit theta = a + b (x - 1/2)^2; RMS misfit over the range of theta.
fn parabola_misfit(x: &[f64], t: &[f64]) -> f64 {
    let s: Vec<f64> = x.iter().map(|x| (x - 0.5).powi(2)).collect();
    let n = x.len() as f64;
    let (ms, mt) = (s.iter().sum::<f64>() / n, t.iter().sum::<f64>() / n);
    let cov: f64 = s.iter().zip(t).map(|(a, b)| (a - ms) * (b - mt)).sum();
    let var: f64 = s.iter().map(|a| (a - ms).powi(2)).sum();
    let b = cov / var;
    let a = mt - b * ms;
    let rms = (s.iter().zip(t).map(|(si, ti)| (ti - a - b * si).powi(2)).sum::<f64>() / n).sqrt();
    let (lo, hi) = t.iter().fold((f64::MAX, f64::MIN), |(p, q), &v| (p.min(v), q.max(v)));
    rms / (hi - lo)
}

fn c8_physical_sanity() -> Outcome {
    let names = [CaseName::Fourier, CaseName::Couette, CaseName::Poiseuille];
    let sols: Vec<(GridSolution, bool)> = names
        .par_iter()
        .map(|&n| {
            let (s, r) = solve(&case(n, 8, 100), Some(make_sequence(8, Strategy::HalfCeil, 2).unwrap()));
            (s, r.converged)
        })
        .collect();
    let q1 = bulk_spread(&sols[0].0, |m| m.q[0]);
    let s12 = bulk_spread(&sols[1].0, |m| m.sigma[0][1]);
    let p = &sols[2].0;
    let x: Vec<f64> = (0..p.len()).map(|i| p.mesh.center(i)).collect();
    let t: Vec<f64> = p.cells.iter().map(|c| c.theta()).collect();
    let misfit = parabola_misfit(&x, &t);
    let centre_dip = t[p.len() / 2] < t.iter().cloned().fold(f64::MIN, f64::max);
    outcome(
        sols.iter().all(|s| s.1) && q1 <= BULK_SPREAD && s12 <= BULK_SPREAD && misfit > MIN_PARABOLA_MISFIT,
        format!(
            "Fourier q1 spread {:.2}%, Couette sigma12 spread {:.2}%, Poiseuille parabola misfit {:.1}% (centre dip: {centre_dip})",
            100.0 * q1,
            100.0 * s12,
            100.0 * misfit
        ),
    )
}

fn c9_conservation() -> Outcome {
    let mut worst_mass = 0.0_f64;
    for name in [CaseName::Couette, CaseName::Poiseuille, CaseName::Fourier] {
        let c = case(name, 6, 50);
        let s = settings();
        let target = c.target_mass();
        let smoother = s.smoother(&c).unwrap();
        let mut sol = initial_state(&c).unwrap();
        for _ in 0..100 {
            sol = heun_step(&sol, &RhsField::zero(), &c.physics, &smoother).unwrap().0;
            worst_mass = worst_mass.max((sol.total_mass() - target).abs() / target);
        }
        let cfg = s.nmlm(&c, make_sequence(6, Strategy::MinusTwo, 3).unwrap()).unwrap();
        for _ in 0..10 {
            sol = nmlm_cycle(2, sol, &RhsField::zero(), &cfg, &c.physics).unwrap().0;
            worst_mass = worst_mass.max((sol.total_mass() - target).abs() / target);
        }
    }
    let mut worst_q = 0.0_f64;
    let mut g = Weyl::new(97);
    let physics = case(CaseName::Couette, 4, 4).physics;
    for k in 0..ORACLE_STATES {
        let state = sample_adapted_state(3 + k % 6, &mut g);
        for (kind, pr) in [(CollisionKind::Bgk, 1.0), (CollisionKind::Shakhov, 2.0 / 3.0), (CollisionKind::EsBgk, 2.0 / 3.0)] {
            let mut gas = physics.gas;
            gas.collision = CollisionModel::new(kind, pr).unwrap();
            let q = collision_coeffs(&state, &gas).unwrap();
            let err = [q[0], q[1], q[2], q[3], q[4] + q[7] + q[9]]
                .iter()
                .fold(0.0_f64, |a, x| a.max(x.abs()));
            worst_q = worst_q.max(err);
        }
    }
    outcome(
        worst_mass <= MASS_TOL && worst_q <= INVARIANT_TOL,
        format!("max relative mass drift {worst_mass:.1e}, max collision invariant {worst_q:.1e}"),
    )
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c3.toml");
    fs::write(
        &cfg,
        "case = \"Couette\"\norder = 4\ncells = 100\n[solver]\ntol = 1e-8\n[multilevel]\nstrategy = \"MinusTwo\"\nlevels = 2\n",
    )
    .unwrap();
    let profile = |threads: &str| {
        let out = dir.path().join(format!("t{threads}"));
        let status = Command::new(env!("CARGO_BIN_EXE_nmlm"))
            .args(["--quiet", "--threads", threads, "--out"])
            .arg(&out)
            .arg("run")
            .arg(&cfg)
            .status()
            .unwrap();
        (status.code(), fs::read(out.join("profile.csv")).unwrap_or_default())
    };
    let (c1, p1) = profile("1");
    let (c8, p8) = profile("8");
    outcome(
        c1 == Some(0) && c8 == Some(0) && !p1.is_empty() && p1 == p8,
        format!("exit codes {c1:?}/{c8:?}, profile.csv {} bytes, identical: {}", p1.len(), p1 == p8),
    )
}

type Group = Vec<(&'static str, Outcome)>;

/// Runs one group of criteria, printing its lines at once. A panic fails every
/// criterion of the group instead of aborting the suite.
fn run_group(labels: &[&'static str], f: impl FnOnce() -> Group) -> Group {
    let t = Instant::now();
    let group = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(g) => g,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            labels.iter().map(|l| (*l, outcome(false, format!("panicked: {msg}")))).collect()
        }
    };
    for (name, o) in &group {
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    eprintln!("  [{:.1} s]", t.elapsed().as_secs_f64());
    group
}

fn main() {
    let start = Instant::now();
    let mut results: Group = Vec::new();
    results.extend(run_group(&["1 oracle equivalence"], || vec![("1 oracle equivalence", c1_oracle())]));
    results.extend(run_group(&["2 exact steady state"], || {
        vec![("2 exact steady state", c2_steady_maxwellian())]
    }));
    let labels = ["3 two-level speedup at M=4", "6 grid scaling"];
    results.extend(run_group(&labels, || {
        let (c3, c6) = c3_c6_order_four();
        vec![(labels[0], c3), (labels[1], c6)]
    }));
    let labels = ["4 level trend at M=10", "5 strategy ranking", "- multilevel monotonicity"];
    results.extend(run_group(&labels, || {
        let (c4, c5, mono) = c4_c5_order_ten();
        vec![(labels[0], c4), (labels[1], c5), (labels[2], mono)]
    }));
    results.extend(run_group(&["7 solver agreement"], || vec![("7 solver agreement", c7_solver_agreement())]));
    results.extend(run_group(&["8 physical sanity"], || vec![("8 physical sanity", c8_physical_sanity())]));
    results.extend(run_group(&["9 conservation"], || vec![("9 conservation", c9_conservation())]));
    results.extend(run_group(&["10 thread determinism"], || {
        vec![("10 thread determinism", c10_determinism())]
    }));

    let failed = results.iter().filter(|(_, o)| !o.passed).count();
    println!(
        "acceptance: {} of {} passed in {:.0} s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
