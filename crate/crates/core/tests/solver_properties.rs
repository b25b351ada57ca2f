mod common;

use common::{max_abs_diff, physics, wavy_solution};
use nmlm_core::benchmarks::{make_case, run_case, CaseName, Overrides, SolverChoice, SolverSettings};
use nmlm_core::kinetic::{residual, GridSolution};
use nmlm_core::moment::{basis_size, CollisionKind, Expansion, MomentState};
use nmlm_core::multilevel::{
    assemble_lower_problem, correct, make_sequence, nmlm_cycle, restrict_solution, NmlmConfig, Strategy,
};
use nmlm_core::smoother::{defect, heun_step, RhsField, SmootherConfig};

fn self_consistent_rhs(sol: &GridSolution, p: &nmlm_core::kinetic::Physics) -> RhsField {
    RhsField::from_cells(residual(sol, p).unwrap().cells)
}

fn solution_distance(a: &GridSolution, b: &GridSolution) -> f64 {
    a.cells
        .iter()
        .zip(&b.cells)
        .map(|(x, y)| {
            let mut d = max_abs_diff(x.coeffs(), y.coeffs());
            d = d.max(max_abs_diff(&x.u(), &y.u()));
            d.max((x.theta() - y.theta()).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn heun_fixed_point() {
    let p = physics(CollisionKind::EsBgk, 2.0 / 3.0, 1.0, (1.0, 1.2), 0.1);
    let sol = wavy_solution(5, 16);
    let rhs = self_consistent_rhs(&sol, &p);
    let cfg = SmootherConfig::new(0.45, false, 1.0).unwrap();
    let (next, report) = heun_step(&sol, &rhs, &p, &cfg).unwrap();
    assert_eq!(report.defect_norm, 0.0);
    assert!(solution_distance(&next, &sol) < 1e-13);
}

#[test]
fn renormalised_mass_after_every_step() {
    let p = physics(CollisionKind::Shakhov, 2.0 / 3.0, 1.2, (0.8, 1.1), 0.0);
    let mut sol = wavy_solution(4, 20);
    let target = sol.mesh.length();
    let cfg = SmootherConfig::new(0.45, true, target).unwrap();
    for _ in 0..25 {
        sol = heun_step(&sol, &RhsField::zero(), &p, &cfg).unwrap().0;
        assert!((sol.total_mass() - target).abs() <= 1e-14 * target);
    }
}

#[test]
fn heun_step_is_independent_of_thread_count() {
    let p = physics(CollisionKind::EsBgk, 2.0 / 3.0, 1.0, (1.0, 1.0), 0.2);
    let sol = wavy_solution(6, 30);
    let cfg = SmootherConfig::new(0.45, true, 1.0).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| heun_step(&sol, &RhsField::zero(), &p, &cfg).unwrap().0)
    };
    let one = run(1);
    assert_eq!(run(4), one);
    assert_eq!(run(7), one);
}

#[test]
fn restriction_commutes() {
    let sol = wavy_solution(8, 6);
    let two_steps = restrict_solution(&restrict_solution(&sol, 5).unwrap(), 3).unwrap();
    assert_eq!(two_steps, restrict_solution(&sol, 3).unwrap());
    assert_eq!(restrict_solution(&sol, 8).unwrap(), sol);
    assert!(restrict_solution(&sol, 9).is_err());
}

#[test]
fn fas_consistency() {
    // f solves R(f) = R(f) exactly, so the coarse problem is solved by I f.
    let p = physics(CollisionKind::EsBgk, 2.0 / 3.0, 1.0, (1.0, 1.1), 0.0);
    let sol = wavy_solution(6, 12);
    let rhs = self_consistent_rhs(&sol, &p);
    let (d, _) = defect(&sol, &rhs, &p).unwrap();
    assert!(d.iter().flatten().all(|&x| x == 0.0));
    let (coarse, coarse_rhs) = assemble_lower_problem(&sol, &d, 4, &p).unwrap();
    let (dc, _) = defect(&coarse, &coarse_rhs, &p).unwrap();
    assert!(dc.iter().flatten().all(|&x| x.abs() < 1e-12));

    let seq = make_sequence(6, Strategy::MinusOne, 3).unwrap();
    let smoother = SmootherConfig::new(0.45, false, 1.0).unwrap();
    let cfg = NmlmConfig::with_defaults(seq, smoother, 1e-8, 1);
    let (after, ledger) = nmlm_cycle(2, sol.clone(), &rhs, &cfg, &p).unwrap();
    assert!(solution_distance(&after, &sol) < 1e-12);
    assert_eq!(ledger.steps, vec![5, 4, 4]);
}

#[test]
fn work_ledger_matches_cycle_formula() {
    let p = physics(CollisionKind::EsBgk, 2.0 / 3.0, 1.0, (1.0, 1.0), 0.0);
    let sol = wavy_solution(8, 10);
    for (levels, s1, s2, s3) in [(2, 2, 2, 5), (3, 1, 3, 2), (4, 2, 1, 4)] {
        let seq = make_sequence(8, Strategy::MinusTwo, levels).unwrap();
        let smoother = SmootherConfig::new(0.45, true, 1.0).unwrap();
        let mut cfg = NmlmConfig::with_defaults(seq.clone(), smoother, 1e-8, 1);
        cfg.s1 = s1;
        cfg.s2 = s2;
        cfg.s3 = s3;
        let (_, ledger) = nmlm_cycle(levels - 1, sol.clone(), &RhsField::zero(), &cfg, &p).unwrap();
        let total: usize = ledger.steps.iter().sum();
        assert_eq!(total, (levels - 1) * (s1 + s2) + s3);
        let expected: f64 = seq
            .orders()
            .iter()
            .zip(&ledger.steps)
            .map(|(m, s)| *s as f64 * basis_size(*m) as f64 / basis_size(8) as f64)
            .sum();
        assert_eq!(ledger.work_units(), expected);
    }
}

#[test]
fn correction_is_affine_in_tau() {
    let sol = wavy_solution(6, 5);
    let before = restrict_solution(&sol, 4).unwrap();
    // coarse change with the same (u, theta) and no conserved-moment content
    let after_cells: Vec<MomentState> = before
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut e: Expansion = c.expansion().clone();
            for (k, x) in e.coeffs.iter_mut().enumerate().skip(basis_size(2)) {
                *x += 1e-3 * ((i + k) as f64).sin();
            }
            e.coeffs[5] += 2e-3;
            MomentState::from_expansion(e).unwrap()
        })
        .collect();
    let after = GridSolution::new(after_cells, sol.mesh.clone()).unwrap();

    let at = |tau| correct(&sol, &before, &after, tau).unwrap();
    assert!(solution_distance(&at(0.0), &sol) < 1e-13);
    let (c0, c1, c_half) = (at(0.0), at(1.0), at(0.5));
    for i in 0..sol.len() {
        let mid: Vec<f64> = c0.cells[i].coeffs().iter().zip(c1.cells[i].coeffs()).map(|(a, b)| 0.5 * (a + b)).collect();
        assert!(max_abs_diff(c_half.cells[i].coeffs(), &mid) < 1e-13);
    }
    // higher coefficients are untouched
    let n4 = basis_size(4);
    assert_eq!(&c1.cells[2].coeffs()[n4..], &sol.cells[2].coeffs()[n4..]);
}

fn single_level_history(name: CaseName) -> Vec<f64> {
    let settings = SolverSettings {
        tol: 1e-8,
        ..SolverSettings::default()
    };
    let case = make_case(name, 4, 30, &Overrides::new()).unwrap();
    let (_, rec) = run_case(&case, SolverChoice::SingleLevel, &settings).unwrap();
    assert!(rec.converged, "{name}");
    rec.history.iter().map(|h| h.residual_norm).collect()
}

#[test]
fn residual_tail_is_monotone_at_order_four() {
    for name in [CaseName::Couette, CaseName::Poiseuille, CaseName::Fourier] {
        let h = single_level_history(name);
        let start = h.len() / 10;
        let rises = h[start..].windows(2).filter(|w| w[1] > w[0]).count();
        assert_eq!(rises, 0, "{name}: {rises} increases after step {start}");
    }
}
