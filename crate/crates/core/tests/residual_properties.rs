mod common;

use common::{adapted_state, max_abs_diff, physics, wavy_solution};
use nmlm_core::kinetic::{collision_coeffs, reconstruct, residual, wall_flux, GridSolution, Side};
use nmlm_core::moment::{adapt, CollisionKind, Expansion};
use proptest::prelude::*;

fn conserved(e: &Expansion) -> [f64; 5] {
    e.conserved_moments()
}

#[test]
fn flux_differences_telescope_to_the_walls() {
    for kind in [CollisionKind::Bgk, CollisionKind::Shakhov, CollisionKind::EsBgk] {
        let pr = if kind == CollisionKind::Bgk { 1.0 } else { 2.0 / 3.0 };
        let p = physics(kind, pr, 0.8, (0.9, 1.2), 0.0);
        let sol = wavy_solution(5, 12);
        let r = residual(&sol, &p).unwrap();
        let mut total = [0.0; 5];
        for (i, ri) in r.cells.iter().enumerate() {
            for (t, c) in total.iter_mut().zip(conserved(ri)) {
                *t += c * sol.mesh.width(i);
            }
        }
        let n = sol.len();
        let (first, last) = (&sol.cells[0], &sol.cells[n - 1]);
        let left = wall_flux(&reconstruct(&sol, &p, 0).unwrap().left, &p.left, Side::Left, first.u(), first.theta(), 5).unwrap();
        let right = wall_flux(&reconstruct(&sol, &p, n - 1).unwrap().right, &p.right, Side::Right, last.u(), last.theta(), 5)
            .unwrap();
        let expected: Vec<f64> = conserved(&right).iter().zip(conserved(&left)).map(|(a, b)| a - b).collect();
        assert!(max_abs_diff(&total, &expected) < 1e-12, "{kind:?}: {total:?} vs {expected:?}");
        assert!(total[0].abs() < 1e-12);
    }
}

#[test]
fn residual_stencil_is_local() {
    let p = physics(CollisionKind::EsBgk, 2.0 / 3.0, 1.0, (1.0, 1.1), 0.2);
    let sol = wavy_solution(4, 14);
    let base = residual(&sol, &p).unwrap();
    for j in [0, 1, 6, 12, 13] {
        let mut cells = sol.cells.clone();
        let mut e = cells[j].expansion().clone();
        e.coeffs[0] *= 1.05;
        e.coeffs[12] += 0.01;
        e.theta *= 1.02;
        cells[j] = adapt(&e).unwrap();
        let moved = residual(&GridSolution::new(cells, sol.mesh.clone()).unwrap(), &p).unwrap();
        for i in 0..sol.len() {
            let same = moved.cells[i] == base.cells[i];
            if i.abs_diff(j) > 2 {
                assert!(same, "cell {j} changed residual {i}");
            }
        }
        assert_ne!(moved.cells[j], base.cells[j]);
    }
}

#[test]
fn residual_is_independent_of_thread_count() {
    let p = physics(CollisionKind::Shakhov, 2.0 / 3.0, 1.2, (1.0, 1.0), 0.1);
    let sol = wavy_solution(6, 40);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| residual(&sol, &p).unwrap())
    };
    let one = run(1);
    for t in [2, 3, 8] {
        assert_eq!(run(t), one);
    }
}

#[test]
fn comoving_global_maxwellian_is_steady() {
    for order in [3, 6] {
        let p = physics(CollisionKind::EsBgk, 2.0 / 3.0, 0.0, (1.3, 1.3), 0.0);
        let mesh = std::sync::Arc::new(nmlm_core::kinetic::Mesh1D::uniform(2.0, 16).unwrap());
        let sol = GridSolution::uniform_maxwellian(mesh, order, 0.7, [0.0, 0.0, 0.0], 1.3).unwrap();
        let r = residual(&sol, &p).unwrap();
        for c in &r.cells {
            assert!(c.coeffs.iter().all(|x| x.abs() < 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn collisions_conserve_mass_momentum_energy(s in (3usize..=7).prop_flat_map(adapted_state), pr in 0.5..1.0f64) {
        for kind in [CollisionKind::Bgk, CollisionKind::Shakhov, CollisionKind::EsBgk] {
            let p = physics(kind, if kind == CollisionKind::Bgk { 1.0 } else { pr }, 0.0, (1.0, 1.0), 0.0);
            let q = collision_coeffs(&s, &p.gas).unwrap();
            let scale = s.rho();
            prop_assert!(q[0].abs() <= 1e-12 * scale);
            prop_assert!(q[1..4].iter().all(|x| x.abs() <= 1e-12 * scale));
            prop_assert!((q[4] + q[7] + q[9]).abs() <= 1e-12 * scale * s.theta());
        }
    }

    #[test]
    fn unit_prandtl_reduces_to_bgk(s in (3usize..=5).prop_flat_map(adapted_state)) {
        let bgk = collision_coeffs(&s, &physics(CollisionKind::Bgk, 1.0, 0.0, (1.0, 1.0), 0.0).gas).unwrap();
        for kind in [CollisionKind::Shakhov, CollisionKind::EsBgk] {
            let q = collision_coeffs(&s, &physics(kind, 1.0, 0.0, (1.0, 1.0), 0.0).gas).unwrap();
            prop_assert_eq!(&q, &bgk);
        }
    }
}
