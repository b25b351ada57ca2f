#![allow(dead_code)]

use std::sync::Arc;

use nmlm_core::kinetic::{FrequencyLaw, GasModel, GridSolution, Mesh1D, Physics, WallBoundary};
use nmlm_core::moment::{adapt, CollisionKind, CollisionModel, Expansion, MomentBasis, MomentState};
use proptest::prelude::*;

/// Adapted states of order `order` with O(0.03) non-equilibrium content.
pub fn adapted_state(order: usize) -> impl Strategy<Value = MomentState> {
    let n = MomentBasis::of(order).len();
    (
        0.5..2.0f64,
        prop::array::uniform3(-0.5..0.5f64),
        0.5..2.0f64,
        prop::collection::vec(-0.03..0.03f64, n),
    )
        .prop_map(move |(rho, u, theta, noise)| {
            let basis = MomentBasis::of(order);
            let mut e = Expansion::maxwellian(order, rho, u, theta);
            for (i, a) in basis.indices().iter().enumerate().skip(1) {
                e.coeffs[i] = noise[i] * rho * theta.powf(0.5 * a.degree() as f64);
            }
            adapt(&e).unwrap()
        })
}

pub fn physics(kind: CollisionKind, pr: f64, wall_speed: f64, thetas: (f64, f64), force: f64) -> Physics {
    let gas = GasModel::new(
        CollisionModel::new(kind, pr).unwrap(),
        0.1,
        0.81,
        FrequencyLaw::HardSpherePower,
        [0.0, force, 0.0],
    )
    .unwrap();
    let left = WallBoundary::new([0.0, -0.5 * wall_speed, 0.0], thetas.0).unwrap();
    let right = WallBoundary::new([0.0, 0.5 * wall_speed, 0.0], thetas.1).unwrap();
    Physics::new(gas, left, right)
}

/// A smooth non-equilibrium grid function on [0, 1].
pub fn wavy_solution(order: usize, n: usize) -> GridSolution {
    let mesh = Arc::new(Mesh1D::uniform(1.0, n).unwrap());
    let basis = MomentBasis::of(order);
    let cells = (0..n)
        .map(|i| {
            let x = mesh.center(i);
            let s = (3.0 * x).sin();
            let mut e = Expansion::maxwellian(order, 1.0 + 0.1 * s, [0.03 * s, 0.2 * (x - 0.5), 0.01], 1.0 + 0.15 * x);
            for (k, a) in basis.indices().iter().enumerate() {
                if a.degree() >= 2 {
                    e.coeffs[k] = 0.02 * ((k as f64) * 0.7 + 5.0 * x).cos() / a.degree() as f64;
                }
            }
            adapt(&e).unwrap()
        })
        .collect();
    GridSolution::new(cells, mesh).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
