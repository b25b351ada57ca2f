use serde::{Deserialize, Serialize};

use super::mesh::Mesh1D;
use crate::moment::{Expansion, MomentState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Reconstruction {
    /// Central slopes on u, theta and every coefficient.
    #[default]
    Linear,
    /// Zero slopes: first-order scheme.
    Constant,
}

/// Edge values of one cell. `left` sits at x_i, `right` at x_{i+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStates {
    pub left: Expansion,
    pub right: Expansion,
    /// Slopes were zeroed because an edge density or temperature went non-positive.
    pub fallback: bool,
}

impl EdgeStates {
    fn constant(cell: &MomentState) -> Self {
        EdgeStates {
            left: cell.expansion().clone(),
            right: cell.expansion().clone(),
            fallback: false,
        }
    }
}

/// A neighbour used in the slope formula: its state and the width it spans
/// (zero for a wall trace, which sits on the boundary).
#[derive(Debug, Clone, Copy)]
pub struct Neighbor<'a> {
    pub state: &'a MomentState,
    pub width: f64,
}

/// Central-difference reconstruction of a cell from its two neighbours:
/// g = (v_next - v_prev) / (dx + (dx_prev + dx_next)/2), edges v -+ g dx/2.
pub fn reconstruct_cell(cell: &MomentState, width: f64, prev: Neighbor<'_>, next: Neighbor<'_>) -> EdgeStates {
    let denom = width + 0.5 * (prev.width + next.width);
    let h = 0.5 * width / denom;
    let (a, b, c) = (prev.state.expansion(), next.state.expansion(), cell.expansion());
    let mut left = c.clone();
    let mut right = c.clone();
    for d in 0..3 {
        let s = h * (b.u[d] - a.u[d]);
        left.u[d] -= s;
        right.u[d] += s;
    }
    let s = h * (b.theta - a.theta);
    left.theta -= s;
    right.theta += s;
    for ((l, r), (pa, pb)) in left.coeffs.iter_mut().zip(right.coeffs.iter_mut()).zip(a.coeffs.iter().zip(&b.coeffs)) {
        let s = h * (pb - pa);
        *l -= s;
        *r += s;
    }
    let ok = |e: &Expansion| e.theta > 0.0 && e.coeffs[0] > 0.0;
    if ok(&left) && ok(&right) {
        EdgeStates {
            left,
            right,
            fallback: false,
        }
    } else {
        EdgeStates {
            fallback: true,
            ..EdgeStates::constant(cell)
        }
    }
}

/// Edge states of cell `i`, with `ghosts` the wall traces standing in for the
/// missing neighbours of the first and last cell.
pub fn reconstruct_with_ghosts(
    cells: &[MomentState],
    mesh: &Mesh1D,
    ghosts: (&MomentState, &MomentState),
    scheme: Reconstruction,
    i: usize,
) -> EdgeStates {
    if scheme == Reconstruction::Constant {
        return EdgeStates::constant(&cells[i]);
    }
    let n = cells.len();
    let prev = if i == 0 {
        Neighbor {
            state: ghosts.0,
            width: 0.0,
        }
    } else {
        Neighbor {
            state: &cells[i - 1],
            width: mesh.width(i - 1),
        }
    };
    let next = if i + 1 == n {
        Neighbor {
            state: ghosts.1,
            width: 0.0,
        }
    } else {
        Neighbor {
            state: &cells[i + 1],
            width: mesh.width(i + 1),
        }
    };
    reconstruct_cell(&cells[i], mesh.width(i), prev, next)
}
