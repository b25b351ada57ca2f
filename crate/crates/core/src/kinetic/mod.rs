//! Finite-volume discretization of the 1D moment model: mesh, linear
//! reconstruction, HLL interface flux, Maxwell walls and the per-cell
//! residual R_i.

mod flux;
mod gas;
mod halfspace;
mod mesh;
mod reconstruct;
mod residual;
mod wall;

pub use flux::{max_wave_speed, numerical_flux, physical_flux, transport_in_place};
pub use gas::{collision_frequency, FrequencyLaw, GasModel};
pub use halfspace::{half_space_transform, HalfSpace};
pub use mesh::Mesh1D;
pub use reconstruct::{reconstruct_cell, reconstruct_with_ghosts, EdgeStates, Neighbor, Reconstruction};
pub use residual::{collision_coeffs, reconstruct, residual, source_coeffs, GridSolution, Physics, ResidualField};
pub use wall::{wall_density, wall_flux, wall_ghost_state, wall_trace_state, Side, WallBoundary};
