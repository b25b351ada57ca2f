//! Velocity-space machinery: Hermite bases adapted to a mean velocity and
//! temperature, coefficient transformations between such bases, and the
//! equilibrium distributions of the BGK-type collision models.

mod basis;
mod collision;
pub mod hermite;
pub(crate) mod projection;
mod state;

pub use basis::{basis_size, MomentBasis, MultiIndex, MAX_ORDER};
pub use collision::{equilibrium_coeffs, CollisionKind, CollisionModel};
pub use hermite::hermite_eval;
pub use projection::{adapt, project_to_params};
pub use state::{extract_macros, Expansion, MacroQuantities, MomentState};
