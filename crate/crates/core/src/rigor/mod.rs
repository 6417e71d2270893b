//! Certified evaluation of q-expansions on horizontal lines of the upper half-plane.

pub mod ball;
pub mod eval;
pub mod grid;
pub mod suite;
pub mod tail;
pub mod transform;

pub use ball::{Ball, CBall};
pub use eval::{deriv_bound, eval_ball, Expansion};
pub use grid::{grid_extremum, GridResult, LineExpr, Mode};
pub use tail::{MajorantTerm, TailBound, TailKind};
