//! Geometry of the numerical range `W(X) = {x*Xx : ‖x‖ = 1}`.

mod disc;
mod ellipse;
pub mod lp;
mod scalars;
mod summary;
mod support;

pub use disc::{smallest_enclosing_disc, Disc};
pub(crate) use ellipse::minor_axis_sq_2x2;
pub use ellipse::{ellipse_2x2, Ellipse};
pub use scalars::{dist_to_scalars, ScalarDistance};
pub use summary::{essential_hermitian_defect, is_essentially_hermitian, range_summary, RangeSummary, DEFAULT_GRID};
pub use support::support_function;
