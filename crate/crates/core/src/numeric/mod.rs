//! Small numerical kernels shared by the solvers.

pub mod ode;
pub mod poly;
pub mod quad;
pub mod roots;

pub use ode::{rk4_step, Control, Dopri5};
pub use poly::Polynomial;
pub use quad::AdaptiveQuadrature;
pub use roots::{bisect, bisect_predicate, golden_section_min};
