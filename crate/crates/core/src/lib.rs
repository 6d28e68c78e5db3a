//! Symbolic conformable double ARA decomposition for coupled Burgers'
//! systems with conformable fractional derivatives.
//!
//! Everything works in the stretched coordinates `X = x^p/p`, `T = t^q/q`,
//! where conformable derivatives become ordinary ones. Fields are finite
//! sums of `c·X^n·T^m·e^{μX+νT}` ([`Expression`]), the double transform maps
//! each term to a rational image ([`ara`]), and the decomposition series is
//! built one component at a time ([`solver`]).

pub mod adomian;
pub mod ara;
pub mod conformable;
pub mod error;
pub mod eval;
pub mod expr;
pub mod format;
pub mod solver;

pub use adomian::{adomian_a, adomian_b, adomian_c, ComponentList};
pub use ara::{
    double_ara, inverse_double_ara, single_ara_t, single_ara_x, ImageExpr, ImageTerm, LineImage,
};
pub use conformable::FracParams;
pub use error::{Error, Result};
pub use eval::{error_table, exact_oracle, residual_check, ErrorTableRow, Example};
pub use expr::{Axis, Complex, Expression, MonomialTerm};
pub use solver::{partial_sum, solve, Geometry, ProblemSpec, SeriesSolution};
