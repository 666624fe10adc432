//! The scalar ring ℚ(q)^π = ℚ(q)[π]/(π²−1) and its combinatorics.

mod combinat;
mod parse;
mod poly;
mod qpi;
mod ratfunc;
mod render;

pub use combinat::{
    qpi_binomial, qpi_even_double_factorial, qpi_factorial, qpi_integer, qpi_odd_double_factorial,
    specialize,
};
pub use parse::parse_scalar;
pub use poly::Laurent;
pub use qpi::{QPiScalar, ScalarError};
pub use ratfunc::RatFunc;
pub use render::{render_laurent, render_qpi, render_qpi_tex, render_ratfunc};
