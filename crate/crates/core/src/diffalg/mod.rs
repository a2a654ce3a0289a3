//! Differential polynomials in jet variables, local functionals and
//! matrix differential operators.

mod functional;
mod op;
mod poly;
mod text;

pub use functional::{functional_equal, variational_derivative, LocalFunctional};
pub use op::{constant_part, frechet_derivative, is_numeric, LinDiffOp, MatDiffOp};
pub use poly::{DiffPoly, Jet, Monomial};
pub use text::{parse_poly, render_op, render_poly};
