//! Exact arithmetic foundation: rationals, sparse multivariate polynomials,
//! Laurent polynomials in a distinguished chart variable, and
//! gcd/resultant/square-free machinery.

pub mod gcd;
pub mod laurent;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod roots;
pub mod var;

pub use gcd::{poly_gcd, resultant, squarefree_test};
pub use laurent::LaurentPoly;
pub use parse::{parse_laurent, parse_mpoly, ParseError};
pub use poly::{rat, rat_i, MPoly, Mono, PolyError, Rat};
pub use var::{Var, ALL_VARS, NVARS};
