//! Exact sparse polynomials over the Gaussian rationals.

mod gauss;
mod gcd;
pub mod linalg;
mod poly;
mod resultant;
mod text;

pub use gauss::{parse_rational, rat, rat_int, rat_to_f64, GaussRational, Rational};
pub use gcd::{content_primitive, gcd, gcd_many};
pub use poly::{sum, MPoly, Monomial};
pub use resultant::{determinant, resultant};
pub use text::{format_poly, parse_poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial is constant in {0}")]
    ZeroDegree(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Shorthand for a variable.
pub fn v(name: &str) -> MPoly {
    MPoly::var(name)
}

/// Shorthand for an integer constant.
pub fn c(n: i64) -> MPoly {
    MPoly::int(n)
}

/// Shorthand for a rational constant.
pub fn q(n: i64, d: i64) -> MPoly {
    MPoly::rational(rat(n, d))
}
