//! Exact scalar, polynomial, matrix and power-series arithmetic.

mod matrix;
pub mod modular;
mod poly;
mod ring;
mod series;
mod unipoly;

pub use matrix::RingMatrix;
pub use poly::{Monomial, MultiPoly, VarRegistry};
pub use ring::{parse_rational, rational, Rational, Ring};
pub use series::TruncatedSeries;
pub use unipoly::UniPoly;
