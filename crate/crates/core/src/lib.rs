//! Exact computations in the representation category of the small quantum
//! group for sl(2) at a root of unity: tensor decompositions, conformal
//! blocks, braid monodromy and semi-infinite Tor.

pub mod cyclo;
pub mod linalg;
pub mod rootdata;
pub mod confspace;
pub mod uq;
pub mod tensorcat;
pub mod semiinf;
pub mod confblocks;
pub mod cli;

pub use cyclo::CycloNum;




#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unrepresentable exponent: l*den = {l}*{den} does not divide M = {order}")]
    Unrepresentable { order: u32, l: u32, den: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("idempotent-splitting failure: {0}")]
    Splitting(String),
    #[error("no stabilization by n={0}")]
    NoStabilization(usize),
    #[error("weights outside the first alcove: {0:?}")]
    Alcove(Vec<i64>),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
