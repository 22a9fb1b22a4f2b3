use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("division by zero quaternion")]
    ZeroDivision,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid matrix file: {0}")]
    InvalidInput(String),
    #[error("vector not in range of the operator (residual {residual:.3e} > tol {tol:.3e})")]
    NotInRange { residual: f64, tol: f64 },
    #[error("quaternion lies on a spectral sphere: {0}")]
    SpectralPoint(String),
    #[error("denominator vanishes: {0}")]
    DenominatorVanishes(String),
    #[error("eigenvalue solver failed to converge")]
    EigenFailure,
    #[error("out of the declared convergence radius: |q| = {norm}, radius = {radius}")]
    OutOfRadius { norm: f64, radius: f64 },
    #[error("{0}")]
    Model(String),
}
