//! Quaternionic S-spectral analysis on right quaternionic Hilbert spaces.
//!
//! The crate computes the S-spectrum and its refinements — approximate
//! point, surjectivity, compression, Kato and generalized Kato — exactly
//! for right-linear operators on H^n, and exposes closed-form spectral
//! predicates for canonical infinite-dimensional operators (shifts,
//! weighted shifts, diagonal operators).
//!
//! Everything is organised around the pseudo-resolvent
//! `R_q(A) = A² − 2 Re(q) A + |q|² I`, which is constant on the
//! eigensphere `[q] = {Re q + I |Im q| : I² = −1}`; numerical work
//! happens on the complex adjoint matrix χ(A) of twice the dimension.

pub mod error;
pub mod kato;
pub mod linalg;
pub mod models;
pub mod quat;
pub mod sample;
pub mod slice;
pub mod spectrum;

pub use error::Error;
pub use linalg::{QMatrix, QVector, SubspaceBasis, SubspaceRelation};
pub use quat::{EigenSphere, ImaginaryUnit, Quaternion, beta, beta_n};
pub use spectrum::{SpectralReport, SpectrumKind, membership, pseudo_resolvent, s_spectrum};
