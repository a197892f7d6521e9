//! Numerics for the trigonometric Pöschl-Teller model and its Gazeau-Klauder
//! coherent states.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`]: complex log-Gamma, Pochhammer symbols, modified Bessel
//!   functions `I` and `K` of real order, Jacobi and Gegenbauer polynomials.
//! * [`quadrature`]: double-exponential quadrature used as the independent
//!   oracle for every integral identity.
//! * [`spectrum`]: energies, eigenfunctions, the superpotential, ladder
//!   operators and the operator-product identities of the model.
//! * [`coherent`]: coherent states `|z, γ⟩`, their overlap kernel, the
//!   Bessel-K measure and the moment problem it solves.
//! * [`statistics`] and [`geometry`]: photon-number statistics, quadrature
//!   variances and the Fubini-Study metric.
//! * [`quantize`]: coherent-state (anti-Wick) quantization on a truncated
//!   Fock basis.
//! * [`verify`]: the identity suite behind `gkcs validate`.

pub mod coherent;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod quantize;
pub mod specfun;
pub mod spectrum;
pub mod statistics;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use spectrum::ModelParams;
