//! Closed-form traveling waves for Wick-type stochastic equations.
//!
//! The crate covers a truncated Wick/Hermite-transform algebra, the
//! Riccati-type ansatz used to build exact solutions, the three
//! nonlinear Schrödinger families, the six fractional RLW-Burgers
//! families, Caputo numerics, noise models and a finite-difference
//! residual engine that checks every family against its equation.

pub mod caputo;
pub mod error;
pub mod nls;
pub mod noise;
pub mod quad;
pub mod rlw;
pub mod sampled;
pub mod special;
pub mod subequation;
pub mod timefn;
pub mod verify;
pub mod wick;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use timefn::TimeFn;
