//! Numerical machinery for uncertainty principles of Fourier-like integral
//! transforms on cones: the Fourier-Bessel (Hankel) family on `[0, ∞)` and the
//! rank-one Dunkl family on `ℝ`.
//!
//! The crate builds dense discretizations of a transform `T f(ξ) = ∫ f K(·,ξ) dμ`
//! on a truncated cone, the time/band concentration projections `E_S` and
//! `F_Σ = T⁻¹ E_Σ T`, and from them certifies a family of inequalities
//! numerically: local dispersion bounds, global Heisenberg-type products,
//! Donoho-Stark support bounds and strong annihilation estimates. It also
//! computes generalized prolate eigenpairs and performs stable recovery of a
//! function from data observed outside a time/band pair.
//!
//! The hot loops (matrix assembly, operator composition, family sweeps) run on
//! rayon when the default `parallel` feature is enabled and fall back to
//! sequential iteration otherwise. Results are bitwise identical either way:
//! every reduction happens in a fixed order.

pub mod concentration;
mod dd;
pub mod discretize;
mod error;
pub mod families;
pub mod inequalities;
pub mod linalg;
mod par;
pub mod recovery;
pub mod specfun;
pub mod transforms;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;
