//! Dirichlet-to-Neumann maps of circulant layered networks.
//!
//! The toolkit verifies, at configurable precision, that the square of
//! the boundary map of the semi-infinite cylinder graph equals the cycle
//! Laplacian, that the associated layered continued fraction takes the
//! value 1 at its imaginary evaluation points, and that the continuum
//! analogue of the identity holds mode by mode on trigonometric series.
//!
//! Modules:
//!
//! - [`scalar`]: configurable-precision real and complex arithmetic.
//! - [`circulant`]: circulant matrix algebra, spectra, principal square
//!   roots, and the exact `4I - B B^T = L` check.
//! - [`network`]: the cylinder graph, Schur elimination of finite
//!   truncations, the per-mode recursion, fixed-point iteration, the
//!   closed form, and the squared-map verification report.
//! - [`contfrac`]: the continued fraction, coefficient generation, sweep
//!   verification, rational form, line check, and coefficient recovery.
//! - [`continuum`]: the Fourier-multiplier model and the
//!   discrete-to-continuous spectral bridge.
//!
//! Sweeps over independent modes or evaluation points run in parallel
//! when the `parallel` feature (default) is enabled; disabling it yields
//! a fully sequential build with identical results.

pub mod circulant;
pub mod contfrac;
pub mod continuum;
pub mod error;
mod par;
pub mod network;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};
