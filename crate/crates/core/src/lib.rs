//! Numerical Schiffer operators and scattering matrices for conformal welding
//! problems on the Riemann sphere and on the square torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`boundary`]: Fourier series on the circle, Sobolev norms and boundary one-form classes.
//! * [`geometry`]: exterior maps, Faber polynomials, Grunsky coefficients and Bergman Gram matrices.
//! * [`schiffer`]: the four Schiffer blocks in orthonormal bases and their quadratic identities.
//! * [`jump`]: the Cauchy-type jump operator and its boundary-limit overfare.
//! * [`scattering`]: the scattering matrix, compatible triples, the holomorphic boundary-value
//!   problem and the index of the Schiffer operator.
//! * [`torus`]: the same objects per Fourier mode on a square torus cut by two horizontal circles.

pub mod boundary;
pub mod error;
pub mod geometry;
pub mod jump;
pub mod linalg;
pub mod scattering;
pub mod schiffer;
pub mod torus;

pub use error::{Result, ScatterError};
pub use linalg::{c64, CMat, CVec, C64};
