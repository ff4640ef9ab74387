//! Electromagnetic field and multipole moments of a coherent electron pair.
//!
//! Each electron is a minimum-uncertainty Gaussian wave packet. Two of them
//! form a symmetric (antiparallel spins) or antisymmetric (parallel spins)
//! spatial state with relative coordinate `r0` and relative momentum `p0`.
//! This crate evaluates
//!
//! * wave functions, overlap, charge and current densities ([`model`]),
//! * the Gaussian-cloud potential function `Na` and the complex error
//!   function ([`special`]),
//! * scalar and vector potentials, exact and far-field ([`potentials`]),
//! * the quadrupole tensor, magnetic moment, and the inverse recovery of
//!   `r0` and `p0` from the tensor ([`moments`]),
//!
//! and ships an independent brute-force integrator ([`quadrature`]) that every
//! closed form above is checked against.
//!
//! ```
//! use pairfield::{PacketShape, PairConfig, Symmetry, UnitSystem, Vec3};
//! use pairfield::moments::quadrupole_analytic;
//!
//! let units = UnitSystem::default();
//! let pair = PairConfig::new(
//!     PacketShape::natural(),
//!     Vec3::new(0.0, 0.0, 10.0),
//!     Vec3::zeros(),
//!     Symmetry::Symmetric,
//! );
//! let adapted = quadrupole_analytic(&pair, &units)?;
//! assert!((adapted.tensor.dzz - 400.0).abs() < 1e-9);
//! # Ok::<(), pairfield::Error>(())
//! ```

pub mod error;
pub mod model;
pub mod moments;
pub mod potentials;
pub mod quadrature;
pub mod special;
pub mod units;

#[cfg(doctest)]
mod guide;

pub use error::{Error, Result};
pub use model::{ComplexAmplitude, PairConfig, PairDensity, Symmetry};
pub use moments::{AngularSurfaceMesh, QuadrupoleTensor, SurfacePreset};
pub use potentials::{PotentialSample, RadialProfile};
pub use quadrature::{Envelope, QuadratureResult, QuadratureScheme, QuadratureSpec};
pub use units::{PacketShape, UnitSystem};

/// Real 3-vector.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Complex 3-vector.
pub type CVec3 = nalgebra::Vector3<num_complex::Complex64>;

pub(crate) const ZERO3: Vec3 = Vec3::new(0.0, 0.0, 0.0);
