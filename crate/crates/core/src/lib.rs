//! Mean value Laplacians on metric measure spaces.
//!
//! The crate evaluates the finite-radius averaged mean value operator (AMV)
//! and its symmetrized variant (SAMV) on weighted Euclidean domains, on
//! non-Euclidean distances, on constant-curvature model spaces (through their
//! ball volumes) and on metric graphs. Radius sweeps are extrapolated to
//! `r → 0` and compared with closed-form predictions.

pub mod closed_forms;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod graph;
pub mod limits;
pub mod moment;
pub mod operators;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};
pub use fields::{Fourier, Polynomial, RadialProfile, ScalarField, Term, WeightDescriptor};
pub use geometry::{DistanceDescriptor, ModelKind, ModelVolumeOracle, NormDescriptor};
pub use moment::MomentMatrix;
pub use quadrature::{Estimate, Method, Scheme, SpaceDescriptor};
