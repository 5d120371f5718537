//! Pointed vortex loops: singular vorticity configurations in the
//! plane, their canonical parametrization, symplectic structures and
//! momentum maps, constructive infinitesimal transitivity, and
//! regularized vortex dynamics with orbit-conservation diagnostics.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hamiltonian;
pub mod json;
pub mod objects;
pub mod spectral;
pub mod symplectic;
pub mod transitivity;
pub mod verify;
pub mod vec2;

pub use error::{Error, Result};
pub use geometry::ClosedCurve;
pub use objects::{PointVortexConfig, PointedVortexLoop, VortexLoop};
pub use vec2::Vec2;
