//! Secondary fans and secondary polyhedra of decorated punctured surfaces.

pub mod cli;
pub mod cones;
pub mod develop;
pub mod euclid;
pub mod exact;
pub mod fan;
pub mod penner;
pub mod polyhedron;
pub mod surface;

pub use cones::{cone_equal, delaunay_decomposition, secondary_cone, ConeError, DecompositionLabel, SecondaryCone};
pub use exact::Rational;
pub use penner::{DecoratedSurface, PennerError, Weighting};
pub use surface::{CombinatorialSurface, Corner, SurfaceError};
