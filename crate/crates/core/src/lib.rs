//! Exact computations on flat surfaces: polygon gluings, straight-line flow,
//! cylinder decompositions, affine automorphisms and Veech groups, section
//! candidates, Fuchsian group estimates, counting bounds, and function-field
//! Diophantine checks.

pub mod affine;
pub mod bounds;
pub mod corpus;
pub mod dioph;
pub mod flow;
pub mod fuchsian;
pub mod geom;
pub mod par;
pub mod scalar;
pub mod sections;
pub mod surface;

pub use geom::{Chart, Mat2, Vec2};
pub use scalar::{Field, Scalar, ScalarError, Sign};
pub use surface::{ConePoint, Corner, EdgeRef, FlatSurface, Gluing, GluingKind, Origami, Polygon, SurfaceError, SurfaceType};
