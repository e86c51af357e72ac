//! H-polytope calculus over `f64`.
//!
//! Sets are stored as `{x | A x <= b}` and every operation returns a fresh
//! value. Queries that need optimization use a dense simplex solver built in.

mod affine;
mod dd;
mod error;
mod hpoly;
pub mod lp;
mod ops;
mod sample;
mod segment;
mod tolerance;
mod vrep;

pub use affine::AffineMap;
pub use dd::extreme_rays;
pub use error::{PolytopeError, Result};
pub use hpoly::HPolytope;
pub use ops::{convex_hull_pair, minkowski_sum, pontryagin_diff, project};
pub use sample::{sample_interior, HitAndRun};
pub use segment::{segment_intersects, segment_intersects_tol, Segment};
pub use tolerance::{set_tolerances, tolerances, Tolerances};
pub use vrep::{dedup_sorted, hull_from_points, vertex_enumeration, VRep};
