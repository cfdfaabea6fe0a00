//! Line-geometry singularity analysis.
//!
//! Each regular leg transmits a force along the line through its two revolute
//! joints. The platform is at a parallel singularity when the three lines meet
//! in a point or are parallel, i.e. when the 3×3 matrix of their Plücker
//! coordinates `(u_x, u_y, a × u)` is singular. With the leg vectors left
//! unnormalized the determinant is a quadratic polynomial in the position of C
//! at fixed orientation, and its zero set is the singularity conic.

mod classify;
mod conic;
mod contour;
mod design;
mod lines;

pub use classify::{classify_configuration, classify_configuration_with, serial_clearance, ConfigurationClass, ConfigurationKind};
pub use conic::{
    fit_cubic_model, singularity_conic, singularity_conic_seeded, ConicClass, CubicFit, SingularityConic,
};
pub use contour::{sample_conic_polyline, Window};
pub use design::{is_architecturally_singular, passage_safety, ArchitecturalCheck, PassageSafety, Similarity};
pub use lines::{leg_lines, parallel_singularity_measure, unnormalized_determinant, LegLine, ParallelMeasure};
