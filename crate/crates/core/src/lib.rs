//! Kinematics and singularity analysis for general 3-RPR planar parallel robots.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: robot description, poses, joint vectors and rigid-body evaluation.
//! - [`poly`]: dense univariate polynomials with a real-root isolator.
//! - [`kinematics`]: inverse kinematics with directed leg lengths, forward kinematics
//!   through elimination to a univariate sextic, and an independent sweep oracle.
//! - [`singularity`]: leg force lines, the parallel-singularity measure, the
//!   fixed-orientation singularity conic, pointwise classification and design checks.
//! - [`modeplan`]: workspace paths, signed joint continuation, singularity-crossing
//!   detection, assembly-mode-change certificates and a passage-aware grid planner.
//! - [`io`]: robot description files and path files.

pub mod config;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kinematics;
pub mod modeplan;
pub mod poly;
pub mod singularity;

pub use config::{RunConfig, Tolerances};
pub use error::{Error, Result};
pub use geometry::{wrap_angle, JointVector, Pose, RobotGeometry, Vec2};
pub use kinematics::{
    build_fk_polynomial, fk_root_multiplicity, inverse_kinematics, oracle_fk, solve_fk,
    FkSolution, FkSolutionSet, UnivariateFkPolynomial,
};
pub use modeplan::{
    continue_joints, detect_crossings, plan_mode_change, verify_mode_change, CrossingEvent,
    CrossingKind, ModeChangeCertificate, PlannerConfig, Verdict, WorkspacePath,
};
pub use singularity::{
    classify_configuration, is_architecturally_singular, leg_lines, parallel_singularity_measure,
    passage_safety, sample_conic_polyline, singularity_conic, unnormalized_determinant,
    ConfigurationClass, ConfigurationKind, ConicClass, LegLine, SingularityConic,
};
