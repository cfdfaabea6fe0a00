//! Workspace paths that change assembly mode, and their verification.

mod certificate;
mod continuation;
mod crossings;
mod path;
mod planner;

pub use certificate::{verify_mode_change, verify_mode_change_with, JointTrace, ModeChangeCertificate, Verdict};
pub use continuation::{continue_joints, continue_joints_with, JointPath, JointSample};
pub use crossings::{detect_crossings, detect_crossings_with, CrossingEvent, CrossingKind};
pub use path::{interpolate, WorkspacePath, DEFAULT_SAMPLES_PER_SEGMENT, MIN_SAMPLES_PER_SEGMENT};
pub use planner::{plan_mode_change, Plan, PlannerConfig, SearchBox};
