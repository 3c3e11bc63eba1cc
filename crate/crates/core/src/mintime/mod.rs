//! The minimal time function, its projections, enlargements and structural
//! identities.

pub mod closed_form;
pub mod dynamics;
pub mod enlargement;
pub mod eval;
pub mod identities;
pub mod projection;
pub mod target;

pub use closed_form::BallComplement;
pub use dynamics::{Dynamics, GaugeSolution, Shape};
pub use enlargement::{enlargement, enlargement_contains};
pub use eval::{
    minimal_time, minimal_time_exact, minimal_time_sq, piece_times, time_at_most, TimeEval,
    TimeWitness,
};
pub use identities::{
    convexity_concavity_probe, enlargement_identity_check, gauge_representation_check,
    projection_linearity_check, shifted_argument_check, Check, ConvexityReport,
    ConvexityViolation,
};
pub use projection::{projection_set, ProjectionSet};
pub use target::Target;
