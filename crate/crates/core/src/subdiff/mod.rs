//! Normal cones and subdifferentials of minimal time functions.

pub mod eps;
pub mod gauge;
pub mod inset;
pub mod level;
pub mod normal;
pub mod outset;
pub mod result;
pub mod sampled;

pub use gauge::{gauge_subdifferential, gauge_subdifferential_at_origin};
pub use inset::{basic_subdiff_inset, normal_cone_representation_check, singular_subdiff_inset};
pub use level::{support_level_sets, support_level_sign, LevelKind, Membership, SupportLevelSet};
pub use normal::{
    cone_distance_sq, frechet_normal_cone, in_eps_normal_set, limiting_normal_cone, local_cells,
    piece_normal_cone, polytope_normal_cone, LocalCell,
};
pub use outset::{
    enlargement_representation_check, normal_cone_enlargement, projection_cell_points,
    subdiff_ball_complement_enlargement, subdiff_outset_via_enlargement, subdiff_outset_via_projection,
    EnlargementNormalCone, EnlargementSubdiff, NormalConeRoute, ProjectionSubdiff,
};
pub use result::{Exactness, Hypotheses, Source, SubdiffResult};
pub use sampled::{
    ball_complement_eps_membership, convex_subdifferential, eps_probe, eps_subgradient_membership, EpsSubgradientTest,
    one_sided_subdiff_sampled, sampled_eps_membership, scene_eps_membership, union_distance_sq, OneSidedCloud,
};
pub use eps::{
    ball_outset_eps_checks, dual_candidates, inset_eps_bounds_check, outset_eps_checks, ConverseReport, EpsParams,
    EpsViolation, InsetEpsReport, OutsetEpsContext, OutsetEpsReport,
};
