//! Exact rational geometry: linear programming, polyhedra, cones and
//! finite unions of polyhedra.

pub mod arrangement;
pub mod cone;
pub mod dd;
pub mod linalg;
pub mod lp;
pub mod nearest;
pub mod nnc;
pub mod polyhedron;
pub mod polytope;
pub mod rat;
pub mod union;

pub use arrangement::{arrangement_cells, Cell, Side};
pub use cone::PolyhedralCone;
pub use dd::ConeGenerators;
pub use lp::{LinearProgram, LpResult, LpStatus, Relation, Sense};
pub use nearest::nearest_point;
pub use polyhedron::{lp_solve, HPolyhedron, Halfspace, VRep, MAX_ENUM_DIM};
pub use polytope::VPolytope;
pub use rat::{fmt_rat, int, parse_rat, rat, ExtRat, Rat, RatInterval, Value};
pub use union::PolyhedralUnion;

/// Generator description of a polyhedron or cone (dimension ≤ 3).
pub fn double_description(p: &HPolyhedron) -> crate::Result<VRep> {
    p.vrep()
}
