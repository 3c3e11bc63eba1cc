//! Subdifferentials at points outside the target (`T(x̄) = r > 0`).
//!
//! Two routes are available:
//!
//! * through the projection `Π(x̄)`:
//!   `∂T(x̄) ⊆ ∪_{w̄ ∈ Π(x̄)} −∂ρ_F(w̄ − x̄) ∩ N(w̄; Ω)` and
//!   `∂^∞T(x̄) ⊆ ∪_{w̄ ∈ Π(x̄)} N(w̄; Ω) ∩ F*₊`;
//! * through the enlargement `Ω_r`: the one-sided estimate
//!   `∂_≥T(x̄) ⊆ N(x̄; Ω_r) ∩ C*` (equal to `N(x̄; Ω_r) ∩ S*` for locally
//!   Lipschitz `T`), and for convex `Ω` the exact formulas
//!   `∂T(x̄) = N(x̄; Ω_r) ∩ S*`, `∂^∞T(x̄) = N(x̄; Ω_r) ∩ F*₊`.
//!
//! For convex `Ω`, `N(x̄; Ω_r)` is computed from the Minkowski structure
//! `Ω_r = Ω + r(−G)`: with a witness `w̄ ∈ Π(x̄)` and `ḡ = (w̄ − x̄)/r`,
//! `N(x̄; Ω_r) = N(w̄; Ω) ∩ (−N(ḡ; G))`. Otherwise `Ω_r` is built explicitly.

use num_traits::{One, Signed, Zero};

use super::gauge::gauge_subdifferential;
use super::inset::{base_hypotheses, certify_lipschitz};
use super::level::SupportLevelSet;
use super::normal::{limiting_normal_cone, piece_normal_cone, polytope_normal_cone};
use super::result::{Exactness, Hypotheses, Source, SubdiffResult};
use crate::error::{Error, Result};
use crate::geometry::linalg::{neg, scale, sub};
use crate::geometry::{
    arrangement_cells, HPolyhedron, Halfspace, PolyhedralCone, PolyhedralUnion, Rat, MAX_ENUM_DIM,
};
use crate::mintime::{enlargement, minimal_time, projection_set, BallComplement, Dynamics, ProjectionSet, Target};

fn require_outside(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<()> {
    Error::dims(f.dim(), omega.dim())?;
    Error::dims(f.dim(), xbar.len())?;
    if omega.contains(xbar) {
        return Err(Error::WrongRegime("point lies in the target; use the in-set formulas".into()));
    }
    Ok(())
}

/// Hyperplane `⟨a, x⟩ = b` in a sign-canonical normalized form.
fn canonical_plane(h: &Halfspace) -> Halfspace {
    let n = h.normalized();
    let lead_negative = h.normal.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative);
    if lead_negative {
        Halfspace::new(neg(&n.normal), -n.offset)
    } else {
        n
    }
}

/// One relative-interior point of every cell of the projection set on which
/// both `N(w; Ω)` and `∂ρ_F(w − x̄)` are constant.
///
/// The cells come from the arrangement, inside the reachable set
/// `x̄ + r·F`, of every constraint of the target pieces met by the projection
/// and every facet of `x̄ + r·G`.
pub fn projection_cell_points(f: &Dynamics, omega: &Target, xbar: &[Rat], proj: &ProjectionSet) -> Result<Vec<Vec<Rat>>> {
    let p = f.require_polytope("projection cells")?;
    let dim = f.dim();
    if dim > MAX_ENUM_DIM {
        return Err(Error::UnsupportedDimension {
            operation: "projection cell enumeration",
            dim,
            limit: MAX_ENUM_DIM,
        });
    }
    let r = proj
        .witness
        .as_ref()
        .map(|w| w.t.clone())
        .ok_or_else(|| Error::Unsupported("projection without a rational witness".into()))?;
    let reach = p.scale(&r).translate(xbar).to_hpolyhedron()?;
    let body = f
        .sublevel_body()
        .expect("polytope dynamics")
        .scale(&r)
        .translate(xbar)
        .to_hpolyhedron()?;
    let mut planes: Vec<Halfspace> = Vec::new();
    let mut push = |h: &Halfspace| {
        if h.normal.iter().all(Zero::is_zero) {
            return;
        }
        let c = canonical_plane(h);
        if !planes.contains(&c) {
            planes.push(c);
        }
    };
    for &i in &proj.active_pieces {
        omega.pieces()[i].halfspaces().iter().for_each(&mut push);
    }
    body.halfspaces().iter().for_each(&mut push);
    let cells = arrangement_cells(dim, reach.halfspaces(), &planes);
    Ok(cells
        .into_iter()
        .map(|c| c.point)
        .filter(|w| omega.contains(w))
        .collect())
}

#[derive(Clone, Debug)]
pub struct ProjectionSubdiff {
    pub basic: SubdiffResult,
    pub singular: SubdiffResult,
    pub projection: ProjectionSet,
    /// Representative projection points, one per constancy cell.
    pub cell_points: Vec<Vec<Rat>>,
}

/// Upper estimates of `∂T(x̄)` and `∂^∞T(x̄)` through the projection set.
pub fn subdiff_outset_via_projection(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<ProjectionSubdiff> {
    require_outside(f, omega, xbar)?;
    f.require_polytope("out-of-set subdifferentials via projection")?;
    let proj = projection_set(f, omega, xbar)?;
    let cell_points = projection_cell_points(f, omega, xbar, &proj)?;
    let dim = f.dim();
    let dual_cone = f.positive_dual_cone().to_polyhedron();
    let mut basic = PolyhedralUnion::empty(dim);
    let mut singular = PolyhedralUnion::empty(dim);
    for w in &cell_points {
        let n = limiting_normal_cone(omega, w)?;
        let dr = gauge_subdifferential(f, &sub(w, xbar))?.negate();
        basic = basic.union(&n.intersect_polyhedron(&dr));
        singular = singular.union(&n.intersect_polyhedron(&dual_cone));
    }
    let hypotheses = base_hypotheses(f, omega);
    let exact_basic = omega.is_convex() && f.contains_origin();
    let mut singular = SubdiffResult {
        set: singular.simplified(),
        exactness: Exactness::UpperEstimate,
        source: Source::ProjectionSingular,
        hypotheses: hypotheses.clone(),
    };
    let snapshot = singular.clone();
    certify_lipschitz(&mut singular.hypotheses, &snapshot);
    let basic = SubdiffResult {
        set: basic.simplified(),
        exactness: if exact_basic {
            Exactness::Exact
        } else {
            Exactness::UpperEstimate
        },
        source: Source::ProjectionBasic,
        hypotheses: singular.hypotheses.clone(),
    };
    Ok(ProjectionSubdiff {
        basic,
        singular,
        projection: proj,
        cell_points,
    })
}

/// How `N(x̄; Ω_r)` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalConeRoute {
    /// `N(w̄; Ω) ∩ (−N(ḡ; G))` for convex targets.
    MinkowskiWitness,
    /// Limiting normal cone of the explicitly enumerated `Ω_r`.
    ExplicitEnlargement,
    /// Closed-form sublevel sets.
    ClosedForm,
}

#[derive(Clone, Debug)]
pub struct EnlargementNormalCone {
    pub r: Rat,
    pub cone: PolyhedralUnion,
    pub route: NormalConeRoute,
}

/// `N(x̄; Ω_r)` with `r = T(x̄) > 0`.
pub fn normal_cone_enlargement(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<EnlargementNormalCone> {
    require_outside(f, omega, xbar)?;
    let g = f
        .sublevel_body()
        .ok_or_else(|| Error::Unsupported("enlargement normal cones need polytope dynamics".into()))?;
    let eval = minimal_time(f, omega, xbar)?;
    let witness = match (&eval.witness, eval.value.is_finite()) {
        (Some(w), _) => w.clone(),
        (None, false) => return Err(Error::InfiniteTime),
        (None, true) => return Err(Error::Unsupported("minimal time is irrational".into())),
    };
    let r = witness.t.clone();
    let dim = f.dim();
    if omega.is_convex() {
        let gbar = scale(&(Rat::one() / &r), &sub(&witness.w, xbar));
        let n_target = piece_normal_cone(&omega.pieces()[0], &witness.w)?;
        let n_body = polytope_normal_cone(g.vertices(), &gbar)?.negate();
        let cone = n_target.intersect(&n_body)?;
        return Ok(EnlargementNormalCone {
            r,
            cone: PolyhedralUnion::from_piece(cone.to_polyhedron()),
            route: NormalConeRoute::MinkowskiWitness,
        });
    }
    if dim > MAX_ENUM_DIM {
        return Err(Error::UnsupportedDimension {
            operation: "normal cone of a nonconvex enlargement",
            dim,
            limit: MAX_ENUM_DIM,
        });
    }
    let omega_r = enlargement(f, omega, &r)?;
    Ok(EnlargementNormalCone {
        r,
        cone: limiting_normal_cone(&omega_r, xbar)?,
        route: NormalConeRoute::ExplicitEnlargement,
    })
}

#[derive(Clone, Debug)]
pub struct EnlargementSubdiff {
    pub normal_cone: EnlargementNormalCone,
    /// `N ∩ S*` (exact) when local Lipschitz continuity is certified,
    /// otherwise the upper estimate `N ∩ C*`.
    pub one_sided_basic: SubdiffResult,
    /// `N ∩ F*₊`, an upper estimate of the one-sided singular set.
    pub one_sided_singular: SubdiffResult,
    /// `N ∩ S*`, the exact basic subdifferential for convex targets.
    pub convex_exact_basic: Option<SubdiffResult>,
    /// `N ∩ F*₊`, the exact singular subdifferential for convex targets.
    pub convex_exact_singular: Option<SubdiffResult>,
}

fn slice(n: &PolyhedralUnion, level: &PolyhedralUnion) -> PolyhedralUnion {
    n.intersect(level).simplified()
}

/// Enlargement-based subdifferentials at `x̄ ∉ Ω`.
pub fn subdiff_outset_via_enlargement(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<EnlargementSubdiff> {
    let nc = normal_cone_enlargement(f, omega, xbar)?;
    let zero = Rat::zero();
    let c_star = SupportLevelSet::lower(f, zero.clone())?.realize()?;
    let s_star = SupportLevelSet::two_sided(f, zero)?.realize()?;
    let f_plus = SupportLevelSet::positive_dual(f).realize()?;
    let n = &nc.cone;
    let mut hypotheses = base_hypotheses(f, omega);
    let convex = omega.is_convex();
    let convex_exact_singular = convex.then(|| SubdiffResult {
        set: slice(n, &f_plus),
        exactness: Exactness::Exact,
        source: Source::EnlargementSingular,
        hypotheses: hypotheses.clone(),
    });
    match &convex_exact_singular {
        Some(s) => certify_lipschitz(&mut hypotheses, s),
        None if hypotheses.locally_lipschitz.is_none() && f.dim() <= MAX_ENUM_DIM => {
            let proj = subdiff_outset_via_projection(f, omega, xbar)?;
            certify_lipschitz(&mut hypotheses, &proj.singular);
        }
        None => {}
    }
    let lipschitz = hypotheses.locally_lipschitz == Some(true);
    let one_sided_basic = if lipschitz {
        SubdiffResult {
            set: slice(n, &s_star),
            exactness: Exactness::Exact,
            source: Source::EnlargementTwoSided,
            hypotheses: hypotheses.clone(),
        }
    } else {
        SubdiffResult {
            set: slice(n, &c_star),
            exactness: Exactness::UpperEstimate,
            source: Source::EnlargementOneSided,
            hypotheses: hypotheses.clone(),
        }
    };
    let one_sided_singular = SubdiffResult {
        set: slice(n, &f_plus),
        exactness: Exactness::UpperEstimate,
        source: Source::EnlargementSingular,
        hypotheses: hypotheses.clone(),
    };
    let convex_exact_basic = convex.then(|| SubdiffResult {
        set: slice(n, &s_star),
        exactness: Exactness::Exact,
        source: Source::EnlargementTwoSided,
        hypotheses: hypotheses.clone(),
    });
    let convex_exact_singular = convex_exact_singular.map(|mut s| {
        s.hypotheses = hypotheses.clone();
        s
    });
    Ok(EnlargementSubdiff {
        normal_cone: nc,
        one_sided_basic,
        one_sided_singular,
        convex_exact_basic,
        convex_exact_singular,
    })
}

/// Enlargement-based sets for the closed-form ball complement. `T` is
/// Lipschitz there, so the one-sided basic set is `N(x̄; Ω_r) ∩ S*`; it is
/// empty at the origin, where `N(0; Ω_r) = {0}`.
pub fn subdiff_ball_complement_enlargement(scene: &BallComplement, xbar: &[Rat]) -> Result<EnlargementSubdiff> {
    let cone = scene.enlargement_normal_cone(xbar)?;
    let r = scene
        .time(xbar)?
        .exact()
        .cloned()
        .ok_or_else(|| Error::Unsupported("minimal time is irrational".into()))?;
    let dim = scene.dim();
    let hypotheses = Hypotheses {
        convex_target: false,
        origin_in_dynamics: true,
        origin_interior: true,
        locally_lipschitz: Some(true),
    };
    let n = PolyhedralUnion::from_piece(cone.to_polyhedron());
    let (basic, singular) = if cone.is_zero() {
        (PolyhedralUnion::empty(dim), n.clone())
    } else {
        let g = scene
            .gradient(xbar)
            .ok_or_else(|| Error::Unsupported("gradient direction is irrational".into()))?;
        (
            PolyhedralUnion::from_piece(HPolyhedron::singleton(&g)),
            PolyhedralUnion::from_piece(HPolyhedron::singleton(&vec![Rat::zero(); dim])),
        )
    };
    let result = |set, exactness, source| SubdiffResult {
        set,
        exactness,
        source,
        hypotheses: hypotheses.clone(),
    };
    Ok(EnlargementSubdiff {
        normal_cone: EnlargementNormalCone {
            r,
            cone: n,
            route: NormalConeRoute::ClosedForm,
        },
        one_sided_basic: result(basic, Exactness::Exact, Source::ClosedForm),
        one_sided_singular: result(singular, Exactness::UpperEstimate, Source::ClosedForm),
        convex_exact_basic: None,
        convex_exact_singular: None,
    })
}

/// `N(x̄; Ω_r) = ∪_{λ≥0} λ·∂_≥T(x̄)` (with `0·∅ = {0}`) when `0 ∈ int F`,
/// checked by comparing `N` with the cone over `N ∩ S*`.
pub fn enlargement_representation_check(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<crate::mintime::Check> {
    use crate::mintime::Check;
    if !f.origin_interior() {
        return Ok(Check::Vacuous("origin is not interior to the dynamics".into()));
    }
    let e = subdiff_outset_via_enlargement(f, omega, xbar)?;
    let dim = f.dim();
    let mut cones = vec![PolyhedralCone::zero(dim).to_polyhedron()];
    for piece in e.one_sided_basic.set.pieces() {
        let gens = piece.generators();
        let mut rays = gens.vertices.clone();
        rays.extend(gens.rays.iter().cloned());
        cones.push(PolyhedralCone::from_generators(dim, rays, gens.lines.clone())?.to_polyhedron());
    }
    let rebuilt = PolyhedralUnion::from_pieces(dim, cones)?;
    if let Some(w) = e.normal_cone.cone.subset_witness(&rebuilt) {
        return Ok(Check::Violated(format!("normal {w:?} is not a multiple of a one-sided subgradient")));
    }
    if let Some(w) = rebuilt.subset_witness(&e.normal_cone.cone) {
        return Ok(Check::Violated(format!("{w:?} lies outside N(x;Omega_r)")));
    }
    Ok(Check::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};
    use crate::mintime::Check;

    fn segment() -> Dynamics {
        Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap()
    }

    fn box_complement() -> Target {
        let hs = |a: [i64; 2]| HPolyhedron::new(2, vec![Halfspace::new(ivec(&a), int(-1))]).unwrap();
        Target::from_pieces(2, vec![hs([-1, 0]), hs([1, 0]), hs([0, -1]), hs([0, 1])]).unwrap()
    }

    fn strip_box() -> Target {
        Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap())
    }

    fn point(x: Vec<Rat>) -> PolyhedralUnion {
        PolyhedralUnion::from_piece(HPolyhedron::singleton(&x))
    }

    #[test]
    fn projection_route_box_complement() {
        let r = subdiff_outset_via_projection(&segment(), &box_complement(), &[rat(1, 2), rat(1, 2)]).unwrap();
        assert!(r.basic.set.set_eq(&point(ivec(&[-1, 0]))));
        assert!(r.singular.is_origin_only());
        assert_eq!(r.basic.exactness, Exactness::UpperEstimate);
        assert_eq!(r.basic.hypotheses.locally_lipschitz, Some(true));
    }

    #[test]
    fn projection_route_strip_box() {
        let r = subdiff_outset_via_projection(&segment(), &strip_box(), &[int(2), rat(1, 2)]).unwrap();
        assert!(r.basic.set.set_eq(&point(ivec(&[1, 0]))));
        assert!(r.singular.is_origin_only());
        assert_eq!(r.basic.exactness, Exactness::Exact);
    }

    #[test]
    fn enlargement_route_strip_box() {
        let e = subdiff_outset_via_enlargement(&segment(), &strip_box(), &[int(2), rat(1, 2)]).unwrap();
        assert_eq!(e.normal_cone.r, int(1));
        let expected = PolyhedralCone::generated_by(2, vec![ivec(&[1, 0])]).unwrap().to_polyhedron();
        assert!(e.normal_cone.cone.set_eq(&PolyhedralUnion::from_piece(expected)));
        assert!(e.convex_exact_basic.unwrap().set.set_eq(&point(ivec(&[1, 0]))));
        assert!(e.convex_exact_singular.unwrap().is_origin_only());
    }

    #[test]
    fn minkowski_route_matches_explicit_enlargement() {
        let f = Dynamics::from_vertices(vec![ivec(&[1, 1]), ivec(&[-1, 1]), ivec(&[0, -1])]).unwrap();
        let o = Target::convex(HPolyhedron::boxed(&ivec(&[0, 0]), &ivec(&[1, 1])).unwrap());
        for x in [ivec(&[3, 2]), ivec(&[-2, -1]), vec![rat(1, 2), int(-3)], ivec(&[2, 0])] {
            let a = normal_cone_enlargement(&f, &o, &x).unwrap();
            let r = a.r.clone();
            let er = enlargement(&f, &o, &r).unwrap();
            let b = limiting_normal_cone(&er, &x).unwrap();
            assert!(a.cone.set_eq(&b), "mismatch at {x:?}");
        }
    }

    #[test]
    fn one_dimensional_point_target() {
        let f = Dynamics::from_vertices(vec![ivec(&[1])]).unwrap();
        let o = Target::convex(HPolyhedron::singleton(&ivec(&[0])));
        let e = subdiff_outset_via_enlargement(&f, &o, &ivec(&[-3])).unwrap();
        assert_eq!(e.normal_cone.r, int(3));
        assert!(e.convex_exact_basic.unwrap().set.set_eq(&point(ivec(&[-1]))));
    }

    #[test]
    fn ball_complement_origin() {
        let e = subdiff_ball_complement_enlargement(&BallComplement::unit_plane(), &ivec(&[0, 0])).unwrap();
        assert!(e.normal_cone.cone.as_point().is_some());
        assert!(e.one_sided_basic.set.is_empty());
    }

    #[test]
    fn representation_with_interior_origin() {
        let f = Dynamics::from_vertices(vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -1])]).unwrap();
        for x in [ivec(&[3, 0]), ivec(&[2, 2]), vec![rat(-3, 2), rat(1, 2)]] {
            assert_eq!(enlargement_representation_check(&f, &strip_box(), &x).unwrap(), Check::Holds);
            assert_eq!(enlargement_representation_check(&f, &box_complement(), &[rat(1, 2), rat(1, 3)]).unwrap(), Check::Holds);
        }
    }

    #[test]
    fn in_set_point_is_rejected() {
        assert!(matches!(
            subdiff_outset_via_enlargement(&segment(), &strip_box(), &ivec(&[0, 0])),
            Err(Error::WrongRegime(_))
        ));
    }
}
