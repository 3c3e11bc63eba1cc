//! Normal cones to finite unions of polyhedra.
//!
//! Near a point `x̄`, each piece `P` containing `x̄` coincides with
//! `x̄ + {d : ⟨aᵢ, d⟩ ≤ 0, i active}`, and pieces missing `x̄` are at positive
//! distance. Every normal cone is therefore determined by the central
//! arrangement of the active hyperplanes. On a cell of that arrangement the
//! set of pieces containing it and the set of constraints active along it are
//! constant, so the regular (Fréchet) normal cone — the polar of the union of
//! tangent cones, i.e. the intersection of the pieces' cones — is constant as
//! well. The limiting cone is the union of these cell cones.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::linalg::{is_zero, neg, norm_sq, sub};
use crate::geometry::{
    arrangement_cells, nearest_point, HPolyhedron, Halfspace, PolyhedralCone, PolyhedralUnion, Rat, Side,
    MAX_ENUM_DIM,
};
use crate::mintime::Target;

/// `N_P(x) = cone{aᵢ : ⟨aᵢ, x⟩ = bᵢ}` for a single piece containing `x`.
pub fn piece_normal_cone(piece: &HPolyhedron, x: &[Rat]) -> Result<PolyhedralCone> {
    Error::dims(piece.dim(), x.len())?;
    let rays: Vec<Vec<Rat>> = piece
        .active(x)
        .into_iter()
        .map(|i| piece.halfspaces()[i].normal.clone())
        .filter(|a| !is_zero(a))
        .collect();
    if rays.is_empty() {
        return Ok(PolyhedralCone::zero(piece.dim()));
    }
    PolyhedralCone::generated_by(piece.dim(), rays)
}

/// Regular normal cone `N̂(x̄; Ω)`; `None` when `x̄ ∉ Ω`.
pub fn frechet_normal_cone(omega: &Target, xbar: &[Rat]) -> Result<Option<PolyhedralCone>> {
    Error::dims(omega.dim(), xbar.len())?;
    let containing = omega.union().pieces_containing(xbar);
    if containing.is_empty() {
        return Ok(None);
    }
    let mut cone: Option<PolyhedralCone> = None;
    for i in containing {
        let c = piece_normal_cone(&omega.pieces()[i], xbar)?;
        cone = Some(match cone {
            None => c,
            Some(acc) => acc.intersect(&c)?,
        });
    }
    Ok(cone)
}

/// The hyperplane of `⟨a, d⟩ = 0` with a sign-canonical normal, together with
/// the orientation of `a` relative to it.
fn canonical_direction(a: &[Rat]) -> (Vec<Rat>, bool) {
    let h = Halfspace::new(a.to_vec(), Rat::zero()).normalized();
    let lead_negative = a.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative);
    if lead_negative {
        (neg(&h.normal), true)
    } else {
        (h.normal, false)
    }
}

/// Local description of a union around a point: for each cell of the
/// central arrangement lying in the union, a relative-interior direction and
/// the regular normal cone at points of that cell.
#[derive(Clone, Debug)]
pub struct LocalCell {
    pub direction: Vec<Rat>,
    pub cone: PolyhedralCone,
}

/// Enumerates the local cells of `Ω` at `x̄ ∈ Ω`.
pub fn local_cells(omega: &Target, xbar: &[Rat]) -> Result<Vec<LocalCell>> {
    Error::dims(omega.dim(), xbar.len())?;
    let dim = omega.dim();
    let containing = omega.union().pieces_containing(xbar);
    if containing.is_empty() {
        return Err(Error::WrongRegime("normal cones need a point of the target".into()));
    }
    // Distinct hyperplanes and, per piece, (hyperplane index, flipped).
    let mut planes: Vec<Vec<Rat>> = Vec::new();
    let mut tight: Vec<Vec<(usize, bool)>> = Vec::new();
    for &i in &containing {
        let piece = &omega.pieces()[i];
        let mut mine = Vec::new();
        for j in piece.active(xbar) {
            let a = &piece.halfspaces()[j].normal;
            if is_zero(a) {
                continue;
            }
            let (n, flipped) = canonical_direction(a);
            let idx = planes.iter().position(|p| *p == n).unwrap_or_else(|| {
                planes.push(n);
                planes.len() - 1
            });
            mine.push((idx, flipped));
        }
        tight.push(mine);
    }
    let hyperplanes: Vec<Halfspace> = planes
        .iter()
        .map(|n| Halfspace::new(n.clone(), Rat::zero()))
        .collect();
    let mut out = Vec::new();
    for cell in arrangement_cells(dim, &[], &hyperplanes) {
        // a·d ≤ 0 with a = ±n: sign Below/On for +n, Above/On for −n.
        let inside = |mine: &[(usize, bool)]| {
            mine.iter().all(|&(k, flipped)| match cell.sides[k] {
                Side::On => true,
                Side::Below => !flipped,
                Side::Above => flipped,
            })
        };
        let mut cone: Option<PolyhedralCone> = None;
        for mine in &tight {
            if !inside(mine) {
                continue;
            }
            let rays: Vec<Vec<Rat>> = mine
                .iter()
                .filter(|&&(k, _)| cell.sides[k] == Side::On)
                .map(|&(k, flipped)| if flipped { neg(&planes[k]) } else { planes[k].clone() })
                .collect();
            let c = if rays.is_empty() {
                PolyhedralCone::zero(dim)
            } else {
                PolyhedralCone::generated_by(dim, rays)?
            };
            cone = Some(match cone {
                None => c,
                Some(acc) => acc.intersect(&c)?,
            });
        }
        if let Some(cone) = cone {
            out.push(LocalCell {
                direction: cell.point,
                cone,
            });
        }
    }
    Ok(out)
}

/// Limiting normal cone `N(x̄; Ω)` as a union of polyhedral cones; empty when
/// `x̄ ∉ Ω`. For a convex target this is the single cone of active normals.
pub fn limiting_normal_cone(omega: &Target, xbar: &[Rat]) -> Result<PolyhedralUnion> {
    Error::dims(omega.dim(), xbar.len())?;
    let dim = omega.dim();
    if !omega.contains(xbar) {
        return Ok(PolyhedralUnion::empty(dim));
    }
    if omega.is_convex() {
        let c = piece_normal_cone(&omega.pieces()[0], xbar)?;
        return Ok(PolyhedralUnion::from_piece(c.to_polyhedron()));
    }
    if dim > MAX_ENUM_DIM {
        return Err(Error::UnsupportedDimension {
            operation: "limiting normal cone of a union",
            dim,
            limit: MAX_ENUM_DIM,
        });
    }
    let cones = local_cells(omega, xbar)?
        .into_iter()
        .map(|c| c.cone.to_polyhedron())
        .collect();
    Ok(PolyhedralUnion::from_pieces(dim, cones)?.simplified())
}

/// `dist(x*, K)²` for a polyhedral cone `K`.
pub fn cone_distance_sq(cone: &PolyhedralCone, xstar: &[Rat]) -> Rat {
    if cone.contains(xstar) {
        return Rat::zero();
    }
    nearest_point(&cone.to_polyhedron(), xstar).1
}

/// Exact test of `x* ∈ N̂_ε(x̄; Ω)`, the set of `x*` with
/// `limsup_{x →Ω x̄} ⟨x*, x − x̄⟩ / ‖x − x̄‖ ≤ ε`.
///
/// Locally `Ω` is a union of translated tangent cones `T_P`, and
/// `sup{⟨x*, d⟩ : d ∈ T_P, ‖d‖ ≤ 1} = dist(x*, N_P(x̄))`, so the condition is
/// `dist(x*, N_P(x̄)) ≤ ε` for every piece `P` containing `x̄`.
pub fn in_eps_normal_set(omega: &Target, xbar: &[Rat], xstar: &[Rat], eps: &Rat) -> Result<bool> {
    Error::dims(omega.dim(), xstar.len())?;
    if eps.is_negative() {
        return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
    }
    let containing = omega.union().pieces_containing(xbar);
    if containing.is_empty() {
        return Err(Error::WrongRegime("ε-normals need a point of the target".into()));
    }
    let eps_sq = eps * eps;
    for i in containing {
        let piece = &omega.pieces()[i];
        // Tangent cone {d : ⟨aᵢ, d⟩ ≤ 0 for active i}; its polar is N_P(x̄).
        let active: Vec<Vec<Rat>> = piece
            .active(xbar)
            .into_iter()
            .map(|j| piece.halfspaces()[j].normal.clone())
            .collect();
        let d2 = if active.is_empty() {
            norm_sq(xstar)
        } else {
            let n = PolyhedralCone::generated_by(piece.dim(), active)?;
            cone_distance_sq(&n, xstar)
        };
        if d2 > eps_sq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `⟨y, g − ḡ⟩ ≤ 0` for all vertices `g`: the normal cone of a polytope.
pub fn polytope_normal_cone(vertices: &[Vec<Rat>], gbar: &[Rat]) -> Result<PolyhedralCone> {
    let dim = gbar.len();
    let rows = vertices.iter().map(|g| sub(g, gbar)).collect();
    PolyhedralCone::from_halfspaces(dim, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec};

    fn box_complement() -> Target {
        let hs = |a: [i64; 2]| HPolyhedron::new(2, vec![Halfspace::new(ivec(&a), int(-1))]).unwrap();
        Target::from_pieces(2, vec![hs([-1, 0]), hs([1, 0]), hs([0, -1]), hs([0, 1])]).unwrap()
    }

    fn square() -> Target {
        Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap())
    }

    #[test]
    fn convex_corner_cone() {
        let n = limiting_normal_cone(&square(), &ivec(&[1, 1])).unwrap();
        assert!(n.contains(&ivec(&[1, 2])));
        assert!(!n.contains(&ivec(&[-1, 2])));
        let f = frechet_normal_cone(&square(), &ivec(&[1, 0])).unwrap().unwrap();
        assert!(f.contains(&ivec(&[3, 0])) && !f.contains(&ivec(&[-1, 0])));
    }

    #[test]
    fn outside_point_has_no_normals() {
        assert!(frechet_normal_cone(&square(), &ivec(&[3, 0])).unwrap().is_none());
        assert!(limiting_normal_cone(&square(), &ivec(&[3, 0])).unwrap().is_empty());
    }

    #[test]
    fn reentrant_corner_has_union_cone() {
        // Ω = complement of the open square; at (1,1) the regular cone is {0}
        // while the limiting cone is the two boundary rays pointing inward.
        let o = box_complement();
        let x = ivec(&[1, 1]);
        assert!(frechet_normal_cone(&o, &x).unwrap().unwrap().is_zero());
        let n = limiting_normal_cone(&o, &x).unwrap();
        assert!(n.contains(&ivec(&[-1, 0])));
        assert!(n.contains(&ivec(&[0, -3])));
        assert!(!n.contains(&ivec(&[-1, -1])));
        assert!(!n.contains(&ivec(&[1, 0])));
    }

    #[test]
    fn boundary_edge_of_complement() {
        let o = box_complement();
        let n = limiting_normal_cone(&o, &ivec(&[1, 0])).unwrap();
        let expected = PolyhedralUnion::from_piece(
            PolyhedralCone::generated_by(2, vec![ivec(&[-1, 0])]).unwrap().to_polyhedron(),
        );
        assert!(n.set_eq(&expected));
    }

    #[test]
    fn eps_normals() {
        let o = square();
        let x = ivec(&[1, 0]);
        assert!(in_eps_normal_set(&o, &x, &ivec(&[5, 0]), &int(0)).unwrap());
        assert!(!in_eps_normal_set(&o, &x, &[int(0), Rat::new(1.into(), 2.into())], &int(0)).unwrap());
        assert!(in_eps_normal_set(&o, &x, &[int(0), Rat::new(1.into(), 2.into())], &Rat::new(1.into(), 2.into())).unwrap());
        // Interior point: ε-normals are the ε-ball.
        let c = ivec(&[0, 0]);
        assert!(in_eps_normal_set(&o, &c, &[Rat::new(3.into(), 5.into()), Rat::new(4.into(), 5.into())], &int(1)).unwrap());
        assert!(!in_eps_normal_set(&o, &c, &ivec(&[1, 1]), &int(1)).unwrap());
    }
}
