//! Sublevel sets `Ω_r = {x : T(x) ≤ r}`.
//!
//! Since `{u : ρ_F(u) ≤ t} = t·G` with `G = conv(F ∪ {0})`, a point `x` has
//! `T(x) ≤ r` iff some `w ∈ Ω` satisfies `w − x ∈ r·G`, i.e.
//! `Ω_r = Ω ⊕ r·(−G)`. Each piece is a polyhedron plus a polytope, built
//! from generators and converted back to facets.

use num_traits::Signed;

use super::dynamics::Dynamics;
use super::eval::time_at_most;
use super::target::Target;
use crate::error::{Error, Result};
use crate::geometry::linalg::{add, lex_cmp};
use crate::geometry::{HPolyhedron, PolyhedralUnion, Rat, VRep, MAX_ENUM_DIM};

/// Explicit `Ω_r` as a union of polyhedra (dimension ≤ 3, polytope `F`).
pub fn enlargement(f: &Dynamics, omega: &Target, r: &Rat) -> Result<Target> {
    if !r.is_positive() {
        return Err(Error::InvalidInput("enlargement radius must be positive".into()));
    }
    Error::dims(f.dim(), omega.dim())?;
    if f.dim() > MAX_ENUM_DIM {
        return Err(Error::UnsupportedDimension {
            operation: "explicit enlargement",
            dim: f.dim(),
            limit: MAX_ENUM_DIM,
        });
    }
    let g = f
        .sublevel_body()
        .ok_or_else(|| Error::Unsupported("explicit enlargement needs polytope dynamics".into()))?;
    let shifts = g.scale(r).negate();
    let mut pieces = Vec::new();
    for piece in omega.pieces() {
        let gens = piece.vrep()?;
        let mut vertices = Vec::new();
        for v in &gens.vertices {
            for s in shifts.vertices() {
                vertices.push(add(v, s));
            }
        }
        vertices.sort_by(|a, b| lex_cmp(a, b));
        vertices.dedup();
        let sum = VRep {
            dim: gens.dim,
            vertices,
            rays: gens.rays,
            lines: gens.lines,
        };
        pieces.push(HPolyhedron::new(f.dim(), sum.to_halfspaces())?.reduced());
    }
    Target::new(PolyhedralUnion::from_pieces(f.dim(), pieces)?)
}

/// Membership `x ∈ Ω_r` through the evaluator; works in any dimension and
/// for ball dynamics.
pub fn enlargement_contains(f: &Dynamics, omega: &Target, r: &Rat, x: &[Rat]) -> Result<bool> {
    time_at_most(f, omega, x, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    #[test]
    fn strip_box_enlargement() {
        let f = Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap();
        let o = Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap());
        let e = enlargement(&f, &o, &int(1)).unwrap();
        let expected = HPolyhedron::boxed(&ivec(&[-2, -1]), &ivec(&[2, 1])).unwrap();
        assert_eq!(e.pieces().len(), 1);
        assert!(e.pieces()[0].set_eq(&expected));
    }

    #[test]
    fn one_dimensional_point_target() {
        let f = Dynamics::from_vertices(vec![ivec(&[1])]).unwrap();
        let o = Target::convex(HPolyhedron::singleton(&ivec(&[0])));
        let e = enlargement(&f, &o, &int(2)).unwrap();
        let expected = HPolyhedron::boxed(&ivec(&[-2]), &ivec(&[0])).unwrap();
        assert!(e.pieces()[0].set_eq(&expected));
    }

    #[test]
    fn explicit_and_membership_agree_on_a_grid() {
        let f = Dynamics::from_vertices(vec![ivec(&[1, 1]), ivec(&[-1, 1]), ivec(&[0, -1])]).unwrap();
        let o = Target::from_pieces(
            2,
            vec![
                HPolyhedron::boxed(&ivec(&[0, 0]), &ivec(&[1, 1])).unwrap(),
                HPolyhedron::boxed(&ivec(&[2, -1]), &ivec(&[3, 0])).unwrap(),
            ],
        )
        .unwrap();
        let r = rat(1, 2);
        let e = enlargement(&f, &o, &r).unwrap();
        for i in -8..=14 {
            for j in -8..=8 {
                let x = vec![rat(i, 4), rat(j, 4)];
                assert_eq!(
                    e.contains(&x),
                    enlargement_contains(&f, &o, &r, &x).unwrap(),
                    "disagreement at {x:?}"
                );
            }
        }
    }
}
