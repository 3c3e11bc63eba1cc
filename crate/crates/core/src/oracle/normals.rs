//! Sampled ε-normals: `x* ∈ N̂_ε(x̄; Ω)` when
//! `limsup ⟨x*, x − x̄⟩/‖x − x̄‖ ≤ ε` as `x → x̄` within `Ω`.

use super::plan::{axpy, dot, SamplingPlan};
use super::probe::{DualPoint, FrechetCloud};
use crate::error::{Error, Result};
use crate::geometry::rat::{to_f64, vec_to_f64};
use crate::mintime::Target;
use crate::subdiff::Membership;

/// Slack for floating-point membership of sample points in `Ω`.
const MEMBERSHIP_SLACK: f64 = 1e-12;

fn contains_f64(pieces: &[Vec<(Vec<f64>, f64)>], x: &[f64]) -> bool {
    pieces
        .iter()
        .any(|rows| rows.iter().all(|(a, b)| dot(a, x) <= b + MEMBERSHIP_SLACK))
}

pub fn sampled_eps_normals(
    omega: &Target,
    xbar: &[f64],
    eps: f64,
    plan: &SamplingPlan,
    structural: &[Vec<f64>],
) -> Result<FrechetCloud> {
    let dim = omega.dim();
    Error::dims(dim, xbar.len())?;
    let pieces: Vec<Vec<(Vec<f64>, f64)>> = omega
        .pieces()
        .iter()
        .map(|p| {
            p.halfspaces()
                .iter()
                .map(|h| (vec_to_f64(&h.normal), to_f64(&h.offset)))
                .collect()
        })
        .collect();
    if !contains_f64(&pieces, xbar) {
        return Err(Error::WrongRegime("point is outside the target".into()));
    }
    let radii = plan.radii();
    let tail = &radii[radii.len() - plan.tail..];
    let dirs = plan.directions(dim, structural);
    // Directions that stay in Ω at every tail radius.
    let feasible: Vec<&Vec<f64>> = dirs
        .iter()
        .filter(|d| tail.iter().all(|h| contains_f64(&pieces, &axpy(xbar, *h, d))))
        .collect();
    let tol = plan.tolerance;
    let band = plan.band;
    let points = plan
        .dual_grid(dim)
        .into_iter()
        .map(|xstar| {
            let worst = feasible
                .iter()
                .map(|d| dot(&xstar, d))
                .fold(f64::NEG_INFINITY, f64::max);
            let margin = -worst + tol;
            let verdict = if margin >= -eps {
                Membership::Member
            } else if -worst + band < -eps {
                Membership::NonMember
            } else {
                Membership::Uncertain
            };
            DualPoint {
                xstar,
                margin,
                verdict,
            }
        })
        .collect();
    Ok(FrechetCloud {
        center: xbar.to_vec(),
        eps,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec};
    use crate::geometry::{HPolyhedron, Halfspace};

    fn verdict(c: &FrechetCloud, x: [f64; 2]) -> Membership {
        c.points.iter().find(|p| p.xstar == x.to_vec()).unwrap().verdict
    }

    #[test]
    fn box_corner_and_interior() {
        let omega = Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap());
        let plan = SamplingPlan::default();
        let c = sampled_eps_normals(&omega, &[1.0, 1.0], 0.0, &plan, &[]).unwrap();
        assert_eq!(verdict(&c, [1.0, 0.5]), Membership::Member);
        assert_eq!(verdict(&c, [-0.25, 1.0]), Membership::NonMember);
        let i = sampled_eps_normals(&omega, &[0.0, 0.0], 0.0, &plan, &[]).unwrap();
        assert_eq!(i.members().count(), 1);
        let e = sampled_eps_normals(&omega, &[0.0, 0.0], 0.3, &plan, &[]).unwrap();
        assert_eq!(verdict(&e, [0.25, 0.0]), Membership::Member);
        assert_eq!(verdict(&e, [0.25, 0.25]), Membership::NonMember);
    }

    #[test]
    fn reentrant_corner_has_no_nonzero_normals() {
        let hs = |a: [i64; 2]| HPolyhedron::new(2, vec![Halfspace::new(ivec(&a), int(-1))]).unwrap();
        let omega = Target::from_pieces(2, vec![hs([-1, 0]), hs([1, 0]), hs([0, -1]), hs([0, 1])]).unwrap();
        let c = sampled_eps_normals(&omega, &[1.0, 1.0], 0.0, &SamplingPlan::default(), &[]).unwrap();
        assert_eq!(c.members().count(), 1);
        assert_eq!(verdict(&c, [0.0, 0.0]), Membership::Member);
    }
}
