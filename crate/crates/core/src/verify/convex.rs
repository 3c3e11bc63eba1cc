//! Convex targets: the subdifferential formulas against the definitional
//! subgradient inequality, and the chain of inclusions through a projection
//! point.

use super::{at, formula_subdiffs, CheckRecord, Recorder, Suite};
use crate::error::{Error, Result};
use crate::geometry::linalg::sub;
use crate::geometry::{PolyhedralUnion, Rat};
use crate::mintime::identities::show_point;
use crate::mintime::projection_set;
use crate::oracle::{DefinitionalProbe, SamplingPlan};
use crate::scene::Scene;
use crate::subdiff::{dual_candidates, gauge_subdifferential, piece_normal_cone, subdiff_outset_via_enlargement};

/// Grid candidates plus the vertices of every piece of `set`.
fn candidates_with_vertices(grid: &[Vec<Rat>], set: &PolyhedralUnion) -> Vec<Vec<Rat>> {
    let mut out = grid.to_vec();
    for p in set.pieces() {
        if let Ok(v) = p.vrep() {
            out.extend(v.vertices);
        }
    }
    out
}

/// Checks `set = {x* : accept(x*)}` on the candidates in both directions.
fn two_sided(
    rec: &mut Recorder,
    subject: String,
    set: &PolyhedralUnion,
    candidates: &[Vec<Rat>],
    accept: impl Fn(&[Rat]) -> bool,
) {
    let mut inside = 0;
    for c in candidates {
        let in_set = set.contains(c);
        let ok = accept(c);
        inside += usize::from(in_set);
        if in_set && !ok {
            rec.fail(subject, format!("{} is in the formula set but fails the definition", show_point(c)));
            return;
        }
        if ok && !in_set {
            rec.fail(subject, format!("{} satisfies the definition but is not in the formula set", show_point(c)));
            return;
        }
    }
    rec.pass(subject, format!("{} candidates agree, {inside} inside", candidates.len()));
}

pub(super) fn run(scene: &Scene, plan: &SamplingPlan) -> Result<Vec<CheckRecord>> {
    let mut rec = Recorder::new(Suite::ConvexEquivalence, scene);
    let Some(omega) = scene.polyhedral().filter(|o| o.is_convex()) else {
        rec.skip("scene", "needs a convex polyhedral target");
        return Ok(rec.finish());
    };
    let f = &scene.dynamics;
    if f.vertices().is_none() {
        rec.skip("scene", "needs polytope dynamics");
        return Ok(rec.finish());
    }
    let grid = dual_candidates(plan, scene.dim());
    for x in &scene.points {
        let probe = match DefinitionalProbe::new(f, omega, x) {
            Ok(p) => p,
            Err(Error::InfiniteTime) => {
                rec.skip(at(x), "T(x) is infinite");
                continue;
            }
            Err(e) => return Err(e),
        };
        let inside = omega.contains(x);
        let (basic, singular, nc) = if inside {
            let (b, s) = formula_subdiffs(scene, x)?;
            (b, s, None)
        } else {
            let e = subdiff_outset_via_enlargement(f, omega, x)?;
            let b = e.convex_exact_basic.expect("convex target");
            let s = e.convex_exact_singular.expect("convex target");
            (b, s, Some(e.normal_cone))
        };
        let cands = candidates_with_vertices(&grid, &basic.set);
        two_sided(&mut rec, format!("{} basic", at(x)), &basic.set, &cands, |c| probe.is_subgradient(c));
        let cands = candidates_with_vertices(&grid, &singular.set);
        two_sided(&mut rec, format!("{} singular", at(x)), &singular.set, &cands, |c| {
            probe.is_horizon_subgradient(c)
        });
        let Some(nc) = nc else {
            continue;
        };
        // N(x̄; Ω_r) ∩ −∂ρ(w̄ − x̄) = ∂T(x̄) ⊆ N(w̄; Ω) ∩ −∂ρ(w̄ − x̄), with
        // equality when 0 ∈ F.
        let proj = projection_set(f, omega, x)?;
        for w in proj.vertices()?.iter().take(4) {
            let drho = gauge_subdifferential(f, &sub(w, x))?.negate();
            let lhs = nc.cone.intersect_polyhedron(&drho);
            let normal = piece_normal_cone(&omega.pieces()[0], w)?.to_polyhedron();
            let rhs = PolyhedralUnion::from_piece(drho.clone()).intersect_polyhedron(&normal);
            let subject = format!("{} w={}", at(x), show_point(w));
            let left_eq = lhs.set_eq(&basic.set);
            let right_sub = basic.set.is_subset_of(&rhs);
            let right_eq = !f.contains_origin() || basic.set.set_eq(&rhs);
            let detail = match (left_eq, right_sub, right_eq) {
                (false, ..) => "N(x;Omega_r) ∩ -d rho(w-x) differs from the subdifferential",
                (_, false, _) => "the subdifferential is not inside N(w;Omega) ∩ -d rho(w-x)",
                (_, _, false) => "0 ∈ F but N(w;Omega) ∩ -d rho(w-x) is larger than the subdifferential",
                _ => "chain of inclusions holds",
            };
            rec.outcome(subject, left_eq && right_sub && right_eq, detail);
        }
    }
    Ok(rec.finish())
}
