//! Structural identities of `T`: enlargement, shifted argument, gauge
//! representation, linearity along projections, lower semicontinuity and
//! convexity/concavity.

use num_traits::Zero;

use super::{at, CheckRecord, Recorder, Suite};
use crate::error::{Error, Result};
use crate::geometry::linalg::{dedup_sorted, lex_cmp};
use crate::geometry::rat::{fmt_rat, rat, vec_to_f64};
use crate::geometry::{ExtRat, Rat};
use crate::mintime::identities::show_point;
use crate::mintime::{
    convexity_concavity_probe, enlargement_identity_check, gauge_representation_check, minimal_time_exact,
    projection_linearity_check, shifted_argument_check, Check, Dynamics, Target,
};
use crate::oracle::plan::axpy;
use crate::oracle::SamplingPlan;
use crate::scene::Scene;

/// Largest drop `T(x̄) − T(x)` at the smallest radius that still counts as
/// lower semicontinuous.
pub(super) const LSC_DROP: f64 = 1.0 / 32.0;

/// A coarse symmetric grid around the origin; `diagonal` keeps only the
/// points with `|x₁| = |x₂|`.
fn grid_points(dim: usize, diagonal: bool) -> Vec<Vec<Rat>> {
    let ticks = [-3i64, -1, 1, 3];
    match dim {
        1 => ticks.iter().map(|a| vec![rat(*a, 2)]).collect(),
        2 => ticks
            .iter()
            .flat_map(|a| ticks.iter().map(move |b| (*a, *b)))
            .filter(|(a, b)| !diagonal || a.abs() == b.abs())
            .map(|(a, b)| vec![rat(a, 2), rat(b, 2)])
            .collect(),
        _ => Vec::new(),
    }
}

/// A point of every target piece plus up to `vertices` of its vertices.
fn target_points(omega: &Target, vertices: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for p in omega.pieces() {
        out.push(p.some_point());
        if let Ok(v) = p.vrep() {
            out.extend(v.vertices.into_iter().take(vertices));
        }
    }
    out
}

/// Scene points, target points and grid points; `small` trims the target
/// vertices and the grid for the quadratic pair sweeps.
fn sample_pool(scene: &Scene, omega: &Target, small: bool) -> Vec<Vec<Rat>> {
    let mut pool: Vec<Vec<Rat>> = scene.points.clone();
    pool.extend(target_points(omega, if small { 2 } else { 4 }));
    pool.extend(grid_points(scene.dim(), small));
    pool.sort_by(|a, b| lex_cmp(a, b));
    dedup_sorted(pool)
}

/// Unsupported operations make a check vacuous rather than failed.
fn lenient(r: Result<Check>) -> Result<Check> {
    match r {
        Err(e @ (Error::Unsupported(_) | Error::UnsupportedDimension { .. })) => Ok(Check::Vacuous(e.to_string())),
        other => other,
    }
}

fn finite_time(f: &Dynamics, omega: &Target, x: &[Rat]) -> Result<Option<Rat>> {
    Ok(match minimal_time_exact(f, omega, x) {
        Ok(ExtRat::Finite(t)) => Some(t),
        Ok(ExtRat::Infinite) => None,
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    })
}

pub(super) fn run(scene: &Scene, suite: Suite, plan: &SamplingPlan) -> Result<Vec<CheckRecord>> {
    let mut rec = Recorder::new(suite, scene);
    if suite == Suite::LowerSemicontinuity {
        lower_semicontinuity(scene, plan, &mut rec)?;
        return Ok(rec.finish());
    }
    let Some(omega) = scene.polyhedral() else {
        rec.skip("scene", "closed-form target: the identities are exercised on polyhedral scenes");
        return Ok(rec.finish());
    };
    let f = &scene.dynamics;
    match suite {
        Suite::EnlargementIdentity => {
            for x in &scene.points {
                let Some(t) = finite_time(f, omega, x)? else {
                    rec.skip(at(x), "T(x) is infinite");
                    continue;
                };
                if t.is_zero() {
                    rec.skip(at(x), "x lies in the target");
                    continue;
                }
                let mut rs: Vec<Rat> = [1, 2, 3].iter().map(|k| &t * rat(*k, 4)).collect();
                rs.extend(scene.options.r.clone());
                for r in rs {
                    let c = lenient(enlargement_identity_check(f, omega, &r, x))?;
                    rec.check(format!("{} r={}", at(x), fmt_rat(&r)), c);
                }
            }
        }
        Suite::ShiftedArgument => {
            let Some(qs) = f.vertices() else {
                rec.skip("scene", "needs polytope dynamics");
                return Ok(rec.finish());
            };
            for x in &scene.points {
                let Some(t) = finite_time(f, omega, x)? else {
                    rec.skip(at(x), "T(x) is infinite");
                    continue;
                };
                let mut rs = vec![t.clone()];
                if t < rat(1, 2) {
                    rs.push(rat(1, 2));
                }
                for r in &rs {
                    for q in qs {
                        for s in [rat(0, 1), rat(1, 2), rat(1, 1)] {
                            let c = lenient(shifted_argument_check(f, omega, r, x, &s, q))?;
                            rec.check(
                                format!("{} r={} t={} q={}", at(x), fmt_rat(r), fmt_rat(&s), show_point(q)),
                                c,
                            );
                        }
                    }
                }
            }
        }
        Suite::GaugeRepresentation => {
            for x in sample_pool(scene, omega, false) {
                match gauge_representation_check(f, omega, &x) {
                    Ok(ok) => rec.outcome(at(&x), ok, if ok { "" } else { "the two programs disagree" }),
                    Err(e @ (Error::Unsupported(_) | Error::UnsupportedDimension { .. })) => {
                        rec.skip(at(&x), e.to_string())
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Suite::ProjectionLinearity => {
            for x in &scene.points {
                let Some(t) = finite_time(f, omega, x)? else {
                    rec.skip(at(x), "T(x) is infinite");
                    continue;
                };
                if t.is_zero() {
                    rec.skip(at(x), "x lies in the target");
                    continue;
                }
                let proj = crate::mintime::projection_set(f, omega, x)?;
                for w in proj.vertices()?.iter().take(4) {
                    for lambda in [rat(1, 4), rat(1, 2), rat(3, 4)] {
                        let c = lenient(projection_linearity_check(f, omega, x, w, &lambda))?;
                        rec.check(
                            format!("{} w={} lambda={}", at(x), show_point(w), fmt_rat(&lambda)),
                            c,
                        );
                    }
                }
            }
        }
        Suite::Convexity | Suite::Concavity => convexity(scene, omega, suite, &mut rec)?,
        _ => unreachable!("dispatched by the caller"),
    }
    Ok(rec.finish())
}

fn convexity(scene: &Scene, omega: &Target, suite: Suite, rec: &mut Recorder) -> Result<()> {
    let f = &scene.dynamics;
    if f.vertices().is_none() {
        rec.skip("scene", "needs polytope dynamics");
        return Ok(());
    }
    // The complement of a union of half-spaces is an intersection of open
    // half-spaces, hence convex.
    let complement_convex = omega
        .pieces()
        .iter()
        .all(|p| p.reduced().halfspaces().len() == 1);
    if suite == Suite::Concavity && !complement_convex {
        rec.skip("scene", "the complement of the target is not known to be convex");
        return Ok(());
    }
    let pool = sample_pool(scene, omega, true);
    let mut pairs = Vec::new();
    for (i, a) in pool.iter().enumerate() {
        for b in &pool[i + 1..] {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let report = convexity_concavity_probe(f, omega, &pairs, &[rat(1, 2)])?;
    let describe = |v: &crate::mintime::ConvexityViolation| {
        format!(
            "x1={} x2={}: T at the midpoint {} vs mean of values {}",
            show_point(&v.x1),
            show_point(&v.x2),
            v.at_combination,
            v.combination_of_values
        )
    };
    let subject = format!("{} midpoints", pairs.len());
    if suite == Suite::Concavity {
        match report.concavity_violations.first() {
            None => rec.pass(subject, "no violation of concavity off the target"),
            Some(v) => rec.fail(subject, describe(v)),
        }
    } else if omega.is_convex() {
        match report.convexity_violations.first() {
            None => rec.pass(subject, "convex target: no violation of convexity"),
            Some(v) => rec.fail(subject, format!("convex target but {}", describe(v))),
        }
    } else {
        match report.convexity_violations.first() {
            Some(v) => rec.pass(subject, format!("nonconvex target, witness {}", describe(v))),
            None => rec.skip(subject, "target has several pieces but no sampled pair violates convexity"),
        }
    }
    Ok(())
}

fn lower_semicontinuity(scene: &Scene, plan: &SamplingPlan, rec: &mut Recorder) -> Result<()> {
    let t = scene.time_function()?;
    let dirs = plan.directions(scene.dim(), &scene.structural_directions());
    let radii = plan.radii();
    let h = *radii.last().expect("nonempty radii");
    for x in &scene.points {
        let xf = vec_to_f64(x);
        let tbar = t.eval(&xf);
        if !tbar.is_finite() {
            rec.skip(at(x), "T(x) is infinite");
            continue;
        }
        let low = dirs
            .iter()
            .map(|d| t.eval(&axpy(&xf, h, d)))
            .fold(f64::INFINITY, f64::min);
        let drop = (tbar - low).max(0.0);
        rec.outcome(
            at(x),
            drop <= LSC_DROP,
            format!("largest drop {drop:.3e} at radius {h:.3e}"),
        );
    }
    Ok(())
}
