//! ε-subgradient estimates on a grid of dual candidates, at target points
//! and off the target.

use super::{at, eps_values, CheckRecord, Recorder, Suite};
use crate::error::{Error, Result};
use crate::geometry::rat::{fmt_rat, from_f64, rat, vec_to_f64};
use crate::geometry::Rat;
use crate::mintime::identities::show_point;
use crate::mintime::Check;
use crate::oracle::{calmness_probe, SamplingPlan};
use crate::scene::Scene;
use crate::subdiff::{
    ball_complement_eps_membership, ball_outset_eps_checks, dual_candidates, inset_eps_bounds_check, EpsParams,
    Membership, OutsetEpsContext, OutsetEpsReport,
};

fn unsupported(e: &Error) -> bool {
    matches!(e, Error::Unsupported(_) | Error::UnsupportedDimension { .. })
}

pub(super) fn run_inset(scene: &Scene, plan: &SamplingPlan) -> Result<Vec<CheckRecord>> {
    let mut rec = Recorder::new(Suite::EpsInset, scene);
    let Some(omega) = scene.polyhedral() else {
        rec.skip("scene", "closed-form target: no query point lies in the target");
        return Ok(rec.finish());
    };
    let candidates = dual_candidates(plan, scene.dim());
    for x in scene.points.iter().filter(|x| omega.contains(x)) {
        for eps in eps_values(scene) {
            let subject = format!("{} eps={}", at(x), fmt_rat(&eps));
            match inset_eps_bounds_check(&scene.dynamics, omega, x, &eps, &candidates, plan) {
                Ok(r) => {
                    let mut detail = format!(
                        "{} candidates, {} certified ε-subgradients, {} checked for the lower estimate, {} undecided",
                        r.candidates, r.certified, r.lower_checked, r.uncertain
                    );
                    if let Some(v) = r.upper_violations.first().or(r.lower_violations.first()) {
                        detail = format!("{} at {}; {detail}", v.detail, show_point(&v.xstar));
                    }
                    rec.outcome(subject, r.passed(), detail);
                }
                Err(e) if unsupported(&e) => rec.skip(subject, e.to_string()),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(rec.finish())
}

/// Tallies one named check over all certified ε-subgradients.
#[derive(Default)]
struct Tally {
    holds: usize,
    vacuous: usize,
    first_violation: Option<String>,
}

impl Tally {
    fn add(&mut self, xstar: &[Rat], c: &Check) {
        match c {
            Check::Holds => self.holds += 1,
            Check::Vacuous(_) => self.vacuous += 1,
            Check::Violated(d) => {
                if self.first_violation.is_none() {
                    self.first_violation = Some(format!("x*={}: {d}", show_point(xstar)));
                }
            }
        }
    }

    fn record(self, rec: &mut Recorder, subject: String) {
        match self.first_violation {
            Some(v) => rec.fail(subject, v),
            None if self.holds > 0 => rec.pass(subject, format!("holds for {} ε-subgradients", self.holds)),
            None if self.vacuous > 0 => rec.skip(subject, "not applicable to this scene"),
            None => rec.skip(subject, "no certified ε-subgradient among the candidates"),
        }
    }
}

const CHECK_NAMES: [&str; 4] = ["witness", "support-bound", "projection-inclusion", "enlargement-inclusion"];

fn tally_reports(rec: &mut Recorder, x: &[Rat], eps: &Rat, reports: &[OutsetEpsReport]) {
    for (i, name) in CHECK_NAMES.iter().enumerate() {
        let mut t = Tally::default();
        for r in reports {
            t.add(&r.xstar, r.checks()[i].1);
        }
        t.record(rec, format!("{} eps={} {name}", at(x), fmt_rat(eps)));
    }
}

/// Sampled calmness constant, rounded up to a rational, when certified.
fn calmness_constant(scene: &Scene, x: &[Rat], plan: &SamplingPlan) -> Result<Option<Rat>> {
    let t = scene.time_function()?;
    let est = calmness_probe(t.as_ref(), &vec_to_f64(x), plan.calm_window, plan, &scene.structural_directions())?;
    Ok(if est.certified && est.kappa.is_finite() {
        from_f64(est.kappa * (1.0 + 1e-9) + 1e-12)
    } else {
        None
    })
}

pub(super) fn run_outset(scene: &Scene, plan: &SamplingPlan) -> Result<Vec<CheckRecord>> {
    let mut rec = Recorder::new(Suite::EpsOutset, scene);
    let candidates = dual_candidates(plan, scene.dim());
    let eta = scene.options.eta.clone().unwrap_or_else(|| rat(1, 10));
    for x in scene.points.iter().filter(|x| !scene.contains(x)) {
        if !scene.time(x)?.is_finite() {
            rec.skip(at(x), "T(x) is infinite");
            continue;
        }
        if let Some(b) = scene.ball_complement() {
            for eps in eps_values(scene) {
                let params = EpsParams::new(eps.clone(), eta.clone())?;
                let mut reports = Vec::new();
                for xstar in &candidates {
                    if ball_complement_eps_membership(&b, x, xstar, &eps)? == Membership::Member {
                        reports.push(ball_outset_eps_checks(&b, x, xstar, &params)?);
                    }
                }
                tally_reports(&mut rec, x, &eps, &reports);
            }
            continue;
        }
        let omega = scene.require_polyhedral("the ε-estimates")?;
        let ctx = match OutsetEpsContext::new(&scene.dynamics, omega, x, plan) {
            Ok(c) => c,
            Err(e) if unsupported(&e) => {
                rec.skip(at(x), e.to_string());
                continue;
            }
            Err(e) => return Err(e),
        };
        let kappa = calmness_constant(scene, x, plan)?;
        for eps in eps_values(scene) {
            let mut params = EpsParams::new(eps.clone(), eta.clone())?;
            if let Some(k) = &kappa {
                params = params.with_kappa(k.clone())?;
            }
            let mut reports = Vec::new();
            for xstar in &candidates {
                if ctx.test().membership(xstar, &eps)? == Membership::Member {
                    reports.push(ctx.check(xstar, &params)?);
                }
            }
            tally_reports(&mut rec, x, &eps, &reports);
            let subject = format!("{} eps={} converse", at(x), fmt_rat(&eps));
            if params.kappa.is_none() {
                rec.skip(subject, "no certified calmness constant");
                continue;
            }
            let c = ctx.converse(&candidates, &params)?;
            let detail = match c.violations.first() {
                Some(v) => format!("{} at {}", v.detail, show_point(&v.xstar)),
                None => format!("{} checked, {} undecided", c.checked, c.uncertain),
            };
            if c.passed() && c.checked == 0 {
                rec.skip(subject, "no candidate in the enlargement ε-normal set");
            } else {
                rec.outcome(subject, c.passed(), detail);
            }
        }
    }
    Ok(rec.finish())
}
