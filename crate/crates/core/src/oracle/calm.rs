//! Calmness and local Lipschitz behaviour from sampled difference quotients.
//!
//! The calmness estimate is the largest quotient `|T(x) − T(x̄)|/‖x − x̄‖` over
//! the sampled spheres of radius at most the window. The Lipschitz verdict
//! looks at the same quotients around `x̄` and around nearby centers: they
//! diverge when a quotient exceeds the threshold at two consecutive radii,
//! when they double with every halving of the radius at the three smallest
//! radii (the signature `J/h` of a jump `J` right at the center), or when `T`
//! is infinite at a sampled point.

use super::plan::{axpy, SamplingPlan};
use super::time::TimeFunction;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CalmnessEstimate {
    /// Sampled calmness constant at `x̄` (possibly `+∞`).
    pub kappa: f64,
    /// The quotients at `x̄` stay below the divergence threshold.
    pub certified: bool,
    pub window: f64,
    /// Verdict on local Lipschitz continuity around `x̄`.
    pub lipschitz: bool,
    /// Largest quotient at `x̄` for each radius in the window.
    pub profile: Vec<(f64, f64)>,
}

/// Largest quotient per radius around `c`.
fn quotients(t: &dyn TimeFunction, c: &[f64], tc: f64, radii: &[f64], dirs: &[Vec<f64>]) -> Vec<(f64, f64)> {
    radii
        .iter()
        .map(|h| {
            let q = dirs
                .iter()
                .map(|d| {
                    let v = t.eval(&axpy(c, *h, d));
                    if v.is_finite() {
                        (v - tc).abs() / h
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(0.0, f64::max);
            (*h, q)
        })
        .collect()
}

/// Growth factor per halving that marks `J/h` behaviour.
const JUMP_RATIO: f64 = 1.9;
/// Smallest final quotient that counts as a jump.
const JUMP_FLOOR: f64 = 2.0;

fn diverges(profile: &[(f64, f64)], threshold: f64) -> bool {
    let above = profile
        .windows(2)
        .any(|w| w[0].1 > threshold && w[1].1 > threshold);
    let jump = match profile {
        [.., (_, a), (_, b), (_, c)] => *c >= JUMP_FLOOR && *b >= JUMP_RATIO * a && *c >= JUMP_RATIO * b,
        _ => false,
    };
    above || jump
}

pub fn calmness_probe(
    t: &dyn TimeFunction,
    xbar: &[f64],
    window: f64,
    plan: &SamplingPlan,
    structural: &[Vec<f64>],
) -> Result<CalmnessEstimate> {
    Error::dims(t.dim(), xbar.len())?;
    if !(window > 0.0) {
        return Err(Error::InvalidInput("calmness window must be positive".into()));
    }
    let tbar = t.eval(xbar);
    if !tbar.is_finite() {
        return Err(Error::InfiniteTime);
    }
    let radii: Vec<f64> = plan.radii().into_iter().filter(|h| *h <= window).collect();
    if radii.len() < 2 {
        return Err(Error::InvalidInput("window admits fewer than two radii".into()));
    }
    let dirs = plan.directions(t.dim(), structural);
    let profile = quotients(t, xbar, tbar, &radii, &dirs);
    let kappa = profile.iter().map(|p| p.1).fold(0.0, f64::max);
    let certified = !diverges(&profile, plan.calm_threshold) && kappa.is_finite();
    let mut lipschitz = certified;
    'centers: for &s in plan.base_scales.iter().filter(|s| **s <= window) {
        if !lipschitz {
            break;
        }
        for d in &dirs {
            let c = axpy(xbar, s, d);
            let tc = t.eval(&c);
            if !tc.is_finite() {
                lipschitz = false;
                break 'centers;
            }
            let local: Vec<f64> = radii.iter().copied().filter(|h| *h <= s).collect();
            if local.len() >= 2 && diverges(&quotients(t, &c, tc, &local, &dirs), plan.calm_threshold) {
                lipschitz = false;
                break 'centers;
            }
        }
    }
    Ok(CalmnessEstimate {
        kappa,
        certified,
        window,
        lipschitz,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::time::FnTime;

    #[test]
    fn affine_function_has_slope_as_constant() {
        let t = FnTime::new(1, |x: &[f64]| 3.0 * x[0] - 1.0);
        let c = calmness_probe(&t, &[0.5], 0.0625, &SamplingPlan::default(), &[]).unwrap();
        assert!((c.kappa - 3.0).abs() < 1e-9);
        assert!(c.certified && c.lipschitz);
    }

    #[test]
    fn jump_is_not_lipschitz() {
        let t = FnTime::new(1, |x: &[f64]| if x[0] >= 0.0 { 0.0 } else { 1.0 });
        let c = calmness_probe(&t, &[0.0], 0.0625, &SamplingPlan::default(), &[]).unwrap();
        assert!(!c.lipschitz && !c.certified);
    }

    #[test]
    fn nearby_jump_is_not_lipschitz() {
        // Calm at the origin, but jumps by x₀ across x₁ = 0 for x₀ > 0.
        let t = FnTime::new(2, |x: &[f64]| if x[1] < 0.0 { x[0].max(0.0) } else { 0.0 });
        let c = calmness_probe(&t, &[0.0, 0.0], 0.0625, &SamplingPlan::default(), &[vec![1.0, 0.0]]).unwrap();
        assert!(c.certified && c.kappa <= 1.0 + 1e-9);
        assert!(!c.lipschitz);
    }

    #[test]
    fn square_root_reports_large_finite_constant() {
        // √|x| has quotients h^{-1/2} at 0, which stay below the divergence
        // threshold on the sampled radii.
        let t = FnTime::new(1, |x: &[f64]| x[0].abs().sqrt());
        let c = calmness_probe(&t, &[0.0], 0.0625, &SamplingPlan::default(), &[]).unwrap();
        assert!(c.kappa > 60.0);
        let smaller = calmness_probe(&t, &[0.0], 0.0625 / 4.0, &SamplingPlan::default(), &[]).unwrap();
        assert!(smaller.kappa <= c.kappa);
    }
}
