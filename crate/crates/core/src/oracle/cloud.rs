//! Sampled limiting, singular and one-sided subdifferentials: Fréchet
//! ε-subgradients collected at base points `x → x̄` with `T(x) → T(x̄)`.
//!
//! Base points are `x̄` itself and `x̄ + s·d` for every base scale `s` and
//! every sampling direction `d`. A base point is kept when
//! `|T(x̄ + s'·d) − T(x̄)| ≤ attentive·s'` for `s' = s` and every finer base
//! scale `s'`, so a jump of `T` along `d` cannot slip in at a coarse scale
//! where `attentive·s` still exceeds it. Its probe radii are `s²·2^-k`. For
//! piecewise-linear functions the quotients are exact on such spheres and the
//! test uses `ε = 0`; otherwise `ε = s`, which dominates the curvature error.

use std::collections::BTreeSet;

use super::plan::{dist_sq, unit, SamplingPlan};
use super::probe::{fd_gradient, Probe};
use super::time::TimeFunction;
use crate::error::{Error, Result};
use crate::subdiff::Membership;

/// One-sided base points must satisfy `T(x) ≥ T(x̄) − ONE_SIDED_SLACK`.
const ONE_SIDED_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CloudPoint {
    pub xstar: Vec<f64>,
    pub base: Vec<f64>,
    /// The ε used at the base point.
    pub eps: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScaleDiagnostics {
    /// Distance of the base points from `x̄` (zero for `x̄` itself).
    pub scale: f64,
    pub bases: usize,
    pub attentive: usize,
    pub points: usize,
}

#[derive(Clone, Debug, Default)]
pub struct DualCloud {
    pub points: Vec<CloudPoint>,
    pub diagnostics: Vec<ScaleDiagnostics>,
}

impl DualCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether some cloud point lies within `tol` of `x`.
    pub fn has_point_near(&self, x: &[f64], tol: f64) -> bool {
        self.points.iter().any(|p| dist_sq(&p.xstar, x) <= tol * tol)
    }

    /// Number of distinct unit directions among the nonzero points, after
    /// rounding to multiples of `resolution`.
    pub fn distinct_directions(&self, resolution: f64) -> usize {
        let keys: BTreeSet<Vec<i64>> = self
            .points
            .iter()
            .filter_map(|p| unit(&p.xstar))
            .map(|u| quantize(&u, resolution))
            .collect();
        keys.len()
    }
}

fn quantize(v: &[f64], resolution: f64) -> Vec<i64> {
    v.iter().map(|a| (a / resolution).round() as i64).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Basic,
    Singular,
}

struct Base {
    point: Vec<f64>,
    scale: f64,
    probe: Probe,
    eps: f64,
}

/// Probes every admissible base point, grouped by scale.
fn bases(
    t: &dyn TimeFunction,
    xbar: &[f64],
    plan: &SamplingPlan,
    dirs: &[Vec<f64>],
    one_sided: bool,
) -> Result<(Vec<Base>, Vec<ScaleDiagnostics>)> {
    let tbar = t.eval(xbar);
    if !tbar.is_finite() {
        return Err(Error::InfiniteTime);
    }
    let radii = plan.radii();
    let tail = &radii[radii.len() - plan.tail..];
    let finest = plan.base_scales.iter().cloned().fold(f64::INFINITY, f64::min);
    let smooth_eps = |s: f64| if t.piecewise_linear() { 0.0 } else { s };
    let mut out = vec![Base {
        point: xbar.to_vec(),
        scale: 0.0,
        probe: Probe::new(t, xbar, tail, dirs),
        eps: smooth_eps(finest),
    }];
    let mut diag = vec![ScaleDiagnostics {
        scale: 0.0,
        bases: 1,
        attentive: 1,
        points: 0,
    }];
    let mut scales = plan.base_scales.clone();
    scales.sort_by(|a, b| b.total_cmp(a));
    // attentive[j][i]: direction i is attentive at scales[j] and all finer ones.
    let mut attentive = vec![vec![true; dirs.len()]; scales.len()];
    for j in (0..scales.len()).rev() {
        let s = scales[j];
        for (i, dir) in dirs.iter().enumerate() {
            let tx = t.eval(&super::plan::axpy(xbar, s, dir));
            let finer = attentive.get(j + 1).is_none_or(|row| row[i]);
            attentive[j][i] = finer && tx.is_finite() && (tx - tbar).abs() <= plan.attentive * s;
        }
    }
    for (j, &s) in scales.iter().enumerate() {
        let probe_radii: Vec<f64> = plan
            .base_probe_exponents
            .iter()
            .map(|k| s * s * 2f64.powi(-(*k as i32)))
            .collect();
        let mut d = ScaleDiagnostics {
            scale: s,
            bases: dirs.len(),
            ..Default::default()
        };
        for (i, dir) in dirs.iter().enumerate() {
            if !attentive[j][i] {
                continue;
            }
            let x = super::plan::axpy(xbar, s, dir);
            let tx = t.eval(&x);
            if one_sided && tx < tbar - ONE_SIDED_SLACK {
                continue;
            }
            d.attentive += 1;
            out.push(Base {
                probe: Probe::new(t, &x, &probe_radii, dirs),
                point: x,
                scale: s,
                eps: smooth_eps(s),
            });
        }
        diag.push(d);
    }
    Ok((out, diag))
}

fn collect(
    t: &dyn TimeFunction,
    xbar: &[f64],
    plan: &SamplingPlan,
    structural: &[Vec<f64>],
    kind: Kind,
    one_sided: bool,
) -> Result<DualCloud> {
    let dim = t.dim();
    Error::dims(dim, xbar.len())?;
    let dirs = plan.directions(dim, structural);
    let (bases, mut diagnostics) = bases(t, xbar, plan, &dirs, one_sided)?;
    let grid = plan.dual_grid(dim);
    let mut seen = BTreeSet::new();
    let mut cloud = DualCloud::default();
    if kind == Kind::Singular && !bases.is_empty() {
        seen.insert(quantize(&vec![0.0; dim], 1e-9));
        cloud.points.push(CloudPoint {
            xstar: vec![0.0; dim],
            base: xbar.to_vec(),
            eps: 0.0,
        });
    }
    for base in &bases {
        let mut candidates = Vec::new();
        match kind {
            Kind::Basic => {
                candidates.extend(grid.iter().map(|c| (c.clone(), c.clone())));
                let h = base.probe.radii.last().copied().unwrap_or(1e-6) / 4.0;
                if let Some(g) = fd_gradient(t, &base.point, h) {
                    candidates.push((g.clone(), g));
                }
            }
            Kind::Singular => {
                let inv = 1.0 / plan.singular_lambda;
                for c in &grid {
                    if c.iter().any(|a| *a != 0.0) {
                        candidates.push((c.clone(), c.iter().map(|a| a * inv).collect()));
                    }
                }
            }
        }
        let mut added = 0;
        for (point, tested) in candidates {
            if base.probe.membership(&tested, base.eps, plan) != Membership::Member {
                continue;
            }
            if seen.insert(quantize(&point, 1e-9)) {
                cloud.points.push(CloudPoint {
                    xstar: point,
                    base: base.point.clone(),
                    eps: base.eps,
                });
                added += 1;
            }
        }
        if let Some(d) = diagnostics.iter_mut().find(|d| d.scale == base.scale) {
            d.points += added;
        }
    }
    Ok(cloud)
}

pub fn sampled_limiting_subdiff(
    t: &dyn TimeFunction,
    xbar: &[f64],
    plan: &SamplingPlan,
    structural: &[Vec<f64>],
) -> Result<DualCloud> {
    collect(t, xbar, plan, structural, Kind::Basic, false)
}

/// Points `λ·x*` with `x*` a sampled ε-subgradient at a base point; the
/// origin is always included.
pub fn sampled_singular_subdiff(
    t: &dyn TimeFunction,
    xbar: &[f64],
    plan: &SamplingPlan,
    structural: &[Vec<f64>],
) -> Result<DualCloud> {
    collect(t, xbar, plan, structural, Kind::Singular, false)
}

/// Basic and singular clouds restricted to base points with `T(x) ≥ T(x̄)`.
pub fn sampled_one_sided_subdiff(
    t: &dyn TimeFunction,
    xbar: &[f64],
    plan: &SamplingPlan,
    structural: &[Vec<f64>],
) -> Result<(DualCloud, DualCloud)> {
    Ok((
        collect(t, xbar, plan, structural, Kind::Basic, true)?,
        collect(t, xbar, plan, structural, Kind::Singular, true)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mintime::BallComplement;
    use crate::oracle::time::FnTime;

    #[test]
    fn ball_complement_cloud_is_the_unit_circle() {
        let t = BallComplement::unit_plane();
        let plan = SamplingPlan::default();
        let cloud = sampled_limiting_subdiff(&t, &[0.0, 0.0], &plan, &[]).unwrap();
        assert!(!cloud.is_empty());
        for p in &cloud.points {
            let n = dist_sq(&p.xstar, &[0.0, 0.0]).sqrt();
            assert!((n - 1.0).abs() < 1e-3, "{:?}", p);
        }
        assert!(cloud.distinct_directions(1e-6) >= 64);
        let (basic, _) = sampled_one_sided_subdiff(&t, &[0.0, 0.0], &plan, &[]).unwrap();
        assert!(basic.is_empty());
    }

    #[test]
    fn absolute_value_in_one_dimension() {
        let t = FnTime::new(1, |x: &[f64]| x[0].abs()).piecewise_linear();
        let plan = SamplingPlan::default();
        let cloud = sampled_limiting_subdiff(&t, &[0.0], &plan, &[]).unwrap();
        assert!(cloud.points.iter().all(|p| p.xstar[0].abs() <= 1.0 + 1e-9));
        for v in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            assert!(cloud.has_point_near(&[v], 1e-9));
        }
        let sing = sampled_singular_subdiff(&t, &[0.0], &plan, &[]).unwrap();
        assert_eq!(sing.len(), 1);
    }

    #[test]
    fn jump_gives_singular_directions() {
        // Zero for x ≥ 0 and one below: lower semicontinuous with a jump.
        let t = FnTime::new(1, |x: &[f64]| if x[0] >= 0.0 { 0.0 } else { 1.0 }).piecewise_linear();
        let plan = SamplingPlan::default();
        let sing = sampled_singular_subdiff(&t, &[0.0], &plan, &[]).unwrap();
        assert!(sing.has_point_near(&[-1.0], 1e-9));
        assert!(!sing.has_point_near(&[1.0], 1e-9));
    }
}
