//! Sampled Fréchet ε-subgradients: `x* ∈ ∂̂_εT(x̄)` when
//! `liminf (T(x) − T(x̄) − ⟨x*, x − x̄⟩)/‖x − x̄‖ ≥ −ε`, with the liminf
//! replaced by a minimum over small spheres.

use super::plan::{axpy, dot, SamplingPlan};
use super::time::TimeFunction;
use crate::error::{Error, Result};
use crate::subdiff::Membership;

/// Values of `T` on spheres around a center.
///
/// For piecewise-linear functions in the plane the directions are also kept
/// in angular order. Between two consecutive directions the quotient is then
/// linear in the direction (all kinks are among the sampled directions), and
/// the minimum over the whole arc is computed from the two endpoint values.
#[derive(Clone, Debug)]
pub struct Probe {
    pub center: Vec<f64>,
    pub value: f64,
    pub radii: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    /// `values[i][j] = T(center + radii[i]·directions[j])`.
    pub values: Vec<Vec<f64>>,
    arcs: Option<Vec<usize>>,
}

/// Minimum over unit vectors `d` on the arc from `a` to `b` (counterclockwise,
/// less than a half turn) of the linear function with values `ga`, `gb`.
fn arc_minimum(a: &[f64], b: &[f64], ga: f64, gb: f64) -> f64 {
    let det = a[0] * b[1] - a[1] * b[0];
    let endpoints = ga.min(gb);
    if det <= 1e-12 {
        return endpoints;
    }
    // c with ⟨c, a⟩ = ga and ⟨c, b⟩ = gb; the minimum is −‖c‖ at −c/‖c‖.
    let c = [(ga * b[1] - gb * a[1]) / det, (a[0] * gb - b[0] * ga) / det];
    let w = [-c[0], -c[1]];
    let inside = a[0] * w[1] - a[1] * w[0] > 0.0 && w[0] * b[1] - w[1] * b[0] > 0.0;
    if inside {
        endpoints.min(-(c[0] * c[0] + c[1] * c[1]).sqrt())
    } else {
        endpoints
    }
}

impl Probe {
    pub fn new(t: &dyn TimeFunction, center: &[f64], radii: &[f64], directions: &[Vec<f64>]) -> Self {
        let values = radii
            .iter()
            .map(|h| directions.iter().map(|d| t.eval(&axpy(center, *h, d))).collect())
            .collect();
        let arcs = (t.piecewise_linear() && center.len() == 2).then(|| {
            let mut idx: Vec<usize> = (0..directions.len()).collect();
            idx.sort_by(|&i, &j| {
                let a = directions[i][1].atan2(directions[i][0]);
                let b = directions[j][1].atan2(directions[j][0]);
                a.total_cmp(&b)
            });
            idx
        });
        Probe {
            center: center.to_vec(),
            value: t.eval(center),
            radii: radii.to_vec(),
            directions: directions.to_vec(),
            values,
            arcs,
        }
    }

    /// Smallest normalized deficit on the sphere `i`, or `None` as soon as
    /// a deficit falls below `cut`. `g` is scratch space.
    fn row_minimum(&self, i: usize, xstar: &[f64], cut: f64, g: &mut Vec<f64>) -> Option<f64> {
        let h = self.radii[i];
        g.clear();
        for (v, d) in self.values[i].iter().zip(&self.directions) {
            let x = if v.is_nan() {
                f64::INFINITY
            } else {
                (v - self.value) / h - dot(xstar, d)
            };
            if x < cut {
                return None;
            }
            g.push(x);
        }
        let mut m = g.iter().copied().fold(f64::INFINITY, f64::min);
        if let Some(order) = &self.arcs {
            for k in 0..order.len() {
                let (i, j) = (order[k], order[(k + 1) % order.len()]);
                if g[i].is_finite() && g[j].is_finite() {
                    m = m.min(arc_minimum(&self.directions[i], &self.directions[j], g[i], g[j]));
                }
            }
        }
        (m >= cut).then_some(m)
    }

    /// Per radius, the smallest normalized deficit
    /// `(T(x̄ + h·d) − T(x̄))/h − ⟨x*, d⟩` over the directions. Infinite
    /// values contribute `+∞`.
    pub fn profile(&self, xstar: &[f64]) -> Vec<(f64, f64)> {
        let mut g = Vec::with_capacity(self.directions.len());
        (0..self.radii.len())
            .map(|i| {
                let m = self.row_minimum(i, xstar, f64::NEG_INFINITY, &mut g).expect("no cut");
                (self.radii[i], m)
            })
            .collect()
    }

    /// The verdict of [`Probe::verdict`] without the margin. Stops at the
    /// first sample whose deficit is below `−ε` even with the uncertainty
    /// band added, which already makes `x*` a non-member.
    pub fn membership(&self, xstar: &[f64], eps: f64, plan: &SamplingPlan) -> Membership {
        let mut g = Vec::with_capacity(self.directions.len());
        let (mut tol, mut band) = (f64::INFINITY, f64::INFINITY);
        for (i, &h) in self.radii.iter().enumerate() {
            let Some(m) = self.row_minimum(i, xstar, -eps - plan.band_at(h), &mut g) else {
                return Membership::NonMember;
            };
            tol = tol.min(m + plan.tolerance_at(h));
            band = band.min(m + plan.band_at(h));
        }
        classify(tol, band, eps)
    }

    /// Smallest deficit over all samples, once with the tolerance and once
    /// with the uncertainty band added.
    fn margins(&self, xstar: &[f64], plan: &SamplingPlan) -> (f64, f64) {
        self.profile(xstar)
            .into_iter()
            .fold((f64::INFINITY, f64::INFINITY), |(a, b), (h, m)| {
                (a.min(m + plan.tolerance_at(h)), b.min(m + plan.band_at(h)))
            })
    }

    /// Margin and verdict for `x* ∈ ∂̂_εT(center)`.
    pub fn verdict(&self, xstar: &[f64], eps: f64, plan: &SamplingPlan) -> (f64, Membership) {
        let (tol, band) = self.margins(xstar, plan);
        (tol, classify(tol, band, eps))
    }
}

fn classify(tol: f64, band: f64, eps: f64) -> Membership {
    if tol >= -eps {
        Membership::Member
    } else if band < -eps {
        Membership::NonMember
    } else {
        Membership::Uncertain
    }
}

/// Central-difference gradient with step `h`; `None` when a value is not
/// finite.
pub fn fd_gradient(t: &dyn TimeFunction, x: &[f64], h: f64) -> Option<Vec<f64>> {
    let dim = x.len();
    let mut g = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        let up = t.eval(&axpy(x, h, &e));
        let down = t.eval(&axpy(x, -h, &e));
        if !up.is_finite() || !down.is_finite() {
            return None;
        }
        g.push((up - down) / (2.0 * h));
    }
    Some(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualPoint {
    pub xstar: Vec<f64>,
    /// Smallest tolerance-adjusted deficit; the point is a member when this
    /// is at least `−ε`.
    pub margin: f64,
    pub verdict: Membership,
}

#[derive(Clone, Debug)]
pub struct FrechetCloud {
    pub center: Vec<f64>,
    pub eps: f64,
    pub points: Vec<DualPoint>,
}

impl FrechetCloud {
    pub fn members(&self) -> impl Iterator<Item = &DualPoint> {
        self.with_verdict(Membership::Member)
    }

    pub fn non_members(&self) -> impl Iterator<Item = &DualPoint> {
        self.with_verdict(Membership::NonMember)
    }

    pub fn with_verdict(&self, v: Membership) -> impl Iterator<Item = &DualPoint> {
        self.points.iter().filter(move |p| p.verdict == v)
    }
}

/// Classifies the dual grid, the extra candidates and a finite-difference
/// gradient at `x̄` using the smallest radii of the plan.
pub fn sampled_frechet_subdiff(
    t: &dyn TimeFunction,
    xbar: &[f64],
    eps: f64,
    plan: &SamplingPlan,
    structural: &[Vec<f64>],
    extra: &[Vec<f64>],
) -> Result<FrechetCloud> {
    let dim = t.dim();
    Error::dims(dim, xbar.len())?;
    let radii = plan.radii();
    let tail = &radii[radii.len() - plan.tail..];
    let dirs = plan.directions(dim, structural);
    let probe = Probe::new(t, xbar, tail, &dirs);
    if !probe.value.is_finite() {
        return Err(Error::InfiniteTime);
    }
    let mut candidates = plan.dual_grid(dim);
    candidates.extend(extra.iter().cloned());
    if let Some(g) = fd_gradient(t, xbar, tail[tail.len() - 1]) {
        candidates.push(g);
    }
    let points = candidates
        .into_iter()
        .map(|xstar| {
            let (margin, verdict) = probe.verdict(&xstar, eps, plan);
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
    use crate::oracle::time::FnTime;

    #[test]
    fn affine_region_has_single_gradient() {
        let t = FnTime::new(2, |x: &[f64]| x[0] - 1.0).piecewise_linear();
        let plan = SamplingPlan::default();
        let c = sampled_frechet_subdiff(&t, &[2.0, 0.5], 0.0, &plan, &[], &[]).unwrap();
        assert!(c.members().any(|p| p.xstar == vec![1.0, 0.0]));
        for p in c.members() {
            assert!(crate::oracle::plan::dist_sq(&p.xstar, &[1.0, 0.0]) < 1e-12);
        }
    }

    #[test]
    fn concave_kink_has_no_subgradients() {
        let t = FnTime::new(2, |x: &[f64]| 1.0 - (x[0] * x[0] + x[1] * x[1]).sqrt());
        let c = sampled_frechet_subdiff(&t, &[0.0, 0.0], 0.0, &SamplingPlan::default(), &[], &[]).unwrap();
        assert_eq!(c.members().count(), 0);
    }

    #[test]
    fn arcs_recover_the_minimum_between_directions() {
        let a = [1.0, 0.0];
        let b = [0.0, 1.0];
        // Linear function ⟨(−1,−1), d⟩: minimum −√2 at 45°.
        let m = arc_minimum(&a, &b, -1.0, -1.0);
        assert!((m + 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(arc_minimum(&a, &b, 1.0, 2.0), 1.0);
    }

    #[test]
    fn eps_enlarges_the_set() {
        let t = FnTime::new(1, |x: &[f64]| x[0].abs()).piecewise_linear();
        let plan = SamplingPlan::default();
        let c = sampled_frechet_subdiff(&t, &[0.0], 0.5, &plan, &[], &[vec![1.4], vec![1.6]]).unwrap();
        let find = |v: f64| c.points.iter().find(|p| p.xstar == vec![v]).unwrap().verdict;
        assert_eq!(find(1.4), Membership::Member);
        assert_eq!(find(1.5), Membership::Member);
        assert_eq!(find(1.6), Membership::NonMember);
        assert_eq!(find(1.75), Membership::NonMember);
    }
}
