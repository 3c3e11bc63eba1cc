//! ε-subgradient membership and the sampled one-sided subdifferentials.
//!
//! For a convex target and polytope dynamics `T` is a polyhedral convex
//! function, so `∂̂_εT(x̄) = ∂T(x̄) + εB` and membership reduces to the exact
//! test `dist(x*, ∂T(x̄)) ≤ ε` against the computed subdifferential. The
//! closed-form ball complement is decided exactly as well. Everything else
//! falls back to the sampled liminf test of the oracle.

use num_traits::{Signed, Zero};

use super::inset::basic_subdiff_inset;
use super::level::Membership;
use super::outset::subdiff_outset_via_enlargement;
use crate::error::{Error, Result};
use crate::geometry::linalg::{dot, norm_sq, scale, sub};
use crate::geometry::rat::{to_f64, vec_to_f64};
use crate::geometry::{nearest_point, PolyhedralUnion, Rat};
use crate::mintime::{minimal_time, BallComplement, Dynamics, Target};
use crate::oracle::{
    sampled_one_sided_subdiff, structural_directions_f64, time_function, DualCloud, Probe, SamplingPlan,
    TimeFunction,
};
use crate::scene::Scene;

/// Squared distance from `x*` to a union of polyhedra (`None` when empty).
pub fn union_distance_sq(set: &PolyhedralUnion, xstar: &[Rat]) -> Option<Rat> {
    set.pieces().iter().map(|p| nearest_point(p, xstar).1).min()
}

fn check_eps(eps: &Rat) -> Result<()> {
    if eps.is_negative() {
        return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
    }
    Ok(())
}

/// The exact `∂T(x̄)` for a convex target and polytope dynamics.
pub fn convex_subdifferential(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<PolyhedralUnion> {
    if !omega.is_convex() {
        return Err(Error::WrongRegime("the target is not convex".into()));
    }
    f.require_polytope("convex subdifferential")?;
    if omega.contains(xbar) {
        return Ok(basic_subdiff_inset(f, omega, xbar)?.set);
    }
    subdiff_outset_via_enlargement(f, omega, xbar)?
        .convex_exact_basic
        .map(|r| r.set)
        .ok_or_else(|| Error::WrongRegime("the target is not convex".into()))
}

/// Sampled verdict for `x* ∈ ∂̂_εT(x̄)` from a probe on the smallest radii.
pub fn sampled_eps_membership(
    t: &dyn TimeFunction,
    xbar: &[f64],
    xstar: &[f64],
    eps: f64,
    plan: &SamplingPlan,
    structural: &[Vec<f64>],
) -> Result<Membership> {
    Ok(eps_probe(t, xbar, plan, structural)?.membership(xstar, eps, plan))
}

/// A probe at `x̄` over the tail radii of the plan, reusable for many dual
/// points.
pub fn eps_probe(t: &dyn TimeFunction, xbar: &[f64], plan: &SamplingPlan, structural: &[Vec<f64>]) -> Result<Probe> {
    Error::dims(t.dim(), xbar.len())?;
    let radii = plan.radii();
    let tail = &radii[radii.len() - plan.tail.min(radii.len())..];
    let probe = Probe::new(t, xbar, tail, &plan.directions(t.dim(), structural));
    if !probe.value.is_finite() {
        return Err(Error::InfiniteTime);
    }
    Ok(probe)
}

/// How [`EpsSubgradientTest`] decides membership.
#[derive(Clone, Debug)]
enum Decider {
    /// `dist(x*, ∂T(x̄)) ≤ ε` against the exact convex subdifferential.
    Exact(PolyhedralUnion),
    /// Closed form of the ball complement.
    Ball(BallComplement),
    /// The sampled liminf test.
    Sampled(Box<Probe>, SamplingPlan),
}

/// Reusable `x* ∈ ∂̂_εT(x̄)` test at a fixed point: the exact subdifferential
/// or the sampling probe is computed once.
#[derive(Clone, Debug)]
pub struct EpsSubgradientTest {
    xbar: Vec<Rat>,
    decider: Decider,
}

impl EpsSubgradientTest {
    /// Test for a polyhedral target; convex targets with polytope dynamics
    /// are decided exactly.
    pub fn new(f: &Dynamics, omega: &Target, xbar: &[Rat], plan: &SamplingPlan) -> Result<Self> {
        Error::dims(f.dim(), omega.dim())?;
        Error::dims(f.dim(), xbar.len())?;
        if !minimal_time(f, omega, xbar)?.value.is_finite() {
            return Err(Error::InfiniteTime);
        }
        let decider = if omega.is_convex() && f.as_polytope().is_some() {
            Decider::Exact(convex_subdifferential(f, omega, xbar)?)
        } else {
            let t = time_function(f, omega)?;
            let structural = structural_directions_f64(f, omega);
            let probe = eps_probe(t.as_ref(), &vec_to_f64(xbar), plan, &structural)?;
            Decider::Sampled(Box::new(probe), plan.clone())
        };
        Ok(EpsSubgradientTest {
            xbar: xbar.to_vec(),
            decider,
        })
    }

    pub fn for_scene(scene: &Scene, xbar: &[Rat], plan: &SamplingPlan) -> Result<Self> {
        match (scene.polyhedral(), scene.ball_complement()) {
            (Some(omega), _) => Self::new(&scene.dynamics, omega, xbar, plan),
            (None, Some(b)) => {
                Error::dims(b.dim(), xbar.len())?;
                Ok(EpsSubgradientTest {
                    xbar: xbar.to_vec(),
                    decider: Decider::Ball(b),
                })
            }
            (None, None) => Err(Error::Unsupported("scene has no evaluable target".into())),
        }
    }

    pub fn xbar(&self) -> &[Rat] {
        &self.xbar
    }

    /// Whether verdicts are exact (never `Uncertain`).
    pub fn is_exact(&self) -> bool {
        !matches!(self.decider, Decider::Sampled(..))
    }

    pub fn membership(&self, xstar: &[Rat], eps: &Rat) -> Result<Membership> {
        Error::dims(self.xbar.len(), xstar.len())?;
        check_eps(eps)?;
        match &self.decider {
            Decider::Exact(set) => {
                let d2 = union_distance_sq(set, xstar);
                Ok(Membership::from_bool(d2.is_some_and(|d2| d2 <= eps * eps)))
            }
            Decider::Ball(b) => ball_complement_eps_membership(b, &self.xbar, xstar, eps),
            Decider::Sampled(probe, plan) => Ok(probe.membership(&vec_to_f64(xstar), to_f64(eps), plan)),
        }
    }
}

/// Three-valued test of `x* ∈ ∂̂_εT(x̄)` for a polyhedral target.
///
/// Convex targets with polytope dynamics are decided exactly; other scenes
/// use the sampled liminf test, whose verdict may be `Uncertain` inside the
/// tolerance band of the plan.
pub fn eps_subgradient_membership(
    f: &Dynamics,
    omega: &Target,
    xbar: &[Rat],
    xstar: &[Rat],
    eps: &Rat,
    plan: &SamplingPlan,
) -> Result<Membership> {
    EpsSubgradientTest::new(f, omega, xbar, plan)?.membership(xstar, eps)
}

/// `b ≤ a·√n2` decided exactly.
fn le_times_sqrt(b: &Rat, a: &Rat, n2: &Rat) -> bool {
    if !a.is_negative() {
        !b.is_positive() || b * b <= a * a * n2
    } else {
        b.is_negative() && b * b >= a * a * n2
    }
}

/// Exact `x* ∈ ∂̂_εT(x̄)` for `T(x) = max(0, R − ‖x‖)/s`.
///
/// * outside the closed ball `T ≡ 0` near `x̄`: `‖x*‖ ≤ ε`;
/// * on the sphere `T = max(0, ·)` of a smooth function with gradient
///   `g = −x̄/(sR)`: `dist(x*, [0, g]) ≤ ε`;
/// * at the origin `T(x) − T(0) = −‖x‖/s`: `‖x*‖ ≤ ε − 1/s`;
/// * elsewhere `T` is smooth with gradient `−x̄/(s‖x̄‖)`: `‖x* − g‖ ≤ ε`.
pub fn ball_complement_eps_membership(b: &BallComplement, xbar: &[Rat], xstar: &[Rat], eps: &Rat) -> Result<Membership> {
    Error::dims(b.dim(), xbar.len())?;
    Error::dims(b.dim(), xstar.len())?;
    check_eps(eps)?;
    let n2 = norm_sq(xbar);
    let r2 = b.radius() * b.radius();
    let s = b.speed();
    let e2 = eps * eps;
    let answer = if n2 > r2 {
        norm_sq(xstar) <= e2
    } else if n2 == r2 {
        let g = scale(&(-Rat::from_integer(1.into()) / (s * b.radius())), xbar);
        let t = dot(xstar, &g) / norm_sq(&g);
        let t = t.clamp(Rat::zero(), Rat::from_integer(1.into()));
        norm_sq(&sub(xstar, &scale(&t, &g))) <= e2
    } else if n2.is_zero() {
        let room = eps - Rat::from_integer(1.into()) / s;
        !room.is_negative() && norm_sq(xstar) <= &room * &room
    } else {
        // ‖x* − g‖² = ‖x*‖² + 1/s² + 2⟨x*, x̄⟩/(s‖x̄‖) ≤ ε².
        let a = &e2 - norm_sq(xstar) - Rat::from_integer(1.into()) / (s * s);
        let bb = Rat::from_integer(2.into()) * dot(xstar, xbar) / s;
        le_times_sqrt(&bb, &a, &n2)
    };
    Ok(Membership::from_bool(answer))
}

/// `x* ∈ ∂̂_εT(x̄)` for any scene.
pub fn scene_eps_membership(
    scene: &Scene,
    xbar: &[Rat],
    xstar: &[Rat],
    eps: &Rat,
    plan: &SamplingPlan,
) -> Result<Membership> {
    EpsSubgradientTest::for_scene(scene, xbar, plan)?.membership(xstar, eps)
}

/// Largest jump allowed by the continuity scan of the one-sided sampler.
pub const CONTINUITY_GAP: f64 = 1.0 / 32.0;

#[derive(Clone, Debug)]
pub struct OneSidedCloud {
    pub basic: DualCloud,
    pub singular: DualCloud,
    /// `max |T(x̄ + hd) − T(x̄)|` over the sampled directions at the smallest
    /// radius `h`.
    pub continuity_gap: f64,
}

/// Sampled `∂_≥T(x̄)` and `∂^∞_≥T(x̄)`: limits of ε-subgradients at nearby
/// points with `T(x) ≥ T(x̄)`. Requires `T` to look continuous at `x̄`.
pub fn one_sided_subdiff_sampled(scene: &Scene, xbar: &[Rat], plan: &SamplingPlan) -> Result<OneSidedCloud> {
    Error::dims(scene.dim(), xbar.len())?;
    let t = scene.time_function()?;
    let structural = scene.structural_directions();
    let x = vec_to_f64(xbar);
    let tbar = t.eval(&x);
    if !tbar.is_finite() {
        return Err(Error::InfiniteTime);
    }
    let h = *plan.radii().last().expect("validated plans have radii");
    let gap = plan
        .directions(scene.dim(), &structural)
        .iter()
        .map(|d| {
            let y: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + h * b).collect();
            (t.eval(&y) - tbar).abs()
        })
        .fold(0.0, |m: f64, v| if v.is_nan() { f64::INFINITY } else { m.max(v) });
    if gap > CONTINUITY_GAP {
        return Err(Error::WrongRegime(format!(
            "T jumps by {gap:.3e} within radius {h:.3e}; one-sided sampling needs continuity"
        )));
    }
    let (basic, singular) = sampled_one_sided_subdiff(t.as_ref(), &x, plan, &structural)?;
    Ok(OneSidedCloud {
        basic,
        singular,
        continuity_gap: gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};
    use crate::scene::fixtures::fixture;

    fn plan() -> SamplingPlan {
        SamplingPlan::default()
    }

    #[test]
    fn strip_box_boundary_point() {
        let s = fixture("strip-box").unwrap();
        let omega = s.polyhedral().unwrap();
        let x = ivec(&[1, 0]);
        let m = |xs: Vec<Rat>, e: Rat| eps_subgradient_membership(&s.dynamics, omega, &x, &xs, &e, &plan()).unwrap();
        assert_eq!(m(vec![rat(1, 2), int(0)], int(0)), Membership::Member);
        assert_eq!(m(ivec(&[2, 0]), int(0)), Membership::NonMember);
        assert_eq!(m(vec![rat(11, 10), int(0)], rat(1, 10)), Membership::Member);
        assert_eq!(m(vec![rat(1, 2), rat(1, 5)], rat(1, 10)), Membership::NonMember);
    }

    #[test]
    fn membership_grows_with_eps() {
        let s = fixture("strip-box").unwrap();
        let omega = s.polyhedral().unwrap();
        let x = vec![int(2), rat(1, 2)];
        let xs = vec![rat(3, 2), rat(1, 2)];
        let mut seen = false;
        for k in 0..8 {
            let e = rat(k, 4);
            let now = eps_subgradient_membership(&s.dynamics, omega, &x, &xs, &e, &plan()).unwrap() == Membership::Member;
            assert!(!seen || now);
            seen |= now;
        }
        assert!(seen);
    }

    #[test]
    fn nonconvex_scene_uses_the_sampled_test() {
        let s = fixture("box-complement").unwrap();
        let omega = s.polyhedral().unwrap();
        let x = ivec(&[1, 0]);
        let m = |xs: Vec<Rat>| eps_subgradient_membership(&s.dynamics, omega, &x, &xs, &int(0), &plan()).unwrap();
        // Fréchet subgradients at (1,0) are [−1,0]×{0}.
        assert_eq!(m(vec![rat(-1, 2), int(0)]), Membership::Member);
        assert_eq!(m(ivec(&[1, 0])), Membership::NonMember);
        assert_eq!(m(ivec(&[0, 1])), Membership::NonMember);
    }

    #[test]
    fn ball_complement_cases() {
        let b = BallComplement::unit_plane();
        let origin = ivec(&[0, 0]);
        let m = |x: &[Rat], xs: Vec<Rat>, e: Rat| ball_complement_eps_membership(&b, x, &xs, &e).unwrap();
        assert_eq!(m(&origin, ivec(&[0, 0]), rat(1, 2)), Membership::NonMember);
        assert_eq!(m(&origin, vec![rat(1, 2), int(0)], rat(3, 2)), Membership::Member);
        assert_eq!(m(&origin, vec![rat(3, 5), int(0)], rat(3, 2)), Membership::NonMember);
        let inside = vec![rat(3, 10), rat(4, 10)];
        assert_eq!(m(&inside, vec![rat(-3, 5), rat(-4, 5)], int(0)), Membership::Member);
        assert_eq!(m(&inside, vec![rat(-1, 2), rat(-4, 5)], int(0)), Membership::NonMember);
        assert_eq!(m(&inside, vec![rat(-1, 2), rat(-4, 5)], rat(1, 10)), Membership::Member);
        let irrational = vec![rat(1, 2), rat(1, 2)];
        assert_eq!(m(&irrational, vec![rat(-7, 10), rat(-7, 10)], rat(1, 50)), Membership::Member);
        assert_eq!(m(&irrational, vec![rat(-7, 10), rat(-7, 10)], rat(1, 200)), Membership::NonMember);
        let sphere = ivec(&[1, 0]);
        assert_eq!(m(&sphere, vec![rat(-1, 2), int(0)], int(0)), Membership::Member);
        assert_eq!(m(&sphere, vec![rat(1, 2), int(0)], int(0)), Membership::NonMember);
        assert_eq!(m(&ivec(&[2, 0]), vec![rat(1, 20), int(0)], rat(1, 10)), Membership::Member);
    }

    #[test]
    fn one_sided_sampling_requires_continuity() {
        let s = fixture("box-complement").unwrap();
        let err = one_sided_subdiff_sampled(&s, &ivec(&[0, 1]), &plan()).unwrap_err();
        assert!(matches!(err, Error::WrongRegime(_)));
        let ball = fixture("ball-complement").unwrap();
        let c = one_sided_subdiff_sampled(&ball, &ivec(&[0, 0]), &plan()).unwrap();
        assert!(c.basic.is_empty());
        let strip = fixture("strip-box").unwrap();
        let c = one_sided_subdiff_sampled(&strip, &[int(2), rat(1, 2)], &plan()).unwrap();
        assert!(!c.basic.is_empty());
        assert!(c.basic.points.iter().all(|p| (p.xstar[0] - 1.0).abs() < 1e-6 && p.xstar[1].abs() < 1e-6));
    }
}
