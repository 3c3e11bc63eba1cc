//! Checks of the ε-subgradient estimates.
//!
//! At a target point `x̄ ∈ Ω`:
//! * every `x* ∈ ∂̂_εT(x̄)` lies in `N̂_ε(x̄; Ω) ∩ C*_ε`;
//! * every `x* ∈ N̂_ε(x̄; Ω) ∩ C*_ε` lies in `∂̂_{με}T(x̄)` with
//!   `μ = 1 + 2‖F‖‖x*‖`.
//!
//! At `x̄ ∉ Ω` with `r = T(x̄) < ∞`, every `x* ∈ ∂̂_εT(x̄)` satisfies
//! * for each `η > 0` some `w̄ ∈ Ω` has `x* ∈ N̂_{ε+η}(w̄; Ω)` and
//!   `‖x̄ − w̄‖ ≤ ‖F‖r + η`;
//! * `1 − ε‖F‖ ≤ σ_F(−x*) ≤ 1 + ε‖F‖`;
//! * `x* ∈ −∂̂_ερ_F(w̄ − x̄) ∩ N̂_ε(w̄; Ω)` for every `w̄ ∈ Π(x̄)`;
//! * `x* ∈ N̂_ε(x̄; Ω_r) ∩ S*_ε`, and conversely, when `T` is calm at `x̄`
//!   with constant `κ`, `N̂_ε(x̄; Ω_r) ∩ S*_ε ⊆ ∂̂_{ℓε}T(x̄)` with
//!   `ℓ = 1 + 2‖x*‖‖F‖ + 2κ‖F‖`.
//!
//! Norm-dependent factors are certified intervals; a scaled membership test
//! is decided at both ends of the interval and is `Uncertain` in between.

use num_traits::{One, Signed, Zero};

use super::level::{Membership, SupportLevelSet};
use super::normal::in_eps_normal_set;
use super::outset::projection_cell_points;
use super::sampled::EpsSubgradientTest;
use super::gauge::gauge_subdifferential;
use crate::error::{Error, Result};
use crate::geometry::linalg::{dedup_sorted, dot, lex_cmp, neg, norm_sq, scale, sub};
use crate::geometry::rat::{exact_sqrt, from_f64, sqrt_interval, ExtRat, RatInterval};
use crate::geometry::{nearest_point, HPolyhedron, Rat, MAX_ENUM_DIM};
use crate::mintime::identities::show_point;
use crate::mintime::{enlargement, minimal_time_exact, projection_set, BallComplement, Check, Dynamics, Target};
use crate::oracle::SamplingPlan;

/// `ε`, `η` and an optional calmness constant `κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsParams {
    pub eps: Rat,
    pub eta: Rat,
    pub kappa: Option<Rat>,
}

fn mul(a: &RatInterval, b: &RatInterval) -> RatInterval {
    // Both factors are nonnegative.
    RatInterval {
        lo: &a.lo * &b.lo,
        hi: &a.hi * &b.hi,
    }
}

impl EpsParams {
    pub fn new(eps: Rat, eta: Rat) -> Result<Self> {
        if eps.is_negative() {
            return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
        }
        if !eta.is_positive() {
            return Err(Error::InvalidInput("eta must be positive".into()));
        }
        Ok(EpsParams { eps, eta, kappa: None })
    }

    pub fn with_kappa(mut self, kappa: Rat) -> Result<Self> {
        if kappa.is_negative() {
            return Err(Error::InvalidInput("calmness constant must be nonnegative".into()));
        }
        self.kappa = Some(kappa);
        Ok(self)
    }

    /// `μ(x*) = 1 + 2‖F‖‖x*‖`.
    pub fn mu(&self, f: &Dynamics, xstar: &[Rat]) -> RatInterval {
        let two = Rat::from_integer(2.into());
        mul(&f.bound(), &sqrt_interval(&norm_sq(xstar)))
            .scale(&two)
            .shift(&Rat::one())
    }

    /// `ℓ(x*) = 1 + 2‖x*‖‖F‖ + 2κ‖F‖`, when `κ` is known.
    pub fn ell(&self, f: &Dynamics, xstar: &[Rat]) -> Option<RatInterval> {
        let kappa = self.kappa.as_ref()?;
        let two = Rat::from_integer(2.into());
        let extra = f.bound().scale(&(two * kappa));
        let mu = self.mu(f, xstar);
        Some(RatInterval {
            lo: mu.lo + extra.lo,
            hi: mu.hi + extra.hi,
        })
    }
}

/// The dual grid of the plan as exact rationals.
pub fn dual_candidates(plan: &SamplingPlan, dim: usize) -> Vec<Vec<Rat>> {
    plan.dual_grid(dim)
        .into_iter()
        .filter_map(|p| p.into_iter().map(from_f64).collect::<Option<Vec<_>>>())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsViolation {
    pub xstar: Vec<Rat>,
    pub detail: String,
}

fn violation(xstar: &[Rat], detail: impl Into<String>) -> EpsViolation {
    EpsViolation {
        xstar: xstar.to_vec(),
        detail: detail.into(),
    }
}

/// `x* ∈ ∂̂_{cε}T(x̄)` for `c` in a certified interval: `Member` if it holds
/// at the lower end, `NonMember` if it fails at the upper end.
fn scaled_membership(test: &EpsSubgradientTest, xstar: &[Rat], eps: &Rat, factor: &RatInterval) -> Result<Membership> {
    if test.membership(xstar, &(eps * &factor.lo))? == Membership::Member {
        return Ok(Membership::Member);
    }
    Ok(match test.membership(xstar, &(eps * &factor.hi))? {
        Membership::NonMember => Membership::NonMember,
        _ => Membership::Uncertain,
    })
}

#[derive(Clone, Debug)]
pub struct InsetEpsReport {
    pub xbar: Vec<Rat>,
    pub eps: Rat,
    pub candidates: usize,
    /// Candidates certified in `∂̂_εT(x̄)`.
    pub certified: usize,
    /// Certified ε-subgradients outside `N̂_ε(x̄; Ω) ∩ C*_ε`.
    pub upper_violations: Vec<EpsViolation>,
    /// Candidates in `N̂_ε(x̄; Ω) ∩ C*_ε`.
    pub lower_checked: usize,
    /// Of those, the ones outside `∂̂_{με}T(x̄)`.
    pub lower_violations: Vec<EpsViolation>,
    pub uncertain: usize,
}

impl InsetEpsReport {
    pub fn passed(&self) -> bool {
        self.upper_violations.is_empty() && self.lower_violations.is_empty()
    }
}

/// Both in-set estimates on the given dual samples.
pub fn inset_eps_bounds_check(
    f: &Dynamics,
    omega: &Target,
    xbar: &[Rat],
    eps: &Rat,
    samples: &[Vec<Rat>],
    plan: &SamplingPlan,
) -> Result<InsetEpsReport> {
    if !omega.contains(xbar) {
        return Err(Error::WrongRegime("point lies outside the target".into()));
    }
    let params = EpsParams::new(eps.clone(), Rat::one())?;
    let test = EpsSubgradientTest::new(f, omega, xbar, plan)?;
    let c_eps = SupportLevelSet::lower(f, eps.clone())?;
    let mut report = InsetEpsReport {
        xbar: xbar.to_vec(),
        eps: eps.clone(),
        candidates: samples.len(),
        certified: 0,
        upper_violations: Vec::new(),
        lower_checked: 0,
        lower_violations: Vec::new(),
        uncertain: 0,
    };
    for xstar in samples {
        let normal = in_eps_normal_set(omega, xbar, xstar, eps)?;
        let level = c_eps.membership(xstar)?;
        match test.membership(xstar, eps)? {
            Membership::Member => {
                report.certified += 1;
                if !normal {
                    report.upper_violations.push(violation(xstar, "ε-subgradient is not an ε-normal"));
                }
                if level == Membership::NonMember {
                    report.upper_violations.push(violation(xstar, "σ_F(−x*) > 1 + ε‖F‖"));
                }
            }
            Membership::Uncertain => report.uncertain += 1,
            Membership::NonMember => {}
        }
        if normal && level == Membership::Member {
            report.lower_checked += 1;
            match scaled_membership(&test, xstar, eps, &params.mu(f, xstar))? {
                Membership::NonMember => report
                    .lower_violations
                    .push(violation(xstar, "ε-normal in C*_ε is not a με-subgradient")),
                Membership::Uncertain => report.uncertain += 1,
                Membership::Member => {}
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct OutsetEpsReport {
    pub xstar: Vec<Rat>,
    /// A point `w̄ ∈ Ω` with `x* ∈ N̂_{ε+η}(w̄; Ω)` and `‖x̄ − w̄‖ ≤ ‖F‖r + η`.
    pub witness: Option<Vec<Rat>>,
    pub witness_search: Check,
    /// `1 − ε‖F‖ ≤ σ_F(−x*) ≤ 1 + ε‖F‖`.
    pub support_bound: Check,
    /// `x* ∈ −∂̂_ερ_F(w̄ − x̄) ∩ N̂_ε(w̄; Ω)` at every sampled projection point.
    pub projection_inclusion: Check,
    /// `x* ∈ N̂_ε(x̄; Ω_r) ∩ S*_ε`.
    pub enlargement_inclusion: Check,
}

impl OutsetEpsReport {
    pub fn checks(&self) -> [(&'static str, &Check); 4] {
        [
            ("witness", &self.witness_search),
            ("support-bound", &self.support_bound),
            ("projection-inclusion", &self.projection_inclusion),
            ("enlargement-inclusion", &self.enlargement_inclusion),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| !c.is_violation())
    }
}

#[derive(Clone, Debug)]
pub struct ConverseReport {
    /// Candidates in `N̂_ε(x̄; Ω_r) ∩ S*_ε`.
    pub checked: usize,
    /// Of those, the ones outside `∂̂_{ℓε}T(x̄)`.
    pub violations: Vec<EpsViolation>,
    pub uncertain: usize,
}

impl ConverseReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Precomputed data for the out-of-set checks at one point.
#[derive(Clone, Debug)]
pub struct OutsetEpsContext {
    dynamics: Dynamics,
    omega: Target,
    xbar: Vec<Rat>,
    r: Rat,
    test: EpsSubgradientTest,
    /// Projection points with `∂ρ_F(w̄ − x̄)`.
    projections: Vec<(Vec<Rat>, HPolyhedron)>,
    witness_candidates: Vec<Vec<Rat>>,
    omega_r: Target,
}

impl OutsetEpsContext {
    pub fn new(f: &Dynamics, omega: &Target, xbar: &[Rat], plan: &SamplingPlan) -> Result<Self> {
        Error::dims(f.dim(), omega.dim())?;
        Error::dims(f.dim(), xbar.len())?;
        if omega.contains(xbar) {
            return Err(Error::WrongRegime("point lies in the target".into()));
        }
        f.require_polytope("out-of-set ε-subgradient checks")?;
        let r = match minimal_time_exact(f, omega, xbar)? {
            ExtRat::Finite(r) => r,
            ExtRat::Infinite => return Err(Error::InfiniteTime),
        };
        let test = EpsSubgradientTest::new(f, omega, xbar, plan)?;
        let proj = projection_set(f, omega, xbar)?;
        let mut points = projection_cell_points(f, omega, xbar, &proj)?;
        points.extend(proj.vertices()?);
        points.sort_by(|a, b| lex_cmp(a, b));
        let points = dedup_sorted(points);
        let projections = points
            .iter()
            .map(|w| Ok((w.clone(), gauge_subdifferential(f, &sub(w, xbar))?)))
            .collect::<Result<Vec<_>>>()?;
        let mut candidates = points.clone();
        for piece in omega.pieces() {
            candidates.push(nearest_point(piece, xbar).0);
            if f.dim() <= MAX_ENUM_DIM {
                candidates.extend(piece.vrep()?.vertices);
            }
        }
        candidates.sort_by(|a, b| lex_cmp(a, b));
        let witness_candidates = dedup_sorted(candidates);
        let omega_r = enlargement(f, omega, &r)?;
        Ok(OutsetEpsContext {
            dynamics: f.clone(),
            omega: omega.clone(),
            xbar: xbar.to_vec(),
            r,
            test,
            projections,
            witness_candidates,
            omega_r,
        })
    }

    pub fn time(&self) -> &Rat {
        &self.r
    }

    pub fn test(&self) -> &EpsSubgradientTest {
        &self.test
    }

    /// The sampled projection points (cell representatives and vertices).
    pub fn projection_points(&self) -> impl Iterator<Item = &[Rat]> {
        self.projections.iter().map(|(w, _)| w.as_slice())
    }

    fn two_sided(&self, xstar: &[Rat], eps: &Rat) -> Result<Membership> {
        SupportLevelSet::two_sided(&self.dynamics, eps.clone())?.membership(xstar)
    }

    /// All four checks for a certified `x* ∈ ∂̂_εT(x̄)`.
    pub fn check(&self, xstar: &[Rat], params: &EpsParams) -> Result<OutsetEpsReport> {
        let eps = &params.eps;
        if self.test.membership(xstar, eps)? != Membership::Member {
            return Err(Error::InvalidInput(format!(
                "{} is not a certified ε-subgradient",
                show_point(xstar)
            )));
        }
        let f = &self.dynamics;
        let reach = f.bound().lo * &self.r + &params.eta;
        let reach_sq = &reach * &reach;
        let widened = eps + &params.eta;
        let mut witness = None;
        for w in &self.witness_candidates {
            if norm_sq(&sub(&self.xbar, w)) <= reach_sq && in_eps_normal_set(&self.omega, w, xstar, &widened)? {
                witness = Some(w.clone());
                break;
            }
        }
        let witness_search = Check::from_bool(witness.is_some(), || {
            "no point of the target within ‖F‖r + η of x̄ has x* as an (ε+η)-normal".to_string()
        });
        let support_bound = Check::from_bool(self.two_sided(xstar, eps)? != Membership::NonMember, || {
            "σ_F(−x*) outside [1 − ε‖F‖, 1 + ε‖F‖]".into()
        });
        let eps_sq = eps * eps;
        let minus = neg(xstar);
        let mut failure = None;
        for (w, drho) in &self.projections {
            let gauge_ok = nearest_point(drho, &minus).1 <= eps_sq;
            if !gauge_ok || !in_eps_normal_set(&self.omega, w, xstar, eps)? {
                failure = Some(w.clone());
                break;
            }
        }
        let projection_inclusion = Check::from_bool(failure.is_none(), || {
            format!("fails at projection point {}", show_point(failure.as_deref().unwrap_or(&[])))
        });
        let enlargement_ok = in_eps_normal_set(&self.omega_r, &self.xbar, xstar, eps)?
            && self.two_sided(xstar, eps)? != Membership::NonMember;
        let enlargement_inclusion = Check::from_bool(enlargement_ok, || "x* ∉ N̂_ε(x̄; Ω_r) ∩ S*_ε".into());
        Ok(OutsetEpsReport {
            xstar: xstar.to_vec(),
            witness,
            witness_search,
            support_bound,
            projection_inclusion,
            enlargement_inclusion,
        })
    }

    /// `N̂_ε(x̄; Ω_r) ∩ S*_ε ⊆ ∂̂_{ℓε}T(x̄)` on the samples; needs `κ`.
    pub fn converse(&self, samples: &[Vec<Rat>], params: &EpsParams) -> Result<ConverseReport> {
        if params.kappa.is_none() {
            return Err(Error::WrongRegime("the converse estimate needs a calmness constant".into()));
        }
        let eps = &params.eps;
        let mut report = ConverseReport {
            checked: 0,
            violations: Vec::new(),
            uncertain: 0,
        };
        for xstar in samples {
            if !in_eps_normal_set(&self.omega_r, &self.xbar, xstar, eps)?
                || self.two_sided(xstar, eps)? != Membership::Member
            {
                continue;
            }
            report.checked += 1;
            let ell = params.ell(&self.dynamics, xstar).expect("κ checked above");
            match scaled_membership(&self.test, xstar, eps, &ell)? {
                Membership::NonMember => report
                    .violations
                    .push(violation(xstar, "enlargement ε-normal in S*_ε is not an ℓε-subgradient")),
                Membership::Uncertain => report.uncertain += 1,
                Membership::Member => {}
            }
        }
        Ok(report)
    }
}

/// Out-of-set checks for one certified ε-subgradient.
pub fn outset_eps_checks(
    f: &Dynamics,
    omega: &Target,
    xbar: &[Rat],
    xstar: &[Rat],
    params: &EpsParams,
    plan: &SamplingPlan,
) -> Result<OutsetEpsReport> {
    OutsetEpsContext::new(f, omega, xbar, plan)?.check(xstar, params)
}

/// `dist(x*, cone{−w})² ≤ e²`.
fn near_inward_ray(xstar: &[Rat], w: &[Rat], e: &Rat) -> bool {
    let p = dot(xstar, w);
    let d2 = if p.is_positive() || p.is_zero() {
        norm_sq(xstar)
    } else {
        norm_sq(xstar) - &p * &p / norm_sq(w)
    };
    d2 <= e * e
}

/// The out-of-set checks for the closed-form ball complement.
///
/// `Ω = {‖x‖ ≥ R}` has `N̂_e(w; Ω) = {x* : dist(x*, cone{−w}) ≤ e}` on the
/// sphere. The projection is the single point `Rx̄/‖x̄‖` off the origin
/// (used when `‖x̄‖` is rational); at the origin every sphere point projects,
/// and the coordinate points are tried. The gauge inclusion is not checked
/// for this scene (`Vacuous`).
pub fn ball_outset_eps_checks(b: &BallComplement, xbar: &[Rat], xstar: &[Rat], params: &EpsParams) -> Result<OutsetEpsReport> {
    Error::dims(b.dim(), xbar.len())?;
    Error::dims(b.dim(), xstar.len())?;
    if b.contains(xbar) {
        return Err(Error::WrongRegime("point lies in the target".into()));
    }
    let eps = &params.eps;
    if super::sampled::ball_complement_eps_membership(b, xbar, xstar, eps)? != Membership::Member {
        return Err(Error::InvalidInput(format!(
            "{} is not a certified ε-subgradient",
            show_point(xstar)
        )));
    }
    let dim = b.dim();
    let s = b.speed();
    let f = Dynamics::ball(dim, s.clone())?;
    let n2 = norm_sq(xbar);
    let nbar = exact_sqrt(&n2);
    // T = (R − ‖x̄‖)/s, so ‖F‖T + η = R − ‖x̄‖ + η.
    let mut candidates = Vec::new();
    if let Some(n) = nbar.as_ref().filter(|n| !n.is_zero()) {
        candidates.push(scale(&(b.radius() / n), xbar));
    }
    for i in 0..dim {
        for sign in [1, -1] {
            let mut w = vec![Rat::zero(); dim];
            w[i] = b.radius() * Rat::from_integer(sign.into());
            candidates.push(w);
        }
    }
    let widened = eps + &params.eta;
    let mut witness = None;
    for w in &candidates {
        // ‖x̄ − w‖ ≤ R − ‖x̄‖ + η, decided by squaring when ‖x̄‖ is rational.
        let close = match &nbar {
            Some(n) => {
                let reach = b.radius() - n + &params.eta;
                norm_sq(&sub(xbar, w)) <= &reach * &reach
            }
            None => false,
        };
        if close && near_inward_ray(xstar, w, &widened) {
            witness = Some(w.clone());
            break;
        }
    }
    let witness_search = match (&witness, &nbar) {
        (Some(_), _) => Check::Holds,
        (None, None) => Check::Vacuous("‖x̄‖ is irrational".into()),
        (None, Some(_)) => Check::Violated("no witness on the sphere".into()),
    };
    let level = SupportLevelSet::two_sided(&f, eps.clone())?.membership(xstar)?;
    let support_bound = Check::from_bool(level != Membership::NonMember, || {
        "σ_F(−x*) outside [1 − ε‖F‖, 1 + ε‖F‖]".into()
    });
    // Ω_r = {‖x‖ ≥ ‖x̄‖}: the whole space at the origin.
    let normal_ok = if n2.is_zero() {
        norm_sq(xstar) <= eps * eps
    } else {
        near_inward_ray(xstar, xbar, eps)
    };
    let enlargement_inclusion = Check::from_bool(normal_ok && level != Membership::NonMember, || {
        "x* ∉ N̂_ε(x̄; Ω_r) ∩ S*_ε".into()
    });
    Ok(OutsetEpsReport {
        xstar: xstar.to_vec(),
        witness,
        witness_search,
        support_bound,
        projection_inclusion: Check::Vacuous("gauge inclusion is not checked for the closed form".into()),
        enlargement_inclusion,
    })
}
