//! Structural identities of the minimal time function, exposed as checks.
//!
//! Each check computes both sides independently with exact arithmetic and
//! reports [`Check::Holds`], [`Check::Violated`] with the offending numbers,
//! or [`Check::Vacuous`] when the precondition does not hold.

use num_traits::{One, Signed, Zero};

use super::dynamics::{Dynamics, Shape};
use super::enlargement::enlargement;
use super::eval::{minimal_time_exact, minimal_time_sq};
use super::target::Target;
use crate::error::{Error, Result};
use crate::geometry::linalg::{add, scale, sub};
use crate::geometry::lp::{LinearProgram, Relation, Sense};
use crate::geometry::nearest_point;
use crate::geometry::rat::{fmt_rat, ExtRat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    Violated(String),
    Vacuous(String),
}

impl Check {
    pub fn is_violation(&self) -> bool {
        matches!(self, Check::Violated(_))
    }

    pub(crate) fn from_bool(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Check::Holds
        } else {
            Check::Violated(detail())
        }
    }
}

fn show(v: &ExtRat) -> String {
    v.to_string()
}

pub(crate) fn show_point(x: &[Rat]) -> String {
    let parts: Vec<String> = x.iter().map(fmt_rat).collect();
    format!("({})", parts.join(", "))
}

/// `T_Ω(x) = r + T_{Ω_r}(x)` for `x ∉ Ω_r` with `T_Ω(x) < ∞`.
pub fn enlargement_identity_check(f: &Dynamics, omega: &Target, r: &Rat, x: &[Rat]) -> Result<Check> {
    let t = minimal_time_exact(f, omega, x)?;
    let ExtRat::Finite(t) = t else {
        return Ok(Check::Vacuous("T(x) is infinite".into()));
    };
    if &t <= r {
        return Ok(Check::Vacuous("x already lies in the enlargement".into()));
    }
    let big = enlargement(f, omega, r)?;
    let t_r = minimal_time_exact(f, &big, x)?;
    let rhs = match &t_r {
        ExtRat::Finite(v) => ExtRat::Finite(r + v),
        ExtRat::Infinite => ExtRat::Infinite,
    };
    Ok(Check::from_bool(ExtRat::Finite(t.clone()) == rhs, || {
        format!("T(x) = {} but r + T_r(x) = {}", fmt_rat(&t), show(&rhs))
    }))
}

/// `T(x − t·q) ≤ r + t` for `x ∈ Ω_r`, `t ≥ 0`, `q ∈ F`.
pub fn shifted_argument_check(
    f: &Dynamics,
    omega: &Target,
    r: &Rat,
    x: &[Rat],
    t: &Rat,
    q: &[Rat],
) -> Result<Check> {
    if t.is_negative() || !f.contains(q) {
        return Ok(Check::Vacuous("requires t ≥ 0 and q ∈ F".into()));
    }
    match minimal_time_sq(f, omega, x)? {
        Some(t2) if t2 <= (r * r) && !r.is_negative() => {}
        _ => return Ok(Check::Vacuous("x is not in the enlargement".into())),
    }
    let y = sub(x, &scale(t, q));
    let bound = r + t;
    let ok = match minimal_time_sq(f, omega, &y)? {
        Some(s2) => s2 <= &bound * &bound,
        None => false,
    };
    Ok(Check::from_bool(ok, || {
        format!("T({}) exceeds r + t = {}", show_point(&y), fmt_rat(&bound))
    }))
}

/// Recomputes `min_{w ∈ Ω} ρ_F(w − x)` with `w` as explicit variables and
/// compares with the evaluator. Returns whether both agree exactly.
pub fn gauge_representation_check(f: &Dynamics, omega: &Target, x: &[Rat]) -> Result<bool> {
    Error::dims(f.dim(), x.len())?;
    let lhs = minimal_time_sq(f, omega, x)?;
    let rhs: Option<Rat> = match f.shape() {
        Shape::Polytope(p) => {
            let vs = p.vertices();
            let (n, k) = (f.dim(), vs.len());
            let mut best: Option<Rat> = None;
            for piece in omega.pieces() {
                // variables: w (free, n) then λ (≥ 0, k)
                let mut lp = LinearProgram::new(n + k, Sense::Minimize);
                let mut c = vec![Rat::zero(); n];
                c.extend(std::iter::repeat_n(Rat::one(), k));
                lp.set_objective(c)?;
                for j in 0..n {
                    lp.set_free(j);
                }
                for i in 0..n {
                    let mut row = vec![Rat::zero(); n + k];
                    row[i] = Rat::one();
                    for (l, v) in vs.iter().enumerate() {
                        row[n + l] = -v[i].clone();
                    }
                    lp.add(row, Relation::Eq, x[i].clone())?;
                }
                for h in piece.halfspaces() {
                    let mut row = h.normal.clone();
                    row.extend(std::iter::repeat_n(Rat::zero(), k));
                    lp.add(row, Relation::Le, h.offset.clone())?;
                }
                if let Some(v) = lp.solve().value {
                    if best.as_ref().is_none_or(|b| &v < b) {
                        best = Some(v);
                    }
                }
            }
            best.map(|t| &t * &t)
        }
        Shape::Ball { radius } => omega
            .pieces()
            .iter()
            .map(|piece| {
                let (w, _) = nearest_point(piece, x);
                let d = sub(&w, x);
                crate::geometry::linalg::norm_sq(&d) / (radius * radius)
            })
            .min(),
    };
    Ok(lhs == rhs)
}

/// `T(λw̄ + (1 − λ)x̄) = (1 − λ)T(x̄)` for `w̄ ∈ Π(x̄)`, `λ ∈ [0, 1]`.
pub fn projection_linearity_check(
    f: &Dynamics,
    omega: &Target,
    xbar: &[Rat],
    wbar: &[Rat],
    lambda: &Rat,
) -> Result<Check> {
    if lambda.is_negative() || lambda > &Rat::one() {
        return Ok(Check::Vacuous("λ must lie in [0, 1]".into()));
    }
    let Some(t2) = minimal_time_sq(f, omega, xbar)? else {
        return Ok(Check::Vacuous("T(x̄) is infinite".into()));
    };
    if t2.is_zero() {
        return Ok(Check::Vacuous("x̄ lies in the target".into()));
    }
    let y = add(&scale(lambda, wbar), &scale(&(Rat::one() - lambda), xbar));
    let lhs = minimal_time_sq(f, omega, &y)?;
    let factor = Rat::one() - lambda;
    let rhs = &factor * &factor * &t2;
    Ok(Check::from_bool(lhs.as_ref() == Some(&rhs), || {
        format!(
            "T² at {} is {:?}, expected {}",
            show_point(&y),
            lhs.as_ref().map(fmt_rat),
            fmt_rat(&rhs)
        )
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityViolation {
    pub x1: Vec<Rat>,
    pub x2: Vec<Rat>,
    pub lambda: Rat,
    /// `T(λx₁ + (1 − λ)x₂)`
    pub at_combination: ExtRat,
    /// `λT(x₁) + (1 − λ)T(x₂)`
    pub combination_of_values: ExtRat,
}

#[derive(Clone, Debug, Default)]
pub struct ConvexityReport {
    pub checked: usize,
    /// Pairs where `T(λx₁+(1−λ)x₂) > λT(x₁)+(1−λ)T(x₂)`.
    pub convexity_violations: Vec<ConvexityViolation>,
    /// Pairs with both points outside `Ω` and finite values where the
    /// reverse inequality fails.
    pub concavity_violations: Vec<ConvexityViolation>,
}

/// Tests the convexity inequality and, off the target, its reverse, over
/// every sample pair and weight.
pub fn convexity_concavity_probe(
    f: &Dynamics,
    omega: &Target,
    pairs: &[(Vec<Rat>, Vec<Rat>)],
    lambdas: &[Rat],
) -> Result<ConvexityReport> {
    f.require_polytope("the convexity probe")?;
    let mut report = ConvexityReport::default();
    for (x1, x2) in pairs {
        let t1 = minimal_time_exact(f, omega, x1)?;
        let t2 = minimal_time_exact(f, omega, x2)?;
        for lambda in lambdas {
            if lambda.is_negative() || lambda > &Rat::one() {
                return Err(Error::InvalidInput("weights must lie in [0, 1]".into()));
            }
            report.checked += 1;
            let mu = Rat::one() - lambda;
            let y = add(&scale(lambda, x1), &scale(&mu, x2));
            let ty = minimal_time_exact(f, omega, &y)?;
            let combo = match (&t1, &t2) {
                (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(lambda * a + &mu * b),
                _ => ExtRat::Infinite,
            };
            let violation = || ConvexityViolation {
                x1: x1.clone(),
                x2: x2.clone(),
                lambda: lambda.clone(),
                at_combination: ty.clone(),
                combination_of_values: combo.clone(),
            };
            if ty > combo {
                report.convexity_violations.push(violation());
            }
            let off_target = !omega.contains(x1) && !omega.contains(x2);
            if off_target && combo.is_finite() && ty < combo {
                report.concavity_violations.push(violation());
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};
    use crate::geometry::{HPolyhedron, Halfspace};

    fn seg() -> Dynamics {
        Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap()
    }

    fn strip_box() -> Target {
        Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap())
    }

    fn box_complement() -> Target {
        Target::from_pieces(
            2,
            vec![
                HPolyhedron::new(2, vec![Halfspace::new(ivec(&[-1, 0]), int(-1))]).unwrap(),
                HPolyhedron::new(2, vec![Halfspace::new(ivec(&[1, 0]), int(-1))]).unwrap(),
                HPolyhedron::new(2, vec![Halfspace::new(ivec(&[0, -1]), int(-1))]).unwrap(),
                HPolyhedron::new(2, vec![Halfspace::new(ivec(&[0, 1]), int(-1))]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn unit_point() -> (Dynamics, Target) {
        let f = Dynamics::from_vertices(vec![ivec(&[1])]).unwrap();
        (f, Target::convex(HPolyhedron::singleton(&ivec(&[0]))))
    }

    #[test]
    fn enlargement_identity_examples() {
        let (f, o) = unit_point();
        assert_eq!(enlargement_identity_check(&f, &o, &int(2), &ivec(&[-5])).unwrap(), Check::Holds);
        assert_eq!(
            enlargement_identity_check(&seg(), &strip_box(), &rat(1, 2), &ivec(&[3, 0])).unwrap(),
            Check::Holds
        );
        assert!(matches!(
            enlargement_identity_check(&f, &o, &int(2), &ivec(&[-1])).unwrap(),
            Check::Vacuous(_)
        ));
    }

    #[test]
    fn shifted_argument_examples() {
        let (f, o) = unit_point();
        assert_eq!(
            shifted_argument_check(&f, &o, &int(1), &ivec(&[-1]), &int(3), &ivec(&[1])).unwrap(),
            Check::Holds
        );
        assert_eq!(
            shifted_argument_check(&f, &o, &int(1), &ivec(&[-1]), &int(0), &ivec(&[1])).unwrap(),
            Check::Holds
        );
    }

    #[test]
    fn gauge_representation_examples() {
        assert!(gauge_representation_check(&seg(), &strip_box(), &[int(2), rat(1, 2)]).unwrap());
        assert!(gauge_representation_check(&seg(), &strip_box(), &ivec(&[0, 0])).unwrap());
        assert!(gauge_representation_check(&seg(), &strip_box(), &ivec(&[0, 5])).unwrap());
    }

    #[test]
    fn projection_linearity_example() {
        let xbar = vec![rat(1, 2), rat(1, 2)];
        let wbar = vec![int(1), rat(1, 2)];
        let c = projection_linearity_check(&seg(), &box_complement(), &xbar, &wbar, &rat(1, 2)).unwrap();
        assert_eq!(c, Check::Holds);
        assert_eq!(
            minimal_time_exact(&seg(), &box_complement(), &[rat(3, 4), rat(1, 2)]).unwrap(),
            ExtRat::Finite(rat(1, 4))
        );
    }

    #[test]
    fn convexity_violation_on_box_complement() {
        let pairs = vec![(vec![rat(-1, 2), int(0)], vec![rat(1, 2), int(0)])];
        let rep = convexity_concavity_probe(&seg(), &box_complement(), &pairs, &[rat(1, 2)]).unwrap();
        assert_eq!(rep.convexity_violations.len(), 1);
        assert_eq!(rep.convexity_violations[0].at_combination, ExtRat::Finite(int(1)));
        let rep = convexity_concavity_probe(&seg(), &strip_box(), &pairs, &[rat(1, 2)]).unwrap();
        assert!(rep.convexity_violations.is_empty());
    }
}
