//! Level sets of the support function `σ_F(−x*)`.
//!
//! * `C*_ε = {x* : σ_F(−x*) ≤ 1 + ε‖F‖}`
//! * `S*_ε = {x* : |σ_F(−x*) − 1| ≤ ε‖F‖}`
//! * `F*₊ = {x* : ⟨x*, v⟩ ≥ 0 ∀ v ∈ F}`
//!
//! Membership is decided exactly: `‖F‖` may be irrational, but every test
//! reduces to comparing squares of nonnegative rationals.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::linalg::{dot, neg, norm_sq};
use crate::geometry::rat::exact_sqrt;
use crate::geometry::{HPolyhedron, Halfspace, PolyhedralUnion, Rat};
use crate::mintime::{Dynamics, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelKind {
    /// `C*_ε`.
    Lower,
    /// `S*_ε`.
    TwoSided,
    /// `F*₊`.
    PositiveDual,
}

impl fmt::Display for LevelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelKind::Lower => "C*",
            LevelKind::TwoSided => "S*",
            LevelKind::PositiveDual => "F+*",
        })
    }
}

/// Three-valued membership answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Member,
    NonMember,
    Uncertain,
}

impl Membership {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Membership::Member
        } else {
            Membership::NonMember
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Member => "member",
            Membership::NonMember => "non_member",
            Membership::Uncertain => "uncertain",
        })
    }
}

/// `s ≤ 1 + ε·√b2` for rationals `s`, `ε ≥ 0`, `b2 ≥ 0`.
fn le_one_plus(s: &Rat, eps: &Rat, b2: &Rat) -> bool {
    let gap = s - Rat::one();
    !gap.is_positive() || &gap * &gap <= eps * eps * b2
}

/// `1 − ε·√b2 ≤ s`.
fn ge_one_minus(s: &Rat, eps: &Rat, b2: &Rat) -> bool {
    let gap = Rat::one() - s;
    !gap.is_positive() || &gap * &gap <= eps * eps * b2
}

#[derive(Clone, Debug)]
pub struct SupportLevelSet {
    kind: LevelKind,
    eps: Rat,
    dynamics: Dynamics,
}

impl SupportLevelSet {
    pub fn new(kind: LevelKind, f: &Dynamics, eps: Rat) -> Result<Self> {
        if eps.is_negative() {
            return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
        }
        Ok(SupportLevelSet {
            kind,
            eps,
            dynamics: f.clone(),
        })
    }

    pub fn lower(f: &Dynamics, eps: Rat) -> Result<Self> {
        Self::new(LevelKind::Lower, f, eps)
    }

    pub fn two_sided(f: &Dynamics, eps: Rat) -> Result<Self> {
        Self::new(LevelKind::TwoSided, f, eps)
    }

    pub fn positive_dual(f: &Dynamics) -> Self {
        Self::new(LevelKind::PositiveDual, f, Rat::zero()).expect("zero epsilon")
    }

    pub fn kind(&self) -> LevelKind {
        self.kind
    }

    pub fn eps(&self) -> &Rat {
        &self.eps
    }

    pub fn membership(&self, xstar: &[Rat]) -> Result<Membership> {
        Error::dims(self.dynamics.dim(), xstar.len())?;
        let b2 = self.dynamics.bound_sq();
        let eps = &self.eps;
        let answer = match (self.dynamics.shape(), self.kind) {
            (_, LevelKind::PositiveDual) => self.dynamics.positive_dual_cone().contains(xstar),
            (Shape::Polytope(p), kind) => {
                let s = p.support(&neg(xstar));
                match kind {
                    LevelKind::Lower => le_one_plus(&s, eps, b2),
                    _ => le_one_plus(&s, eps, b2) && ge_one_minus(&s, eps, b2),
                }
            }
            (Shape::Ball { radius }, kind) => {
                // σ = r‖x*‖ and ‖F‖ = r.
                let s2 = radius * radius * norm_sq(xstar);
                let hi = Rat::one() + eps * radius;
                let upper = s2 <= &hi * &hi;
                match kind {
                    LevelKind::Lower => upper,
                    _ => {
                        let lo = Rat::one() - eps * radius;
                        upper && (!lo.is_positive() || &lo * &lo <= s2)
                    }
                }
            }
        };
        Ok(Membership::from_bool(answer))
    }

    pub fn contains(&self, xstar: &[Rat]) -> Result<bool> {
        Ok(self.membership(xstar)? == Membership::Member)
    }

    /// Exact polyhedral realization, available for polytope dynamics when
    /// `ε‖F‖` is rational (in particular for `ε = 0`).
    pub fn realize(&self) -> Result<PolyhedralUnion> {
        let dim = self.dynamics.dim();
        let p = self
            .dynamics
            .as_polytope()
            .ok_or_else(|| Error::Unsupported("support level sets of a ball are not polyhedral".into()))?;
        if self.kind == LevelKind::PositiveDual {
            return Ok(PolyhedralUnion::from_piece(
                self.dynamics.positive_dual_cone().to_polyhedron(),
            ));
        }
        let slack = if self.eps.is_zero() {
            Rat::zero()
        } else {
            let norm = exact_sqrt(self.dynamics.bound_sq()).ok_or_else(|| {
                Error::Unsupported("ε‖F‖ is irrational; use membership tests instead".into())
            })?;
            &self.eps * norm
        };
        let hi = Rat::one() + &slack;
        // σ_F(−x*) ≤ hi  ⇔  ⟨−v, x*⟩ ≤ hi for every vertex v.
        let upper: Vec<Halfspace> = p
            .vertices()
            .iter()
            .map(|v| Halfspace::new(neg(v), hi.clone()))
            .collect();
        match self.kind {
            LevelKind::Lower => Ok(PolyhedralUnion::from_piece(HPolyhedron::new(dim, upper)?)),
            _ => {
                let lo = Rat::one() - &slack;
                let mut pieces = Vec::new();
                for v in p.vertices() {
                    // ⟨−v, x*⟩ ≥ lo.
                    let mut hs = upper.clone();
                    hs.push(Halfspace::new(v.clone(), -lo.clone()));
                    if let Some(piece) = HPolyhedron::try_new(dim, hs)? {
                        pieces.push(piece.reduced());
                    }
                }
                Ok(PolyhedralUnion::from_pieces(dim, pieces)?.simplified())
            }
        }
    }
}

/// `C*_ε`, `S*_ε` and `F*₊` for the same dynamics.
pub fn support_level_sets(f: &Dynamics, eps: Rat) -> Result<[SupportLevelSet; 3]> {
    Ok([
        SupportLevelSet::lower(f, eps.clone())?,
        SupportLevelSet::two_sided(f, eps)?,
        SupportLevelSet::positive_dual(f),
    ])
}

/// `σ_F(−x*)` compared with 1: returns the sign of `σ_F(−x*) − 1` exactly.
pub fn support_level_sign(f: &Dynamics, xstar: &[Rat]) -> Result<std::cmp::Ordering> {
    Error::dims(f.dim(), xstar.len())?;
    Ok(match f.shape() {
        Shape::Polytope(p) => p.support(&neg(xstar)).cmp(&Rat::one()),
        Shape::Ball { radius } => (radius * radius * dot(xstar, xstar)).cmp(&Rat::one()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    fn segment() -> Dynamics {
        Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap()
    }

    #[test]
    fn lower_level_set_of_segment() {
        let c = SupportLevelSet::lower(&segment(), int(0)).unwrap();
        assert!(c.contains(&ivec(&[1, 7])).unwrap());
        assert!(!c.contains(&[rat(3, 2), int(0)]).unwrap());
        let real = c.realize().unwrap();
        assert!(real.contains(&ivec(&[-1, 100])));
        assert!(!real.contains(&[rat(-3, 2), int(0)]));
    }

    #[test]
    fn two_sided_with_epsilon() {
        let s = SupportLevelSet::two_sided(&segment(), rat(1, 2)).unwrap();
        assert!(s.contains(&[rat(3, 2), int(0)]).unwrap());
        assert!(s.contains(&[rat(1, 2), int(0)]).unwrap());
        assert!(!s.contains(&[rat(1, 4), int(0)]).unwrap());
        let real = s.realize().unwrap();
        for x in [rat(1, 4), rat(1, 2), rat(3, 2), rat(2, 1)] {
            assert_eq!(real.contains(&[x.clone(), int(3)]), s.contains(&[x, int(3)]).unwrap());
        }
    }

    #[test]
    fn irrational_norm_membership_is_exact() {
        let f = Dynamics::from_vertices(vec![ivec(&[1, 1])]).unwrap();
        // ‖F‖ = √2; σ(−x*) = −x₁ − x₂.
        let c = SupportLevelSet::lower(&f, rat(1, 2)).unwrap();
        // 1 + √2/2 ≈ 1.7071.
        assert!(c.contains(&[rat(-17, 20), rat(-17, 20)]).unwrap());
        assert!(!c.contains(&[rat(-86, 100), rat(-86, 100)]).unwrap());
        assert!(c.realize().is_err());
    }

    #[test]
    fn ball_levels() {
        let f = Dynamics::ball(2, int(1)).unwrap();
        let s = SupportLevelSet::two_sided(&f, int(0)).unwrap();
        assert!(s.contains(&[rat(3, 5), rat(4, 5)]).unwrap());
        assert!(!s.contains(&[rat(3, 5), rat(3, 5)]).unwrap());
        assert!(SupportLevelSet::positive_dual(&f).contains(&ivec(&[0, 0])).unwrap());
        assert!(!SupportLevelSet::positive_dual(&f).contains(&ivec(&[0, 1])).unwrap());
    }
}
