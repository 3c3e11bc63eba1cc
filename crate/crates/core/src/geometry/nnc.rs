//! Systems mixing closed, strict and equality constraints.
//!
//! Strict feasibility is reduced to one LP: maximize a common slack `s ≤ 1`
//! added to every strict row; the system is feasible iff the optimum is
//! positive.

use num_traits::{One, Signed, Zero};

use super::linalg::neg;
use super::lp::{LinearProgram, Relation, Sense};
use super::polyhedron::{feasible_point, Halfspace};
use super::rat::Rat;

/// A not-necessarily-closed convex set.
#[derive(Clone, Debug, Default)]
pub struct NncSystem {
    pub closed: Vec<Halfspace>,
    pub strict: Vec<Halfspace>,
    pub equalities: Vec<Halfspace>,
}

impl NncSystem {
    pub fn closed(closed: Vec<Halfspace>) -> Self {
        NncSystem {
            closed,
            ..Default::default()
        }
    }

    /// A point of the set, chosen with maximal common strict slack.
    pub fn point(&self, dim: usize) -> Option<Vec<Rat>> {
        strict_point(dim, &self.closed, &self.strict, &self.equalities)
    }

    pub fn is_feasible(&self, dim: usize) -> bool {
        self.point(dim).is_some()
    }

    pub fn and_strict(&self, h: Halfspace) -> Self {
        let mut s = self.clone();
        s.strict.push(h);
        s
    }

    pub fn and_closed(&self, h: Halfspace) -> Self {
        let mut s = self.clone();
        s.closed.push(h);
        s
    }

    pub fn and_equal(&self, h: Halfspace) -> Self {
        let mut s = self.clone();
        s.equalities.push(h);
        s
    }
}

/// The open complement `{⟨a, x⟩ > b}` written as a strict `≤`-form row.
pub fn violated(h: &Halfspace) -> Halfspace {
    Halfspace::new(neg(&h.normal), -h.offset.clone())
}

pub fn strict_point(
    dim: usize,
    closed: &[Halfspace],
    strict: &[Halfspace],
    equalities: &[Halfspace],
) -> Option<Vec<Rat>> {
    if strict.is_empty() {
        if equalities.is_empty() {
            return feasible_point(dim, closed);
        }
        let mut lp = LinearProgram::new(dim, Sense::Minimize);
        lp.all_free();
        for h in closed {
            lp.add(h.normal.clone(), Relation::Le, h.offset.clone()).ok()?;
        }
        for h in equalities {
            lp.add(h.normal.clone(), Relation::Eq, h.offset.clone()).ok()?;
        }
        let r = lp.solve();
        return r.is_optimal().then_some(r.point);
    }
    let n = dim + 1;
    let mut lp = LinearProgram::new(n, Sense::Maximize);
    lp.all_free();
    let mut obj = vec![Rat::zero(); n];
    obj[dim] = Rat::one();
    lp.set_objective(obj).ok()?;
    let widen = |h: &Halfspace, s: Rat| {
        let mut row = h.normal.clone();
        row.push(s);
        row
    };
    for h in closed {
        lp.add(widen(h, Rat::zero()), Relation::Le, h.offset.clone()).ok()?;
    }
    for h in strict {
        lp.add(widen(h, Rat::one()), Relation::Le, h.offset.clone()).ok()?;
    }
    for h in equalities {
        lp.add(widen(h, Rat::zero()), Relation::Eq, h.offset.clone()).ok()?;
    }
    let mut cap = vec![Rat::zero(); n];
    cap[dim] = Rat::one();
    lp.add(cap, Relation::Le, Rat::one()).ok()?;
    let r = lp.solve();
    match r.value {
        Some(v) if v.is_positive() => Some(r.point[..dim].to_vec()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec};

    #[test]
    fn open_interval_versus_point() {
        // 0 < x < 1 is feasible; 0 < x, x <= 0 is not.
        let lower = Halfspace::new(ivec(&[-1]), int(0));
        let upper = Halfspace::new(ivec(&[1]), int(1));
        assert!(strict_point(1, &[], &[lower.clone(), upper], &[]).is_some());
        let cap = Halfspace::new(ivec(&[1]), int(0));
        assert!(strict_point(1, &[cap], &[lower], &[]).is_none());
    }

    #[test]
    fn violated_flips_side() {
        let h = Halfspace::new(ivec(&[1, 0]), int(1));
        let v = violated(&h);
        assert!(v.slack(&ivec(&[2, 0])).is_negative());
        assert!(v.slack(&ivec(&[1, 0])).is_zero());
    }
}
