//! Two-phase primal simplex with Bland's anti-cycling rule.
//!
//! The solver is generic over [`Scalar`]: exact [`Rat`] for everything that
//! ends up in a result, and `f64` for the sampling oracles where thousands of
//! small programs are solved and a tolerance is acceptable.
//!
//! Dual certificates follow one convention regardless of sense. For the
//! minimization form `min c·x` (a maximization is handled as `min −c·x`):
//! multipliers are `≤ 0` on `≤` rows, `≥ 0` on `≥` rows and free on `=`
//! rows; reduced costs `c − Aᵀy` are `≥ 0` on sign-constrained variables and
//! `0` on free ones; and the optimal value equals `b·y`. For a maximization
//! the reported multipliers are those of `min −c·x`, negated back, so
//! `b·y = max` still holds.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::rat::Rat;
use crate::error::{Error, Result};

/// Ordered field used by the simplex.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero_s(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as num_traits::One>::one()
    }
    fn is_zero_s(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

/// Pivot tolerance for the floating-point instantiation.
pub const F64_EPS: f64 = 1e-10;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero_s(&self) -> bool {
        self.abs() <= F64_EPS
    }
    fn is_pos(&self) -> bool {
        *self > F64_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -F64_EPS
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpResult<T> {
    pub status: LpStatus,
    /// Optimal objective value (present iff optimal).
    pub value: Option<T>,
    /// Primal optimum (present iff optimal).
    pub point: Vec<T>,
    /// One multiplier per constraint (present iff optimal).
    pub dual: Vec<T>,
}

impl<T> LpResult<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// A linear program over `num_vars` variables. Variables are nonnegative by
/// default; call [`LinearProgram::set_free`] or [`LinearProgram::all_free`].
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    num_vars: usize,
    sense: Sense,
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
    free: Vec<bool>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            sense,
            objective: vec![T::zero(); num_vars],
            constraints: Vec::new(),
            free: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn set_objective(&mut self, c: Vec<T>) -> Result<&mut Self> {
        Error::dims(self.num_vars, c.len())?;
        self.objective = c;
        Ok(self)
    }

    pub fn add(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> Result<&mut Self> {
        Error::dims(self.num_vars, coeffs.len())?;
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(self)
    }

    pub fn set_free(&mut self, j: usize) -> &mut Self {
        self.free[j] = true;
        self
    }

    pub fn all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn is_free(&self, j: usize) -> bool {
        self.free[j]
    }

    pub fn solve(&self) -> LpResult<T> {
        Tableau::build(self).run(self)
    }
}

/// Dense simplex tableau. Columns: structural (free variables split into a
/// positive and a negative part), then one slack per inequality row, then one
/// artificial per row, then the right-hand side.
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    /// structural column -> (variable, negated part)
    structural: Vec<(usize, bool)>,
    art_start: usize,
    width: usize,
    row_flipped: Vec<bool>,
}

const ITERATION_CAP: usize = 200_000;

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let mut structural = Vec::new();
        for j in 0..lp.num_vars {
            structural.push((j, false));
            if lp.free[j] {
                structural.push((j, true));
            }
        }
        let ns = structural.len();
        let m = lp.constraints.len();
        let slack_rows: Vec<usize> = (0..m)
            .filter(|&i| lp.constraints[i].relation != Relation::Eq)
            .collect();
        let art_start = ns + slack_rows.len();
        let width = art_start + m;
        let mut rows = Vec::with_capacity(m);
        let mut row_flipped = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![T::zero(); width + 1];
            for (k, &(j, negated)) in structural.iter().enumerate() {
                row[k] = if negated {
                    -c.coeffs[j].clone()
                } else {
                    c.coeffs[j].clone()
                };
            }
            if let Some(s) = slack_rows.iter().position(|&r| r == i) {
                row[ns + s] = match c.relation {
                    Relation::Le => T::one(),
                    Relation::Ge => -T::one(),
                    Relation::Eq => unreachable!(),
                };
            }
            row[width] = c.rhs.clone();
            let flip = c.rhs.is_neg();
            if flip {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
            }
            row[art_start + i] = T::one();
            rows.push(row);
            row_flipped.push(flip);
        }
        Tableau {
            rows,
            obj: vec![T::zero(); width + 1],
            basis: (art_start..art_start + m).collect(),
            structural,
            art_start,
            width,
            row_flipped,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_s() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero_s() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            row[c] = T::zero();
        }
        if !self.obj[c].is_zero_s() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero_s() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.obj[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Recomputes the reduced-cost row for column costs `cost`.
    fn price(&mut self, cost: &[T]) {
        let w = self.width;
        let mut obj: Vec<T> = cost.to_vec();
        obj.push(T::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[i]].clone();
            if cb.is_zero_s() {
                continue;
            }
            for j in 0..=w {
                if !row[j].is_zero_s() {
                    obj[j] = obj[j].clone() - cb.clone() * row[j].clone();
                }
            }
        }
        self.obj = obj;
    }

    /// Runs Bland's rule over columns `< limit`. Returns false if unbounded.
    fn iterate(&mut self, limit: usize) -> bool {
        let w = self.width;
        for _ in 0..ITERATION_CAP {
            let Some(c) = (0..limit).find(|&j| self.obj[j].is_neg()) else {
                return true;
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_pos() {
                    continue;
                }
                let ratio = row[w].clone() / row[c].clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (!(ratio > br) && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
        // Only reachable through floating-point stalling; treat the current
        // basis as final.
        true
    }

    fn run(mut self, lp: &LinearProgram<T>) -> LpResult<T> {
        let w = self.width;
        let m = self.rows.len();
        let fail = |status| LpResult {
            status,
            value: None,
            point: Vec::new(),
            dual: Vec::new(),
        };

        // Phase 1: minimize the sum of artificials.
        let mut cost1 = vec![T::zero(); w];
        for c in cost1.iter_mut().skip(self.art_start) {
            *c = T::one();
        }
        self.price(&cost1);
        self.iterate(w);
        if self.obj[w].is_neg() {
            return fail(LpStatus::Infeasible);
        }
        // Drive remaining artificials out of the basis where possible.
        for r in 0..m {
            if self.basis[r] < self.art_start {
                continue;
            }
            if let Some(c) = (0..self.art_start).find(|&j| !self.rows[r][j].is_zero_s()) {
                self.pivot(r, c);
            }
        }

        // Phase 2: artificial columns are barred from re-entering.
        let sign = match lp.sense {
            Sense::Minimize => T::one(),
            Sense::Maximize => -T::one(),
        };
        let mut cost2 = vec![T::zero(); w];
        for (k, &(j, negated)) in self.structural.iter().enumerate() {
            let c = sign.clone() * lp.objective[j].clone();
            cost2[k] = if negated { -c } else { c };
        }
        self.price(&cost2);
        if !self.iterate(self.art_start) {
            return fail(LpStatus::Unbounded);
        }

        let mut point = vec![T::zero(); lp.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.structural.len() {
                let (j, negated) = self.structural[b];
                let v = self.rows[r][w].clone();
                point[j] = if negated {
                    point[j].clone() - v
                } else {
                    point[j].clone() + v
                };
            }
        }
        let value = lp
            .objective
            .iter()
            .zip(&point)
            .fold(T::zero(), |acc, (c, x)| acc + c.clone() * x.clone());
        // Multipliers of the standardized rows are minus the reduced costs of
        // the artificial columns; undo row flips and the sense change.
        let dual = (0..m)
            .map(|i| {
                let y = -self.obj[self.art_start + i].clone();
                let y = if self.row_flipped[i] { -y } else { y };
                sign.clone() * y
            })
            .collect();
        LpResult {
            status: LpStatus::Optimal,
            value: Some(value),
            point,
            dual,
        }
    }
}

impl LinearProgram<Rat> {
    /// Exact check of primal feasibility, dual feasibility and zero duality
    /// gap for an optimal result.
    pub fn certify(&self, res: &LpResult<Rat>) -> bool {
        if res.status != LpStatus::Optimal {
            return false;
        }
        let (Some(value), x, y) = (&res.value, &res.point, &res.dual) else {
            return false;
        };
        if x.len() != self.num_vars || y.len() != self.constraints.len() {
            return false;
        }
        let dot = |a: &[Rat], b: &[Rat]| a.iter().zip(b).fold(<Rat as Zero>::zero(), |s, (p, q)| s + p * q);
        for (j, xj) in x.iter().enumerate() {
            if !self.free[j] && xj.is_negative() {
                return false;
            }
        }
        for c in &self.constraints {
            let lhs = dot(&c.coeffs, x);
            let ok = match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            };
            if !ok {
                return false;
            }
        }
        if &dot(&self.objective, x) != value {
            return false;
        }
        // Dual feasibility for min s·c·x with multipliers s·y.
        let s = match self.sense {
            Sense::Minimize => Rat::from_integer(1.into()),
            Sense::Maximize => Rat::from_integer((-1).into()),
        };
        for (c, yi) in self.constraints.iter().zip(y) {
            let yi = &s * yi;
            let ok = match c.relation {
                Relation::Le => !yi.is_positive(),
                Relation::Ge => !yi.is_negative(),
                Relation::Eq => true,
            };
            if !ok {
                return false;
            }
        }
        for j in 0..self.num_vars {
            let aty = self
                .constraints
                .iter()
                .zip(y)
                .fold(<Rat as Zero>::zero(), |acc, (c, yi)| acc + &c.coeffs[j] * yi);
            let reduced = &s * (&self.objective[j] - aty);
            let ok = if self.free[j] {
                reduced.is_zero()
            } else {
                !reduced.is_negative()
            };
            if !ok {
                return false;
            }
        }
        let by = self
            .constraints
            .iter()
            .zip(y)
            .fold(<Rat as Zero>::zero(), |acc, (c, yi)| acc + &c.rhs * yi);
        &by == value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    fn lp1(sense: Sense, c: i64) -> LinearProgram<Rat> {
        let mut lp = LinearProgram::new(1, sense);
        lp.set_objective(vec![int(c)]).unwrap();
        lp.all_free();
        lp
    }

    #[test]
    fn single_lower_bound() {
        let mut lp = lp1(Sense::Minimize, 1);
        lp.add(vec![int(1)], Relation::Ge, int(2)).unwrap();
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, Some(int(2)));
        assert!(lp.certify(&r));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = lp1(Sense::Minimize, 0);
        lp.add(vec![int(1)], Relation::Le, int(-1)).unwrap();
        lp.add(vec![int(1)], Relation::Ge, int(1)).unwrap();
        assert_eq!(lp.solve().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = lp1(Sense::Minimize, -1);
        lp.add(vec![int(1)], Relation::Ge, int(0)).unwrap();
        assert_eq!(lp.solve().status, LpStatus::Unbounded);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut lp: LinearProgram<Rat> = LinearProgram::new(2, Sense::Minimize);
        assert!(matches!(
            lp.add(vec![int(1)], Relation::Le, int(0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn maximize_with_equalities_and_certificate() {
        // max x + 2y s.t. x + y = 3, x - y <= 1, y <= 5/2, x,y >= 0
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(ivec(&[1, 2])).unwrap();
        lp.add(ivec(&[1, 1]), Relation::Eq, int(3)).unwrap();
        lp.add(ivec(&[1, -1]), Relation::Le, int(1)).unwrap();
        lp.add(ivec(&[0, 1]), Relation::Le, rat(5, 2)).unwrap();
        let r = lp.solve();
        assert_eq!(r.value, Some(rat(11, 2)));
        assert_eq!(r.point, vec![rat(1, 2), rat(5, 2)]);
        assert!(lp.certify(&r));
    }

    #[test]
    fn degenerate_program_terminates() {
        // Classic cycling example for the largest-coefficient rule.
        let mut lp = LinearProgram::new(4, Sense::Minimize);
        lp.set_objective(vec![rat(-3, 4), int(150), rat(-1, 50), int(6)])
            .unwrap();
        lp.add(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], Relation::Le, int(0))
            .unwrap();
        lp.add(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], Relation::Le, int(0))
            .unwrap();
        lp.add(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1))
            .unwrap();
        let r = lp.solve();
        assert_eq!(r.value, Some(rat(-1, 20)));
        assert!(lp.certify(&r));
    }

    #[test]
    fn float_instantiation_agrees() {
        let mut lp: LinearProgram<f64> = LinearProgram::new(2, Sense::Minimize);
        lp.set_objective(vec![1.0, 1.0]).unwrap();
        lp.add(vec![1.0, 2.0], Relation::Ge, 4.0).unwrap();
        lp.add(vec![3.0, 1.0], Relation::Ge, 3.0).unwrap();
        let r = lp.solve();
        assert!((r.value.unwrap() - 2.2).abs() < 1e-9);
    }
}
