//! The complement of an open ball under ball dynamics, handled in closed form:
//! `Ω = {‖x‖ ≥ R}`, `F = s·B`, `T(x) = max(0, R − ‖x‖)/s`.
//!
//! At the origin this function has a strict local maximum, which makes it the
//! standard example where the enlargement normal cone `N(0; Ω_r) = {0}` says
//! nothing about the (nonempty) limiting subdifferential.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::linalg::{is_zero, neg, norm_sq, scale};
use crate::geometry::rat::{exact_sqrt, sqrt_interval, RatInterval, Value};
use crate::geometry::{PolyhedralCone, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallComplement {
    dim: usize,
    radius: Rat,
    speed: Rat,
}

impl BallComplement {
    pub fn new(dim: usize, radius: Rat, speed: Rat) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if !radius.is_positive() || !speed.is_positive() {
            return Err(Error::InvalidInput("radius and speed must be positive".into()));
        }
        Ok(BallComplement { dim, radius, speed })
    }

    /// The unit-ball complement with unit-speed ball dynamics in the plane.
    pub fn unit_plane() -> Self {
        Self::new(2, Rat::one(), Rat::one()).expect("valid constants")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> &Rat {
        &self.radius
    }

    pub fn speed(&self) -> &Rat {
        &self.speed
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        norm_sq(x) >= &self.radius * &self.radius
    }

    pub fn time(&self, x: &[Rat]) -> Result<Value> {
        Error::dims(self.dim, x.len())?;
        if self.contains(x) {
            return Ok(Value::Exact(Rat::zero()));
        }
        let n2 = norm_sq(x);
        Ok(match exact_sqrt(&n2) {
            Some(n) => Value::Exact((&self.radius - n) / &self.speed),
            None => {
                let iv = sqrt_interval(&n2);
                // R − ‖x‖ is decreasing in ‖x‖.
                Value::Enclosed(RatInterval {
                    lo: (&self.radius - iv.hi) / &self.speed,
                    hi: (&self.radius - iv.lo) / &self.speed,
                })
            }
        })
    }

    pub fn time_f64(&self, x: &[f64]) -> f64 {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let r = crate::geometry::rat::to_f64(&self.radius);
        let s = crate::geometry::rat::to_f64(&self.speed);
        ((r - n) / s).max(0.0)
    }

    /// `N(x̄; Ω_r)` with `r = T(x̄) > 0`: the sublevel set is
    /// `{‖x‖ ≥ ‖x̄‖}`, which is the whole space at the origin.
    pub fn enlargement_normal_cone(&self, xbar: &[Rat]) -> Result<PolyhedralCone> {
        Error::dims(self.dim, xbar.len())?;
        if self.contains(xbar) {
            return Err(Error::WrongRegime("point lies in the target".into()));
        }
        if is_zero(xbar) {
            return Ok(PolyhedralCone::zero(self.dim));
        }
        PolyhedralCone::generated_by(self.dim, vec![neg(xbar)])
    }

    /// Gradient `−x̄/(s‖x̄‖)` off the origin and outside the target, when it
    /// is rational.
    pub fn gradient(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        if self.contains(x) || is_zero(x) {
            return None;
        }
        let n = exact_sqrt(&norm_sq(x))?;
        Some(scale(&(-Rat::one() / (&self.speed * n)), x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    #[test]
    fn values() {
        let b = BallComplement::unit_plane();
        assert_eq!(b.time(&ivec(&[0, 0])).unwrap(), Value::Exact(int(1)));
        assert_eq!(b.time(&[rat(3, 10), rat(4, 10)]).unwrap(), Value::Exact(rat(1, 2)));
        assert_eq!(b.time(&ivec(&[2, 0])).unwrap(), Value::Exact(int(0)));
        let v = b.time(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert!((v.to_f64() - (1.0 - 0.5f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn normal_cone_at_origin_is_trivial() {
        let b = BallComplement::unit_plane();
        assert!(b.enlargement_normal_cone(&ivec(&[0, 0])).unwrap().is_zero());
        let c = b.enlargement_normal_cone(&[rat(3, 10), rat(4, 10)]).unwrap();
        assert!(c.contains(&ivec(&[-3, -4])) && !c.contains(&ivec(&[3, 4])));
        assert_eq!(b.gradient(&[rat(3, 10), rat(4, 10)]), Some(vec![rat(-3, 5), rat(-4, 5)]));
    }
}
