//! Sampling schedules shared by every oracle.
//!
//! The defaults can be overridden through the `MINTIME_SAMPLING` environment
//! variable, which holds a JSON object with any subset of the fields of
//! [`SamplingPlan`].

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SAMPLING_ENV: &str = "MINTIME_SAMPLING";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingPlan {
    /// Radii `2^-k` for `k` in this inclusive range.
    pub radius_exponents: (u32, u32),
    /// How many of the smallest radii enter the liminf/limsup estimate.
    pub tail: usize,
    /// Uniform directions per radius (on the circle in the plane; random
    /// unit vectors otherwise).
    pub directions: usize,
    /// Absolute tolerance on normalized difference quotients.
    pub tolerance: f64,
    /// Quotients below `−ε − band` are definite violations; between the
    /// tolerance and the band the verdict is uncertain.
    pub band: f64,
    /// Distances of the base points used by the limiting constructions.
    pub base_scales: Vec<f64>,
    /// Probe radii at a base point at distance `s` are `s²·2^-k` for these
    /// `k`, so the curvature error of a smooth function stays below `s/2`.
    pub base_probe_exponents: Vec<u32>,
    /// Base points must satisfy `|T(x) − T(x̄)| ≤ attentive · scale`.
    pub attentive: f64,
    /// Scaling factor `λ` of the singular construction.
    pub singular_lambda: f64,
    /// Half-width and step of the dual candidate grid.
    pub dual_radius: f64,
    pub dual_step: f64,
    /// A quotient above this value at two consecutive radii means the
    /// function is not locally Lipschitz.
    pub calm_threshold: f64,
    /// Radius of the window used by the calmness probe.
    pub calm_window: f64,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            radius_exponents: (2, 12),
            tail: 3,
            directions: 64,
            tolerance: 1e-9,
            band: 1e-6,
            base_scales: vec![2f64.powi(-6), 2f64.powi(-8), 2f64.powi(-10)],
            base_probe_exponents: vec![0, 1, 2],
            attentive: 32.0,
            singular_lambda: 2f64.powi(-6),
            dual_radius: 2.0,
            dual_step: 0.25,
            calm_threshold: 1e3,
            calm_window: 2f64.powi(-4),
            seed: 0x5eed,
        }
    }
}

impl SamplingPlan {
    /// The default plan with `MINTIME_SAMPLING` overrides applied.
    pub fn from_env() -> Result<Self> {
        match std::env::var(SAMPLING_ENV) {
            Ok(s) if !s.trim().is_empty() => Self::from_json(&s),
            _ => Ok(Self::default()),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let plan: SamplingPlan = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("sampling plan: {e}")))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.radius_exponents;
        let bad = |m: &str| Err(Error::InvalidInput(format!("sampling plan: {m}")));
        if lo >= hi || hi > 40 {
            return bad("radius exponents must satisfy lo < hi ≤ 40");
        }
        if self.tail == 0 || self.tail > (hi - lo + 1) as usize {
            return bad("tail must be between 1 and the number of radii");
        }
        if self.directions < 4 {
            return bad("at least four directions are needed");
        }
        if !(self.tolerance > 0.0) || self.band < self.tolerance {
            return bad("tolerance must be positive and not exceed the band");
        }
        if self.base_scales.iter().any(|s| !(*s > 0.0)) || self.base_probe_exponents.is_empty() {
            return bad("base scales must be positive and probe exponents nonempty");
        }
        if !(self.dual_step > 0.0) || !(self.dual_radius > 0.0) || !(self.singular_lambda > 0.0) {
            return bad("dual grid and λ must be positive");
        }
        Ok(())
    }

    /// Strictly decreasing radii.
    pub fn radii(&self) -> Vec<f64> {
        let (lo, hi) = self.radius_exponents;
        (lo..=hi).map(|k| 2f64.powi(-(k as i32))).collect()
    }

    /// Tolerance for a quotient sampled at radius `h`, allowing for the
    /// rounding error of the function values.
    pub fn tolerance_at(&self, h: f64) -> f64 {
        self.tolerance.max(1e-14 / h)
    }

    pub fn band_at(&self, h: f64) -> f64 {
        self.band.max(1e-11 / h)
    }

    /// Unit directions: uniform ones plus the given structural directions.
    pub fn directions(&self, dim: usize, structural: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        match dim {
            1 => {
                out.push(vec![1.0]);
                out.push(vec![-1.0]);
            }
            2 => {
                for k in 0..self.directions {
                    let a = 2.0 * PI * k as f64 / self.directions as f64;
                    out.push(vec![a.cos(), a.sin()]);
                }
            }
            _ => {
                for i in 0..dim {
                    for s in [1.0, -1.0] {
                        let mut e = vec![0.0; dim];
                        e[i] = s;
                        out.push(e);
                    }
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ dim as u64);
                while out.len() < self.directions.max(2 * dim) {
                    let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    if let Some(u) = unit(&v) {
                        out.push(u);
                    }
                }
            }
        }
        for s in structural {
            if let Some(u) = unit(s) {
                // Structural directions replace nearly identical uniform ones.
                match out.iter().position(|d| dist_sq(d, &u) < 1e-20) {
                    Some(i) => out[i] = u,
                    None => out.push(u),
                }
            }
        }
        out
    }

    /// Points of the dual grid `[−R, R]^dim` with the configured step.
    pub fn dual_grid(&self, dim: usize) -> Vec<Vec<f64>> {
        let n = (self.dual_radius / self.dual_step).round() as i64;
        let axis: Vec<f64> = (-n..=n).map(|i| i as f64 * self.dual_step).collect();
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for _ in 0..dim {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for p in &out {
                for a in &axis {
                    let mut q = p.clone();
                    q.push(*a);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }
}

pub(crate) fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    (n > 1e-300 && n.is_finite()).then(|| v.iter().map(|a| a / n).collect())
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn axpy(x: &[f64], h: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + h * b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = SamplingPlan::default();
        p.validate().unwrap();
        let r = p.radii();
        assert_eq!(r.len(), 11);
        assert!(r.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(p.dual_grid(2).len(), 17 * 17);
    }

    #[test]
    fn overrides_merge_with_defaults() {
        let p = SamplingPlan::from_json(r#"{"directions": 16, "tail": 2}"#).unwrap();
        assert_eq!(p.directions, 16);
        assert_eq!(p.tail, 2);
        assert_eq!(p.radius_exponents, (2, 12));
        assert!(SamplingPlan::from_json(r#"{"directions": 2}"#).is_err());
        assert!(SamplingPlan::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn structural_directions_are_added_once() {
        let p = SamplingPlan::default();
        let d = p.directions(2, &[vec![2.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]);
        assert_eq!(d.len(), 65);
        assert!(d.contains(&vec![1.0, 0.0]));
    }
}
