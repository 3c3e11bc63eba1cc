//! Subdifferential of the Minkowski gauge `ρ_F`.
//!
//! `ρ_F` is the gauge of `G = conv(F ∪ {0})`, a sublinear function whose
//! subgradients are the `x*` with `σ_G(x*) ≤ 1`. At `u`,
//! `∂ρ_F(u) = {x* : σ_G(x*) ≤ 1, ⟨x*, u⟩ = ρ_F(u)}`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::linalg::is_zero;
use crate::geometry::rat::ExtRat;
use crate::geometry::{HPolyhedron, Halfspace, Rat};
use crate::mintime::Dynamics;

fn dual_unit_ball(f: &Dynamics) -> Result<Vec<Halfspace>> {
    let g = f
        .sublevel_body()
        .ok_or_else(|| Error::Unsupported("gauge subdifferential needs polytope dynamics".into()))?;
    Ok(g
        .vertices()
        .iter()
        .filter(|v| !is_zero(v))
        .map(|v| Halfspace::new(v.clone(), Rat::from_integer(1.into())))
        .collect())
}

/// `∂ρ_F(0) = {x* : ⟨x*, g⟩ ≤ 1 ∀ g ∈ G}`.
pub fn gauge_subdifferential_at_origin(f: &Dynamics) -> Result<HPolyhedron> {
    HPolyhedron::new(f.dim(), dual_unit_ball(f)?)
}

/// `∂ρ_F(u)`; an error when `ρ_F(u) = ∞` (the subdifferential is empty).
pub fn gauge_subdifferential(f: &Dynamics, u: &[Rat]) -> Result<HPolyhedron> {
    Error::dims(f.dim(), u.len())?;
    let mut hs = dual_unit_ball(f)?;
    if is_zero(u) {
        return HPolyhedron::new(f.dim(), hs);
    }
    let rho = match f.gauge_exact(u)? {
        ExtRat::Finite(v) => v,
        ExtRat::Infinite => {
            return Err(Error::Degenerate("gauge is infinite, subdifferential is empty".into()))
        }
    };
    debug_assert!(!rho.is_zero());
    // ⟨x*, u⟩ = ρ(u) as two inequalities.
    hs.push(Halfspace::new(u.to_vec(), rho.clone()));
    hs.push(Halfspace::new(u.iter().map(|v| -v).collect(), -rho));
    HPolyhedron::new(f.dim(), hs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    #[test]
    fn segment_gauge() {
        let f = Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap();
        let d = gauge_subdifferential(&f, &[rat(1, 2), int(0)]).unwrap();
        assert!(d.contains(&ivec(&[1, 5])));
        assert!(!d.contains(&[rat(1, 2), int(0)]));
        let z = gauge_subdifferential_at_origin(&f).unwrap();
        assert!(z.contains(&ivec(&[-1, 9])));
        assert!(!z.contains(&ivec(&[2, 0])));
        assert!(gauge_subdifferential(&f, &ivec(&[0, 1])).is_err());
    }

    #[test]
    fn square_gauge_at_corner() {
        let f = Dynamics::from_vertices(vec![ivec(&[1, 1]), ivec(&[1, -1]), ivec(&[-1, 1]), ivec(&[-1, -1])]).unwrap();
        // ρ = ‖·‖∞; at (2,2) the subdifferential is the segment [(1,0),(0,1)]/1.
        let d = gauge_subdifferential(&f, &ivec(&[2, 2])).unwrap();
        assert!(d.contains(&[rat(1, 2), rat(1, 2)]));
        assert!(d.contains(&ivec(&[1, 0])));
        assert!(!d.contains(&ivec(&[1, 1])));
    }
}
