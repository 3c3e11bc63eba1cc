//! Brute-force approximations of the definitional constructions.
//!
//! Every oracle works from function values alone (or from exact membership
//! in `Ω` for normals) and is used only to adjudicate the formula-based
//! results; nothing computed here feeds back into the exact modules.

pub mod calm;
pub mod cloud;
pub mod convex;
pub mod normals;
pub mod plan;
pub mod probe;
pub mod time;

pub use calm::{calmness_probe, CalmnessEstimate};
pub use cloud::{
    sampled_limiting_subdiff, sampled_one_sided_subdiff, sampled_singular_subdiff, CloudPoint,
    DualCloud, ScaleDiagnostics,
};
pub use convex::{definitional_convex_subgradient_check, DefinitionalProbe};
pub use normals::sampled_eps_normals;
pub use plan::{SamplingPlan, SAMPLING_ENV};
pub use probe::{fd_gradient, sampled_frechet_subdiff, DualPoint, FrechetCloud, Probe};
pub use time::{time_function, BallTime, FnTime, PolyhedralTime, TimeFunction};

use crate::geometry::linalg::{dedup_sorted, is_zero, neg, primitive, unit};
use crate::geometry::rat::vec_to_f64;
use crate::geometry::Rat;
use crate::mintime::{Dynamics, Target};

/// Directions along which `T` can have kinks: the vertices of `F`, the
/// facet normals of the target and of `G = conv(F ∪ {0})` together with
/// their perpendiculars (in the plane), and the coordinate axes. Both signs
/// of every direction are included; the list is sorted and deduplicated.
pub fn structural_directions(f: &Dynamics, omega: &Target) -> Vec<Vec<Rat>> {
    let dim = f.dim();
    let mut raw: Vec<Vec<Rat>> = (0..dim).map(|i| unit(dim, i)).collect();
    if let Some(vs) = f.vertices() {
        raw.extend(vs.iter().cloned());
    }
    let mut normals: Vec<Vec<Rat>> = omega
        .pieces()
        .iter()
        .flat_map(|p| p.halfspaces().iter().map(|h| h.normal.clone()))
        .collect();
    if let Some(g) = f.sublevel_body() {
        if let Ok(h) = g.to_hpolyhedron() {
            normals.extend(h.halfspaces().iter().map(|h| h.normal.clone()));
        }
    }
    for n in normals {
        if dim == 2 {
            raw.push(vec![-n[1].clone(), n[0].clone()]);
        }
        raw.push(n);
    }
    let mut out = Vec::new();
    for d in raw {
        if is_zero(&d) {
            continue;
        }
        let p = primitive(&d);
        out.push(neg(&p));
        out.push(p);
    }
    dedup_sorted(out)
}

/// [`structural_directions`] as floating-point vectors.
pub fn structural_directions_f64(f: &Dynamics, omega: &Target) -> Vec<Vec<f64>> {
    structural_directions(f, omega)
        .iter()
        .map(|d| vec_to_f64(d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::ivec;
    use crate::geometry::HPolyhedron;

    #[test]
    fn structural_directions_of_the_strip_box() {
        let f = Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap();
        let omega = Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap());
        let d = structural_directions(&f, &omega);
        assert!(d.contains(&ivec(&[1, 0])) && d.contains(&ivec(&[0, -1])));
        assert!(d.iter().all(|v| d.contains(&neg(v))));
    }
}
