//! Seeded generators of small planar scenes with rational data on coarse
//! grids: corners of targets on multiples of 1/2, query points on multiples
//! of 1/4 and velocity vertices on multiples of 1/2.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Scene, SceneOptions, SceneTarget};
use crate::geometry::linalg::{add, scale};
use crate::geometry::rat::{int, rat};
use crate::geometry::{HPolyhedron, Halfspace, Rat, VPolytope};
use crate::mintime::{minimal_time, Dynamics, Target};

fn half(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    rat(rng.gen_range(2 * lo..=2 * hi), 2)
}

fn quarter_point(rng: &mut ChaCha8Rng, lim: i64) -> Vec<Rat> {
    (0..2).map(|_| rat(rng.gen_range(-4 * lim..=4 * lim), 4)).collect()
}

/// Random polygonal velocity set. One third of the draws contain the origin
/// in the interior, one third have the origin as a vertex, and the rest
/// are arbitrary (often missing the origin).
pub fn random_dynamics(rng: &mut ChaCha8Rng) -> Dynamics {
    loop {
        let kind = rng.gen_range(0..3);
        let n = rng.gen_range(2..=4);
        let mut vs: Vec<Vec<Rat>> = Vec::new();
        match kind {
            0 => {
                // One vertex per quadrant keeps the origin inside.
                for (sx, sy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
                    let x = rat(sx * rng.gen_range(1..=4), 2);
                    let y = rat(sy * rng.gen_range(1..=4), 2);
                    vs.push(vec![x, y]);
                }
            }
            1 => {
                vs.push(vec![int(0), int(0)]);
                for _ in 0..n {
                    vs.push(vec![half(rng, -2, 2), half(rng, -2, 2)]);
                }
            }
            _ => {
                for _ in 0..n {
                    vs.push(vec![half(rng, -2, 2), half(rng, -2, 2)]);
                }
            }
        }
        if vs.iter().any(|v| v.iter().any(|a| *a != int(0))) {
            if let Ok(d) = Dynamics::from_vertices(vs) {
                return d;
            }
        }
    }
}

fn random_box(rng: &mut ChaCha8Rng) -> HPolyhedron {
    let lo = vec![half(rng, -2, 1), half(rng, -2, 1)];
    let hi: Vec<Rat> = lo
        .iter()
        .map(|a| a + rat(rng.gen_range(1..=4), 2))
        .collect();
    HPolyhedron::boxed(&lo, &hi).expect("box")
}

/// A box, the hull of a few random points, a half-plane or a wedge.
fn random_convex_piece(rng: &mut ChaCha8Rng) -> HPolyhedron {
    match rng.gen_range(0..5) {
        0 | 1 => random_box(rng),
        2 | 3 => loop {
            let n = rng.gen_range(3..=5);
            let pts: Vec<Vec<Rat>> = (0..n).map(|_| vec![half(rng, -2, 2), half(rng, -2, 2)]).collect();
            if let Ok(h) = VPolytope::from_points(pts).and_then(|p| p.to_hpolyhedron()) {
                return h.reduced();
            }
        },
        _ => {
            let apex = vec![half(rng, -1, 1), half(rng, -1, 1)];
            let k = rng.gen_range(1..=2);
            let mut hs = Vec::new();
            while hs.len() < k {
                let a = vec![int(rng.gen_range(-2..=2)), int(rng.gen_range(-2..=2))];
                if a.iter().all(|c| *c == int(0)) {
                    continue;
                }
                let b = crate::geometry::linalg::dot(&a, &apex);
                hs.push(Halfspace::new(a, b));
            }
            HPolyhedron::new(2, hs).expect("contains its apex").reduced()
        }
    }
}

/// Boundary points of a piece: its vertices and one point on each facet.
fn boundary_points(p: &HPolyhedron) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    let Ok(v) = p.vrep() else {
        return out;
    };
    out.extend(v.vertices.iter().cloned());
    for h in p.halfspaces() {
        let tight: Vec<&Vec<Rat>> = v.vertices.iter().filter(|x| h.is_tight(x)).collect();
        match tight.len() {
            0 => {
                // A facet without vertices (half-plane or strip).
                let n2 = crate::geometry::linalg::norm_sq(&h.normal);
                let foot = scale(&(&h.offset / n2), &h.normal);
                if p.contains(&foot) {
                    out.push(foot);
                }
            }
            1 => {
                // A facet that is a ray: step along the ray.
                if let Some(r) = v.rays.iter().find(|r| crate::geometry::linalg::dot(&h.normal, r) == int(0)) {
                    out.push(add(tight[0], r));
                }
            }
            _ => {
                let s = add(tight[0], tight[1]);
                out.push(scale(&rat(1, 2), &s));
            }
        }
    }
    out
}

/// Random query points outside the target with finite time.
fn outside_points(rng: &mut ChaCha8Rng, f: &Dynamics, omega: &Target, count: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for _ in 0..200 {
        if out.len() >= count {
            break;
        }
        let x = quarter_point(rng, 3);
        if omega.contains(&x) || out.contains(&x) {
            continue;
        }
        if minimal_time(f, omega, &x).is_ok_and(|e| e.value.is_finite()) {
            out.push(x);
        }
    }
    out
}

fn pick<T: Clone>(rng: &mut ChaCha8Rng, items: &[T], count: usize) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v.truncate(count);
    v
}

fn options() -> SceneOptions {
    SceneOptions {
        eps: Some(rat(1, 10)),
        eta: Some(rat(1, 10)),
        r: None,
        lambda: Some(rat(1, 2)),
        sampling: None,
    }
}

/// One or two random convex pieces, random dynamics, quarter-grid points
/// (inside and outside the target).
pub fn random_polyhedral_scene(seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_dynamics(&mut rng);
    let k = rng.gen_range(1..=2);
    let pieces: Vec<HPolyhedron> = (0..k).map(|_| random_convex_piece(&mut rng)).collect();
    let omega = Target::from_pieces(2, pieces).expect("nonempty pieces");
    let points = (0..6).map(|_| quarter_point(&mut rng, 3)).collect();
    Scene::new(
        format!("random-polyhedral-{seed}"),
        f,
        SceneTarget::Polyhedral(omega),
        points,
        options(),
    )
    .expect("valid random scene")
}

/// A single random convex piece with boundary, interior and reachable
/// outside query points.
pub fn random_convex_scene(seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_dynamics(&mut rng);
    let piece = random_convex_piece(&mut rng);
    let mut points = pick(&mut rng, &boundary_points(&piece), 3);
    points.push(piece.some_point());
    let omega = Target::convex(piece);
    points.extend(outside_points(&mut rng, &f, &omega, 2));
    points.dedup();
    Scene::new(
        format!("random-convex-{seed}"),
        f,
        SceneTarget::Polyhedral(omega),
        points,
        options(),
    )
    .expect("valid random scene")
}

/// The union of two random boxes with boundary and reachable outside
/// query points.
pub fn random_two_box_scene(seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_dynamics(&mut rng);
    let a = random_box(&mut rng);
    let b = random_box(&mut rng);
    let mut boundary = boundary_points(&a);
    boundary.extend(boundary_points(&b));
    let omega = Target::from_pieces(2, vec![a, b]).expect("two boxes");
    // Keep only points on the boundary of the union.
    boundary.retain(|x| !interior_of_union(&omega, x));
    let mut points = pick(&mut rng, &boundary, 4);
    points.extend(outside_points(&mut rng, &f, &omega, 2));
    Scene::new(
        format!("random-two-box-{seed}"),
        f,
        SceneTarget::Polyhedral(omega),
        points,
        options(),
    )
    .expect("valid random scene")
}

/// Whether a small box around `x` lies in the union (checked at the
/// corners and edge midpoints of a box of half-width 1/64).
fn interior_of_union(omega: &Target, x: &[Rat]) -> bool {
    let h = rat(1, 64);
    [-1i64, 0, 1].iter().all(|i| {
        [-1i64, 0, 1]
            .iter()
            .all(|j| omega.contains(&[&x[0] + &h * int(*i), &x[1] + &h * int(*j)]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_valid() {
        for seed in 0..10 {
            let a = random_convex_scene(seed);
            let b = random_convex_scene(seed);
            assert!(a.same_data(&b));
            assert!(a.is_convex());
            assert!(!a.points.is_empty());
            let t = random_two_box_scene(seed);
            assert_eq!(t.polyhedral().unwrap().pieces().len(), 2);
            for p in &t.points {
                assert!(t.time(p).unwrap().is_finite());
            }
            random_polyhedral_scene(seed);
        }
    }
}
