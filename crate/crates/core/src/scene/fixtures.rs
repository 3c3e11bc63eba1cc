//! Built-in scenes used by the tests, the acceptance suite and the CLI.
//!
//! * `box-complement`: `Ω = R² ∖ (−1,1)²` with `F = [−1,1]×{0}`, queried on
//!   the boundary. Here `T(x) = 1 − |x₁|` inside the box, which is
//!   discontinuous across the top and bottom edges.
//! * `box-complement-hole`: the same scene queried inside the hole.
//! * `strip-box`: `Ω = [−1,1]²` with `F = [−1,1]×{0}`, so `T(x) = |x₁| − 1`
//!   on the horizontal strip `|x₂| ≤ 1` outside `Ω` and `∞` above and below it.
//! * `ball-complement`: `Ω = {‖x‖ ≥ 1}` with `F` the closed unit ball.
//! * `halfline`: `Ω = (−∞, 0]` with `F = [0, 1]` on the line.

use super::{Scene, SceneOptions, SceneTarget};
use crate::geometry::rat::{int, ivec, rat};
use crate::geometry::{HPolyhedron, Halfspace, Rat};
use crate::mintime::{Dynamics, Target};

pub const FIXTURE_NAMES: [&str; 5] = [
    "box-complement",
    "box-complement-hole",
    "strip-box",
    "ball-complement",
    "halfline",
];

fn horizontal_segment() -> Dynamics {
    Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).expect("segment")
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

/// `R² ∖ (−1,1)²` as the union of four closed half-planes.
pub fn box_complement_target() -> Target {
    let half = |a: [i64; 2]| {
        HPolyhedron::new(2, vec![Halfspace::new(ivec(&a), int(-1))]).expect("half-plane")
    };
    Target::from_pieces(2, vec![half([-1, 0]), half([1, 0]), half([0, -1]), half([0, 1])])
        .expect("four pieces")
}

pub fn strip_box_target() -> Target {
    Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).expect("box"))
}

fn build(name: &str, dynamics: Dynamics, target: SceneTarget, points: Vec<Vec<Rat>>) -> Scene {
    Scene::new(name, dynamics, target, points, options()).expect("fixtures are valid")
}

pub fn fixture(name: &str) -> Option<Scene> {
    Some(match name {
        "box-complement" => build(
            name,
            horizontal_segment(),
            SceneTarget::Polyhedral(box_complement_target()),
            vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1]), vec![int(1), rat(1, 2)]],
        ),
        "box-complement-hole" => build(
            name,
            horizontal_segment(),
            SceneTarget::Polyhedral(box_complement_target()),
            vec![vec![rat(1, 2), rat(1, 2)]],
        ),
        "strip-box" => build(
            name,
            horizontal_segment(),
            SceneTarget::Polyhedral(strip_box_target()),
            vec![ivec(&[1, 0]), ivec(&[0, 1]), vec![int(2), rat(1, 2)]],
        ),
        "ball-complement" => build(
            name,
            Dynamics::ball(2, int(1)).expect("unit ball"),
            SceneTarget::BallComplement { radius: int(1) },
            vec![ivec(&[0, 0])],
        ),
        "halfline" => build(
            name,
            Dynamics::from_vertices(vec![ivec(&[0]), ivec(&[1])]).expect("segment"),
            SceneTarget::Polyhedral(Target::convex(
                HPolyhedron::new(1, vec![Halfspace::new(ivec(&[1]), int(0))]).expect("halfline"),
            )),
            vec![ivec(&[1]), ivec(&[-1]), ivec(&[0])],
        ),
        _ => return None,
    })
}

pub fn all_fixtures() -> Vec<Scene> {
    FIXTURE_NAMES
        .iter()
        .map(|n| fixture(n).expect("listed fixture exists"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::Value;

    #[test]
    fn fixtures_round_trip_and_evaluate() {
        for s in all_fixtures() {
            let again = Scene::from_json(&s.to_json()).unwrap();
            assert!(s.same_data(&again), "{}", s.name);
        }
        let strip = fixture("strip-box").unwrap();
        assert_eq!(strip.time(&[int(2), rat(1, 2)]).unwrap(), Value::Exact(int(1)));
        let line = fixture("halfline").unwrap();
        assert_eq!(line.time(&ivec(&[1])).unwrap(), Value::Infinite);
        let hole = fixture("box-complement-hole").unwrap();
        assert_eq!(hole.time(&hole.points[0]).unwrap(), Value::Exact(rat(1, 2)));
        assert!(fixture("nope").is_none());
    }
}
