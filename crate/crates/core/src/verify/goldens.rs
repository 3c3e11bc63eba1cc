//! Known values and sets of the built-in scenes, recomputed and compared
//! exactly.

use super::{formula_subdiffs, CheckRecord, Recorder, Suite};
use crate::error::Result;
use crate::geometry::rat::{int, ivec, rat, Value};
use crate::geometry::{HPolyhedron, Halfspace, PolyhedralUnion, Rat};
use crate::mintime::identities::show_point;
use crate::mintime::projection_set;
use crate::scene::Scene;

fn rect(lo: [Rat; 2], hi: [Rat; 2]) -> PolyhedralUnion {
    PolyhedralUnion::from_piece(HPolyhedron::boxed(&lo, &hi).expect("box"))
}

fn point(p: &[Rat]) -> PolyhedralUnion {
    PolyhedralUnion::from_piece(HPolyhedron::singleton(p))
}

/// `{0} × (−∞, 0]` when `sign = −1`, `{0} × [0, ∞)` when `sign = 1`.
fn vertical_ray(sign: i64) -> PolyhedralUnion {
    PolyhedralUnion::from_piece(
        HPolyhedron::new(
            2,
            vec![
                Halfspace::new(ivec(&[1, 0]), int(0)),
                Halfspace::new(ivec(&[-1, 0]), int(0)),
                Halfspace::new(ivec(&[0, -sign]), int(0)),
            ],
        )
        .expect("ray"),
    )
}

fn origin() -> PolyhedralUnion {
    point(&ivec(&[0, 0]))
}

struct Goldens<'a> {
    scene: &'a Scene,
    rec: Recorder,
}

impl Goldens<'_> {
    fn value(&mut self, x: &[Rat], expected: Value) -> Result<()> {
        let got = self.scene.time(x)?;
        let ok = got == expected;
        self.rec.outcome(
            format!("T at {}", show_point(x)),
            ok,
            format!("computed {got}, expected {expected}"),
        );
        Ok(())
    }

    fn subdiffs(&mut self, x: &[Rat], basic: PolyhedralUnion, singular: PolyhedralUnion) -> Result<()> {
        let (b, s) = formula_subdiffs(self.scene, x)?;
        for (name, got, want) in [("basic", &b.set, &basic), ("singular", &s.set, &singular)] {
            let ok = got.set_eq(want);
            self.rec.outcome(
                format!("{name} subdifferential at {}", show_point(x)),
                ok,
                format!("{} from `{}`", b.exactness, if name == "basic" { b.source.tag() } else { s.source.tag() }),
            );
        }
        Ok(())
    }
}

pub(super) fn run(scene: &Scene) -> Result<Vec<CheckRecord>> {
    let mut g = Goldens {
        scene,
        rec: Recorder::new(Suite::Goldens, scene),
    };
    let half = rat(1, 2);
    match scene.name.as_str() {
        "box-complement" => {
            g.value(&[half.clone(), half.clone()], Value::Exact(half.clone()))?;
            g.subdiffs(&ivec(&[1, 0]), rect([int(-1), int(0)], [int(0), int(0)]), origin())?;
            g.subdiffs(&ivec(&[0, 1]), vertical_ray(-1), vertical_ray(-1))?;
        }
        "box-complement-hole" => {
            let x = vec![half.clone(), half.clone()];
            g.value(&x, Value::Exact(half.clone()))?;
            let f = &scene.dynamics;
            let omega = scene.require_polyhedral("the projection")?;
            let proj = projection_set(f, omega, &x)?;
            let want = point(&[int(1), half.clone()]);
            g.rec.outcome(
                format!("projection of {}", show_point(&x)),
                proj.pieces.set_eq(&want),
                format!("vertices {:?}", proj.vertices()?.iter().map(|v| show_point(v)).collect::<Vec<_>>()),
            );
            g.subdiffs(&x, point(&ivec(&[-1, 0])), origin())?;
        }
        "strip-box" => {
            g.value(&[int(2), half.clone()], Value::Exact(int(1)))?;
            g.value(&[int(0), int(2)], Value::Infinite)?;
            g.subdiffs(&ivec(&[1, 0]), rect([int(0), int(0)], [int(1), int(0)]), origin())?;
            g.subdiffs(&ivec(&[0, 1]), vertical_ray(1), vertical_ray(1))?;
            g.subdiffs(&[int(2), half.clone()], point(&ivec(&[1, 0])), origin())?;
        }
        "ball-complement" => {
            let b = scene.ball_complement().expect("ball-complement scene");
            let zero = ivec(&[0, 0]);
            g.value(&zero, Value::Exact(int(1)))?;
            let cone = b.enlargement_normal_cone(&zero)?;
            g.rec.outcome(
                format!("normal cone of the enlargement at {}", show_point(&zero)),
                cone.is_zero(),
                "the enlargement is the complement of the origin",
            );
        }
        "halfline" => {
            g.value(&ivec(&[1]), Value::Infinite)?;
            g.value(&ivec(&[-1]), Value::Exact(int(0)))?;
            g.value(&ivec(&[0]), Value::Exact(int(0)))?;
        }
        // Other scenes have no stored values.
        _ => {}
    }
    Ok(g.rec.finish())
}
