//! Versioned JSON encoding of scenes. Rationals are strings `"p/q"` (plain
//! integers are also accepted on input); `"inf"` is accepted where an
//! extended value makes sense.

use serde::{Deserialize, Serialize};

use super::{Scene, SceneOptions, SceneTarget};
use crate::error::{Error, Result};
use crate::geometry::rat::{fmt_rat, parse_rat, ExtRat};
use crate::geometry::{HPolyhedron, Halfspace, Rat};
use crate::mintime::{Dynamics, Target};
use crate::oracle::SamplingPlan;

pub const SCENE_VERSION: u32 = 1;

const BALL_COMPLEMENT: &str = "ball-complement";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawRat {
    Text(String),
    Int(i64),
}

impl RawRat {
    fn of(r: &Rat) -> Self {
        RawRat::Text(fmt_rat(r))
    }

    fn ext(&self, path: &str) -> Result<ExtRat> {
        match self {
            RawRat::Text(s) => ExtRat::parse(s).map_err(|e| Error::scene(path, e.to_string())),
            RawRat::Int(n) => Ok(ExtRat::Finite(Rat::from_integer((*n).into()))),
        }
    }

    fn finite(&self, path: &str) -> Result<Rat> {
        match self {
            RawRat::Text(s) => parse_rat(s).map_err(|e| Error::scene(path, e.to_string())),
            RawRat::Int(n) => Ok(Rat::from_integer((*n).into())),
        }
    }
}

fn vector(raw: &[RawRat], dim: usize, path: &str) -> Result<Vec<Rat>> {
    if raw.len() != dim {
        return Err(Error::scene(
            path,
            format!("expected {dim} coordinates, found {}", raw.len()),
        ));
    }
    raw.iter()
        .enumerate()
        .map(|(i, r)| r.finite(&format!("{path}[{i}]")))
        .collect()
}

fn raw_vector(v: &[Rat]) -> Vec<RawRat> {
    v.iter().map(RawRat::of).collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawDynamics {
    Vertices(Vec<Vec<RawRat>>),
    Ball { radius: RawRat },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHalfspace {
    normal: Vec<RawRat>,
    offset: RawRat,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawPiece {
    Halfspaces(Vec<RawHalfspace>),
    Box { lo: Vec<RawRat>, hi: Vec<RawRat> },
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pieces: Option<Vec<RawPiece>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closed_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<RawRat>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<RawRat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<RawRat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<RawRat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<RawRat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sampling: Option<SamplingPlan>,
}

impl RawOptions {
    fn is_empty(&self) -> bool {
        self.eps.is_none()
            && self.eta.is_none()
            && self.r.is_none()
            && self.lambda.is_none()
            && self.sampling.is_none()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    version: u32,
    name: String,
    dim: usize,
    dynamics: RawDynamics,
    target: RawTarget,
    #[serde(default)]
    points: Vec<Vec<RawRat>>,
    #[serde(default, skip_serializing_if = "RawOptions::is_empty")]
    options: RawOptions,
}

fn dynamics(raw: &RawDynamics, dim: usize) -> Result<Dynamics> {
    match raw {
        RawDynamics::Vertices(vs) => {
            if vs.is_empty() {
                return Err(Error::scene("dynamics.vertices", "at least one vertex is needed"));
            }
            let vs = vs
                .iter()
                .enumerate()
                .map(|(i, v)| vector(v, dim, &format!("dynamics.vertices[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Dynamics::from_vertices(vs).map_err(|e| Error::scene("dynamics.vertices", e.to_string()))
        }
        RawDynamics::Ball { radius } => match radius.ext("dynamics.ball.radius")? {
            ExtRat::Infinite => Err(Error::scene("dynamics.ball.radius", "dynamics must be bounded")),
            ExtRat::Finite(r) => {
                Dynamics::ball(dim, r).map_err(|e| Error::scene("dynamics.ball.radius", e.to_string()))
            }
        },
    }
}

fn piece(raw: &RawPiece, dim: usize, path: &str) -> Result<HPolyhedron> {
    let built = match raw {
        RawPiece::Halfspaces(hs) => {
            let mut out = Vec::new();
            for (j, h) in hs.iter().enumerate() {
                let p = format!("{path}.halfspaces[{j}]");
                let normal = vector(&h.normal, dim, &format!("{p}.normal"))?;
                // An infinite offset is no constraint at all.
                if let ExtRat::Finite(b) = h.offset.ext(&format!("{p}.offset"))? {
                    out.push(Halfspace::new(normal, b));
                }
            }
            HPolyhedron::try_new(dim, out)
        }
        RawPiece::Box { lo, hi } => {
            let lo = vector(lo, dim, &format!("{path}.box.lo"))?;
            let hi = vector(hi, dim, &format!("{path}.box.hi"))?;
            if lo.iter().zip(&hi).any(|(a, b)| a > b) {
                return Err(Error::scene(format!("{path}.box"), "lower corner exceeds upper corner"));
            }
            HPolyhedron::boxed(&lo, &hi).map(Some)
        }
    };
    built
        .map_err(|e| Error::scene(path, e.to_string()))?
        .ok_or_else(|| Error::scene(path, "piece is empty"))
}

fn target(raw: &RawTarget, dim: usize) -> Result<SceneTarget> {
    match (&raw.pieces, &raw.closed_form) {
        (Some(pieces), None) => {
            if raw.radius.is_some() {
                return Err(Error::scene("target.radius", "only closed-form targets take a radius"));
            }
            if pieces.is_empty() {
                return Err(Error::scene("target.pieces", "target must have at least one piece"));
            }
            let pieces = pieces
                .iter()
                .enumerate()
                .map(|(i, p)| piece(p, dim, &format!("target.pieces[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Target::from_pieces(dim, pieces)
                .map(SceneTarget::Polyhedral)
                .map_err(|e| Error::scene("target.pieces", e.to_string()))
        }
        (None, Some(name)) if name == BALL_COMPLEMENT => {
            let radius = raw
                .radius
                .as_ref()
                .ok_or_else(|| Error::scene("target.radius", "missing radius"))?
                .finite("target.radius")?;
            Ok(SceneTarget::BallComplement { radius })
        }
        (None, Some(name)) => Err(Error::scene(
            "target.closed_form",
            format!("unknown closed form `{name}` (expected `{BALL_COMPLEMENT}`)"),
        )),
        _ => Err(Error::scene(
            "target",
            "give exactly one of `pieces` and `closed_form`",
        )),
    }
}

fn options(raw: &RawOptions) -> Result<SceneOptions> {
    let get = |v: &Option<RawRat>, field: &str| -> Result<Option<Rat>> {
        v.as_ref().map(|r| r.finite(&format!("options.{field}"))).transpose()
    };
    Ok(SceneOptions {
        eps: get(&raw.eps, "eps")?,
        eta: get(&raw.eta, "eta")?,
        r: get(&raw.r, "r")?,
        lambda: get(&raw.lambda, "lambda")?,
        sampling: raw.sampling.clone(),
    })
}

pub(super) fn parse(text: &str) -> Result<Scene> {
    let raw: RawScene = serde_json::from_str(text).map_err(|e| {
        Error::scene(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    if raw.version != SCENE_VERSION {
        return Err(Error::scene(
            "version",
            format!("unsupported version {} (expected {SCENE_VERSION})", raw.version),
        ));
    }
    if raw.dim == 0 {
        return Err(Error::scene("dim", "dimension must be positive"));
    }
    let dim = raw.dim;
    let points = raw
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| vector(p, dim, &format!("points[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Scene::new(
        raw.name.clone(),
        dynamics(&raw.dynamics, dim)?,
        target(&raw.target, dim)?,
        points,
        options(&raw.options)?,
    )
}

pub(super) fn render(scene: &Scene) -> String {
    let dynamics = match scene.dynamics.ball_radius() {
        Some(r) => RawDynamics::Ball {
            radius: RawRat::of(r),
        },
        None => RawDynamics::Vertices(
            scene
                .dynamics
                .vertices()
                .expect("polytope dynamics")
                .iter()
                .map(|v| raw_vector(v))
                .collect(),
        ),
    };
    let target = match &scene.target {
        SceneTarget::Polyhedral(t) => RawTarget {
            pieces: Some(
                t.pieces()
                    .iter()
                    .map(|p| {
                        RawPiece::Halfspaces(
                            p.halfspaces()
                                .iter()
                                .map(|h| RawHalfspace {
                                    normal: raw_vector(&h.normal),
                                    offset: RawRat::of(&h.offset),
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            ),
            ..Default::default()
        },
        SceneTarget::BallComplement { radius } => RawTarget {
            closed_form: Some(BALL_COMPLEMENT.into()),
            radius: Some(RawRat::of(radius)),
            ..Default::default()
        },
    };
    let o = &scene.options;
    let raw = RawScene {
        version: SCENE_VERSION,
        name: scene.name.clone(),
        dim: scene.dim(),
        dynamics,
        target,
        points: scene.points.iter().map(|p| raw_vector(p)).collect(),
        options: RawOptions {
            eps: o.eps.as_ref().map(RawRat::of),
            eta: o.eta.as_ref().map(RawRat::of),
            r: o.r.as_ref().map(RawRat::of),
            lambda: o.lambda.as_ref().map(RawRat::of),
            sampling: o.sampling.clone(),
        },
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("scene serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const STRIP: &str = r#"{
        "version": 1, "name": "s", "dim": 2,
        "dynamics": {"vertices": [["-1", "0"], [1, 0]]},
        "target": {"pieces": [{"box": {"lo": [-1, -1], "hi": ["1", "1"]}}]},
        "points": [["2", "1/2"]],
        "options": {"eps": "1/10"}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let s = parse(STRIP).unwrap();
        assert_eq!(s.points[0][1], crate::geometry::rat::rat(1, 2));
        let again = parse(&render(&s)).unwrap();
        assert!(s.same_data(&again));
        assert_eq!(render(&again), render(&s));
    }

    #[test]
    fn errors_name_the_field() {
        let bad = STRIP.replace(r#"[["2", "1/2"]]"#, r#"[["2", "1/0"]]"#);
        match parse(&bad) {
            Err(Error::Scene { path, .. }) => assert_eq!(path, "points[0][1]"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = STRIP.replace(r#""lo": [-1, -1]"#, r#""lo": [3, -1]"#);
        assert!(matches!(parse(&bad), Err(Error::Scene { path, .. }) if path == "target.pieces[0].box"));
        let syntax = parse("{\n  \"version\": 1,\n  oops }");
        assert!(matches!(syntax, Err(Error::Scene { path, .. }) if path.starts_with("line 3")));
        let unbounded = STRIP.replace(r#"{"vertices": [["-1", "0"], [1, 0]]}"#, r#"{"ball": {"radius": "inf"}}"#);
        assert!(matches!(parse(&unbounded), Err(Error::Scene { path, .. }) if path == "dynamics.ball.radius"));
    }

    #[test]
    fn empty_target_is_rejected() {
        let empty = STRIP.replace(
            r#"[{"box": {"lo": [-1, -1], "hi": ["1", "1"]}}]"#,
            r#"[{"halfspaces": [{"normal": [1, 0], "offset": -1}, {"normal": [-1, 0], "offset": -1}]}]"#,
        );
        assert!(matches!(parse(&empty), Err(Error::Scene { path, .. }) if path == "target.pieces[0]"));
        let none = STRIP.replace(r#"[{"box": {"lo": [-1, -1], "hi": ["1", "1"]}}]"#, "[]");
        assert!(parse(&none).is_err());
    }
}
