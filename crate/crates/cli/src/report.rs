//! JSON renderings of exact values and sets.

use serde_json::{json, Value as Json};

use mintime_core::geometry::rat::fmt_rat;
use mintime_core::geometry::{HPolyhedron, PolyhedralUnion, Rat, Value};
use mintime_core::subdiff::SubdiffResult;
use mintime_core::Result;

pub fn point(x: &[Rat]) -> Json {
    Json::Array(x.iter().map(|a| Json::String(fmt_rat(a))).collect())
}

pub fn points(xs: &[Vec<Rat>]) -> Json {
    Json::Array(xs.iter().map(|x| point(x)).collect())
}

pub fn value(v: &Value) -> Json {
    json!({
        "exact": v.to_string(),
        "approx": if v.is_finite() { json!(v.to_f64()) } else { json!("inf") },
    })
}

/// H-representation `a·x ≤ b` and, when available, the generators.
pub fn piece(p: &HPolyhedron) -> Json {
    let halfspaces: Vec<Json> = p
        .halfspaces()
        .iter()
        .map(|h| json!({ "normal": point(&h.normal), "offset": fmt_rat(&h.offset) }))
        .collect();
    let mut out = json!({ "halfspaces": halfspaces });
    if let Ok(v) = p.vrep() {
        out["vertices"] = points(&v.vertices);
        out["rays"] = points(&v.rays);
        out["lines"] = points(&v.lines);
    }
    out
}

pub fn set(u: &PolyhedralUnion) -> Json {
    json!({
        "empty": u.is_empty(),
        "pieces": u.pieces().iter().map(piece).collect::<Vec<_>>(),
    })
}

pub fn subdiff(r: &SubdiffResult) -> Json {
    json!({
        "exactness": r.exactness.to_string(),
        "source": r.source.tag(),
        "origin_only": r.is_origin_only(),
        "set": set(&r.set),
    })
}

pub fn render(doc: &Json) -> Result<String> {
    serde_json::to_string_pretty(doc)
        .map(|s| s + "\n")
        .map_err(|e| mintime_core::Error::InvalidInput(e.to_string()))
}
