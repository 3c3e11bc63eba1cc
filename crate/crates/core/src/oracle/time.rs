//! Floating-point evaluators of `T` used by the sampling oracles.
//!
//! The oracles only ever query values, so anything implementing
//! [`TimeFunction`] can be probed: the polyhedral evaluator below, the closed
//! form of the ball complement, or an arbitrary closure.

use crate::error::Result;
use crate::geometry::lp::{LinearProgram, Relation, Sense};
use crate::geometry::rat::{from_f64, to_f64, vec_to_f64};
use crate::geometry::Rat;
use crate::mintime::{minimal_time, BallComplement, Dynamics, Shape, Target};

pub trait TimeFunction: Sync {
    fn dim(&self) -> usize;
    /// `T(x)`, possibly `+∞`.
    fn eval(&self, x: &[f64]) -> f64;
    /// Piecewise-linear functions are exactly linear on small enough
    /// spheres, so their sampled subgradient tests can use `ε = 0`.
    fn piecewise_linear(&self) -> bool {
        false
    }
}

struct PieceF64 {
    /// Rows `(a, b)` of the piece `{a·w ≤ b}`.
    rows: Vec<(Vec<f64>, f64)>,
    /// `a·vⱼ` for every row and every vertex of `F`.
    images: Vec<Vec<f64>>,
    /// Vertices of the piece (planar fast path only).
    corners: Vec<[f64; 2]>,
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// The gauge of a planar polygon `F`. An optimal representation
/// `u = Σ λⱼvⱼ` uses at most two vertices, so `ρ_F(u)` is the least
/// `λᵢ + λⱼ` over vertex pairs (and single vertices) that represent `u`
/// with nonnegative weights.
struct PlanarGauge {
    vertices: Vec<[f64; 2]>,
    /// `ρ_F(vⱼ)`.
    self_gauge: Vec<f64>,
}

/// Relative slack for the sign tests in the planar fast path.
const PLANAR_SLACK: f64 = 1e-12;

impl PlanarGauge {
    fn new(vertices: Vec<[f64; 2]>) -> Self {
        let mut g = PlanarGauge {
            vertices,
            self_gauge: Vec::new(),
        };
        g.self_gauge = g.vertices.iter().map(|v| g.eval(*v)).collect();
        g
    }

    fn eval(&self, u: [f64; 2]) -> f64 {
        let nu = u[0].abs().max(u[1].abs());
        if nu == 0.0 {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for (i, vi) in self.vertices.iter().enumerate() {
            let ni = vi[0].abs().max(vi[1].abs());
            if ni == 0.0 {
                continue;
            }
            // u on the ray through vᵢ.
            if cross(u, *vi).abs() <= PLANAR_SLACK * nu * ni && u[0] * vi[0] + u[1] * vi[1] > 0.0 {
                best = best.min(nu / ni);
            }
            for vj in &self.vertices[i + 1..] {
                let det = cross(*vi, *vj);
                let nj = vj[0].abs().max(vj[1].abs());
                if det.abs() <= PLANAR_SLACK * ni * nj {
                    continue;
                }
                let li = cross(u, *vj) / det;
                let lj = cross(*vi, u) / det;
                if li >= 0.0 && lj >= 0.0 {
                    best = best.min(li + lj);
                }
            }
        }
        best
    }
}

/// `T` for polytope dynamics: one small linear program per target piece.
pub struct PolyhedralTime {
    dim: usize,
    vertices: usize,
    pieces: Vec<PieceF64>,
    planar: Option<PlanarGauge>,
}

impl PolyhedralTime {
    pub fn new(f: &Dynamics, omega: &Target) -> Result<Self> {
        crate::Error::dims(f.dim(), omega.dim())?;
        let vs = f.require_polytope("floating-point time evaluation")?.vertices();
        let vsf: Vec<Vec<f64>> = vs.iter().map(|v| vec_to_f64(v)).collect();
        let pieces = omega
            .pieces()
            .iter()
            .map(|p| {
                let rows: Vec<(Vec<f64>, f64)> = p
                    .halfspaces()
                    .iter()
                    .map(|h| (vec_to_f64(&h.normal), to_f64(&h.offset)))
                    .collect();
                let images = rows
                    .iter()
                    .map(|(a, _)| vsf.iter().map(|v| super::plan::dot(a, v)).collect())
                    .collect();
                let corners = match (f.dim(), p.vrep()) {
                    (2, Ok(v)) => v.vertices.iter().map(|c| [to_f64(&c[0]), to_f64(&c[1])]).collect(),
                    _ => Vec::new(),
                };
                PieceF64 { rows, images, corners }
            })
            .collect();
        let planar = (f.dim() == 2 && omega.pieces().iter().all(|p| p.vrep().is_ok()))
            .then(|| PlanarGauge::new(vsf.iter().map(|v| [v[0], v[1]]).collect()));
        Ok(PolyhedralTime {
            dim: f.dim(),
            vertices: vs.len(),
            pieces,
            planar,
        })
    }

    /// `min_{w ∈ P} ρ_F(w − x)` in the plane. `ρ_F(· − x)` is linear on the
    /// cones cut out by the rays `x + R₊vⱼ`, so the minimum is attained at a
    /// vertex of the piece or where such a ray crosses an edge line.
    fn planar_piece_time(&self, g: &PlanarGauge, piece: &PieceF64, x: &[f64], slack: &[f64]) -> f64 {
        let x = [x[0], x[1]];
        let mut best = f64::INFINITY;
        for c in &piece.corners {
            best = best.min(g.eval([c[0] - x[0], c[1] - x[1]]));
        }
        let inside = |w: [f64; 2]| {
            piece.rows.iter().all(|(a, b)| {
                let scale = 1.0 + b.abs() + a[0].abs() * w[0].abs() + a[1].abs() * w[1].abs();
                a[0] * w[0] + a[1] * w[1] <= b + 1e-12 * scale
            })
        };
        for (row, s) in piece.images.iter().zip(slack) {
            for (j, av) in row.iter().enumerate() {
                // a·(x + τvⱼ) = b
                if *av == 0.0 {
                    continue;
                }
                let tau = s / av;
                if !(tau >= 0.0) || tau * g.self_gauge[j] >= best {
                    continue;
                }
                let v = g.vertices[j];
                if inside([x[0] + tau * v[0], x[1] + tau * v[1]]) {
                    best = tau * g.self_gauge[j];
                }
            }
        }
        best
    }

    fn piece_time(&self, piece: &PieceF64, x: &[f64]) -> f64 {
        let slack: Vec<f64> = piece
            .rows
            .iter()
            .map(|(a, b)| b - super::plan::dot(a, x))
            .collect();
        if slack.iter().all(|s| *s >= 0.0) {
            return 0.0;
        }
        if let Some(g) = &self.planar {
            return self.planar_piece_time(g, piece, x, &slack);
        }
        self.lp_piece_time(piece, &slack)
    }

    fn lp_piece_time(&self, piece: &PieceF64, slack: &[f64]) -> f64 {
        let k = self.vertices;
        let mut lp = LinearProgram::<f64>::new(k, Sense::Minimize);
        lp.set_objective(vec![1.0; k]).expect("sizes match");
        for (img, s) in piece.images.iter().zip(slack) {
            lp.add(img.clone(), Relation::Le, *s).expect("sizes match");
        }
        lp.solve().value.map_or(f64::INFINITY, |v| v.max(0.0))
    }
}

impl TimeFunction for PolyhedralTime {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|p| self.piece_time(p, x))
            .fold(f64::INFINITY, f64::min)
    }

    fn piecewise_linear(&self) -> bool {
        true
    }
}

/// `T` for ball dynamics and a polyhedral target, through the exact
/// projection of the (exactly converted) query point.
pub struct BallTime {
    f: Dynamics,
    omega: Target,
}

impl BallTime {
    pub fn new(f: &Dynamics, omega: &Target) -> Result<Self> {
        crate::Error::dims(f.dim(), omega.dim())?;
        Ok(BallTime {
            f: f.clone(),
            omega: omega.clone(),
        })
    }
}

impl TimeFunction for BallTime {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let Some(xr) = x.iter().map(|v| from_f64(*v)).collect::<Option<Vec<Rat>>>() else {
            return f64::NAN;
        };
        minimal_time(&self.f, &self.omega, &xr).map_or(f64::NAN, |e| e.value.to_f64())
    }
}

impl TimeFunction for BallComplement {
    fn dim(&self) -> usize {
        BallComplement::dim(self)
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.time_f64(x)
    }
}

/// Wraps a closure as a time function (useful for tests and counterexamples).
pub struct FnTime<G> {
    dim: usize,
    g: G,
    piecewise_linear: bool,
}

impl<G: Fn(&[f64]) -> f64 + Sync> FnTime<G> {
    pub fn new(dim: usize, g: G) -> Self {
        FnTime {
            dim,
            g,
            piecewise_linear: false,
        }
    }

    pub fn piecewise_linear(mut self) -> Self {
        self.piecewise_linear = true;
        self
    }
}

impl<G: Fn(&[f64]) -> f64 + Sync> TimeFunction for FnTime<G> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        (self.g)(x)
    }

    fn piecewise_linear(&self) -> bool {
        self.piecewise_linear
    }
}

/// The natural evaluator for a pair `(F, Ω)`.
pub fn time_function(f: &Dynamics, omega: &Target) -> Result<Box<dyn TimeFunction>> {
    Ok(match f.shape() {
        Shape::Polytope(_) => Box::new(PolyhedralTime::new(f, omega)?),
        Shape::Ball { .. } => Box::new(BallTime::new(f, omega)?),
    })
}
