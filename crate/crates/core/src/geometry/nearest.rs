//! Exact Euclidean projection onto a polyhedron.
//!
//! The projection `w` of `x` onto `{Ax ≤ b}` is characterized by
//! `w = x − A_Sᵀμ`, `A_S w = b_S`, `μ ≥ 0`, `w` feasible, for some set `S` of
//! linearly independent rows. Enumerating such sets by size gives the exact
//! rational projection without any iterative solver.

use num_traits::{Signed, Zero};

use super::linalg::{dot, norm_sq, rank, solve, sub};
use super::polyhedron::HPolyhedron;
use super::rat::Rat;

/// Nearest point of `poly` to `x` and the squared distance.
pub fn nearest_point(poly: &HPolyhedron, x: &[Rat]) -> (Vec<Rat>, Rat) {
    if poly.contains(x) {
        return (x.to_vec(), Rat::zero());
    }
    let rows: Vec<&Vec<Rat>> = poly.halfspaces().iter().map(|h| &h.normal).collect();
    let m = rows.len();
    let max_k = m.min(poly.dim());
    let mut subset = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        if let Some(found) = search(poly, x, &rows, k, 0, &mut subset) {
            return found;
        }
    }
    unreachable!("a nonempty polyhedron always has a projection")
}

fn search(
    poly: &HPolyhedron,
    x: &[Rat],
    rows: &[&Vec<Rat>],
    k: usize,
    start: usize,
    subset: &mut Vec<usize>,
) -> Option<(Vec<Rat>, Rat)> {
    if subset.len() == k {
        return try_active(poly, x, rows, subset);
    }
    for i in start..rows.len() {
        subset.push(i);
        let r = search(poly, x, rows, k, i + 1, subset);
        subset.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}

fn try_active(
    poly: &HPolyhedron,
    x: &[Rat],
    rows: &[&Vec<Rat>],
    subset: &[usize],
) -> Option<(Vec<Rat>, Rat)> {
    let a: Vec<Vec<Rat>> = subset.iter().map(|&i| rows[i].clone()).collect();
    if rank(&a) < a.len() {
        return None;
    }
    let gram: Vec<Vec<Rat>> = a.iter().map(|ai| a.iter().map(|aj| dot(ai, aj)).collect()).collect();
    let rhs: Vec<Rat> = subset
        .iter()
        .zip(&a)
        .map(|(&i, ai)| dot(ai, x) - &poly.halfspaces()[i].offset)
        .collect();
    let mu = solve(&gram, &rhs)?;
    if mu.iter().any(Signed::is_negative) {
        return None;
    }
    let mut shift = vec![Rat::zero(); x.len()];
    for (m, ai) in mu.iter().zip(&a) {
        for (s, v) in shift.iter_mut().zip(ai.iter()) {
            *s += m * v;
        }
    }
    let w = sub(x, &shift);
    if !poly.contains(&w) {
        return None;
    }
    let d2 = norm_sq(&shift);
    Some((w, d2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polyhedron::Halfspace;
    use crate::geometry::rat::{int, ivec, rat};

    #[test]
    fn box_projection_to_corner_and_face() {
        let b = HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap();
        let (w, d2) = nearest_point(&b, &ivec(&[3, 2]));
        assert_eq!(w, ivec(&[1, 1]));
        assert_eq!(d2, int(5));
        let (w, d2) = nearest_point(&b, &[int(3), rat(1, 2)]);
        assert_eq!(w, vec![int(1), rat(1, 2)]);
        assert_eq!(d2, int(4));
    }

    #[test]
    fn slanted_halfplane() {
        let h = HPolyhedron::new(2, vec![Halfspace::new(ivec(&[1, 1]), int(0))]).unwrap();
        let (w, d2) = nearest_point(&h, &ivec(&[1, 1]));
        assert_eq!(w, ivec(&[0, 0]));
        assert_eq!(d2, int(2));
    }
}
