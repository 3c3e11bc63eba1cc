//! Small dense exact linear algebra on rational vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::Rat;

pub fn zeros(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut e = zeros(n);
    e[i] = Rat::one();
    e
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn norm_sq(a: &[Rat]) -> Rat {
    dot(a, a)
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(s: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| s * x).collect()
}

pub fn neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

/// `a + s·b`.
pub fn axpy(a: &[Rat], s: &Rat, b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn is_zero(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Scales a nonzero vector to the unique primitive integer vector on the
/// same ray. The zero vector is returned unchanged.
pub fn primitive(a: &[Rat]) -> Vec<Rat> {
    if is_zero(a) {
        return a.to_vec();
    }
    let lcm = a
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = a.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| Rat::from_integer(x / &gcd))
        .collect()
}

/// Rank of a list of row vectors.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Solves the square system `M x = b`; `None` if `M` is singular.
pub fn solve(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
    debug_assert!(m.len() == n && m.iter().all(|row| row.len() == n));
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pivot = a[c][c].clone();
        for j in c..=n {
            a[c][j] = &a[c][j] / &pivot;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let v = &f * &a[c][j];
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Basis of the null space `{x : rows·x = 0}`.
pub fn null_space(rows: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for j in 0..n {
            m[r][j] = &m[r][j] / &pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(n);
            v[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Lexicographic comparison of equal-length vectors.
pub fn lex_cmp(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Sorts and removes duplicate vectors.
pub fn dedup_sorted(mut vs: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    vs.sort_by(|a, b| lex_cmp(a, b));
    vs.dedup();
    vs
}

/// Absolute value helper used by tests and sign checks.
pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    #[test]
    fn primitive_scales_to_coprime_integers() {
        assert_eq!(primitive(&[rat(1, 2), rat(-3, 4)]), ivec(&[2, -3]));
        assert_eq!(primitive(&[int(0), int(-6)]), ivec(&[0, -1]));
    }

    #[test]
    fn rank_and_solve() {
        let m = vec![ivec(&[1, 2]), ivec(&[2, 4])];
        assert_eq!(rank(&m), 1);
        assert_eq!(solve(&m, &ivec(&[1, 2])), None);
        let m = vec![ivec(&[2, 1]), ivec(&[1, 3])];
        assert_eq!(solve(&m, &ivec(&[3, 4])).unwrap(), ivec(&[1, 1]));
    }

    #[test]
    fn null_space_is_orthogonal_to_rows() {
        let rows = vec![ivec(&[1, 1, 0])];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&rows[0], v).is_zero());
        }
        assert_eq!(rank(&ns), 2);
    }
}
