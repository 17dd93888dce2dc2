//! Dense exact linear algebra over [`GaussRational`] for small systems.

use crate::scalar::GaussRational;

/// Determinant by fraction-exact Gaussian elimination with nonzero pivoting.
///
/// Panics if `rows` is not square.
pub fn determinant(rows: &[Vec<GaussRational>]) -> GaussRational {
    let n = rows.len();
    assert!(
        rows.iter().all(|r| r.len() == n),
        "determinant needs a square matrix"
    );
    let mut m: Vec<Vec<GaussRational>> = rows.to_vec();
    let mut det = GaussRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return GaussRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = &det * &pivot;
        let inv = pivot.recip().expect("nonzero pivot");
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= &delta;
            }
        }
    }
    det
}

/// Solves `A x = b` exactly; `None` when `A` is singular.
pub fn solve(a: &[Vec<GaussRational>], b: &[GaussRational]) -> Option<Vec<GaussRational>> {
    let n = a.len();
    assert!(
        a.iter().all(|r| r.len() == n) && b.len() == n,
        "solve needs a square system"
    );
    let mut m: Vec<Vec<GaussRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let inv = m[col][col].recip().expect("nonzero pivot");
        for c in col..=n {
            m[col][c] = &m[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=n {
                let delta = &factor * &m[col][c];
                m[r][c] -= &delta;
            }
        }
    }
    Some(
        m.into_iter()
            .map(|mut r| r.pop().expect("augmented column"))
            .collect(),
    )
}

/// Rank by exact row reduction.
pub fn rank(rows: &[Vec<GaussRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<GaussRational>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        let inv = m[rank][col].recip().expect("nonzero pivot");
        for r in (rank + 1)..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..cols {
                let delta = &factor * &m[rank][c];
                m[r][c] -= &delta;
            }
        }
        rank += 1;
    }
    rank
}
