//! Dense exact Gaussian elimination over `Rat`.

use super::Rat;

pub type Matrix = Vec<Vec<Rat>>;

/// Rank of the row set.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Matrix = rows.to_vec();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pivot) = (r..n_rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][col].recip();
        for i in (r + 1)..n_rows {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] * &inv;
            for c in col..n_cols {
                let delta = &factor * &m[r][c];
                m[i][c] -= &delta;
            }
        }
        r += 1;
    }
    r
}

/// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`.
///
/// Elimination without row exchanges has `k`-th pivot `D_k / D_{k-1}` while
/// the minors stay nonzero; after a zero minor the rest are computed directly.
pub fn leading_minors(m: &Matrix) -> Vec<Rat> {
    let n = m.len();
    let mut out = Vec::with_capacity(n);
    let mut a = m.clone();
    let mut running = Rat::one();
    for col in 0..n {
        if a[col][col].is_zero() {
            break;
        }
        running *= &a[col][col];
        out.push(running.clone());
        let inv = a[col][col].recip();
        for i in (col + 1)..n {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = &a[i][col] * &inv;
            for c in col..n {
                if a[col][c].is_zero() {
                    continue;
                }
                let delta = &factor * &a[col][c];
                a[i][c] -= &delta;
            }
        }
    }
    for k in out.len() + 1..=n {
        let block: Matrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        out.push(determinant(&block));
    }
    out
}

pub fn determinant(m: &Matrix) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        for i in (col + 1)..n {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = &a[i][col] * &inv;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[i][c] -= &delta;
            }
        }
    }
    det
}

/// Solves `m x = rhs` for square nonsingular `m`; `None` when singular.
pub fn solve(m: &Matrix, rhs: &[Rat]) -> Option<Vec<Rat>> {
    let cols: Matrix = rhs.iter().map(|b| vec![b.clone()]).collect();
    solve_many(m, cols).map(|x| x.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Inverse of a square nonsingular matrix.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let identity: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    solve_many(m, identity)
}

/// Gauss–Jordan elimination of `m X = rhs` with `rhs` given row by row.
fn solve_many(m: &Matrix, rhs: Matrix) -> Option<Matrix> {
    let n = m.len();
    let width = n + rhs.first().map_or(0, Vec::len);
    let mut a: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.extend(b);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(pivot, col);
        let inv = a[col][col].recip();
        for c in col..width {
            if !a[col][c].is_zero() {
                a[col][c] *= &inv;
            }
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone();
            for c in col..width {
                if a[col][c].is_zero() {
                    continue;
                }
                let delta = &factor * &a[col][c];
                a[i][c] -= &delta;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Rat::int(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_minors() {
        let m = mat(&[&[2, 1], &[1, 3]]);
        assert_eq!(determinant(&m), Rat::int(5));
        assert_eq!(leading_minors(&m), vec![Rat::int(2), Rat::int(5)]);
        let swap = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&swap), Rat::int(-1));
    }

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&mat(&[&[1, 0], &[0, 1]])), 2);
    }

    #[test]
    fn solve_small_system() {
        let m = mat(&[&[2, 1], &[1, 3]]);
        let x = solve(&m, &[Rat::int(3), Rat::int(5)]).unwrap();
        assert_eq!(x, vec![Rat::new(4, 5), Rat::new(7, 5)]);
        assert!(solve(&mat(&[&[1, 2], &[2, 4]]), &[Rat::one(), Rat::one()]).is_none());
    }

    #[test]
    fn inverse_and_zero_leading_minor() {
        let m = mat(&[&[2, 1], &[1, 3]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(
            inv,
            vec![
                vec![Rat::new(3, 5), Rat::new(-1, 5)],
                vec![Rat::new(-1, 5), Rat::new(2, 5)]
            ]
        );
        let m = mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]);
        assert_eq!(leading_minors(&m), vec![Rat::zero(), Rat::int(-1), Rat::int(-2)]);
    }
}
