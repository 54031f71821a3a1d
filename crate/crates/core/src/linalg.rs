//! Dense exact linear algebra over Z and Q. Matrices are plain row vectors;
//! every size that shows up here is tiny (at most 21 columns).

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{from_int, make_primitive, Int, Rational};

pub type IntMatrix = Vec<Vec<Int>>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Int::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Int>], v: &[Int]) -> Vec<Int> {
    a.iter().map(|row| crate::arith::dot(row, v)).collect()
}

pub fn to_rat_matrix(m: &[Vec<Int>]) -> RatMatrix {
    m.iter().map(|r| r.iter().map(from_int).collect()).collect()
}

/// Rank over Q of an integer matrix (fraction-free elimination with
/// row-content reduction).
pub fn rank_int(rows: &[Vec<Int>]) -> usize {
    let mut m: Vec<Vec<Int>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        let a = pivot_row[col].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let b = row[col].clone();
            for j in col..ncols {
                row[j] = &a * &row[j] - &b * &pivot_row[j];
            }
            let reduced = make_primitive(std::mem::take(row));
            *row = reduced;
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Reduced row echelon form over Q; returns the nonzero rows and the pivot
/// columns.
pub fn rref(mut m: RatMatrix) -> (RatMatrix, Vec<usize>) {
    if m.is_empty() {
        return (m, Vec::new());
    }
    let ncols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in col..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &f * &pivot_row[j];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : M x = 0}` as primitive integer vectors.
pub fn nullspace_int(rows: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    nullspace(&to_rat_matrix(rows), ncols)
        .into_iter()
        .map(|v| crate::arith::primitive_direction(&v))
        .collect()
}

/// Basis of `{x : M x = 0}` over Q.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `A x = b`; `None` when singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n].clone()).collect())
}

/// Affine coefficients `λ` with `Σ λ_i p_i = target`, `Σ λ_i = 1`, for an
/// affinely independent point list of full affine rank.
pub fn affine_coordinates(points: &[Vec<Int>], target: &[Int]) -> Option<Vec<Rational>> {
    let n = points.len();
    let d = target.len();
    if n != d + 1 {
        return None;
    }
    let mut a = vec![vec![Rational::one(); n]];
    for k in 0..d {
        a.push(points.iter().map(|p| from_int(&p[k])).collect());
    }
    let mut b = vec![Rational::one()];
    b.extend(target.iter().map(from_int));
    solve(&a, &b)
}

pub fn det_int(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    // Bareiss
    let mut a = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn det_rat(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        det *= a[k][k].clone();
        let inv = a[k][k].recip();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

pub fn inverse_rat(m: &[Vec<Rational>]) -> Option<RatMatrix> {
    let n = m.len();
    let aug: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Inverse of an integer matrix with determinant ±1.
pub fn inverse_unimodular(m: &[Vec<Int>]) -> Option<IntMatrix> {
    let inv = inverse_rat(&to_rat_matrix(m))?;
    inv.into_iter()
        .map(|row| crate::arith::as_integers(&row))
        .collect()
}

/// Indices of a maximal linearly independent subset of rows, chosen greedily
/// in order.
pub fn independent_rows(rows: &[Vec<Int>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v: Vec<Rational> = row.iter().map(from_int).collect();
        for (b, &pc) in basis.iter().zip(&pivot_cols) {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[pc].recip();
            for x in v.iter_mut() {
                *x = &*x * &inv;
            }
            basis.push(v);
            pivot_cols.push(pc);
            chosen.push(idx);
        }
    }
    chosen
}

/// Extended gcd: `(g, x, y)` with `x a + y b = g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Int::one(), Int::zero());
    let (mut old_t, mut t) = (Int::zero(), Int::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Unimodular column transformation bringing `M` to column echelon form.
///
/// Returns `(U, r)` where `M U = [H | 0]`, `H` has `r = rank(M)` columns, and
/// the last `n - r` columns of `U` are a basis of the saturated integer
/// kernel `ker(M) ∩ Z^n`.
pub fn column_echelon(rows: &[Vec<Int>], n: usize) -> (IntMatrix, usize) {
    let mut m = rows.to_vec();
    let mut u = identity(n);
    let mut c = 0;
    let col_op = |mat: &mut Vec<Vec<Int>>, c: usize, j: usize, x: &Int, y: &Int, p: &Int, q: &Int| {
        // (col_c, col_j) <- (x col_c + y col_j, p col_c + q col_j)
        for row in mat.iter_mut() {
            let a = row[c].clone();
            let b = row[j].clone();
            row[c] = x * &a + y * &b;
            row[j] = p * &a + q * &b;
        }
    };
    for i in 0..m.len() {
        if c == n {
            break;
        }
        for j in c + 1..n {
            if m[i][j].is_zero() {
                continue;
            }
            let a = m[i][c].clone();
            let b = m[i][j].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let p = -(&b / &g);
            let q = &a / &g;
            col_op(&mut m, c, j, &x, &y, &p, &q);
            col_op(&mut u, c, j, &x, &y, &p, &q);
        }
        if !m[i][c].is_zero() {
            c += 1;
        }
    }
    (u, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat, rint};

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| ints(r)).collect()
    }

    #[test]
    fn rank_and_det() {
        let m = im(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank_int(&m), 2);
        assert_eq!(det_int(&m), Int::zero());
        let a = im(&[&[2, 1], &[1, 2]]);
        assert_eq!(det_int(&a), Int::from(3));
        assert_eq!(det_rat(&to_rat_matrix(&a)), rint(3));
        let p = im(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_int(&p), Int::from(-1));
    }

    #[test]
    fn nullspace_basis() {
        let m = im(&[&[1, 1, 1]]);
        let ns = nullspace_int(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(crate::arith::dot(&m[0], v).is_zero());
        }
    }

    #[test]
    fn affine_coords() {
        let pts = vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1])];
        let l = affine_coordinates(&pts, &ints(&[1, 1])).unwrap();
        assert_eq!(l, vec![rint(-1), rint(1), rint(1)]);
        let l = affine_coordinates(&pts, &ints(&[1, 2])).unwrap();
        assert_eq!(l[0], rint(-2));
        assert_eq!(l[2], rint(2));
        let _ = rat(1, 2);
    }

    #[test]
    fn echelon_saturates_kernel() {
        // kernel of (2, 4) over Z is spanned by (2, -1)
        let (u, r) = column_echelon(&im(&[&[2, 4]]), 2);
        assert_eq!(r, 1);
        assert!(det_int(&u) == Int::one() || det_int(&u) == Int::from(-1));
        let k: Vec<Int> = u.iter().map(|row| row[1].clone()).collect();
        assert_eq!(crate::arith::canonical_sign(k), ints(&[2, -1]));
    }

    #[test]
    fn unimodular_inverse() {
        let a = im(&[&[2, 1], &[1, 1]]);
        let inv = inverse_unimodular(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
    }
}
