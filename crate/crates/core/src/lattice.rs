//! Fincke–Pohst enumeration of lattice points in ellipsoids, with exact
//! rational bounds throughout.

use num_traits::{One, Signed, Zero};

use crate::arith::{from_int, Int, Rational};
use crate::error::{Error, Result};
use crate::form::{QuadForm, UnimodularMap};
use crate::linalg::{identity, IntMatrix};

/// Square-completed form `Q[x] = Σ_i d_i (x_i + Σ_{j>i} μ_ij x_j)²`.
#[derive(Clone, Debug)]
pub struct Enumerator {
    dim: usize,
    diag: Vec<Rational>,
    mu: Vec<Vec<Rational>>,
}

impl Enumerator {
    pub fn new(q: &QuadForm) -> Result<Enumerator> {
        let d = q.dim();
        let mut a = q.matrix();
        let mut diag = Vec::with_capacity(d);
        let mut mu = vec![vec![Rational::zero(); d]; d];
        for i in 0..d {
            if !a[i][i].is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            let piv = a[i][i].clone();
            for j in i + 1..d {
                mu[i][j] = &a[i][j] / &piv;
            }
            for j in i + 1..d {
                if a[i][j].is_zero() {
                    continue;
                }
                for k in j..d {
                    let t = &a[i][j] * &mu[i][k];
                    a[j][k] -= t.clone();
                    if k != j {
                        a[k][j] -= t;
                    }
                }
            }
            diag.push(piv);
        }
        Ok(Enumerator { dim: d, diag, mu })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Calls `visit(x, Q[x - center])` for every `x ∈ Z^d` with
    /// `Q[x - center] <= bound`.
    pub fn for_each(&self, center: &[Rational], bound: &Rational, mut visit: impl FnMut(&[Int], &Rational)) {
        if bound.is_negative() {
            return;
        }
        let mut x = vec![Int::zero(); self.dim];
        self.recurse(self.dim, center, bound, &Rational::zero(), &mut x, &mut visit);
    }

    fn recurse(
        &self,
        level: usize,
        center: &[Rational],
        bound: &Rational,
        used: &Rational,
        x: &mut Vec<Int>,
        visit: &mut impl FnMut(&[Int], &Rational),
    ) {
        if level == 0 {
            visit(x, used);
            return;
        }
        let i = level - 1;
        // c = Σ_{j>i} μ_ij (x_j - t_j) - t_i ; need d_i (x_i + c)² <= bound - used
        let mut c = -center[i].clone();
        for j in i + 1..self.dim {
            if !self.mu[i][j].is_zero() {
                c += &self.mu[i][j] * (from_int(&x[j]) - &center[j]);
            }
        }
        let room = bound - used;
        let u = &room / &self.diag[i];
        let s = u.floor().to_integer().isqrt().unwrap_or_else(Int::zero);
        let neg_c = -c.clone();
        let lo = neg_c.floor().to_integer() - &s - Int::one();
        let hi = neg_c.ceil().to_integer() + &s + Int::one();
        let mut xi = lo;
        while xi <= hi {
            let y = from_int(&xi) + &c;
            let contrib = &self.diag[i] * &y * &y;
            if contrib <= room {
                x[i] = xi.clone();
                let next = used + &contrib;
                self.recurse(i, center, bound, &next, x, visit);
            }
            xi += Int::one();
        }
        x[i] = Int::zero();
    }
}

/// All `v ∈ Z^d` with `Q[v] <= c`, sorted lexicographically.
pub fn vectors_below(q: &QuadForm, c: &Rational) -> Result<Vec<Vec<Int>>> {
    let e = Enumerator::new(q)?;
    let center = vec![Rational::zero(); q.dim()];
    let mut out = Vec::new();
    e.for_each(&center, c, |v, _| out.push(v.to_vec()));
    out.sort();
    Ok(out)
}

/// Like [`vectors_below`] but also returns the norms.
pub fn vectors_with_norms(q: &QuadForm, c: &Rational) -> Result<Vec<(Vec<Int>, Rational)>> {
    let e = Enumerator::new(q)?;
    let center = vec![Rational::zero(); q.dim()];
    let mut out = Vec::new();
    e.for_each(&center, c, |v, n| out.push((v.to_vec(), n.clone())));
    out.sort();
    Ok(out)
}

/// `argmin_{z ∈ Z^d} Q[z - t]`, sorted lexicographically, with the minimum.
pub fn closest_vectors_with_distance(q: &QuadForm, t: &[Rational]) -> Result<(Vec<Vec<Int>>, Rational)> {
    let e = Enumerator::new(q)?;
    let half = Rational::new(Int::one(), Int::from(2));
    let rounded: Vec<Rational> = t.iter().map(|x| from_int(&(x + &half).floor().to_integer())).collect();
    let diff: Vec<Rational> = rounded.iter().zip(t).map(|(a, b)| a - b).collect();
    let bound = q.eval_rat(&diff);
    let mut best = bound.clone();
    let mut out: Vec<Vec<Int>> = Vec::new();
    e.for_each(t, &bound, |v, n| {
        if *n < best {
            best = n.clone();
            out.clear();
        }
        if *n == best {
            out.push(v.to_vec());
        }
    });
    out.sort();
    Ok((out, best))
}

pub fn closest_vectors(q: &QuadForm, t: &[Rational]) -> Result<Vec<Vec<Int>>> {
    closest_vectors_with_distance(q, t).map(|(v, _)| v)
}

/// Minimum of `Q` on `Z^d \ {0}` together with the vectors attaining it.
pub fn minimal_vectors(q: &QuadForm) -> Result<(Rational, Vec<Vec<Int>>)> {
    let bound = (0..q.dim()).map(|i| q.get(i, i).clone()).min().ok_or(Error::NotPositiveDefinite)?;
    let vs = vectors_with_norms(q, &bound)?;
    let min = vs.iter().filter(|(v, _)| v.iter().any(|x| !x.is_zero())).map(|(_, n)| n.clone()).min();
    let Some(min) = min else {
        return Err(Error::NotPositiveDefinite);
    };
    let out = vs.into_iter().filter(|(v, n)| *n == min && v.iter().any(|x| !x.is_zero())).map(|(v, _)| v).collect();
    Ok((min, out))
}

/// Exact `round(x)` with halves rounded up.
pub fn round_half_up(x: &Rational) -> Int {
    (x + Rational::new(Int::one(), Int::from(2))).floor().to_integer()
}

/// Gram–Schmidt data `(μ, B*)` of the Gram matrix `g`.
fn gram_schmidt(g: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = g.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut x = g[i][j].clone();
            for k in 0..j {
                x -= &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = x / &b[j];
        }
        let mut x = g[i][i].clone();
        for k in 0..i {
            x -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        b[i] = x;
    }
    (mu, b)
}

/// LLL reduction (δ = 3/4) of a positive definite form. Returns `U`
/// unimodular and the reduced form `UᵗQU`.
pub fn lll_reduce(q: &QuadForm) -> Result<(UnimodularMap, QuadForm)> {
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let n = q.dim();
    let mut u = identity(n);
    let delta = Rational::new(Int::from(3), Int::from(4));
    let half = Rational::new(Int::one(), Int::from(2));
    // column operation b_k -= r b_j
    let reduce = |u: &mut IntMatrix, k: usize, j: usize, r: &Int| {
        for row in u.iter_mut() {
            let t = r * &row[j];
            row[k] -= t;
        }
    };
    let mut k = 1;
    while k < n {
        let (mu, _) = gram_schmidt(&q.transform(&u).matrix());
        if mu[k][k - 1].abs() > half {
            let r = round_half_up(&mu[k][k - 1]);
            reduce(&mut u, k, k - 1, &r);
        }
        let (mu, b) = gram_schmidt(&q.transform(&u).matrix());
        if b[k] < (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1] {
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        } else {
            for j in (0..k.saturating_sub(1)).rev() {
                let (mu, _) = gram_schmidt(&q.transform(&u).matrix());
                if mu[k][j].abs() > half {
                    let r = round_half_up(&mu[k][j]);
                    reduce(&mut u, k, j, &r);
                }
            }
            k += 1;
        }
    }
    let reduced = q.transform(&u);
    Ok((UnimodularMap::new(u)?, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat, rint};
    use proptest::prelude::*;

    fn box_search(q: &QuadForm, c: &Rational, r: i64) -> Vec<Vec<Int>> {
        let d = q.dim();
        let mut out = Vec::new();
        let mut x = vec![-r; d];
        loop {
            let v = ints(&x);
            if q.eval(&v) <= *c {
                out.push(v);
            }
            let mut k = 0;
            loop {
                if k == d {
                    out.sort();
                    return out;
                }
                x[k] += 1;
                if x[k] > r {
                    x[k] = -r;
                    k += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn identity_unit_ball() {
        let v = vectors_below(&QuadForm::identity(2), &rint(1)).unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(vectors_below(&QuadForm::identity(3), &rint(0)).unwrap(), vec![ints(&[0, 0, 0])]);
    }

    #[test]
    fn hexagonal_shell_against_box() {
        let a2 = QuadForm::from_rows(&[&[2, 1], &[1, 2]]).unwrap();
        let v = vectors_below(&a2, &rint(2)).unwrap();
        assert_eq!(v.len(), 7);
        assert_eq!(v, box_search(&a2, &rint(2), 3));
    }

    #[test]
    fn closest_ties() {
        let i2 = QuadForm::identity(2);
        let c = closest_vectors(&i2, &[rat(1, 2), rint(0)]).unwrap();
        assert_eq!(c, vec![ints(&[0, 0]), ints(&[1, 0])]);
        let c = closest_vectors(&i2, &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn lll_shortens_a_skewed_basis() {
        let a2 = QuadForm::from_rows(&[&[2, 1], &[1, 2]]).unwrap();
        let t = vec![vec![Int::from(7), Int::from(5)], vec![Int::from(4), Int::from(3)]];
        let q = a2.transform(&t);
        let (u, r) = lll_reduce(&q).unwrap();
        assert_eq!(q.act(&u), r);
        assert_eq!(r.get(0, 0), &rint(2));
        assert_eq!(r.get(1, 1), &rint(2));
        let (_, e6) = lll_reduce(&crate::fixtures::e6_dual()).unwrap();
        assert_eq!(e6.determinant(), crate::fixtures::e6_dual().determinant());
    }

    #[test]
    fn minimal_vectors_of_d4() {
        let (m, v) = minimal_vectors(&crate::fixtures::d4()).unwrap();
        assert_eq!(m, rint(2));
        assert_eq!(v.len(), 24);
    }

    fn arb_pd_form(d: usize) -> impl Strategy<Value = QuadForm> {
        prop::collection::vec(-2i64..=2, d * d).prop_map(move |entries| {
            // B Bᵗ + I is positive definite
            let b: Vec<Vec<i64>> = (0..d).map(|i| entries[i * d..(i + 1) * d].to_vec()).collect();
            let rows: Vec<Vec<i64>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).map(|k| b[i][k] * b[j][k]).sum::<i64>() + i64::from(i == j))
                        .collect()
                })
                .collect();
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            QuadForm::from_rows(&refs).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn enumeration_matches_box(d in 1usize..=3, c in 0i64..=10, q in (1usize..=3).prop_flat_map(arb_pd_form)) {
            let _ = d;
            // every vector with Q[v] <= c has |v_i| <= c since Q >= I
            let expected = box_search(&q, &rint(c), c.max(1));
            prop_assert_eq!(vectors_below(&q, &rint(c)).unwrap(), expected);
        }

        #[test]
        fn closest_matches_box(q in arb_pd_form(3), t in prop::collection::vec(-6i64..=6, 3), den in 1i64..=4) {
            let target: Vec<Rational> = t.iter().map(|&x| rat(x, den)).collect();
            let got = closest_vectors(&q, &target).unwrap();
            let mut best: Option<Rational> = None;
            let mut brute = Vec::new();
            let r = 10i64;
            for a in -r..=r { for b in -r..=r { for c in -r..=r {
                let z = ints(&[a, b, c]);
                let diff: Vec<Rational> = z.iter().zip(&target).map(|(x, y)| from_int(x) - y).collect();
                let n = q.eval_rat(&diff);
                match &best {
                    Some(bv) if n > *bv => {}
                    Some(bv) if n == *bv => brute.push(z),
                    _ => { best = Some(n); brute = vec![z]; }
                }
            }}}
            brute.sort();
            prop_assert_eq!(got, brute);
        }
    }
}
