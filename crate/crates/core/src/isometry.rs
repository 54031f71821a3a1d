//! Isometry testing and automorphism groups of positive definite forms, by
//! backtracking over images of a basis inside a characteristic vector set.

use std::ops::ControlFlow;

use num_traits::Zero;
use rustc_hash::FxHashSet;

use crate::arith::{Int, Rational};
use crate::error::{Error, Result};
use crate::form::{FormVector, QuadForm, UnimodularMap};
use crate::lattice::{lll_reduce, Enumerator};
use crate::linalg::{self, IntMatrix};

type Mat = Vec<i64>;

fn to_i64(x: &Int) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Invalid("form entries too large for isometry search".into()))
}

fn lcm_denominators(forms: &[&QuadForm]) -> Int {
    let mut l = Int::from(1);
    for q in forms {
        for i in 0..q.dim() {
            for j in 0..=i {
                let den = q.get(i, j).denom().clone();
                l = num_integer::Integer::lcm(&l, &den);
            }
        }
    }
    l
}

/// LLL-reduced integral Gram matrix together with its reduction map.
struct Prepared {
    d: usize,
    u: UnimodularMap,
    reduced: QuadForm,
    gram: Vec<Vec<i64>>,
}

impl Prepared {
    fn new(q: &QuadForm, scale: &Int) -> Result<Prepared> {
        let scaled = q.scale(&Rational::from_integer(scale.clone()));
        let (u, reduced) = lll_reduce(&scaled)?;
        let gram = (0..q.dim())
            .map(|i| (0..q.dim()).map(|j| to_i64(reduced.get(i, j).numer())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Prepared { d: q.dim(), u, reduced, gram })
    }

    fn mul(&self, v: &[i64]) -> Vec<i64> {
        self.gram.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Nonzero vectors of norm at most `bound` with their norms, sorted by
    /// norm then lexicographically.
    fn vectors(&self, bound: i64) -> Result<Vec<(Vec<i64>, i64)>> {
        let en = Enumerator::new(&self.reduced)?;
        let zero = vec![Rational::from_integer(Int::from(0)); self.d];
        let mut out = Vec::new();
        let mut err = None;
        en.for_each(&zero, &Rational::from_integer(Int::from(bound)), |v, n| {
            if n.numer().is_zero() {
                return;
            }
            match (v.iter().map(to_i64).collect::<Result<Vec<_>>>(), to_i64(n.numer())) {
                (Ok(v), Ok(n)) => out.push((v, n)),
                (Err(e), _) | (_, Err(e)) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        Ok(out)
    }

    /// Vectors of the smallest norm levels whose union spans `Q^d`.
    fn characteristic(&self) -> Result<Vec<(Vec<i64>, i64)>> {
        // the reduced basis spans, so every level up to its largest norm suffices
        let bound = (0..self.d).map(|i| self.gram[i][i]).max().unwrap_or(0);
        let all = self.vectors(bound)?;
        let mut rows: IntMatrix = Vec::new();
        let mut cut = all.len();
        let mut i = 0;
        while i < all.len() {
            let n = all[i].1;
            while i < all.len() && all[i].1 == n {
                rows.push(all[i].0.iter().map(|&x| Int::from(x)).collect());
                i += 1;
            }
            if linalg::rank_int(&rows) == self.d {
                cut = i;
                break;
            }
        }
        let mut all = all;
        all.truncate(cut);
        Ok(all)
    }
}

fn norm_profile(v: &[(Vec<i64>, i64)]) -> Vec<(i64, usize)> {
    let mut out: Vec<(i64, usize)> = Vec::new();
    for (_, n) in v {
        match out.last_mut() {
            Some((m, c)) if m == n => *c += 1,
            _ => out.push((*n, 1)),
        }
    }
    out
}

/// Search state for maps sending a fixed basis of the target form's lattice
/// into the source form's characteristic set.
struct Search<'a> {
    d: usize,
    /// basis vectors `b_i` (target side) and their Gram matrix
    basis: Vec<Vec<i64>>,
    basis_gram: Vec<Vec<i64>>,
    /// `adj(B)` and `det(B)` for `B` with columns `b_i`
    adj: Vec<Vec<i128>>,
    det: i128,
    /// candidate images with `R1 c` precomputed
    cands: &'a [(Vec<i64>, i64)],
    cands_mul: Vec<Vec<i64>>,
}

impl Search<'_> {
    fn run(&self, visit: &mut dyn FnMut(Mat) -> ControlFlow<()>) {
        let mut chosen: Vec<usize> = Vec::with_capacity(self.d);
        let _ = self.descend(&mut chosen, visit);
    }

    fn descend(&self, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(Mat) -> ControlFlow<()>) -> ControlFlow<()> {
        let j = chosen.len();
        if j == self.d {
            return match self.leaf(chosen) {
                Some(m) => visit(m),
                None => ControlFlow::Continue(()),
            };
        }
        let target = self.basis_gram[j][j];
        for (k, (c, n)) in self.cands.iter().enumerate() {
            if *n != target {
                continue;
            }
            let ok = chosen.iter().enumerate().all(|(i, &ci)| {
                let ip: i64 = self.cands_mul[ci].iter().zip(c).map(|(a, b)| a * b).sum();
                ip == self.basis_gram[i][j]
            });
            if !ok {
                continue;
            }
            chosen.push(k);
            let r = self.descend(chosen, visit);
            chosen.pop();
            r?;
        }
        ControlFlow::Continue(())
    }

    /// `A = C · B⁻¹` when integral.
    fn leaf(&self, chosen: &[usize]) -> Option<Mat> {
        let d = self.d;
        let mut out = vec![0i64; d * d];
        for r in 0..d {
            for c in 0..d {
                let mut s: i128 = 0;
                for (k, &ck) in chosen.iter().enumerate() {
                    s += i128::from(self.cands[ck].0[r]) * self.adj[k][c];
                }
                if s % self.det != 0 {
                    return None;
                }
                out[r * d + c] = i64::try_from(s / self.det).ok()?;
            }
        }
        Some(out)
    }
}

fn greedy_basis(vs: &[(Vec<i64>, i64)], d: usize) -> Vec<Vec<i64>> {
    let mut rows: IntMatrix = Vec::new();
    let mut out = Vec::new();
    for (v, _) in vs {
        let mut trial = rows.clone();
        trial.push(v.iter().map(|&x| Int::from(x)).collect());
        if linalg::rank_int(&trial) == trial.len() {
            rows = trial;
            out.push(v.clone());
            if out.len() == d {
                break;
            }
        }
    }
    out
}

fn build_search<'a>(p1: &Prepared, p2: &Prepared, s1: &'a [(Vec<i64>, i64)], s2: &[(Vec<i64>, i64)]) -> Search<'a> {
    let d = p1.d;
    let basis = greedy_basis(s2, d);
    let basis_gram: Vec<Vec<i64>> = basis
        .iter()
        .map(|x| {
            let rx = p2.mul(x);
            basis.iter().map(|y| rx.iter().zip(y).map(|(a, b)| a * b).sum()).collect()
        })
        .collect();
    // B has the basis vectors as columns
    let bmat: IntMatrix = (0..d).map(|r| (0..d).map(|c| Int::from(basis[c][r])).collect()).collect();
    let det = linalg::det_int(&bmat);
    let inv = linalg::inverse_rat(&linalg::to_rat_matrix(&bmat)).expect("basis is independent");
    let detr = Rational::from_integer(det.clone());
    let adj: Vec<Vec<i128>> = inv
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let v = x * &detr;
                    i128::from(v.numer().to_i64().expect("small adjugate"))
                })
                .collect()
        })
        .collect();
    let cands_mul = s1.iter().map(|(c, _)| p1.mul(c)).collect();
    Search {
        d,
        basis,
        basis_gram,
        adj,
        det: i128::from(det.to_i64().expect("small determinant")),
        cands: s1,
        cands_mul,
    }
}

fn to_matrix(m: &Mat, d: usize) -> IntMatrix {
    (0..d).map(|r| (0..d).map(|c| Int::from(m[r * d + c])).collect()).collect()
}

/// Calls `visit` with every `A ∈ GL_d(Z)` with `AᵗQ1A = Q2` until it breaks.
pub fn for_each_isometry(
    q1: &QuadForm,
    q2: &QuadForm,
    mut visit: impl FnMut(&UnimodularMap) -> ControlFlow<()>,
) -> Result<()> {
    if q1.dim() != q2.dim() {
        return Err(Error::Dimension(format!("forms of dimension {} and {}", q1.dim(), q2.dim())));
    }
    if !q1.is_positive_definite() || !q2.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let d = q1.dim();
    if d == 0 {
        let _ = visit(&UnimodularMap::identity(0));
        return Ok(());
    }
    if q1.determinant() != q2.determinant() {
        return Ok(());
    }
    let scale = lcm_denominators(&[q1, q2]);
    let p1 = Prepared::new(q1, &scale)?;
    let p2 = Prepared::new(q2, &scale)?;
    let s2 = p2.characteristic()?;
    let top = s2.last().map(|x| x.1).unwrap_or(0);
    let s1 = p1.vectors(top)?;
    if norm_profile(&s1) != norm_profile(&s2) {
        return Ok(());
    }
    let search = build_search(&p1, &p2, &s1, &s2);
    debug_assert_eq!(search.basis.len(), d);
    let u2inv = p2.u.inverse();
    search.run(&mut |m| {
        let a = UnimodularMap::new_unchecked(to_matrix(&m, d));
        let full = p1.u.compose(&a).compose(&u2inv);
        visit(&full)
    });
    Ok(())
}

/// Some `A ∈ GL_d(Z)` with `AᵗQ1A = Q2`, or `None` if the forms are not
/// arithmetically equivalent.
pub fn isometry(q1: &QuadForm, q2: &QuadForm) -> Result<Option<UnimodularMap>> {
    let mut found = None;
    for_each_isometry(q1, q2, |a| {
        found = Some(a.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Every automorphism of a positive definite form, sorted.
pub fn all_automorphisms(q: &QuadForm) -> Result<Vec<UnimodularMap>> {
    let mut out = Vec::new();
    for_each_isometry(q, q, |a| {
        out.push(a.clone());
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub generators: Vec<UnimodularMap>,
    pub order: u64,
}

fn flat(a: &UnimodularMap) -> Mat {
    a.matrix().iter().flatten().map(|x| x.to_i64().expect("small automorphism")).collect()
}

fn mul_flat(a: &Mat, b: &Mat, d: usize) -> Mat {
    let mut out = vec![0i64; d * d];
    for i in 0..d {
        for k in 0..d {
            let x = a[i * d + k];
            if x == 0 {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += x * b[k * d + j];
            }
        }
    }
    out
}

fn closure_flat(gens: &[Mat], d: usize) -> FxHashSet<Mat> {
    let id: Mat = (0..d * d).map(|k| i64::from(k / d == k % d)).collect();
    let mut seen = FxHashSet::default();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul_flat(&x, g, d);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Every element of the finite group generated by `gens`, sorted.
pub fn group_elements(d: usize, gens: &[UnimodularMap]) -> Vec<UnimodularMap> {
    let flat_gens: Vec<Mat> = gens.iter().map(flat).collect();
    let mut out: Vec<UnimodularMap> = closure_flat(&flat_gens, d)
        .into_iter()
        .map(|m| UnimodularMap::new_unchecked(to_matrix(&m, d)))
        .collect();
    out.sort();
    out
}

/// Generators picked greedily from a full element list.
pub fn generators_of(d: usize, elements: &[UnimodularMap]) -> Vec<UnimodularMap> {
    let mut gens: Vec<Mat> = Vec::new();
    let mut out = Vec::new();
    let mut closure = closure_flat(&gens, d);
    for a in elements {
        let f = flat(a);
        if closure.contains(&f) {
            continue;
        }
        gens.push(f);
        out.push(a.clone());
        closure = closure_flat(&gens, d);
        if closure.len() == elements.len() {
            break;
        }
    }
    out
}

pub fn automorphisms(q: &QuadForm) -> Result<AutomorphismGroup> {
    let all = all_automorphisms(q)?;
    let generators = generators_of(q.dim(), &all);
    Ok(AutomorphismGroup { generators, order: all.len() as u64 })
}

/// Basis of the forms fixed by every generator under `Q ↦ AᵗQA`.
pub fn fixed_subspace(d: usize, gens: &[UnimodularMap]) -> Vec<FormVector> {
    let n = crate::form::form_dim(d);
    let mut rows: IntMatrix = Vec::new();
    for g in gens {
        let m = g.form_action();
        for (i, row) in m.into_iter().enumerate() {
            let mut r = row;
            r[i] -= Int::from(1);
            rows.push(r);
        }
    }
    linalg::nullspace_int(&rows, n).iter().map(|v| FormVector::from_ints(v)).collect()
}

/// Cheap isometry invariant: determinant and the number of vectors at each
/// of the three smallest norms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub det: Rational,
    pub shells: Vec<(Rational, usize)>,
}

pub fn fingerprint(q: &QuadForm) -> Result<Fingerprint> {
    let (_, r) = lll_reduce(q)?;
    let en = Enumerator::new(&r)?;
    let zero = vec![Rational::from_integer(Int::from(0)); q.dim()];
    let mut bound = (0..q.dim()).map(|i| r.get(i, i).clone()).max().unwrap_or_else(|| Rational::from_integer(Int::from(0)));
    loop {
        let mut norms: Vec<Rational> = Vec::new();
        en.for_each(&zero, &bound, |_, n| {
            if *n.numer() != Int::from(0) {
                norms.push(n.clone());
            }
        });
        norms.sort();
        let mut shells: Vec<(Rational, usize)> = Vec::new();
        for n in norms {
            match shells.last_mut() {
                Some((m, c)) if *m == n => *c += 1,
                _ => shells.push((n, 1)),
            }
        }
        if shells.len() >= 3 || q.dim() == 0 {
            shells.truncate(3);
            return Ok(Fingerprint { det: q.determinant(), shells });
        }
        bound = bound * Rational::from_integer(Int::from(2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::mat_mul;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unimodular(rng: &mut ChaCha8Rng, d: usize) -> IntMatrix {
        let mut m = linalg::identity(d);
        for _ in 0..3 * d {
            let i = rng.gen_range(0..d);
            let j = rng.gen_range(0..d);
            if i == j {
                continue;
            }
            let k = Int::from(rng.gen_range(-2i64..=2));
            let e: IntMatrix = (0..d)
                .map(|r| (0..d).map(|c| if r == c { Int::from(1) } else if r == i && c == j { k.clone() } else { Int::from(0) }).collect())
                .collect();
            m = mat_mul(&m, &e);
        }
        m
    }

    /// Brute-force automorphism count: all matrices with entries in a box
    /// whose columns have the norms of the basis vectors.
    fn brute_force_order(q: &QuadForm, bound: i64) -> usize {
        let d = q.dim();
        let cols: Vec<Vec<Vec<Int>>> = (0..d)
            .map(|i| {
                let mut out = Vec::new();
                let n = (2 * bound + 1).pow(d as u32);
                for code in 0..n {
                    let mut c = code;
                    let v: Vec<Int> = (0..d)
                        .map(|_| {
                            let x = c % (2 * bound + 1) - bound;
                            c /= 2 * bound + 1;
                            Int::from(x)
                        })
                        .collect();
                    if q.eval(&v) == *q.get(i, i) {
                        out.push(v);
                    }
                }
                out
            })
            .collect();
        let mut count = 0;
        let mut idx = vec![0usize; d];
        'outer: loop {
            let m: IntMatrix = (0..d).map(|r| (0..d).map(|c| cols[c][idx[c]][r].clone()).collect()).collect();
            if linalg::det_int(&m).abs() == Int::from(1) && q.transform(&m) == *q {
                count += 1;
            }
            for k in 0..d {
                idx[k] += 1;
                if idx[k] < cols[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        count
    }

    #[test]
    fn small_group_orders() {
        let i2 = QuadForm::identity(2);
        let a2 = fixtures::a_root(2);
        assert_eq!(automorphisms(&i2).unwrap().order, 8);
        assert_eq!(automorphisms(&a2).unwrap().order, 12);
        assert_eq!(brute_force_order(&i2, 1), 8);
        assert_eq!(brute_force_order(&a2, 2), 12);
        assert_eq!(automorphisms(&QuadForm::identity(3)).unwrap().order, 48);
        assert_eq!(brute_force_order(&fixtures::a_root(3), 1), automorphisms(&fixtures::a_root(3)).unwrap().order as usize);
    }

    #[test]
    fn generators_regenerate_the_group() {
        let q = fixtures::d4();
        let g = automorphisms(&q).unwrap();
        assert_eq!(g.order, 1152);
        assert_eq!(group_elements(4, &g.generators).len(), 1152);
        for a in &g.generators {
            assert_eq!(q.act(a), q);
        }
    }

    #[test]
    fn conjugates_are_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for q in [fixtures::a_root(3), fixtures::d4(), fixtures::e6_dual(), fixtures::principal(5)] {
            for _ in 0..3 {
                let t = random_unimodular(&mut rng, q.dim());
                let q2 = q.transform(&t);
                let a = isometry(&q, &q2).unwrap().expect("conjugate forms are isometric");
                assert_eq!(q.act(&a), q2);
            }
        }
        assert!(isometry(&QuadForm::identity(2), &fixtures::a_root(2)).unwrap().is_none());
        let e6 = fixtures::e6_dual();
        assert!(isometry(&e6, &e6).unwrap().is_some());
        // same determinant, different forms
        let x = QuadForm::from_rows(&[&[1, 0], &[0, 6]]).unwrap();
        let y = QuadForm::from_rows(&[&[2, 0], &[0, 3]]).unwrap();
        assert!(isometry(&x, &y).unwrap().is_none());
    }

    #[test]
    fn fixed_subspaces() {
        // all signed permutations of Z^3 fix only multiples of the identity
        let i3 = QuadForm::identity(3);
        let g = automorphisms(&i3).unwrap();
        assert_eq!(fixed_subspace(3, &g.generators).len(), 1);
        assert_eq!(fixed_subspace(3, &[]).len(), 6);
        let swap = UnimodularMap::new(vec![vec![Int::from(0), Int::from(1)], vec![Int::from(1), Int::from(0)]]).unwrap();
        assert_eq!(fixed_subspace(2, &[swap]).len(), 2);
    }

    #[test]
    fn fingerprints_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let q = fixtures::d4();
        let t = random_unimodular(&mut rng, 4);
        assert_eq!(fingerprint(&q).unwrap(), fingerprint(&q.transform(&t)).unwrap());
        assert_eq!(fingerprint(&q).unwrap().shells[0].1, 24);
    }
}
