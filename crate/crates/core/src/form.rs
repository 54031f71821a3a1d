//! Quadratic forms, their coordinate vectors in form space, and the
//! arithmetic action `Q ↦ AᵗQA` of `GL_d(Z)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, format_rational, from_int, parse_rational, Int, Rational};
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, RatMatrix};

pub const FORM_SCHEMA: &str = "ltype.form/1";

/// Dimension `d(d+1)/2` of the space of `d`-ary quadratic forms.
#[inline]
pub fn form_dim(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Position of entry `(i, j)` in form-space coordinates: the diagonal comes
/// first, then the strict upper triangle row by row.
pub fn coord_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if i == j {
        return i;
    }
    // rows 0..i contribute (d-1) + (d-2) + ... + (d-i) entries
    d + i * (2 * d - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`coord_index`].
pub fn coord_pair(d: usize, k: usize) -> (usize, usize) {
    if k < d {
        return (k, k);
    }
    let mut k = k - d;
    for i in 0..d {
        let len = d - i - 1;
        if k < len {
            return (i, i + 1 + k);
        }
        k -= len;
    }
    panic!("coordinate {k} out of range for dimension {d}")
}

/// Pairing weights between form coordinates and dual coefficients: 1 on the
/// diagonal, 2 off it, so that `⟨Q, vvᵗ⟩ = Q[v]`.
pub fn pairing_weights(d: usize) -> Vec<Int> {
    (0..form_dim(d))
        .map(|k| if k < d { Int::one() } else { Int::from(2) })
        .collect()
}

/// Plain linear functional on form coordinates computing `Q ↦ Q[v]`.
pub fn evaluation_functional(v: &[Int]) -> Vec<Int> {
    let d = v.len();
    let mut out = vec![Int::zero(); form_dim(d)];
    for i in 0..d {
        out[i] = &v[i] * &v[i];
        for j in i + 1..d {
            out[coord_index(d, i, j)] = Int::from(2) * &v[i] * &v[j];
        }
    }
    out
}

/// Form-space coordinates: `(q_11, …, q_dd, q_12, q_13, …, q_{d-1,d})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormVector(pub Vec<Rational>);

impl FormVector {
    pub fn from_ints(v: &[Int]) -> FormVector {
        FormVector(v.iter().map(from_int).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weighted pairing with a dual coefficient vector.
    pub fn pair(&self, dual: &[Int]) -> Rational {
        let d = dim_of_form_space(self.0.len()).expect("valid form-space length");
        let mut acc = Rational::zero();
        for (k, (x, c)) in self.0.iter().zip(dual).enumerate() {
            if c.is_zero() || x.is_zero() {
                continue;
            }
            let w = if k < d { Int::one() } else { Int::from(2) };
            acc += x * from_int(&(c * &w));
        }
        acc
    }
}

/// Inverse of [`form_dim`].
pub fn dim_of_form_space(len: usize) -> Option<usize> {
    (0..=len).find(|&d| form_dim(d) == len)
}

/// Symmetric rational matrix, stored as its packed lower triangle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadForm {
    dim: usize,
    lower: Vec<Rational>,
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

impl QuadForm {
    pub fn zero(dim: usize) -> QuadForm {
        QuadForm { dim, lower: vec![Rational::zero(); form_dim(dim)] }
    }

    pub fn identity(dim: usize) -> QuadForm {
        let mut q = QuadForm::zero(dim);
        for i in 0..dim {
            q.lower[tri(i, i)] = Rational::one();
        }
        q
    }

    /// Builds a form from a full matrix, rejecting asymmetric input.
    pub fn from_matrix(m: &[Vec<Rational>]) -> Result<QuadForm> {
        let dim = m.len();
        if dim == 0 {
            return Err(Error::Dimension("a form needs dimension >= 1".into()));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
        }
        let mut lower = Vec::with_capacity(form_dim(dim));
        for i in 0..dim {
            for j in 0..=i {
                if m[i][j] != m[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
                lower.push(m[i][j].clone());
            }
        }
        Ok(QuadForm { dim, lower })
    }

    pub fn from_int_matrix(m: &[Vec<Int>]) -> Result<QuadForm> {
        QuadForm::from_matrix(&linalg::to_rat_matrix(m))
    }

    /// Convenience constructor for literal integer matrices.
    pub fn from_rows(rows: &[&[i64]]) -> Result<QuadForm> {
        let m: IntMatrix = rows.iter().map(|r| arith::ints(r)).collect();
        QuadForm::from_int_matrix(&m)
    }

    pub fn from_form_vector(v: &FormVector) -> Result<QuadForm> {
        let d = dim_of_form_space(v.len())
            .ok_or_else(|| Error::Dimension(format!("{} is not a triangular number", v.len())))?;
        let mut q = QuadForm::zero(d);
        for (k, x) in v.0.iter().enumerate() {
            let (i, j) = coord_pair(d, k);
            q.lower[tri(i, j)] = x.clone();
        }
        Ok(q)
    }

    pub fn from_coords(v: &[Int]) -> Result<QuadForm> {
        QuadForm::from_form_vector(&FormVector::from_ints(v))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.lower[tri(i, j)]
    }

    pub fn matrix(&self) -> RatMatrix {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn to_form_vector(&self) -> FormVector {
        FormVector(
            (0..form_dim(self.dim))
                .map(|k| {
                    let (i, j) = coord_pair(self.dim, k);
                    self.get(i, j).clone()
                })
                .collect(),
        )
    }

    /// Integer coordinates, if every entry is integral.
    pub fn coords(&self) -> Option<Vec<Int>> {
        arith::as_integers(&self.to_form_vector().0)
    }

    /// `(M, den)` with `Q = M / den` and `M` integral.
    pub fn scaled_integer(&self) -> (IntMatrix, Int) {
        let den = self
            .lower
            .iter()
            .fold(Int::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
        let m = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let q = self.get(i, j);
                        q.numer() * &(&den / q.denom())
                    })
                    .collect()
            })
            .collect();
        (m, den)
    }

    pub fn integer_matrix(&self) -> Option<IntMatrix> {
        let (m, den) = self.scaled_integer();
        den.is_one().then_some(m)
    }

    pub fn is_zero(&self) -> bool {
        self.lower.iter().all(|x| x.is_zero())
    }

    /// `Q[x] = xᵗQx`.
    pub fn eval(&self, x: &[Int]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            let mut row = self.get(i, i) * from_int(&x[i]);
            for j in 0..i {
                if !x[j].is_zero() {
                    row += self.get(i, j) * from_int(&(Int::from(2) * &x[j]));
                }
            }
            acc += row * from_int(&x[i]);
        }
        acc
    }

    pub fn eval_rat(&self, x: &[Rational]) -> Rational {
        self.bilinear_rat(x, x)
    }

    pub fn bilinear(&self, x: &[Int], y: &[Int]) -> Rational {
        let xs: Vec<Rational> = x.iter().map(from_int).collect();
        let ys: Vec<Rational> = y.iter().map(from_int).collect();
        self.bilinear_rat(&xs, &ys)
    }

    pub fn bilinear_rat(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let qy = self.mul_rat(y);
        arith::dot_rat(x, &qy)
    }

    pub fn mul_rat(&self, y: &[Rational]) -> Vec<Rational> {
        (0..self.dim)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, yj) in y.iter().enumerate() {
                    if !yj.is_zero() {
                        acc += self.get(i, j) * yj;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> QuadForm {
        QuadForm { dim: self.dim, lower: self.lower.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &QuadForm) -> QuadForm {
        assert_eq!(self.dim, other.dim);
        QuadForm {
            dim: self.dim,
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a + b).collect(),
        }
    }

    /// `Tᵗ Q T` for an arbitrary (not necessarily square) integer matrix `T`
    /// with `dim` rows.
    pub fn transform(&self, t: &[Vec<Int>]) -> QuadForm {
        let n = if t.is_empty() { 0 } else { t[0].len() };
        let q = self.matrix();
        let mut out = vec![vec![Rational::zero(); n]; n];
        // QT
        let qt: RatMatrix = (0..self.dim)
            .map(|i| {
                (0..n)
                    .map(|l| {
                        let mut acc = Rational::zero();
                        for j in 0..self.dim {
                            if !t[j][l].is_zero() && !q[i][j].is_zero() {
                                acc += &q[i][j] * from_int(&t[j][l]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            for l in k..n {
                let mut acc = Rational::zero();
                for i in 0..self.dim {
                    if !t[i][k].is_zero() && !qt[i][l].is_zero() {
                        acc += from_int(&t[i][k]) * &qt[i][l];
                    }
                }
                out[k][l] = acc.clone();
                out[l][k] = acc;
            }
        }
        QuadForm::from_matrix(&out).expect("congruent matrix is symmetric")
    }

    /// `AᵗQA`.
    pub fn act(&self, a: &UnimodularMap) -> QuadForm {
        self.transform(a.matrix())
    }

    pub fn determinant(&self) -> Rational {
        linalg::det_rat(&self.matrix())
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        let (m, _) = self.scaled_integer();
        linalg::rank_int(&m)
    }

    /// Exact positive semidefiniteness test by symmetric elimination with
    /// positive pivots; a zero diagonal entry forces its row to vanish.
    pub fn is_psd(&self) -> bool {
        let mut a = self.matrix();
        let mut active: Vec<usize> = (0..self.dim).collect();
        loop {
            if active.is_empty() {
                return true;
            }
            let pos = active.iter().copied().find(|&i| a[i][i].is_positive());
            let Some(p) = pos else {
                for &i in &active {
                    if a[i][i].is_negative() {
                        return false;
                    }
                    for &j in &active {
                        if !a[i][j].is_zero() {
                            return false;
                        }
                    }
                }
                return true;
            };
            if active.iter().any(|&i| a[i][i].is_negative()) {
                return false;
            }
            let piv = a[p][p].clone();
            active.retain(|&i| i != p);
            for &i in &active {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &piv;
                for &j in &active {
                    if !a[p][j].is_zero() {
                        let t = &f * &a[p][j];
                        a[i][j] -= t;
                    }
                }
            }
        }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.is_psd() && self.rank() == self.dim
    }

    /// Splits off the radical: returns `U` unimodular and the positive
    /// definite `r × r` block `Q'` with `UᵗQU = diag(Q', 0)`.
    pub fn kernel_split(&self) -> Result<(UnimodularMap, QuadForm)> {
        if !self.is_psd() {
            return Err(Error::NotPositiveSemidefinite);
        }
        let d = self.dim;
        let r = self.rank();
        if r == d {
            return Ok((UnimodularMap::identity(d), self.clone()));
        }
        if r == 0 {
            return Err(Error::ZeroForm);
        }
        let zero_rows: Vec<usize> =
            (0..d).filter(|&i| (0..d).all(|j| self.get(i, j).is_zero())).collect();
        let u: IntMatrix = if zero_rows.len() == d - r {
            // radical spanned by coordinate vectors: a permutation suffices
            let order: Vec<usize> =
                (0..d).filter(|i| !zero_rows.contains(i)).chain(zero_rows.iter().copied()).collect();
            (0..d)
                .map(|i| order.iter().map(|&c| if c == i { Int::one() } else { Int::zero() }).collect())
                .collect()
        } else {
            let (m, _) = self.scaled_integer();
            let (u, c) = linalg::column_echelon(&m, d);
            debug_assert_eq!(c, r);
            u
        };
        let u = UnimodularMap::new(u)?;
        let full = self.act(&u);
        let block: RatMatrix =
            (0..r).map(|i| (0..r).map(|j| full.get(i, j).clone()).collect()).collect();
        Ok((u, QuadForm::from_matrix(&block)?))
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            schema: Some(FORM_SCHEMA.to_string()),
            dim: self.dim,
            q: self
                .matrix()
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &FormJson) -> Result<QuadForm> {
        if j.q.len() != j.dim {
            return Err(Error::Parse(format!(
                "form has {} rows but dim = {}",
                j.q.len(),
                j.dim
            )));
        }
        let mut m = Vec::with_capacity(j.dim);
        for (i, row) in j.q.iter().enumerate() {
            if row.len() != j.dim {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {}", row.len(), j.dim)));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    parse_rational(s).map_err(|e| Error::Parse(format!("entry ({i}, {k}): {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            m.push(parsed);
        }
        QuadForm::from_matrix(&m)
    }
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadForm[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", format_rational(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .matrix()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// On-disk form: `{"schema": ..., "dim": d, "q": [["p/q", ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub dim: usize,
    #[serde(deserialize_with = "de_entries")]
    pub q: Vec<Vec<String>>,
}

fn de_entries<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<String>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Num(i64),
        Str(String),
    }
    let raw: Vec<Vec<Entry>> = Vec::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| match e {
                    Entry::Num(n) => n.to_string(),
                    Entry::Str(s) => s,
                })
                .collect()
        })
        .collect())
}

impl Serialize for QuadForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<QuadForm, D::Error> {
        let j = FormJson::deserialize(d)?;
        QuadForm::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// Integer matrix of determinant ±1, acting on forms by `Q ↦ AᵗQA`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IntMatrix", into = "IntMatrix")]
pub struct UnimodularMap {
    m: IntMatrix,
}

impl TryFrom<IntMatrix> for UnimodularMap {
    type Error = Error;
    fn try_from(m: IntMatrix) -> Result<UnimodularMap> {
        UnimodularMap::new(m)
    }
}

impl From<UnimodularMap> for IntMatrix {
    fn from(u: UnimodularMap) -> IntMatrix {
        u.m
    }
}

impl UnimodularMap {
    pub fn new(m: IntMatrix) -> Result<UnimodularMap> {
        let d = m.len();
        if m.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension("unimodular map must be square".into()));
        }
        let det = linalg::det_int(&m);
        if det.abs() != Int::one() {
            return Err(Error::Invalid(format!("matrix has determinant {det}, not ±1")));
        }
        Ok(UnimodularMap { m })
    }

    pub(crate) fn new_unchecked(m: IntMatrix) -> UnimodularMap {
        UnimodularMap { m }
    }

    pub fn identity(d: usize) -> UnimodularMap {
        UnimodularMap { m: linalg::identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap { m: linalg::mat_mul(&self.m, &other.m) }
    }

    pub fn inverse(&self) -> UnimodularMap {
        UnimodularMap {
            m: linalg::inverse_unimodular(&self.m).expect("unimodular matrices are invertible over Z"),
        }
    }

    pub fn transpose(&self) -> UnimodularMap {
        UnimodularMap { m: linalg::transpose(&self.m) }
    }

    /// `A x`.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        linalg::mat_vec(&self.m, x)
    }

    /// Matrix of the induced linear map `Q ↦ AᵗQA` on form coordinates.
    pub fn form_action(&self) -> IntMatrix {
        form_action_matrix(&self.m)
    }

    pub fn is_identity(&self) -> bool {
        self.m == linalg::identity(self.dim())
    }
}

/// Matrix `M` with `coords(AᵗQA) = M · coords(Q)`.
pub fn form_action_matrix(a: &[Vec<Int>]) -> IntMatrix {
    let d = a.len();
    let n = form_dim(d);
    let mut out = vec![vec![Int::zero(); n]; n];
    for (r, row) in out.iter_mut().enumerate() {
        let (k, l) = coord_pair(d, r);
        for (c, entry) in row.iter_mut().enumerate() {
            let (i, j) = coord_pair(d, c);
            *entry = if i == j {
                &a[i][k] * &a[i][l]
            } else {
                &a[i][k] * &a[j][l] + &a[j][k] * &a[i][l]
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat, rint};

    fn brute_minors_nonneg(q: &QuadForm) -> bool {
        let d = q.dim();
        let m = q.matrix();
        (1u32..(1 << d)).all(|mask| {
            let idx: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
            let sub: RatMatrix = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
            !linalg::det_rat(&sub).is_negative()
        })
    }

    #[test]
    fn coordinates_roundtrip() {
        for d in 1..=6 {
            for k in 0..form_dim(d) {
                let (i, j) = coord_pair(d, k);
                assert_eq!(coord_index(d, i, j), k);
            }
        }
        assert_eq!(coord_pair(3, 3), (0, 1));
        assert_eq!(coord_pair(3, 4), (0, 2));
        assert_eq!(coord_pair(3, 5), (1, 2));
    }

    #[test]
    fn evaluation_pairing() {
        let q = QuadForm::from_rows(&[&[2, 1, 0], &[1, 3, -1], &[0, -1, 5]]).unwrap();
        let v = ints(&[1, -2, 3]);
        let f = evaluation_functional(&v);
        let coords = q.coords().unwrap();
        assert_eq!(from_int(&arith::dot(&f, &coords)), q.eval(&v));
        // dual pairing with weights
        let dual: Vec<Int> = (0..6)
            .map(|k| {
                let (i, j) = coord_pair(3, k);
                &v[i] * &v[j]
            })
            .collect();
        assert_eq!(q.to_form_vector().pair(&dual), q.eval(&v));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QuadForm::identity(3).rank(), 3);
        assert_eq!(QuadForm::zero(4).rank(), 0);
        assert_eq!(crate::fixtures::r2().rank(), 5);
    }

    #[test]
    fn psd_examples() {
        assert!(QuadForm::identity(2).is_psd());
        assert!(!QuadForm::from_rows(&[&[1, 0], &[0, -1]]).unwrap().is_psd());
        let r2 = crate::fixtures::r2();
        assert!(r2.is_psd());
        assert!(brute_minors_nonneg(&r2));
        assert!(!QuadForm::from_rows(&[&[0, 1], &[1, 0]]).unwrap().is_psd());
        assert!(!QuadForm::from_rows(&[&[1, 2], &[2, 1]]).unwrap().is_psd());
    }

    #[test]
    fn kernel_split_shapes() {
        let q = QuadForm::from_rows(&[&[2, 1], &[1, 2]]).unwrap();
        let (u, b) = q.kernel_split().unwrap();
        assert!(u.is_identity());
        assert_eq!(b, q);

        let r2 = crate::fixtures::r2();
        let (u, b) = r2.kernel_split().unwrap();
        assert_eq!(b.dim(), 5);
        assert!(b.is_positive_definite());
        let full = r2.act(&u);
        for i in 0..6 {
            assert!(full.get(5, i).is_zero());
        }
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(b.get(i, j), r2.get(i + 1, j + 1));
            }
        }

        let rank1 = QuadForm::from_rows(&[&[1, 1], &[1, 1]]).unwrap();
        let (u, b) = rank1.kernel_split().unwrap();
        let full = rank1.act(&u);
        assert_eq!(b.dim(), 1);
        assert_eq!(b.get(0, 0), &rint(1));
        assert!(full.get(1, 1).is_zero() && full.get(0, 1).is_zero());

        assert!(QuadForm::from_rows(&[&[1, 0], &[0, -1]]).unwrap().kernel_split().is_err());
    }

    #[test]
    fn kernel_split_generic_radical() {
        // Q = vvᵗ + wwᵗ with v=(1,2,3), w=(0,1,1): radical not a coordinate direction
        let v = ints(&[1, 2, 3]);
        let w = ints(&[0, 1, 1]);
        let m: IntMatrix = (0..3)
            .map(|i| (0..3).map(|j| &v[i] * &v[j] + &w[i] * &w[j]).collect())
            .collect();
        let q = QuadForm::from_int_matrix(&m).unwrap();
        let (u, b) = q.kernel_split().unwrap();
        assert_eq!(b.dim(), 2);
        assert!(b.is_positive_definite());
        let full = q.act(&u);
        for i in 0..3 {
            assert!(full.get(2, i).is_zero());
        }
    }

    #[test]
    fn action_matrix_matches_congruence() {
        let q = QuadForm::from_rows(&[&[3, 1, -1], &[1, 4, 2], &[-1, 2, 6]]).unwrap();
        let a = UnimodularMap::new(vec![ints(&[1, 2, 0]), ints(&[0, 1, -1]), ints(&[1, 1, 1])])
            .unwrap_or_else(|_| UnimodularMap::new(vec![ints(&[1, 2, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])]).unwrap());
        let direct = q.act(&a).coords().unwrap();
        let via = linalg::mat_vec(&a.form_action(), &q.coords().unwrap());
        assert_eq!(direct, via);
    }

    #[test]
    fn json_roundtrip_and_rejects_asymmetric() {
        let q = QuadForm::from_matrix(&[vec![rat(1, 2), rint(1)], vec![rint(1), rint(3)]]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        let back: QuadForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        let bad = r#"{"dim": 2, "q": [["1", "2"], ["3", "1"]]}"#;
        assert!(serde_json::from_str::<QuadForm>(bad).is_err());
        let ints_ok = r#"{"dim": 2, "q": [[1, 2], [2, 5]]}"#;
        assert!(serde_json::from_str::<QuadForm>(ints_ok).is_ok());
    }
}
