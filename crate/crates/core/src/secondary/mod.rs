//! L-type domains as secondary cones of Delone subdivisions: regulators,
//! coplanarity equalities, rigidity degree, flips and equivalence of stars.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::arith::{canonical_sign, clear_denominators, dot, from_int, make_primitive, Int, Rational};
use crate::delone::{delone_star, DeloneCell, DeloneStar};
use crate::error::{Error, Result};
use crate::form::{evaluation_functional, form_dim, pairing_weights, QuadForm, UnimodularMap};
use crate::isometry::{for_each_isometry, generators_of};
use crate::linalg::{column_echelon, independent_rows, inverse_unimodular, mat_vec, rank_int, IntMatrix};
use crate::polyhedral::{dual_description, HCone};

pub const SECONDARY_SCHEMA: &str = "ltype.secondary/1";

/// Linear functional on forms in weighted coordinates: its value on `Q` is
/// the weighted pairing `Σ c_ii q_ii + 2 Σ_{i<j} c_ij q_ij`, so `vvᵗ`
/// evaluates `Q[v]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearFunctionalOnForms {
    pub coeffs: Vec<Int>,
}

impl LinearFunctionalOnForms {
    /// From plain coefficients `p` (value `Σ p_k q_k`), made primitive.
    pub fn from_plain(p: &[Int]) -> LinearFunctionalOnForms {
        let d = crate::form::dim_of_form_space(p.len()).expect("form-space length");
        let odd = p[d..].iter().any(|x| x.is_odd());
        let coeffs: Vec<Int> = p
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let x = if odd { x * Int::from(2) } else { x.clone() };
                if k < d {
                    x
                } else {
                    x / Int::from(2)
                }
            })
            .collect();
        LinearFunctionalOnForms { coeffs: make_primitive(coeffs) }
    }

    /// Plain coefficients, primitive.
    pub fn plain(&self) -> Vec<Int> {
        let d = crate::form::dim_of_form_space(self.coeffs.len()).expect("form-space length");
        make_primitive(self.coeffs.iter().zip(pairing_weights(d)).map(|(c, w)| c * &w).collect())
    }

    pub fn eval(&self, q: &QuadForm) -> Rational {
        q.to_form_vector().pair(&self.coeffs)
    }

    pub fn negate(&self) -> LinearFunctionalOnForms {
        LinearFunctionalOnForms { coeffs: self.coeffs.iter().map(|x| -x.clone()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondaryCone {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub ambient_dim: usize,
    /// Independent coplanarity equalities.
    pub equalities: Vec<LinearFunctionalOnForms>,
    /// Irredundant facet inequalities (`f(Q) >= 0`).
    pub facets: Vec<LinearFunctionalOnForms>,
    pub witness: QuadForm,
}

impl SecondaryCone {
    /// Dimension of the linear span of the domain.
    pub fn dim(&self) -> usize {
        let rows: IntMatrix = self.equalities.iter().map(|e| e.plain()).collect();
        self.ambient_dim - rank_int(&rows)
    }

    pub fn form_dim(&self) -> usize {
        crate::form::dim_of_form_space(self.ambient_dim).expect("form-space length")
    }

    /// Extreme rays of the closed domain as form coordinates, sorted.
    pub fn extreme_rays(&self) -> Result<Vec<Vec<Int>>> {
        let eq: IntMatrix = self.equalities.iter().map(|e| e.plain()).collect();
        let ineq: IntMatrix = self.facets.iter().map(|f| f.plain()).collect();
        let r = restrict(self.ambient_dim, &eq, &ineq)?;
        Ok(r.rays)
    }

    /// Plain-coordinate facet cone (for primitive domains, the whole cone).
    pub fn hcone(&self) -> Result<HCone> {
        HCone::new(self.ambient_dim, self.facets.iter().map(|f| f.plain()).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut c = self.clone();
        c.schema = Some(SECONDARY_SCHEMA.into());
        Ok(serde_json::to_string_pretty(&c)?)
    }
}

/// Linear constraints of a star's domain in plain coordinates: coplanarity
/// equalities (not yet reduced) and one regulator per wall.
#[derive(Clone, Debug)]
pub struct DomainConstraints {
    pub equalities: Vec<Vec<Int>>,
    pub regulators: Vec<Vec<Int>>,
}

/// Plain functional `Q ↦ Q[w] - Σ λ_i Q[b_i]`, primitive.
fn lifted_functional(w: &[Int], basis: &[&Vec<Int>], lambda: &[Rational]) -> Vec<Int> {
    let mut acc: Vec<Rational> = evaluation_functional(w).iter().map(from_int).collect();
    for (b, l) in basis.iter().zip(lambda) {
        if l.is_zero() {
            continue;
        }
        for (a, e) in acc.iter_mut().zip(evaluation_functional(b)) {
            *a -= l * from_int(&e);
        }
    }
    clear_denominators(&acc)
}

/// Affine basis of a cell containing 0: the origin plus `d` linearly
/// independent vertices, chosen greedily in vertex order after `prefer`.
fn affine_basis<'a>(cell: &'a DeloneCell, prefer: &[&'a Vec<Int>]) -> Vec<&'a Vec<Int>> {
    let d = cell.center.len();
    let mut chosen: Vec<&Vec<Int>> = Vec::new();
    let mut rows: IntMatrix = Vec::new();
    for v in prefer.iter().copied().chain(cell.vertices.iter()) {
        if v.iter().all(Int::is_zero) || chosen.contains(&v) {
            continue;
        }
        rows.push(v.clone());
        if rank_int(&rows) == rows.len() {
            chosen.push(v);
            if chosen.len() == d {
                break;
            }
        } else {
            rows.pop();
        }
    }
    chosen
}

/// Linear coordinates of `u` in the basis `b` (the origin carries the rest
/// of the affine weight, and `Q[0] = 0`).
fn linear_coords(b: &[&Vec<Int>], u: &[Int]) -> Vec<Rational> {
    let d = u.len();
    let m: Vec<Vec<Rational>> = (0..d).map(|r| b.iter().map(|v| from_int(&v[r])).collect()).collect();
    crate::linalg::solve(&m, &u.iter().map(from_int).collect::<Vec<_>>()).expect("independent basis")
}

fn common(a: &[Vec<Int>], b: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Equalities and regulators of a star. Walls are pairs of star cells whose
/// common vertices span a hyperplane; every wall of the periodic
/// subdivision has a translate of this kind.
pub fn domain_constraints(star: &DeloneStar) -> DomainConstraints {
    let d = star.dim();
    let mut equalities = BTreeSet::new();
    for c in &star.cells {
        if c.vertices.len() > d + 1 {
            let b = affine_basis(c, &[]);
            for u in &c.vertices {
                if u.iter().all(Int::is_zero) || b.contains(&u) {
                    continue;
                }
                let mu = linear_coords(&b, u);
                let f = lifted_functional(u, &b, &mu);
                if f.iter().any(|x| !x.is_zero()) {
                    equalities.insert(canonical_sign(make_primitive(f)));
                }
            }
        }
    }
    // candidate pairs share at least d vertices
    let mut by_vertex: FxHashMap<&Vec<Int>, Vec<usize>> = FxHashMap::default();
    for (i, c) in star.cells.iter().enumerate() {
        for v in &c.vertices {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut regulators = BTreeSet::new();
    let mut count = vec![0usize; star.cells.len()];
    for (i, c1) in star.cells.iter().enumerate() {
        let mut partners = Vec::new();
        for v in &c1.vertices {
            for &j in &by_vertex[v] {
                if j > i {
                    if count[j] == 0 {
                        partners.push(j);
                    }
                    count[j] += 1;
                }
            }
        }
        partners.sort_unstable();
        for j in partners {
            let enough = count[j] >= d;
            count[j] = 0;
            if !enough {
                continue;
            }
            let c2 = &star.cells[j];
            let shared = common(&c1.vertices, &c2.vertices);
            if shared.len() < d {
                continue;
            }
            // the shared vertices (with 0 among them) must span a hyperplane
            let nonzero: IntMatrix = shared.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
            if rank_int(&nonzero) != d - 1 {
                continue;
            }
            let pref: Vec<&Vec<Int>> = shared.iter().collect();
            let b = affine_basis(c1, &pref);
            let w = c2.vertices.iter().find(|v| c1.vertices.binary_search(v).is_err()).expect("distinct cells");
            let lambda = linear_coords(&b, w);
            let f = lifted_functional(w, &b, &lambda);
            regulators.insert(make_primitive(f));
        }
    }
    DomainConstraints { equalities: equalities.into_iter().collect(), regulators: regulators.into_iter().collect() }
}

/// A cone given by equalities and inequalities, restricted to the integer
/// points of the equality subspace.
struct Restricted {
    /// columns span `L ∩ Z^D`
    basis: IntMatrix,
    /// for each distinct nonzero restricted inequality, one source index
    source: Vec<usize>,
    rays: Vec<Vec<Int>>,
    /// per restricted inequality, indices of incident rays
    incident: Vec<Vec<usize>>,
}

fn restrict(ambient: usize, eq: &[Vec<Int>], ineq: &[Vec<Int>]) -> Result<Restricted> {
    let basis: IntMatrix = if eq.is_empty() {
        crate::linalg::identity(ambient)
    } else {
        let (u, r) = column_echelon(eq, ambient);
        // keep the kernel columns r.. as a D × k matrix
        u.iter().map(|row| row[r..].to_vec()).collect()
    };
    let k = basis.first().map_or(0, Vec::len);
    if k == 0 {
        return Err(Error::EmptyCone);
    }
    let mut seen = std::collections::BTreeMap::new();
    for (i, f) in ineq.iter().enumerate() {
        let g: Vec<Int> = (0..k).map(|c| basis.iter().zip(f).map(|(row, x)| &row[c] * x).sum()).collect();
        if g.iter().all(Int::is_zero) {
            continue;
        }
        seen.entry(make_primitive(g)).or_insert(i);
    }
    let (restricted, source): (Vec<Vec<Int>>, Vec<usize>) = seen.into_iter().unzip();
    let cone = HCone::new(k, restricted)?;
    let rays_y = dual_description(&cone)?;
    let rays: Vec<Vec<Int>> = rays_y.iter().map(|r| make_primitive(mat_vec(&basis, &r.direction))).collect();
    let incident = (0..source.len())
        .map(|j| (0..rays_y.len()).filter(|&r| rays_y[r].incidence.contains(&j)).collect())
        .collect();
    let mut out = Restricted { basis, source, rays, incident };
    // sort rays for determinism, keeping incidences aligned
    let mut order: Vec<usize> = (0..out.rays.len()).collect();
    order.sort_by(|&a, &b| out.rays[a].cmp(&out.rays[b]));
    let mut pos = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    out.rays = order.iter().map(|&i| out.rays[i].clone()).collect();
    for inc in out.incident.iter_mut() {
        for x in inc.iter_mut() {
            *x = pos[*x];
        }
        inc.sort_unstable();
    }
    Ok(out)
}

/// Secondary cone together with the extreme rays of its closure (form
/// coordinates, sorted). Does not re-check the star against its form.
pub fn secondary_cone_with_rays(star: &DeloneStar) -> Result<(SecondaryCone, Vec<Vec<Int>>)> {
    let d = star.dim();
    let big = form_dim(d);
    let cons = domain_constraints(star);
    let eq_idx = independent_rows(&cons.equalities);
    let equalities: IntMatrix = eq_idx.iter().map(|&i| cons.equalities[i].clone()).collect();
    let r = restrict(big, &equalities, &cons.regulators)?;
    let k = r.basis.first().map_or(0, Vec::len);
    // irredundant: incident rays of rank k - 1
    let mut facets = Vec::new();
    for (j, inc) in r.incident.iter().enumerate() {
        let rows: IntMatrix = inc.iter().map(|&i| r.rays[i].clone()).collect();
        if rank_int(&rows) + 1 == k {
            facets.push(LinearFunctionalOnForms::from_plain(&cons.regulators[r.source[j]]));
        }
    }
    facets.sort();
    let witness = ray_sum(big, &r.rays)?;
    let cone = SecondaryCone {
        schema: None,
        ambient_dim: big,
        equalities: equalities.iter().map(|e| LinearFunctionalOnForms::from_plain(e)).map(canonical_functional).collect(),
        facets,
        witness,
    };
    Ok((cone, r.rays))
}

fn canonical_functional(f: LinearFunctionalOnForms) -> LinearFunctionalOnForms {
    LinearFunctionalOnForms { coeffs: canonical_sign(f.coeffs) }
}

fn ray_sum(big: usize, rays: &[Vec<Int>]) -> Result<QuadForm> {
    if rays.is_empty() {
        return Err(Error::EmptyCone);
    }
    let mut s = vec![Int::zero(); big];
    for r in rays {
        for (a, b) in s.iter_mut().zip(r) {
            *a += b;
        }
    }
    QuadForm::from_coords(&s)
}

/// The L-type domain of a star. The star must be the Delone star of its own
/// form.
pub fn secondary_cone(star: &DeloneStar) -> Result<SecondaryCone> {
    let fresh = delone_star(&star.form)?;
    if !fresh.same_subdivision(star) {
        return Err(Error::StaleStar("cells differ from the Delone star of the stored form".into()));
    }
    Ok(secondary_cone_with_rays(star)?.0)
}

/// Sum of the primitive extreme rays of the closed domain: an interior form
/// that is equivariant under `GL_d(Z)`.
pub fn interior_form(cone: &SecondaryCone) -> Result<QuadForm> {
    ray_sum(cone.ambient_dim, &cone.extreme_rays()?)
}

/// Dimension of the linear span of the L-type domain of a psd form.
pub fn rigidity_degree(q: &QuadForm) -> Result<usize> {
    if q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (_, block) = q.kernel_split()?;
    let star = delone_star(&block)?;
    let cons = domain_constraints(&star);
    Ok(form_dim(block.dim()) - rank_int(&cons.equalities))
}

fn rank_of_coords(x: &[Int]) -> Result<usize> {
    Ok(QuadForm::from_coords(x)?.rank())
}

/// Delone star just across a facet of the star's domain.
///
/// With `P` the sum of the closure's rays on the facet and `W` the witness,
/// the forms `kP - W` eventually enter the neighboring domain; `k` doubles
/// until the star of `kP - W` has a domain of the same dimension whose
/// closure contains `P`.
pub fn flip(star: &DeloneStar, facet: &LinearFunctionalOnForms) -> Result<DeloneStar> {
    let (cone, rays) = secondary_cone_with_rays(star)?;
    flip_with(&cone, &rays, star.dim(), facet)
}

pub(crate) fn flip_with(cone: &SecondaryCone, rays: &[Vec<Int>], d: usize, facet: &LinearFunctionalOnForms) -> Result<DeloneStar> {
    if !cone.facets.contains(facet) {
        return Err(Error::NotAFacet);
    }
    let plain = facet.plain();
    let on: Vec<&Vec<Int>> = rays.iter().filter(|r| dot(&plain, r).is_zero()).collect();
    let big = cone.ambient_dim;
    let mut p = vec![Int::zero(); big];
    for r in &on {
        for (a, b) in p.iter_mut().zip(r.iter()) {
            *a += b;
        }
    }
    if on.is_empty() || rank_of_coords(&p)? < d {
        return Err(Error::DegenerateFacet);
    }
    let p_form = QuadForm::from_coords(&p)?;
    let dim = cone.dim();
    let mut k = Int::from(2);
    for _ in 0..64 {
        let q = p_form.scale(&from_int(&k)).add(&cone.witness.scale(&-Rational::one()));
        if q.is_positive_definite() {
            let s = delone_star(&q)?;
            let cons = domain_constraints(&s);
            let eq_rank = rank_int(&cons.equalities);
            let vanish = cons.equalities.iter().all(|e| dot(e, &p).is_zero());
            let closed = cons.regulators.iter().all(|f| !dot(f, &p).is_negative());
            if big - eq_rank == dim && vanish && closed {
                return Ok(s);
            }
        }
        k *= Int::from(2);
    }
    Err(Error::Invalid("flip did not reach the neighboring domain".into()))
}

/// `Σ_cells Σ_{v,w} (v - w)(v - w)ᵗ`, positive definite because the cells
/// span.
pub fn characteristic_form(star: &DeloneStar) -> Result<QuadForm> {
    let d = star.dim();
    let mut m = vec![vec![Int::zero(); d]; d];
    for c in &star.cells {
        for (i, v) in c.vertices.iter().enumerate() {
            for w in &c.vertices[i + 1..] {
                let e: Vec<Int> = v.iter().zip(w).map(|(a, b)| a - b).collect();
                for r in 0..d {
                    for s in 0..d {
                        m[r][s] += &e[r] * &e[s];
                    }
                }
            }
        }
    }
    QuadForm::from_int_matrix(&m)
}

fn inverse_form(x: &QuadForm) -> Result<QuadForm> {
    let inv = crate::linalg::inverse_rat(&x.matrix()).ok_or(Error::NotPositiveDefinite)?;
    QuadForm::from_matrix(&inv)
}

fn map_cells(a: &IntMatrix, star: &DeloneStar) -> Vec<Vec<Vec<Int>>> {
    let mut out: Vec<Vec<Vec<Int>>> = star
        .cells
        .iter()
        .map(|c| {
            let mut vs: Vec<Vec<Int>> = c.vertices.iter().map(|v| mat_vec(a, v)).collect();
            vs.sort();
            vs
        })
        .collect();
    out.sort();
    out
}

/// Calls `visit` with every `A` carrying the subdivision of `s2` onto that
/// of `s1`, i.e. with `AᵗΔ1A = Δ2` for their domains.
fn for_each_star_map(s1: &DeloneStar, s2: &DeloneStar, mut visit: impl FnMut(&UnimodularMap) -> ControlFlow<()>) -> Result<()> {
    if s1.dim() != s2.dim() || s1.cell_sizes() != s2.cell_sizes() {
        return Ok(());
    }
    // X transforms contravariantly, its inverse like a form
    let y1 = inverse_form(&characteristic_form(s1)?)?;
    let y2 = inverse_form(&characteristic_form(s2)?)?;
    let target = s1.vertex_sets();
    for_each_isometry(&y1, &y2, |a| {
        if map_cells(a.matrix(), s2) == target {
            visit(a)
        } else {
            ControlFlow::Continue(())
        }
    })
}

pub fn triangulation_isomorphic(s1: &DeloneStar, s2: &DeloneStar) -> Result<Option<UnimodularMap>> {
    let mut found = None;
    for_each_star_map(s1, s2, |a| {
        found = Some(a.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Stabilizer of the subdivision in `GL_d(Z)`: generators and order.
pub fn triangulation_automorphisms(s: &DeloneStar) -> Result<(Vec<UnimodularMap>, u64)> {
    let mut all = Vec::new();
    for_each_star_map(s, s, |a| {
        all.push(a.clone());
        ControlFlow::Continue(())
    })?;
    all.sort();
    Ok((generators_of(s.dim(), &all), all.len() as u64))
}

/// `A⁻¹` applied to every cell: the star of `AᵗQA`.
pub fn transform_star(star: &DeloneStar, a: &UnimodularMap) -> DeloneStar {
    let inv = inverse_unimodular(a.matrix()).expect("unimodular");
    let mut cells: Vec<DeloneCell> = star
        .cells
        .iter()
        .map(|c| {
            let mut vertices: Vec<Vec<Int>> = c.vertices.iter().map(|v| mat_vec(&inv, v)).collect();
            vertices.sort();
            let center = inv.iter().map(|row| row.iter().zip(&c.center).map(|(x, y)| from_int(x) * y).sum()).collect();
            DeloneCell { vertices, center, sq_radius: c.sq_radius.clone() }
        })
        .collect();
    cells.sort();
    DeloneStar { schema: None, form: star.form.act(a), cells }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unimodular(rng: &mut ChaCha8Rng, d: usize) -> UnimodularMap {
        let mut m = crate::linalg::identity(d);
        for _ in 0..2 * d {
            let i = rng.gen_range(0..d);
            let j = rng.gen_range(0..d);
            if i != j {
                let k = Int::from(rng.gen_range(-1i64..=1));
                for row in m.iter_mut() {
                    let t = &row[i] * &k;
                    row[j] += t;
                }
            }
        }
        UnimodularMap::new(m).unwrap()
    }

    fn random_pd(rng: &mut ChaCha8Rng, d: usize) -> QuadForm {
        loop {
            let mut rows = vec![vec![0i64; d]; d];
            for i in 0..d {
                rows[i][i] = rng.gen_range(2..8);
                for j in 0..i {
                    let x = rng.gen_range(-2..=2);
                    rows[i][j] = x;
                    rows[j][i] = x;
                }
            }
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let q = QuadForm::from_rows(&refs).unwrap();
            if q.is_positive_definite() {
                return q;
            }
        }
    }

    #[test]
    fn functional_coordinates() {
        // Q[(1,1)] = q11 + q22 + 2 q12: weighted coefficients (1, 1, 1)
        let f = LinearFunctionalOnForms::from_plain(&evaluation_functional(&crate::arith::ints(&[1, 1])));
        assert_eq!(f.coeffs, crate::arith::ints(&[1, 1, 1]));
        assert_eq!(f.eval(&QuadForm::from_rows(&[&[2, 1], &[1, 2]]).unwrap()), Rational::from(Int::from(6)));
        assert_eq!(f.plain(), crate::arith::ints(&[1, 1, 2]));
    }

    #[test]
    fn hexagonal_domain() {
        let s = delone_star(&fixtures::a_root(2)).unwrap();
        let c = secondary_cone(&s).unwrap();
        assert!(c.equalities.is_empty());
        assert_eq!(c.facets.len(), 3);
        assert_eq!(c.extreme_rays().unwrap().len(), 3);
        for f in &c.facets {
            assert!(f.eval(&c.witness).is_positive());
        }
        // round trip through the interior form
        let w = interior_form(&c).unwrap();
        assert!(delone_star(&w).unwrap().same_subdivision(&s));
    }

    #[test]
    fn square_domain_is_two_dimensional() {
        let s = delone_star(&QuadForm::identity(2)).unwrap();
        let c = secondary_cone(&s).unwrap();
        assert_eq!(c.equalities.len(), 1);
        assert_eq!(c.dim(), 2);
        // diagonal forms are exactly the solutions: q12 = 0
        assert_eq!(c.equalities[0].plain(), crate::arith::ints(&[0, 0, 1]));
        assert_eq!(rigidity_degree(&QuadForm::identity(2)).unwrap(), 2);
    }

    #[test]
    fn rigid_examples() {
        assert_eq!(rigidity_degree(&fixtures::d4()).unwrap(), 1);
        let c = secondary_cone(&delone_star(&fixtures::d4()).unwrap()).unwrap();
        assert_eq!(c.dim(), 1);
        let w = interior_form(&c).unwrap();
        // positive multiple of D4
        let ratio = w.get(0, 0) / fixtures::d4().get(0, 0);
        assert_eq!(w, fixtures::d4().scale(&ratio));
        assert_eq!(rigidity_degree(&QuadForm::from_rows(&[&[3]]).unwrap()).unwrap(), 1);
        assert!(matches!(rigidity_degree(&QuadForm::zero(2)), Err(Error::ZeroForm)));
    }

    #[test]
    fn stale_star_is_rejected() {
        let mut s = delone_star(&fixtures::a_root(2)).unwrap();
        s.form = QuadForm::identity(2);
        assert!(matches!(secondary_cone(&s), Err(Error::StaleStar(_))));
    }

    #[test]
    fn random_domains_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..12 {
            let d = rng.gen_range(2..=4);
            let q = random_pd(&mut rng, d);
            let s = delone_star(&q).unwrap();
            let (c, rays) = secondary_cone_with_rays(&s).unwrap();
            assert!(delone_star(&c.witness).unwrap().same_subdivision(&s));
            // q itself lies in the closed domain
            for f in &c.facets {
                assert!(!f.eval(&q).is_negative());
            }
            for e in &c.equalities {
                assert!(e.eval(&q).is_zero());
            }
            // closed-domain samples satisfy every facet
            for _ in 0..8 {
                let mut x = vec![Int::zero(); c.ambient_dim];
                for r in &rays {
                    let t = Int::from(rng.gen_range(0i64..4));
                    for (a, b) in x.iter_mut().zip(r) {
                        *a += &t * b;
                    }
                }
                let f = QuadForm::from_coords(&x).unwrap();
                assert!(c.facets.iter().all(|g| !g.eval(&f).is_negative()));
            }
            let a = random_unimodular(&mut rng, d);
            assert_eq!(rigidity_degree(&q).unwrap(), rigidity_degree(&q.act(&a)).unwrap());
            assert_eq!(rigidity_degree(&q).unwrap(), rigidity_degree(&q.scale(&crate::arith::rat(5, 3))).unwrap());
            assert_eq!(c.dim(), rigidity_degree(&q).unwrap());
        }
    }

    #[test]
    fn flips_in_low_dimension() {
        for d in 2..=3 {
            let s = delone_star(&fixtures::principal(d)).unwrap();
            let c = secondary_cone(&s).unwrap();
            assert_eq!(c.dim(), form_dim(d));
            for f in &c.facets {
                let n = flip(&s, f).unwrap();
                assert!(n.is_triangulation());
                assert!(!n.same_subdivision(&s));
                assert!(triangulation_isomorphic(&s, &n).unwrap().is_some());
                // flipping back across the matching wall
                let back = flip(&n, &f.negate()).unwrap();
                assert!(back.same_subdivision(&s));
            }
        }
    }

    #[test]
    fn star_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a2 = delone_star(&fixtures::a_root(2)).unwrap();
        let i2 = delone_star(&QuadForm::identity(2)).unwrap();
        assert!(triangulation_isomorphic(&a2, &i2).unwrap().is_none());
        for _ in 0..5 {
            let d = rng.gen_range(2..=4);
            let q = random_pd(&mut rng, d);
            let s = delone_star(&q).unwrap();
            let u = random_unimodular(&mut rng, d);
            let t = delone_star(&q.act(&u)).unwrap();
            assert_eq!(transform_star(&s, &u), t);
            let a = triangulation_isomorphic(&s, &t).unwrap().expect("conjugate stars");
            assert_eq!(transform_star(&s, &a).vertex_sets(), t.vertex_sets());
        }
        assert_eq!(triangulation_automorphisms(&i2).unwrap().1, 8);
        assert_eq!(triangulation_automorphisms(&a2).unwrap().1, 12);
        let d4 = delone_star(&fixtures::d4()).unwrap();
        assert_eq!(triangulation_automorphisms(&d4).unwrap().1, crate::isometry::automorphisms(&fixtures::d4()).unwrap().order);
    }
}
