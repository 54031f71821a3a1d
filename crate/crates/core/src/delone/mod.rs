//! Delone subdivisions (the star of the origin) and Dirichlet–Voronoi
//! polytopes of quadratic forms.

mod polytope;

pub use polytope::{minkowski_sum, strongly_isomorphic, support_face, VPolytope, POLYTOPE_SCHEMA};

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::arith::{from_int, rational_str, Int, Rational};
use crate::error::{Error, Result};
use crate::form::QuadForm;
use crate::lattice::{closest_vectors_with_distance, lll_reduce, Enumerator};
use crate::linalg::{mat_vec, transpose};
use crate::polyhedral::{dual_description, HCone};

pub const STAR_SCHEMA: &str = "ltype.star/1";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeloneCell {
    /// Sorted lexicographically.
    pub vertices: Vec<Vec<Int>>,
    #[serde(with = "rational_str::vec")]
    pub center: Vec<Rational>,
    #[serde(with = "rational_str")]
    pub sq_radius: Rational,
}

impl DeloneCell {
    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.center.len() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeloneStar {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub form: QuadForm,
    /// Cells containing the origin, sorted by vertex list.
    pub cells: Vec<DeloneCell>,
}

impl DeloneStar {
    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(DeloneCell::is_simplex)
    }

    /// Sorted multiset of cell sizes.
    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cells.iter().map(|c| c.vertices.len()).collect();
        v.sort_unstable();
        v
    }

    /// The cell vertex sets, which determine the subdivision.
    pub fn vertex_sets(&self) -> Vec<Vec<Vec<Int>>> {
        self.cells.iter().map(|c| c.vertices.clone()).collect()
    }

    pub fn same_subdivision(&self, other: &DeloneStar) -> bool {
        self.dim() == other.dim()
            && self.cells.len() == other.cells.len()
            && self.cells.iter().zip(&other.cells).all(|(a, b)| a.vertices == b.vertices)
    }

    /// Re-verifies every empty-sphere certificate: the lattice points closest
    /// to each center are exactly the cell's vertices, at distance ρ.
    pub fn certify(&self) -> Result<()> {
        for (i, c) in self.cells.iter().enumerate() {
            if !c.vertices.iter().any(|v| v.iter().all(Int::is_zero)) {
                return Err(Error::StaleStar(format!("cell {i} does not contain the origin")));
            }
            let (closest, dist) = closest_vectors_with_distance(&self.form, &c.center)?;
            if closest != c.vertices || dist != c.sq_radius {
                return Err(Error::StaleStar(format!("cell {i} fails its empty-sphere certificate")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = self.clone();
        s.schema = Some(STAR_SCHEMA.into());
        Ok(serde_json::to_string_pretty(&s)?)
    }

    pub fn from_json(text: &str) -> Result<DeloneStar> {
        let s: DeloneStar = serde_json::from_str(text)?;
        if let Some(schema) = &s.schema {
            if schema != STAR_SCHEMA {
                return Err(Error::Parse(format!("unknown star schema {schema}")));
            }
        }
        Ok(s)
    }
}

fn nonzero(v: &[Int]) -> bool {
    v.iter().any(|x| !x.is_zero())
}

/// Strict Voronoi-relevant vectors: `v` is relevant iff `±v` are the only
/// minima of `Q` on the coset `v + 2Z^d`. Sorted lexicographically.
pub fn relevant_vectors(q: &QuadForm) -> Result<Vec<Vec<Int>>> {
    let d = q.dim();
    let (u, r) = lll_reduce(q)?;
    let en = Enumerator::new(&r)?;
    let zero = vec![Rational::zero(); d];
    let cosets = (1usize << d) - 1;
    let mut bound = (0..d).map(|i| r.get(i, i).clone()).max().unwrap_or_else(Rational::one) * Rational::from(Int::from(2));
    loop {
        let mut best: FxHashMap<usize, (Rational, Vec<Vec<Int>>)> = FxHashMap::default();
        en.for_each(&zero, &bound, |v, n| {
            if !nonzero(v) {
                return;
            }
            let key = v.iter().enumerate().fold(0usize, |k, (i, x)| if x.is_odd() { k | (1 << i) } else { k });
            if key == 0 {
                return;
            }
            let e = best.entry(key).or_insert_with(|| (n.clone(), Vec::new()));
            if *n < e.0 {
                *e = (n.clone(), Vec::new());
            }
            if *n == e.0 {
                e.1.push(v.to_vec());
            }
        });
        if best.len() == cosets {
            let mut out: Vec<Vec<Int>> = best
                .into_values()
                .filter(|(_, vs)| vs.len() == 2)
                .flat_map(|(_, vs)| vs)
                .map(|v| u.apply(&v))
                .collect();
            out.sort();
            return Ok(out);
        }
        bound *= Rational::from(Int::from(2));
    }
}

/// Vertices of the Voronoi cell `{x : Q[x] <= Q[x - z] for all z}` of a
/// positive definite form (in primal coordinates).
fn voronoi_vertices(r: &QuadForm, relevant: &[Vec<Int>]) -> Result<Vec<Vec<Rational>>> {
    let d = r.dim();
    let (g, _) = r.scaled_integer();
    // v·G·x <= G[v]/2 becomes G[v]·t - 2 vᵗG x >= 0 on (x, t)
    let mut facets = Vec::with_capacity(relevant.len() + 1);
    for v in relevant {
        let gv = mat_vec(&g, v);
        let norm: Int = gv.iter().zip(v).map(|(a, b)| a * b).sum();
        let mut f: Vec<Int> = gv.iter().map(|x| -(x * Int::from(2))).collect();
        f.push(norm);
        facets.push(f);
    }
    let mut t = vec![Int::zero(); d + 1];
    t[d] = Int::one();
    facets.push(t);
    let cone = HCone::new(d + 1, facets)?;
    let rays = dual_description(&cone)?;
    Ok(rays
        .into_iter()
        .map(|ray| {
            let t = from_int(&ray.direction[d]);
            debug_assert!(!t.is_zero(), "Voronoi cells are bounded");
            ray.direction[..d].iter().map(|x| from_int(x) / &t).collect()
        })
        .collect())
}

/// The Delone cells containing the origin.
///
/// Each vertex `ω` of the Voronoi cell of 0 is the center of one such cell,
/// and the cell's vertices are the `z` with `ω - z` again a Voronoi vertex, so
/// grouping the vertices by their class modulo `Z^d` yields every cell.
pub fn delone_star(q: &QuadForm) -> Result<DeloneStar> {
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let (u, r) = lll_reduce(q)?;
    let relevant: Vec<Vec<Int>> = relevant_vectors(&r)?;
    let verts = voronoi_vertices(&r, &relevant)?;
    let mut classes: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
    for (i, w) in verts.iter().enumerate() {
        let frac: Vec<Rational> = w.iter().map(|x| x - x.floor()).collect();
        classes.entry(frac).or_default().push(i);
    }
    let umat = u.matrix();
    let to_orig = |x: &[Rational]| -> Vec<Rational> {
        umat.iter().map(|row| row.iter().zip(x).map(|(a, b)| from_int(a) * b).sum()).collect()
    };
    let mut cells = Vec::with_capacity(verts.len());
    for members in classes.values() {
        for &i in members {
            let w = &verts[i];
            let mut vertices: Vec<Vec<Int>> = members
                .iter()
                .map(|&j| {
                    let z: Vec<Rational> = w.iter().zip(&verts[j]).map(|(a, b)| a - b).collect();
                    let zi: Vec<Int> = z.iter().map(|x| x.to_integer()).collect();
                    u.apply(&zi)
                })
                .collect();
            vertices.sort();
            let sq_radius = r.eval_rat(w);
            cells.push(DeloneCell { vertices, center: to_orig(w), sq_radius });
        }
    }
    cells.sort();
    Ok(DeloneStar { schema: None, form: q.clone(), cells })
}

/// Dirichlet–Voronoi polytope in dual coordinates `x ↦ Qx`. Semidefinite
/// forms are reduced to their positive definite block and the result is
/// embedded back into `(R^d)^*`.
pub fn dv_polytope(q: &QuadForm) -> Result<VPolytope> {
    if !q.is_psd() {
        return Err(Error::NotPositiveSemidefinite);
    }
    let d = q.dim();
    if q.is_zero() {
        return Ok(VPolytope { ambient_dim: d, vertices: vec![vec![Rational::zero(); d]] });
    }
    let (u, block) = q.kernel_split()?;
    let k = block.dim();
    let (lu, r) = lll_reduce(&block)?;
    let relevant = relevant_vectors(&r)?;
    let verts = voronoi_vertices(&r, &relevant)?;
    // dual vertex of the reduced block is Rω; undo the reduction (Lᵗ⁻¹) on
    // the block, pad with zeros and apply Uᵗ⁻¹
    let lu_inv_t = transpose(lu.inverse().matrix());
    let u_inv_t = transpose(u.inverse().matrix());
    let mut out = Vec::with_capacity(verts.len());
    for w in &verts {
        let rw = r.mul_rat(w);
        let mut y: Vec<Rational> =
            lu_inv_t.iter().map(|row| row.iter().zip(&rw).map(|(a, b)| from_int(a) * b).sum()).collect();
        y.resize(d, Rational::zero());
        let x: Vec<Rational> =
            u_inv_t.iter().map(|row| row.iter().zip(&y).map(|(a, b)| from_int(a) * b).sum()).collect();
        out.push(x);
    }
    debug_assert!(k <= d);
    Ok(VPolytope::new_unchecked(d, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ints, rat, rint};
    use crate::fixtures;
    use crate::linalg::{det_rat, IntMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Lower-hull oracle: a set S of lattice points in a box is a Delone cell
    /// containing 0 iff some sphere through S has no box point inside and no
    /// further box point on it. Candidates are all (d+1)-subsets containing 0.
    fn star_oracle_2d(q: &QuadForm, radius: i64) -> Vec<Vec<Vec<Int>>> {
        let pts: Vec<Vec<Int>> = (-radius..=radius)
            .flat_map(|a| (-radius..=radius).map(move |b| ints(&[a, b])))
            .collect();
        let mut cells = std::collections::BTreeSet::new();
        let origin = ints(&[0, 0]);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (a, b) = (&pts[i], &pts[j]);
                if *a == origin || *b == origin {
                    continue;
                }
                // center ω with Q[ω] = Q[ω - a] = Q[ω - b]: 2 aᵗQω = Q[a]
                let m: Vec<Vec<Rational>> = [a, b]
                    .iter()
                    .map(|v| {
                        let vr: Vec<Rational> = v.iter().map(from_int).collect();
                        q.mul_rat(&vr).into_iter().map(|x| x * rint(2)).collect()
                    })
                    .collect();
                if det_rat(&m).is_zero() {
                    continue;
                }
                let rhs = vec![q.eval(a), q.eval(b)];
                let w = crate::linalg::solve(&m, &rhs).unwrap();
                let rho = q.eval_rat(&w);
                let mut on = Vec::new();
                let mut empty = true;
                for p in &pts {
                    let diff: Vec<Rational> = p.iter().zip(&w).map(|(x, c)| from_int(x) - c).collect();
                    let n = q.eval_rat(&diff);
                    if n < rho {
                        empty = false;
                        break;
                    }
                    if n == rho {
                        on.push(p.clone());
                    }
                }
                if empty {
                    on.sort();
                    cells.insert(on);
                }
            }
        }
        cells.into_iter().collect()
    }

    #[test]
    fn square_lattice() {
        let s = delone_star(&QuadForm::identity(2)).unwrap();
        assert_eq!(s.cells.len(), 4);
        assert!(s.cells.iter().all(|c| c.vertices.len() == 4 && c.sq_radius == rat(1, 2)));
        s.certify().unwrap();
        assert_eq!(s.vertex_sets(), star_oracle_2d(&QuadForm::identity(2), 3));
    }

    #[test]
    fn hexagonal_lattice_matches_lifted_hull_oracle() {
        let a2 = fixtures::a_root(2);
        let s = delone_star(&a2).unwrap();
        assert_eq!(s.cells.len(), 6);
        assert!(s.is_triangulation());
        s.certify().unwrap();
        assert_eq!(s.vertex_sets(), star_oracle_2d(&a2, 2));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = rng.gen_range(1i64..6);
            let c = rng.gen_range(1i64..6);
            let b = rng.gen_range(-3i64..=3);
            if a * c <= b * b {
                continue;
            }
            let q = QuadForm::from_rows(&[&[a, b], &[b, c]]).unwrap();
            let s = delone_star(&q).unwrap();
            s.certify().unwrap();
            assert_eq!(s.vertex_sets(), star_oracle_2d(&q, 4), "{q:?}");
        }
    }

    #[test]
    fn relevant_vector_counts() {
        assert_eq!(relevant_vectors(&QuadForm::identity(3)).unwrap().len(), 6);
        assert_eq!(relevant_vectors(&fixtures::principal(3)).unwrap().len(), 14);
        assert_eq!(relevant_vectors(&fixtures::d4()).unwrap().len(), 24);
    }

    #[test]
    fn d4_star_and_24_cell() {
        let s = delone_star(&fixtures::d4()).unwrap();
        s.certify().unwrap();
        assert_eq!(s.cells.len(), 24);
        let p = dv_polytope(&fixtures::d4()).unwrap();
        assert_eq!(p.vertices.len(), 24);
        assert_eq!(p.facet_count().unwrap(), 24);
    }

    #[test]
    fn dv_examples() {
        let sq = dv_polytope(&QuadForm::identity(2)).unwrap();
        let mut expect: Vec<Vec<Rational>> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .iter()
            .map(|&(a, b)| vec![rat(a, 2), rat(b, 2)])
            .collect();
        expect.sort();
        assert_eq!(sq.vertices, expect);
        let seg = dv_polytope(&QuadForm::from_rows(&[&[1]]).unwrap()).unwrap();
        assert_eq!(seg.vertices, vec![vec![rat(-1, 2)], vec![rat(1, 2)]]);
        // rank one form x² on Z²: the segment lies on the first dual axis
        let deg = dv_polytope(&QuadForm::from_rows(&[&[1, 0], &[0, 0]]).unwrap()).unwrap();
        assert_eq!(deg.vertices, vec![vec![rat(-1, 2), rint(0)], vec![rat(1, 2), rint(0)]]);
        assert_eq!(dv_polytope(&QuadForm::zero(3)).unwrap().vertices.len(), 1);
    }

    fn random_unimodular(rng: &mut ChaCha8Rng, d: usize) -> IntMatrix {
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
        m
    }

    fn random_pd(rng: &mut ChaCha8Rng, d: usize) -> QuadForm {
        loop {
            let mut rows = vec![vec![0i64; d]; d];
            for i in 0..d {
                rows[i][i] = rng.gen_range(2..7);
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
    fn equivariance_and_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let d = rng.gen_range(2..=4);
            let q = random_pd(&mut rng, d);
            let s = delone_star(&q).unwrap();
            s.certify().unwrap();
            let a = random_unimodular(&mut rng, d);
            let qa = q.transform(&a);
            let sa = delone_star(&qa).unwrap();
            let ainv = crate::linalg::inverse_unimodular(&a).unwrap();
            let mut mapped: Vec<Vec<Vec<Int>>> = s
                .cells
                .iter()
                .map(|c| {
                    let mut vs: Vec<Vec<Int>> = c.vertices.iter().map(|v| mat_vec(&ainv, v)).collect();
                    vs.sort();
                    vs
                })
                .collect();
            mapped.sort();
            assert_eq!(mapped, sa.vertex_sets());
            let scaled = delone_star(&q.scale(&rat(3, 7))).unwrap();
            assert_eq!(scaled.vertex_sets(), s.vertex_sets());
            let p = dv_polytope(&q).unwrap();
            let ps = dv_polytope(&q.scale(&rint(3))).unwrap();
            let expect: Vec<Vec<Rational>> = p.vertices.iter().map(|v| v.iter().map(|x| x * rint(3)).collect()).collect();
            let mut expect = expect;
            expect.sort();
            assert_eq!(ps.vertices, expect);
            // central symmetry
            for v in &p.vertices {
                let neg: Vec<Rational> = v.iter().map(|x| -x.clone()).collect();
                assert!(p.vertices.binary_search(&neg).is_ok());
            }
            assert!(strongly_isomorphic(&p, &ps).unwrap());
        }
    }

    /// Each cell is shared by as many translates as it has vertices, so the
    /// volumes of the star cells divided by their vertex counts sum to 1.
    #[test]
    fn volume_conservation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut forms = vec![QuadForm::identity(2), QuadForm::identity(3), fixtures::principal(3), fixtures::a_root(3)];
        for _ in 0..6 {
            let d = rng.gen_range(2..=3);
            forms.push(random_pd(&mut rng, d));
        }
        for q in forms {
            let s = delone_star(&q).unwrap();
            let mut total = Rational::zero();
            for c in &s.cells {
                let pts: Vec<Vec<Rational>> = c.vertices.iter().map(|v| v.iter().map(from_int).collect()).collect();
                let vol = VPolytope::hull(q.dim(), pts).unwrap().volume().unwrap();
                total += vol / Rational::from(Int::from(c.vertices.len()));
            }
            assert_eq!(total, Rational::one(), "{q:?}");
        }
    }
}
