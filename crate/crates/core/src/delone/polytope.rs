//! Vertex-described rational polytopes. Facets come from a double
//! description of the homogenized polar cone inside the affine hull.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{clear_denominators, from_int, make_primitive, rational_str, Int, Rational};
use crate::error::{Error, Result};
use crate::linalg::{det_rat, rref};
use crate::polyhedral::{dual_description, HCone};

pub const POLYTOPE_SCHEMA: &str = "ltype.polytope/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    pub ambient_dim: usize,
    /// Irredundant and sorted lexicographically.
    pub vertices: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    dim: usize,
    vertices: Vec<RatVec>,
}

#[derive(Serialize, Deserialize)]
struct RatVec(#[serde(with = "rational_str::vec")] Vec<Rational>);

impl Serialize for VPolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson {
            schema: Some(POLYTOPE_SCHEMA.into()),
            dim: self.ambient_dim,
            vertices: self.vertices.iter().map(|v| RatVec(v.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<VPolytope, D::Error> {
        let j = PolytopeJson::deserialize(d)?;
        VPolytope::hull(j.dim, j.vertices.into_iter().map(|v| v.0).collect()).map_err(serde::de::Error::custom)
    }
}

/// Affine hull data: base point, pivot coordinates onto which the hull
/// projects isomorphically, and the projected points.
struct Frame {
    pivots: Vec<usize>,
    projected: Vec<Vec<Rational>>,
}

fn frame(points: &[Vec<Rational>]) -> Frame {
    let p0 = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let (_, pivots) = if diffs.is_empty() { (Vec::new(), Vec::new()) } else { rref(diffs) };
    let projected = points.iter().map(|p| pivots.iter().map(|&i| p[i].clone()).collect()).collect();
    Frame { pivots, projected }
}

/// Facets of the full-dimensional polytope spanned by `pts` in `R^k`, as
/// primitive integer `(a, b)` with `a·y + b >= 0`, plus the incidence of
/// every point.
fn facets_full(pts: &[Vec<Rational>]) -> Result<(Vec<Vec<Int>>, Vec<Vec<usize>>)> {
    let k = pts[0].len();
    let rows: Vec<Vec<Int>> = pts
        .iter()
        .map(|p| {
            let mut h = p.clone();
            h.push(Rational::one());
            clear_denominators(&h)
        })
        .collect();
    let polar = HCone::new(k + 1, rows.clone())?;
    let facets: Vec<Vec<Int>> = dual_description(&polar)?.into_iter().map(|r| r.direction).collect();
    let incidence = (0..pts.len())
        .map(|i| (0..facets.len()).filter(|&f| crate::arith::dot(&facets[f], &rows[i]).is_zero()).collect())
        .collect();
    Ok((facets, incidence))
}

impl VPolytope {
    pub(crate) fn new_unchecked(ambient_dim: usize, mut vertices: Vec<Vec<Rational>>) -> VPolytope {
        vertices.sort();
        vertices.dedup();
        VPolytope { ambient_dim, vertices }
    }

    /// Convex hull of a point list; keeps only the vertices.
    pub fn hull(ambient_dim: usize, points: Vec<Vec<Rational>>) -> Result<VPolytope> {
        if points.iter().any(|p| p.len() != ambient_dim) {
            return Err(Error::Dimension(format!("points must have length {ambient_dim}")));
        }
        let pts: Vec<Vec<Rational>> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.len() <= 1 {
            return Ok(VPolytope { ambient_dim, vertices: pts });
        }
        let f = frame(&pts);
        let k = f.pivots.len();
        let (facets, incidence) = facets_full(&f.projected)?;
        let mut keep = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            // a point is a vertex iff its incident facets cut out a point
            let rows: Vec<Vec<Int>> = incidence[i].iter().map(|&j| facets[j][..k].to_vec()).collect();
            if crate::linalg::rank_int(&rows) == k {
                keep.push(p.clone());
            }
        }
        Ok(VPolytope { ambient_dim, vertices: keep })
    }

    pub fn dim(&self) -> usize {
        if self.vertices.is_empty() {
            return 0;
        }
        frame(&self.vertices).pivots.len()
    }

    /// Facets in the coordinates of the affine hull (pivot projection).
    fn facet_data(&self) -> Result<(Frame, Vec<Vec<Int>>, Vec<Vec<usize>>)> {
        let f = frame(&self.vertices);
        if f.pivots.is_empty() {
            return Ok((f, Vec::new(), vec![Vec::new(); self.vertices.len()]));
        }
        let (facets, inc) = facets_full(&f.projected)?;
        Ok((f, facets, inc))
    }

    pub fn facet_count(&self) -> Result<usize> {
        Ok(self.facet_data()?.1.len())
    }

    /// Vertex-facet incidences: for each facet the sorted vertex indices.
    pub fn facet_vertices(&self) -> Result<Vec<Vec<usize>>> {
        let (_, facets, inc) = self.facet_data()?;
        Ok((0..facets.len()).map(|j| (0..self.vertices.len()).filter(|&i| inc[i].contains(&j)).collect()).collect())
    }

    /// Volume relative to the lattice spanned by the pivot coordinates of
    /// the affine hull; the usual volume for full-dimensional polytopes.
    pub fn volume(&self) -> Result<Rational> {
        let k = self.dim();
        let f = frame(&self.vertices);
        let simplices = pulling_triangulation(&self.vertices)?;
        let mut fact = Rational::one();
        for i in 1..=k {
            fact *= Rational::from(Int::from(i));
        }
        let mut total = Rational::zero();
        for s in simplices {
            let p0 = &f.projected[s[0]];
            let m: Vec<Vec<Rational>> =
                s[1..].iter().map(|&i| f.projected[i].iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
            total += det_rat(&m).abs();
        }
        Ok(total / fact)
    }
}

/// Pulling triangulation: cone the lexicographically first vertex over the
/// triangulated facets avoiding it. Returns index lists into the vertex set.
pub fn pulling_triangulation(vertices: &[Vec<Rational>]) -> Result<Vec<Vec<usize>>> {
    let idx: Vec<usize> = (0..vertices.len()).collect();
    pull(vertices, &idx)
}

fn pull(all: &[Vec<Rational>], idx: &[usize]) -> Result<Vec<Vec<usize>>> {
    let pts: Vec<Vec<Rational>> = idx.iter().map(|&i| all[i].clone()).collect();
    let f = frame(&pts);
    let k = f.pivots.len();
    if idx.len() == k + 1 {
        let mut s = idx.to_vec();
        s.sort_unstable();
        return Ok(vec![s]);
    }
    let (_, inc) = facets_full(&f.projected)?;
    let nfacets = inc.iter().flatten().copied().max().map_or(0, |m| m + 1);
    // lexicographically first point
    let apex = (0..idx.len()).min_by(|&a, &b| pts[a].cmp(&pts[b])).expect("nonempty");
    let mut out = Vec::new();
    for j in 0..nfacets {
        if inc[apex].contains(&j) {
            continue;
        }
        let face: Vec<usize> = (0..idx.len()).filter(|&i| inc[i].contains(&j)).map(|i| idx[i]).collect();
        for mut s in pull(all, &face)? {
            s.push(idx[apex]);
            s.sort_unstable();
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// The face maximizing `f` and the maximum `η(P, f)`.
pub fn support_face(p: &VPolytope, f: &[Rational]) -> (VPolytope, Rational) {
    let vals: Vec<Rational> =
        p.vertices.iter().map(|v| v.iter().zip(f).map(|(a, b)| a * b).sum::<Rational>()).collect();
    let eta = vals.iter().max().cloned().unwrap_or_else(Rational::zero);
    let verts = p.vertices.iter().zip(&vals).filter(|(_, x)| **x == eta).map(|(v, _)| v.clone()).collect();
    (VPolytope { ambient_dim: p.ambient_dim, vertices: verts }, eta)
}

/// Vertex sums followed by irredundancy filtering.
pub fn minkowski_sum(p1: &VPolytope, p2: &VPolytope) -> Result<VPolytope> {
    if p1.ambient_dim != p2.ambient_dim {
        return Err(Error::Dimension("Minkowski sum of polytopes in different spaces".into()));
    }
    let mut pts = BTreeSet::new();
    for a in &p1.vertices {
        for b in &p2.vertices {
            pts.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<Rational>>());
        }
    }
    VPolytope::hull(p1.ambient_dim, pts.into_iter().collect())
}

/// Equal normal fans: same direction space of the affine hull, and the same
/// collection of vertex normal cones (each given by its facet normals).
pub fn strongly_isomorphic(p1: &VPolytope, p2: &VPolytope) -> Result<bool> {
    if p1.ambient_dim != p2.ambient_dim {
        return Err(Error::Dimension("polytopes in different spaces".into()));
    }
    if p1.vertices.is_empty() || p2.vertices.is_empty() {
        return Ok(p1.vertices.is_empty() == p2.vertices.is_empty());
    }
    let direction = |p: &VPolytope| -> Vec<Vec<Rational>> {
        let p0 = &p.vertices[0];
        let diffs: Vec<Vec<Rational>> =
            p.vertices[1..].iter().map(|v| v.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
        if diffs.is_empty() {
            Vec::new()
        } else {
            rref(diffs).0
        }
    };
    if direction(p1) != direction(p2) {
        return Ok(false);
    }
    let fan = |p: &VPolytope| -> Result<BTreeSet<BTreeSet<Vec<Int>>>> {
        let (f, facets, inc) = p.facet_data()?;
        let k = f.pivots.len();
        Ok(inc
            .iter()
            .map(|fs| fs.iter().map(|&j| make_primitive(facets[j][..k].to_vec())).collect())
            .collect())
    };
    Ok(fan(p1)? == fan(p2)?)
}

impl VPolytope {
    pub fn from_int_points(ambient_dim: usize, pts: &[Vec<Int>]) -> Result<VPolytope> {
        VPolytope::hull(ambient_dim, pts.iter().map(|p| p.iter().map(from_int).collect()).collect())
    }
}
