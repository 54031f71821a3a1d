//! Pointed rational polyhedral cones: double description, ray adjacency by
//! projection, and orbit-wise enumeration under a symmetry group.

mod adjacency;
mod dd;
mod skeleton;
mod symmetry;

pub use adjacency::{adjacent_rays, initial_ray, AdjacencyOptions};
pub use dd::dual_description;
pub use skeleton::{skeleton_graph, vertex_connectivity, Skeleton};
pub use symmetry::{adjacency_decomposition, OrbitEntry, OrbitRegistry, SymmetryAction, REGISTRY_SCHEMA};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{canonical_sign, dot, make_primitive, Int};
use crate::error::{Error, Result};
use crate::linalg::{rank_int, IntMatrix};

pub const CONE_SCHEMA: &str = "ltype.cone/1";

/// The cone `{x : f_i(x) >= 0 for all i}` in `R^D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HCone {
    pub ambient_dim: usize,
    pub facets: Vec<Vec<Int>>,
}

/// An extreme ray with the sorted indices of the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ray {
    pub direction: Vec<Int>,
    pub incidence: Vec<usize>,
}

impl HCone {
    /// Makes every functional primitive. Zero functionals are rejected.
    pub fn new(ambient_dim: usize, facets: Vec<Vec<Int>>) -> Result<HCone> {
        let mut out = Vec::with_capacity(facets.len());
        for (i, f) in facets.into_iter().enumerate() {
            if f.len() != ambient_dim {
                return Err(Error::Dimension(format!(
                    "facet {i} has length {}, expected {ambient_dim}",
                    f.len()
                )));
            }
            if f.iter().all(|x| x.is_zero()) {
                return Err(Error::Invalid(format!("facet {i} is the zero functional")));
            }
            out.push(make_primitive(f));
        }
        Ok(HCone { ambient_dim, facets: out })
    }

    pub fn from_i64(ambient_dim: usize, facets: &[Vec<i64>]) -> Result<HCone> {
        HCone::new(ambient_dim, facets.iter().map(|f| crate::arith::ints(f)).collect())
    }

    pub fn value(&self, i: usize, x: &[Int]) -> Int {
        dot(&self.facets[i], x)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.facets.iter().all(|f| !dot(f, x).is_negative())
    }

    pub fn incidence(&self, x: &[Int]) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.value(i, x).is_zero()).collect()
    }

    /// Rank of the functionals with the given indices.
    pub fn rank_of(&self, idx: &[usize]) -> usize {
        let rows: IntMatrix = idx.iter().map(|&i| self.facets[i].clone()).collect();
        rank_int(&rows)
    }

    /// Primitive ray with its incidence, without an extremality check.
    pub fn ray(&self, direction: Vec<Int>) -> Ray {
        let direction = make_primitive(direction);
        let incidence = self.incidence(&direction);
        Ray { direction, incidence }
    }

    pub fn is_extreme(&self, x: &[Int]) -> bool {
        x.iter().any(|v| !v.is_zero())
            && self.contains(x)
            && self.rank_of(&self.incidence(x)) + 1 == self.ambient_dim
    }

    /// Errors with a lineality direction when the cone is not pointed.
    pub fn check_pointed(&self) -> Result<()> {
        let rank = rank_int(&self.facets);
        if rank < self.ambient_dim {
            let kernel = crate::linalg::nullspace_int(&self.facets, self.ambient_dim);
            let dir = kernel.into_iter().next().expect("rank deficiency gives a kernel vector");
            return Err(Error::NotPointed(canonical_sign(make_primitive(dir))));
        }
        Ok(())
    }
}

/// Cone file: facets plus an optional list of symmetry generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub ambient_dim: usize,
    pub facets: Vec<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub group: Vec<IntMatrix>,
}

impl ConeFile {
    pub fn cone(&self) -> Result<HCone> {
        HCone::new(self.ambient_dim, self.facets.clone())
    }
}

#[cfg(test)]
pub(crate) mod test_cones {
    use super::*;
    use crate::arith::ints;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn simplicial(d: usize) -> HCone {
        let facets = (0..d)
            .map(|i| (0..d).map(|j| Int::from(i64::from(i == j))).collect())
            .collect();
        HCone::new(d, facets).unwrap()
    }

    /// Cone over the square `[-1,1]^2 × {1}`.
    pub fn square() -> HCone {
        HCone::new(3, vec![ints(&[1, 0, 1]), ints(&[-1, 0, 1]), ints(&[0, 1, 1]), ints(&[0, -1, 1])]).unwrap()
    }

    /// Random pointed cones: the cone over a random polytope given by
    /// facets `a·x + b·t >= 0` that contain the box-center `(0, 1)`.
    pub fn random_cone(rng: &mut ChaCha8Rng, d: usize, m: usize) -> HCone {
        loop {
            let mut facets = Vec::new();
            for _ in 0..m {
                let mut f: Vec<Int> = (0..d - 1).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect();
                f.push(Int::from(rng.gen_range(1i64..=4)));
                facets.push(f);
            }
            // bound the section t = 1 with the box |x_i| <= 2 half the time
            if rng.gen_bool(0.5) {
                for i in 0..d - 1 {
                    for s in [1i64, -1] {
                        let mut f = vec![Int::from(0); d];
                        f[i] = Int::from(s);
                        f[d - 1] = Int::from(2);
                        facets.push(f);
                    }
                }
            }
            let c = HCone::new(d, facets).unwrap();
            if c.check_pointed().is_ok() {
                return c;
            }
        }
    }

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Extreme rays by brute force: every (D-1)-subset of facets of rank D-1
    /// gives a line; keep the directions satisfying all inequalities.
    pub fn brute_force_rays(c: &HCone) -> Vec<Ray> {
        let d = c.ambient_dim;
        let m = c.facets.len();
        let mut out = std::collections::BTreeSet::new();
        if d == 1 {
            for s in [1i64, -1] {
                let x = vec![Int::from(s)];
                if c.contains(&x) {
                    out.insert(c.ray(x));
                }
            }
            return out.into_iter().collect();
        }
        let k = d - 1;
        if m < k {
            return Vec::new();
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let rows: IntMatrix = idx.iter().map(|&i| c.facets[i].clone()).collect();
            if rank_int(&rows) == k {
                let kernel = crate::linalg::nullspace_int(&rows, d);
                let v = make_primitive(kernel[0].clone());
                for dir in [v.clone(), v.iter().map(|x| -x).collect()] {
                    if c.contains(&dir) {
                        out.insert(c.ray(dir));
                    }
                }
            }
            let mut p = k;
            loop {
                if p == 0 {
                    return out.into_iter().collect();
                }
                p -= 1;
                if idx[p] < m - k + p {
                    idx[p] += 1;
                    for j in p + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}
