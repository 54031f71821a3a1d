//! Linear symmetry groups of cones, orbit registries and the adjacency
//! decomposition method.

use std::collections::VecDeque;

use num_traits::Zero;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::{adjacent_rays, initial_ray, AdjacencyOptions, HCone, Ray};
use crate::arith::{from_int, make_primitive, primitive_direction, Int, Rational};
use crate::error::{Error, Result};
use crate::linalg::{identity, inverse_rat, to_rat_matrix, IntMatrix, RatMatrix};

pub const REGISTRY_SCHEMA: &str = "ltype.registry/1";

#[derive(Clone, Debug)]
struct Generator {
    mat: RatMatrix,
    int: Option<IntMatrix>,
    facet_perm: Vec<usize>,
}

/// A finite group of linear maps permuting the facets of a cone.
#[derive(Clone, Debug)]
pub struct SymmetryAction {
    dim: usize,
    gens: Vec<Generator>,
}

fn rat_mat_vec(m: &RatMatrix, v: &[Int]) -> Vec<Rational> {
    m.iter()
        .map(|row| {
            let mut acc = Rational::from_integer(Int::from(0));
            for (a, x) in row.iter().zip(v) {
                if !x.is_zero() && !num_traits::Zero::is_zero(a) {
                    acc += a * from_int(x);
                }
            }
            acc
        })
        .collect()
}

fn rat_mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

impl SymmetryAction {
    pub fn trivial(cone: &HCone) -> SymmetryAction {
        SymmetryAction { dim: cone.ambient_dim, gens: Vec::new() }
    }

    /// Validates that every generator maps each facet functional to a
    /// positive multiple of a facet functional.
    pub fn new(cone: &HCone, gens: Vec<RatMatrix>) -> Result<SymmetryAction> {
        let d = cone.ambient_dim;
        let index: FxHashMap<&Vec<Int>, usize> = cone.facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut out = Vec::with_capacity(gens.len());
        for (gi, mat) in gens.into_iter().enumerate() {
            if mat.len() != d || mat.iter().any(|r| r.len() != d) {
                return Err(Error::Dimension(format!("generator {gi} is not {d}x{d}")));
            }
            let inv = inverse_rat(&mat).ok_or(Error::NotStabilizing(gi))?;
            let mut perm = Vec::with_capacity(cone.facets.len());
            for f in &cone.facets {
                // f ∘ g⁻¹
                let img: Vec<Rational> =
                    (0..d).map(|j| f.iter().zip(&inv).map(|(a, row)| from_int(a) * &row[j]).sum()).collect();
                let img = primitive_direction(&img);
                match index.get(&img) {
                    Some(&k) => perm.push(k),
                    None => return Err(Error::NotStabilizing(gi)),
                }
            }
            let int = mat
                .iter()
                .map(|row| row.iter().map(|x| x.is_integer().then(|| x.numer().clone())).collect::<Option<Vec<_>>>())
                .collect::<Option<IntMatrix>>();
            out.push(Generator { mat, int, facet_perm: perm });
        }
        Ok(SymmetryAction { dim: d, gens: out })
    }

    pub fn from_int(cone: &HCone, gens: Vec<IntMatrix>) -> Result<SymmetryAction> {
        SymmetryAction::new(cone, gens.iter().map(|g| to_rat_matrix(g)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// Permutation of facet indices induced by generator `i`.
    pub fn facet_permutation(&self, i: usize) -> &[usize] {
        &self.gens[i].facet_perm
    }

    /// Image of a ray under generator `i`, as a primitive vector.
    pub fn apply(&self, i: usize, v: &[Int]) -> Vec<Int> {
        let g = &self.gens[i];
        match &g.int {
            Some(m) => make_primitive(crate::linalg::mat_vec(m, v)),
            None => primitive_direction(&rat_mat_vec(&g.mat, v)),
        }
    }

    pub fn orbit(&self, v: &[Int]) -> Vec<Vec<Int>> {
        let mut seen: FxHashSet<Vec<Int>> = FxHashSet::default();
        let mut queue = VecDeque::new();
        seen.insert(v.to_vec());
        queue.push_back(v.to_vec());
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            for i in 0..self.gens.len() {
                let y = self.apply(i, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
            out.push(x);
        }
        out
    }

    /// Lexicographically smallest orbit element and the orbit size.
    pub fn canonical(&self, v: &[Int]) -> (Vec<Int>, usize) {
        let orbit = self.orbit(v);
        let size = orbit.len();
        (orbit.into_iter().min().expect("orbit contains v"), size)
    }

    /// Orbits of facet indices, each sorted, listed by smallest member.
    pub fn facet_orbits(&self, num_facets: usize) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; num_facets];
        let mut out = Vec::new();
        for s in 0..num_facets {
            if label[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            label[s] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                for g in &self.gens {
                    let y = g.facet_perm[x];
                    if label[y] == usize::MAX {
                        label[y] = id;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Schreier generators of the stabilizer of the ray `v`.
    pub fn stabilizer(&self, v: &[Int]) -> Vec<RatMatrix> {
        let d = self.dim;
        let id = to_rat_matrix(&identity(d));
        let mut transversal: FxHashMap<Vec<Int>, RatMatrix> = FxHashMap::default();
        let mut order = vec![v.to_vec()];
        transversal.insert(v.to_vec(), id.clone());
        let mut k = 0;
        while k < order.len() {
            let x = order[k].clone();
            let tx = transversal[&x].clone();
            for (i, g) in self.gens.iter().enumerate() {
                let y = self.apply(i, &x);
                if !transversal.contains_key(&y) {
                    transversal.insert(y.clone(), rat_mat_mul(&g.mat, &tx));
                    order.push(y);
                }
            }
            k += 1;
        }
        let mut gens: Vec<RatMatrix> = Vec::new();
        let mut seen: FxHashSet<Vec<Vec<String>>> = FxHashSet::default();
        for x in &order {
            let tx = &transversal[x];
            for (i, g) in self.gens.iter().enumerate() {
                let y = self.apply(i, x);
                let ty_inv = inverse_rat(&transversal[&y]).expect("invertible");
                let s = rat_mat_mul(&ty_inv, &rat_mat_mul(&g.mat, tx));
                if s == id {
                    continue;
                }
                let key: Vec<Vec<String>> = s.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect();
                if seen.insert(key) {
                    gens.push(s);
                }
            }
        }
        gens
    }

    /// The stabilizer of `e` acting on the quotient by `e`, in coordinates
    /// where coordinate `k` is dropped.
    pub(crate) fn project_stabilizer(&self, e: &[Int], k: usize, projected: &HCone) -> Result<SymmetryAction> {
        let d = self.dim;
        let ek = from_int(&e[k]);
        let mut induced = Vec::new();
        for h in self.stabilizer(e) {
            let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(d - 1);
            for j in 0..d {
                if j == k {
                    continue;
                }
                // h applied to the basis vector e_j, reduced modulo e
                let img: Vec<Rational> = h.iter().map(|row| row[j].clone()).collect();
                let t = &img[k] / &ek;
                let red: Vec<Rational> = img
                    .iter()
                    .zip(e)
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .map(|(_, (x, ei))| x - &t * from_int(ei))
                    .collect();
                cols.push(red);
            }
            let mat: RatMatrix = (0..d - 1).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            induced.push(mat);
        }
        SymmetryAction::new(projected, induced)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub representative: Vec<Int>,
    pub size: usize,
    pub incidence: usize,
    pub treated: bool,
}

/// Orbits of extreme rays keyed by their lexicographically minimal member.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitRegistry {
    pub schema: String,
    pub ambient_dim: usize,
    pub orbits: Vec<OrbitEntry>,
    /// Set when enumeration stopped with untreated orbits left.
    pub early_stopped: bool,
    #[serde(skip)]
    index: FxHashMap<Vec<Int>, usize>,
}

impl PartialEq for OrbitRegistry {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.orbits == other.orbits && self.early_stopped == other.early_stopped
    }
}

impl OrbitRegistry {
    pub fn new(ambient_dim: usize) -> OrbitRegistry {
        OrbitRegistry {
            schema: REGISTRY_SCHEMA.to_string(),
            ambient_dim,
            orbits: Vec::new(),
            early_stopped: false,
            index: FxHashMap::default(),
        }
    }

    fn reindex(&mut self) {
        self.index = self.orbits.iter().enumerate().map(|(i, o)| (o.representative.clone(), i)).collect();
    }

    pub fn from_json(s: &str) -> Result<OrbitRegistry> {
        let mut r: OrbitRegistry = serde_json::from_str(s)?;
        if r.schema != REGISTRY_SCHEMA {
            return Err(Error::Parse(format!("unexpected registry schema {:?}", r.schema)));
        }
        r.reindex();
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }

    /// Inserts the orbit of `ray` unless already present; returns true if new.
    pub fn insert(&mut self, group: &SymmetryAction, cone: &HCone, ray: &[Int]) -> bool {
        let (rep, size) = group.canonical(ray);
        if self.index.contains_key(&rep) {
            return false;
        }
        let incidence = cone.incidence(&rep).len();
        self.index.insert(rep.clone(), self.orbits.len());
        self.orbits.push(OrbitEntry { representative: rep, size, incidence, treated: false });
        true
    }

    pub fn total_rays(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }

    pub fn untreated_rays(&self) -> usize {
        self.orbits.iter().filter(|o| !o.treated).map(|o| o.size).sum()
    }

    /// Every ray of every orbit, sorted.
    pub fn expand(&self, group: &SymmetryAction, cone: &HCone) -> Vec<Ray> {
        let mut out: Vec<Ray> = self
            .orbits
            .iter()
            .flat_map(|o| group.orbit(&o.representative))
            .map(|v| cone.ray(v))
            .collect();
        out.sort();
        out
    }
}

/// Orbit-wise extreme ray enumeration.
///
/// Repeatedly takes the untreated orbit of lowest incidence and registers
/// the orbits of the neighbors of its representative. Stops once at least
/// one orbit is treated and at most `D - 2` rays (fewer than `D - 2` with
/// `strict_balinski`) sit in untreated orbits: the skeleton is
/// `(D-1)`-connected, so no unseen ray can hide behind them. `snapshot` is
/// called after every treated orbit.
pub fn adjacency_decomposition(
    cone: &HCone,
    group: &SymmetryAction,
    opts: &AdjacencyOptions,
    resume: Option<OrbitRegistry>,
    mut snapshot: impl FnMut(&OrbitRegistry),
) -> Result<OrbitRegistry> {
    cone.check_pointed()?;
    let d = cone.ambient_dim;
    let mut reg = match resume {
        Some(mut r) => {
            if r.ambient_dim != d {
                return Err(Error::Dimension("registry does not match the cone".into()));
            }
            r.reindex();
            r
        }
        None => OrbitRegistry::new(d),
    };
    if reg.orbits.is_empty() {
        let e = initial_ray(cone)?;
        reg.insert(group, cone, &e.direction);
    }
    let bound = d.saturating_sub(2);
    loop {
        let any_treated = reg.orbits.iter().any(|o| o.treated);
        let untreated = reg.untreated_rays();
        let pending = reg.orbits.iter().any(|o| !o.treated);
        if !pending {
            reg.early_stopped = false;
            break;
        }
        let stop = if opts.strict_balinski { untreated < bound } else { untreated <= bound };
        if any_treated && stop {
            reg.early_stopped = true;
            break;
        }
        let idx = (0..reg.orbits.len())
            .filter(|&i| !reg.orbits[i].treated)
            .min_by_key(|&i| (reg.orbits[i].incidence, i))
            .expect("pending orbit");
        let rep = reg.orbits[idx].representative.clone();
        let ray = cone.ray(rep);
        for n in adjacent_rays(cone, &ray, Some(group), opts)? {
            reg.insert(group, cone, &n.direction);
        }
        reg.orbits[idx].treated = true;
        snapshot(&reg);
    }
    Ok(reg)
}
