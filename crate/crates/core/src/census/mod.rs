//! Enumeration of primitive L-type domains by walking the Voronoi graph,
//! and everything computed from the resulting census.

mod tables;
mod tree;

pub use tables::{distribution_tables, Tables};
pub use tree::{tree_check, tree_check_cone, TreeReport};

use std::collections::{BTreeMap, VecDeque};
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::arith::{make_primitive, Int};
use crate::delone::{delone_star, dv_polytope, minkowski_sum, DeloneStar};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::form::{QuadForm, UnimodularMap};
use crate::isometry::{all_automorphisms, fingerprint, generators_of, isometry, Fingerprint};
use crate::lattice::lll_reduce;
use crate::linalg::{mat_vec, transpose, IntMatrix};
use crate::polyhedral::{adjacency_decomposition, AdjacencyOptions, OrbitRegistry, SymmetryAction};
use crate::secondary::{flip_with, rigidity_degree, secondary_cone_with_rays, transform_star, SecondaryCone};

pub const CENSUS_SCHEMA: &str = "ltype.census/1";

/// Seed of the traversal: `(d+1)I − J`, whose Delone subdivision is a
/// triangulation with a full-dimensional secondary cone.
pub fn principal_form(d: usize) -> QuadForm {
    fixtures::principal(d)
}

/// What lies across one facet of a domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborLink {
    /// Neighbor domain id, absent when the facet is degenerate.
    pub target: Option<usize>,
    /// `A` with neighbor domain `= AᵗΔ_target A`.
    pub map: Option<UnimodularMap>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainRecord {
    pub id: usize,
    /// Canonical interior form: the LLL-reduced sum of the primitive
    /// extreme rays of the closed domain.
    pub form: QuadForm,
    /// Recomputed from `form` after loading.
    #[serde(skip)]
    pub star: Option<DeloneStar>,
    pub cone: SecondaryCone,
    pub num_rays: usize,
    pub aut_generators: Vec<UnimodularMap>,
    pub aut_order: u64,
    /// One entry per facet once the domain has been processed.
    pub neighbors: Vec<NeighborLink>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<OrbitRegistry>,
    /// Number of extreme rays of each rank.
    pub rank_profile: BTreeMap<usize, usize>,
}

impl DomainRecord {
    pub fn num_facets(&self) -> usize {
        self.cone.facets.len()
    }

    pub fn star(&self) -> Result<DeloneStar> {
        match &self.star {
            Some(s) => Ok(s.clone()),
            None => delone_star(&self.form),
        }
    }

    fn key(&self) -> Result<Key> {
        Ok(Key {
            facets: self.num_facets(),
            rays: self.num_rays,
            ranks: self.rank_profile.clone(),
            fingerprint: fingerprint(&self.form)?,
        })
    }

    /// Plain facet cone and the induced action of the automorphisms on
    /// form coordinates.
    pub fn symmetric_cone(&self) -> Result<(crate::polyhedral::HCone, SymmetryAction)> {
        let cone = self.cone.hcone()?;
        let gens: Vec<IntMatrix> = self.aut_generators.iter().map(|g| g.form_action()).collect();
        let action = SymmetryAction::from_int(&cone, gens)?;
        Ok((cone, action))
    }
}

/// Invariant prefilter for domain equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    facets: usize,
    rays: usize,
    ranks: BTreeMap<usize, usize>,
    fingerprint: Fingerprint,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RigidForm {
    pub form: QuadForm,
    /// Determinant and shell counts, for quick lookup.
    pub key: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusState {
    pub schema: String,
    pub dim: usize,
    pub domains: Vec<DomainRecord>,
    /// Ids of domains whose facets have not been crossed yet, in order.
    pub frontier: VecDeque<usize>,
    /// False while the frontier is nonempty.
    pub complete: bool,
    #[serde(default)]
    pub rigid_forms: Vec<RigidForm>,
}

fn rank_profile(rays: &[Vec<Int>]) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    for r in rays {
        *out.entry(QuadForm::from_coords(r)?.rank()).or_insert(0) += 1;
    }
    Ok(out)
}

/// Domain record for a canonical interior form.
fn make_record(id: usize, form: QuadForm, star: DeloneStar) -> Result<DomainRecord> {
    let (cone, rays) = secondary_cone_with_rays(&star)?;
    debug_assert_eq!(cone.witness, form);
    let auts = all_automorphisms(&form)?;
    let aut_generators = generators_of(form.dim(), &auts);
    Ok(DomainRecord {
        id,
        form,
        star: Some(star),
        num_rays: rays.len(),
        rank_profile: rank_profile(&rays)?,
        cone,
        aut_generators,
        aut_order: auts.len() as u64,
        neighbors: Vec::new(),
        rays: None,
    })
}

/// LLL-reduces an interior form; returns the reduced form and `B` with
/// `BᵗRB = Q`.
fn canonicalize(q: &QuadForm) -> Result<(QuadForm, UnimodularMap)> {
    let (u, r) = lll_reduce(q)?;
    Ok((r, u.inverse()))
}

/// Plain facet image under `Q ↦ gᵗQg`: `f ∘ φ_g⁻¹`.
fn facet_image(f: &[Int], g: &UnimodularMap) -> Vec<Int> {
    let m = g.inverse().form_action();
    make_primitive(mat_vec(&transpose(&m), f))
}

/// For every facet, the representative facet of its orbit and an element
/// `h` with `facet = h·rep` under the right action `Q ↦ hᵗQh`.
fn facet_transversal(rec: &DomainRecord) -> Vec<(usize, UnimodularMap)> {
    let plain: Vec<Vec<Int>> = rec.cone.facets.iter().map(|f| f.plain()).collect();
    let index: FxHashMap<&Vec<Int>, usize> = plain.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let perms: Vec<Vec<usize>> = rec
        .aut_generators
        .iter()
        .map(|g| plain.iter().map(|f| index[&facet_image(f, g)]).collect())
        .collect();
    let d = rec.form.dim();
    let mut out: Vec<Option<(usize, UnimodularMap)>> = vec![None; plain.len()];
    for start in 0..plain.len() {
        if out[start].is_some() {
            continue;
        }
        out[start] = Some((start, UnimodularMap::identity(d)));
        let mut queue = VecDeque::from([start]);
        while let Some(j) = queue.pop_front() {
            let h = out[j].as_ref().expect("visited").1.clone();
            for (s, perm) in rec.aut_generators.iter().zip(&perms) {
                let k = perm[j];
                if out[k].is_none() {
                    out[k] = Some((start, h.compose(s)));
                    queue.push_back(k);
                }
            }
        }
    }
    out.into_iter().map(|x| x.expect("every facet reached")).collect()
}

impl CensusState {
    pub fn new(d: usize) -> Result<CensusState> {
        if d == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        let seed = delone_star(&principal_form(d))?;
        let (cone, _) = secondary_cone_with_rays(&seed)?;
        let (form, _) = canonicalize(&cone.witness)?;
        let star = delone_star(&form)?;
        let rec = make_record(0, form, star)?;
        Ok(CensusState {
            schema: CENSUS_SCHEMA.into(),
            dim: d,
            domains: vec![rec],
            frontier: VecDeque::from([0]),
            complete: false,
            rigid_forms: Vec::new(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<CensusState> {
        let mut s: CensusState = serde_json::from_str(text)?;
        if s.schema != CENSUS_SCHEMA {
            return Err(Error::Parse(format!("unknown census schema {}", s.schema)));
        }
        for rec in s.domains.iter_mut() {
            rec.star = Some(delone_star(&rec.form)?);
        }
        Ok(s)
    }

    /// Writes JSON, gzip-compressed when the path ends in `.gz`, via a
    /// temporary file and a rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = self.to_json()?;
        let tmp = path.with_extension("tmp");
        {
            let file = std::fs::File::create(&tmp)?;
            if path.extension().is_some_and(|e| e == "gz") {
                let mut enc = flate2::write::GzEncoder::new(file, flate2::Compression::default());
                enc.write_all(text.as_bytes())?;
                enc.finish()?;
            } else {
                let mut f = file;
                f.write_all(text.as_bytes())?;
            }
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CensusState> {
        let raw = std::fs::read(path)?;
        let text = if raw.starts_with(&[0x1f, 0x8b]) {
            let mut s = String::new();
            flate2::read::GzDecoder::new(&raw[..]).read_to_string(&mut s)?;
            s
        } else {
            String::from_utf8(raw).map_err(|e| Error::Parse(e.to_string()))?
        };
        CensusState::from_json(&text)
    }

    fn ensure_stars(&mut self) -> Result<()> {
        for rec in self.domains.iter_mut() {
            if rec.star.is_none() {
                rec.star = Some(delone_star(&rec.form)?);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    /// Stop once this many domains are known (the state is then marked
    /// incomplete).
    pub max_domains: Option<usize>,
}

/// Star and closed-cone rays of the neighbor across one facet, or `None`
/// for a degenerate facet.
fn neighbor(
    cone: &SecondaryCone,
    rays: &[Vec<Int>],
    d: usize,
    facet: usize,
) -> Result<Option<(DeloneStar, SecondaryCone, Vec<Vec<Int>>)>> {
    match flip_with(cone, rays, d, &cone.facets[facet]) {
        Ok(n) => {
            let (ncone, nrays) = secondary_cone_with_rays(&n)?;
            Ok(Some((n, ncone, nrays)))
        }
        Err(Error::DegenerateFacet) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Breadth-first traversal of the primitive domains from the principal
/// form; `snapshot` sees the state after every processed domain.
pub fn enumerate_domains(
    d: usize,
    opts: &CensusOptions,
    resume: Option<CensusState>,
    mut snapshot: impl FnMut(&CensusState),
) -> Result<CensusState> {
    let mut state = match resume {
        Some(s) => {
            if s.dim != d {
                return Err(Error::Dimension(format!("state is for d = {}, not {d}", s.dim)));
            }
            s
        }
        None => CensusState::new(d)?,
    };
    state.ensure_stars()?;
    let d = state.dim;
    let mut index: FxHashMap<Key, Vec<usize>> = FxHashMap::default();
    for rec in &state.domains {
        index.entry(rec.key()?).or_default().push(rec.id);
    }
    while let Some(&id) = state.frontier.front() {
        if opts.max_domains.is_some_and(|m| state.domains.len() >= m) {
            break;
        }
        let transversal = facet_transversal(&state.domains[id]);
        let reps: Vec<usize> = {
            let mut r: Vec<usize> = transversal.iter().map(|(rep, _)| *rep).collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        let rec = &state.domains[id];
        let (cone, rays) = secondary_cone_with_rays(&rec.star()?)?;
        let found: Vec<_> = reps.par_iter().map(|&f| neighbor(&cone, &rays, d, f)).collect();
        let mut rep_links: BTreeMap<usize, NeighborLink> = BTreeMap::new();
        for (&f, res) in reps.iter().zip(found) {
            let link = match res? {
                None => NeighborLink { target: None, map: None },
                Some((star, ncone, nrays)) => {
                    let q = ncone.witness.clone();
                    let (reduced, b_red) = canonicalize(&q)?;
                    let probe = Key {
                        facets: ncone.facets.len(),
                        rays: nrays.len(),
                        ranks: rank_profile(&nrays)?,
                        fingerprint: fingerprint(&reduced)?,
                    };
                    let mut hit = None;
                    for &cand in index.get(&probe).map(Vec::as_slice).unwrap_or(&[]) {
                        if let Some(b) = isometry(&state.domains[cand].form, &q)? {
                            hit = Some((cand, b));
                            break;
                        }
                    }
                    let (target, b) = match hit {
                        Some(x) => x,
                        None => {
                            let new_id = state.domains.len();
                            // b_red maps the reduced form back to q
                            let mut star = transform_star(&star, &b_red.inverse());
                            star.form = reduced.clone();
                            let rec = make_record(new_id, reduced, star)?;
                            index.entry(rec.key()?).or_default().push(new_id);
                            state.domains.push(rec);
                            state.frontier.push_back(new_id);
                            (new_id, b_red)
                        }
                    };
                    NeighborLink { target: Some(target), map: Some(b) }
                }
            };
            rep_links.insert(f, link);
        }
        let links = transversal
            .iter()
            .map(|(rep, h)| {
                let base = &rep_links[rep];
                NeighborLink { target: base.target, map: base.map.as_ref().map(|b| b.compose(h)) }
            })
            .collect();
        state.domains[id].neighbors = links;
        state.frontier.pop_front();
        state.complete = state.frontier.is_empty();
        snapshot(&state);
    }
    state.complete = state.frontier.is_empty();
    Ok(state)
}

/// Extreme rays of one domain by adjacency decomposition under its
/// automorphism group; fills `rays` and `rank_profile`.
pub fn domain_rays(state: &mut CensusState, id: usize, opts: &AdjacencyOptions) -> Result<OrbitRegistry> {
    let reg = compute_rays(&state.domains[id], opts)?;
    apply_rays(&mut state.domains[id], reg.clone())?;
    Ok(reg)
}

fn compute_rays(rec: &DomainRecord, opts: &AdjacencyOptions) -> Result<OrbitRegistry> {
    let (cone, action) = rec.symmetric_cone()?;
    adjacency_decomposition(&cone, &action, opts, None, |_| {})
}

fn apply_rays(rec: &mut DomainRecord, reg: OrbitRegistry) -> Result<()> {
    let (cone, action) = rec.symmetric_cone()?;
    let rays: Vec<Vec<Int>> = reg.expand(&action, &cone).into_iter().map(|r| r.direction).collect();
    rec.rank_profile = rank_profile(&rays)?;
    rec.num_rays = rays.len();
    rec.rays = Some(reg);
    Ok(())
}

/// Runs [`domain_rays`] for every domain that has no registry yet, in
/// parallel.
pub fn all_domain_rays(state: &mut CensusState, opts: &AdjacencyOptions) -> Result<()> {
    let todo: Vec<usize> = state.domains.iter().filter(|r| r.rays.is_none()).map(|r| r.id).collect();
    let regs: Vec<Result<OrbitRegistry>> = todo.par_iter().map(|&i| compute_rays(&state.domains[i], opts)).collect();
    for (i, reg) in todo.into_iter().zip(regs) {
        apply_rays(&mut state.domains[i], reg?)?;
    }
    Ok(())
}

/// Full ray list of a domain (from its registry when present).
pub fn expanded_rays(rec: &DomainRecord) -> Result<Vec<Vec<Int>>> {
    match &rec.rays {
        Some(reg) => {
            let (cone, action) = rec.symmetric_cone()?;
            Ok(reg.expand(&action, &cone).into_iter().map(|r| r.direction).collect())
        }
        None => rec.cone.extreme_rays(),
    }
}

/// Positive definite extreme rays of all domains up to arithmetic
/// equivalence, each re-verified to have rigidity degree 1. Representatives
/// are LLL-reduced and sorted by their invariant key.
pub fn rigid_census(state: &mut CensusState) -> Result<Vec<QuadForm>> {
    if !state.complete {
        return Err(Error::Invalid("census is incomplete".into()));
    }
    let d = state.dim;
    let mut candidates: Vec<QuadForm> = Vec::new();
    for rec in &state.domains {
        let reps: Vec<Vec<Int>> = match &rec.rays {
            Some(reg) => reg.orbits.iter().map(|o| o.representative.clone()).collect(),
            None => rec.cone.extreme_rays()?,
        };
        for r in reps {
            let q = QuadForm::from_coords(&r)?;
            if q.rank() == d {
                candidates.push(q);
            }
        }
    }
    let mut classes: BTreeMap<Fingerprint, Vec<QuadForm>> = BTreeMap::new();
    for q in candidates {
        let fp = fingerprint(&q)?;
        let bucket = classes.entry(fp).or_default();
        let mut known = false;
        for r in bucket.iter() {
            if isometry(r, &q)?.is_some() {
                known = true;
                break;
            }
        }
        if !known {
            bucket.push(lll_reduce(&q)?.1);
        }
    }
    let mut out = Vec::new();
    let mut rigid = Vec::new();
    for (fp, forms) in classes {
        for q in forms {
            if rigidity_degree(&q)? != 1 {
                return Err(Error::Invalid(format!("extreme ray {q:?} is not rigid")));
            }
            rigid.push(RigidForm { form: q.clone(), key: format!("{fp:?}") });
            out.push(q);
        }
    }
    state.rigid_forms = rigid;
    Ok(out)
}

/// One line of the dimension-6 report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.into(), pass, detail }
}

/// Checks on the explicit six-dimensional forms. The Minkowski check is
/// expensive and only runs when asked for.
pub fn verify_dim6_forms(with_minkowski: bool) -> Result<Vec<Check>> {
    let e6 = fixtures::e6_dual();
    let r1 = fixtures::r1();
    let r2 = fixtures::r2();
    let mut out = Vec::new();
    let k = rigidity_degree(&e6)?;
    out.push(check("rigidity(E6*) = 1", k == 1, format!("rigidity degree {k}")));
    let k = rigidity_degree(&r1)?;
    out.push(check("rigidity(R1) = 1", k == 1, format!("rigidity degree {k}")));
    out.push(check("rank(R2) = 5", r2.rank() == 5, format!("rank {}", r2.rank())));
    let k = rigidity_degree(&r2)?;
    out.push(check("rigidity(R2 block) = 1", k == 1, format!("rigidity degree {k}")));
    for (name, r) in [("R1", &r1), ("R2", &r2)] {
        let samples = [(1i64, 1i64), (1, 2), (1, 3), (1, 7), (1, 100)];
        let stars: Vec<DeloneStar> = samples
            .iter()
            .map(|&(p, q)| delone_star(&e6.add(&r.scale(&crate::arith::rat(p, q)))))
            .collect::<Result<_>>()?;
        let constant = stars.windows(2).all(|w| w[0].same_subdivision(&w[1]));
        out.push(check(
            &format!("star of E6* + t{name} constant for t in (0, 1]"),
            constant,
            format!("{} cells at t = 1", stars[0].cells.len()),
        ));
    }
    if with_minkowski {
        let lhs = dv_polytope(&e6.add(&r2))?;
        let rhs = minkowski_sum(&dv_polytope(&e6)?, &dv_polytope(&r2)?)?;
        out.push(check("DV(E6* + R2) = DV(E6*) + DV(R2)", lhs == rhs, format!("{} vertices", lhs.vertices.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_seeds() {
        let p2 = principal_form(2);
        assert_eq!(p2, QuadForm::from_rows(&[&[2, -1], &[-1, 2]]).unwrap());
        for d in 2..=4 {
            let s = delone_star(&principal_form(d)).unwrap();
            assert!(s.is_triangulation());
            let (c, _) = secondary_cone_with_rays(&s).unwrap();
            assert_eq!(c.dim(), crate::form::form_dim(d));
        }
    }

    #[test]
    fn small_censuses() {
        for (d, count) in [(1, 1), (2, 1), (3, 1)] {
            let s = enumerate_domains(d, &CensusOptions::default(), None, |_| {}).unwrap();
            assert!(s.complete);
            assert_eq!(s.domains.len(), count);
        }
    }

    #[test]
    fn neighbor_links_are_consistent() {
        let s = enumerate_domains(3, &CensusOptions::default(), None, |_| {}).unwrap();
        let rec = &s.domains[0];
        let star = rec.star().unwrap();
        for (j, link) in rec.neighbors.iter().enumerate() {
            let (Some(t), Some(a)) = (link.target, &link.map) else {
                continue;
            };
            // the neighbor across facet j is aᵗΔ_t a
            let n = crate::secondary::flip(&star, &rec.cone.facets[j]).unwrap();
            let (nc, _) = secondary_cone_with_rays(&n).unwrap();
            assert_eq!(s.domains[t].form.act(a), nc.witness);
        }
    }

    #[test]
    fn state_round_trip_and_resume() {
        let full = enumerate_domains(4, &CensusOptions::default(), None, |_| {}).unwrap();
        assert_eq!(full.domains.len(), 3);
        let partial = enumerate_domains(4, &CensusOptions { max_domains: Some(2) }, None, |_| {}).unwrap();
        assert!(!partial.complete);
        let dir = std::env::temp_dir().join(format!("ltype-census-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.json.gz");
        partial.save(&path).unwrap();
        let loaded = CensusState::load(&path).unwrap();
        let resumed = enumerate_domains(4, &CensusOptions::default(), Some(loaded), |_| {}).unwrap();
        assert_eq!(resumed.to_json().unwrap(), full.to_json().unwrap());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
