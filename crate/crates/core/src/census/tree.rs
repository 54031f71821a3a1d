use serde::Serialize;

use super::{expanded_rays, CensusState};
use crate::arith::Int;
use crate::error::{Error, Result};
use crate::form::QuadForm;
use crate::linalg::rank_int;
use crate::polyhedral::HCone;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub ridges_checked: usize,
    /// `(domain, facet, facet)` for every ridge whose extreme rays are all
    /// positive definite.
    pub failures: Vec<(usize, usize, usize)>,
}

impl TreeReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Ridges of one pointed full-dimensional cone (pairs of facets whose
/// common rays span codimension 2) that contain no ray of rank below `d`.
/// Returns the number of ridges and the failing pairs.
pub fn tree_check_cone(cone: &HCone, rays: &[Vec<Int>], d: usize) -> Result<(usize, Vec<(usize, usize)>)> {
    let big = cone.ambient_dim;
    let inc: Vec<Vec<usize>> = rays.iter().map(|r| cone.incidence(r)).collect();
    let on: Vec<Vec<bool>> = (0..cone.facets.len())
        .map(|f| inc.iter().map(|i| i.binary_search(&f).is_ok()).collect())
        .collect();
    let degenerate: Vec<bool> =
        rays.iter().map(|r| QuadForm::from_coords(r).map(|q| q.rank() < d)).collect::<Result<_>>()?;
    let mut count = 0;
    let mut bad = Vec::new();
    for i in 0..cone.facets.len() {
        for j in i + 1..cone.facets.len() {
            let common: Vec<usize> = (0..rays.len()).filter(|&r| on[i][r] && on[j][r]).collect();
            if common.len() + 2 < big {
                continue;
            }
            let rows: Vec<Vec<Int>> = common.iter().map(|&r| rays[r].clone()).collect();
            if rank_int(&rows) + 2 != big {
                continue;
            }
            count += 1;
            if !common.iter().any(|&r| degenerate[r]) {
                bad.push((i, j));
            }
        }
    }
    Ok((count, bad))
}

/// Checks that every ridge of every domain contains a degenerate form.
pub fn tree_check(state: &CensusState) -> Result<TreeReport> {
    if !state.complete {
        return Err(Error::Invalid("census is incomplete".into()));
    }
    let mut report = TreeReport::default();
    for rec in &state.domains {
        let cone = rec.cone.hcone()?;
        let rays = expanded_rays(rec)?;
        let (n, bad) = tree_check_cone(&cone, &rays, state.dim)?;
        report.ridges_checked += n;
        report.failures.extend(bad.into_iter().map(|(i, j)| (rec.id, i, j)));
    }
    Ok(report)
}
