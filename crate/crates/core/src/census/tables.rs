use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::CensusState;
use crate::error::{Error, Result};

/// Distribution of facet counts, ray counts and ray ranks over the domains
/// of a complete census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tables {
    pub dim: usize,
    /// Facet count → number of domains.
    pub l1: BTreeMap<usize, usize>,
    /// Extreme ray count → number of domains.
    pub l2: BTreeMap<usize, usize>,
    /// Rank `k` → (number of rays of rank `k` → number of domains).
    pub r: BTreeMap<usize, BTreeMap<usize, usize>>,
}

impl Tables {
    pub fn l1(&self, n: usize) -> usize {
        self.l1.get(&n).copied().unwrap_or(0)
    }

    pub fn l2(&self, n: usize) -> usize {
        self.l2.get(&n).copied().unwrap_or(0)
    }

    pub fn r(&self, k: usize, n: usize) -> usize {
        self.r.get(&k).and_then(|m| m.get(&n)).copied().unwrap_or(0)
    }

    /// Ranks that occur on some extreme ray.
    pub fn ranks_present(&self) -> Vec<usize> {
        self.r.iter().filter(|(_, m)| m.iter().any(|(&n, &c)| n > 0 && c > 0)).map(|(&k, _)| k).collect()
    }

    /// `table,n,count` rows, zero cells included within each table's range.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,n,count\n");
        for (name, row) in self.rows() {
            for (n, c) in row {
                let _ = writeln!(out, "{name},{n},{c}");
            }
        }
        out
    }

    /// One block per table: a row of `n` values over a row of counts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, row) in self.rows() {
            let label = format!("{name}(n)");
            let w = label.len().max(1);
            let cells: Vec<usize> = row.iter().map(|(n, c)| n.to_string().len().max(c.to_string().len())).collect();
            let _ = write!(out, "{:>w$} |", "n");
            for ((n, _), cw) in row.iter().zip(&cells) {
                let _ = write!(out, " {n:>cw$}");
            }
            out.push('\n');
            let _ = write!(out, "{label:>w$} |");
            for ((_, c), cw) in row.iter().zip(&cells) {
                let _ = write!(out, " {c:>cw$}");
            }
            out.push_str("\n\n");
        }
        out
    }

    fn rows(&self) -> Vec<(String, Vec<(usize, usize)>)> {
        let span = |m: &BTreeMap<usize, usize>| -> Vec<(usize, usize)> {
            match (m.keys().next(), m.keys().next_back()) {
                (Some(&lo), Some(&hi)) => (lo..=hi).map(|n| (n, m.get(&n).copied().unwrap_or(0))).collect(),
                _ => Vec::new(),
            }
        };
        let mut rows = vec![("L1".to_string(), span(&self.l1)), ("L2".to_string(), span(&self.l2))];
        let hi = self.r.values().filter_map(|m| m.keys().next_back().copied()).max().unwrap_or(0);
        for k in self.ranks_present() {
            let m = &self.r[&k];
            rows.push((format!("R{k}"), (0..=hi).map(|n| (n, m.get(&n).copied().unwrap_or(0))).collect()));
        }
        rows
    }
}

/// Tables of a complete census. Ray data comes from the orbit registries
/// when present and from the stored cone otherwise.
pub fn distribution_tables(state: &CensusState) -> Result<Tables> {
    if !state.complete {
        return Err(Error::Invalid("census is incomplete".into()));
    }
    let d = state.dim;
    let mut t = Tables { dim: d, l1: BTreeMap::new(), l2: BTreeMap::new(), r: BTreeMap::new() };
    for rec in &state.domains {
        *t.l1.entry(rec.num_facets()).or_insert(0) += 1;
        *t.l2.entry(rec.num_rays).or_insert(0) += 1;
        for k in 1..=d {
            let n = rec.rank_profile.get(&k).copied().unwrap_or(0);
            *t.r.entry(k).or_default().entry(n).or_insert(0) += 1;
        }
    }
    Ok(t)
}
