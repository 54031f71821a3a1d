//! Incremental double description over the integers.

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use rayon::prelude::*;

use super::{HCone, Ray};
use crate::arith::{dot, gcd_all, Int};
use crate::error::Result;
use crate::linalg::{independent_rows, inverse_rat, to_rat_matrix, IntMatrix};

struct DdRay {
    dir: Vec<Int>,
    /// values of every input functional on `dir`
    vals: Vec<Int>,
    zeros: FixedBitSet,
}

impl DdRay {
    fn new(dir: Vec<Int>, facets: &[Vec<Int>]) -> DdRay {
        let vals: Vec<Int> = facets.iter().map(|f| dot(f, &dir)).collect();
        DdRay::from_parts(dir, vals)
    }

    fn from_parts(dir: Vec<Int>, vals: Vec<Int>) -> DdRay {
        let mut zeros = FixedBitSet::with_capacity(vals.len());
        for (i, v) in vals.iter().enumerate() {
            if v.is_zero() {
                zeros.insert(i);
            }
        }
        DdRay { dir, vals, zeros }
    }

    /// `a·self + b·other` with `a, b > 0`, divided by the content.
    fn combine(a: &Int, p: &DdRay, b: &Int, n: &DdRay) -> DdRay {
        let mut dir: Vec<Int> = p.dir.iter().zip(&n.dir).map(|(x, y)| a * x + b * y).collect();
        let mut vals: Vec<Int> = p.vals.iter().zip(&n.vals).map(|(x, y)| a * x + b * y).collect();
        let g = gcd_all(&dir);
        if !g.is_zero() && g != Int::from(1) {
            for x in dir.iter_mut() {
                *x = &*x / &g;
            }
            for x in vals.iter_mut() {
                *x = &*x / &g;
            }
        }
        DdRay::from_parts(dir, vals)
    }
}

/// Extreme rays of a pointed cone, lexicographically sorted.
///
/// Starts from a simplicial cone on independent facets, then adds the
/// remaining facets one at a time, always choosing the one that cuts off the
/// most current rays (ties by index). Adjacency of a positive and a negative
/// ray is decided combinatorially: no third ray may vanish on all facets
/// where both vanish.
pub fn dual_description(cone: &HCone) -> Result<Vec<Ray>> {
    cone.check_pointed()?;
    let dim = cone.ambient_dim;
    let facets = &cone.facets;
    let m = facets.len();
    let basis = independent_rows(facets);
    debug_assert_eq!(basis.len(), dim);
    let a: IntMatrix = basis.iter().map(|&i| facets[i].clone()).collect();
    let inv = inverse_rat(&to_rat_matrix(&a)).expect("independent rows");
    let mut rays: Vec<DdRay> = (0..dim)
        .map(|j| {
            let col: Vec<_> = inv.iter().map(|row| row[j].clone()).collect();
            DdRay::new(crate::arith::primitive_direction(&col), facets)
        })
        .collect();
    let mut processed = FixedBitSet::with_capacity(m);
    for &i in &basis {
        processed.insert(i);
    }
    let mut remaining: Vec<usize> = (0..m).filter(|i| !processed.contains(*i)).collect();
    let need = dim.saturating_sub(2);
    while !remaining.is_empty() {
        // maximal cut-off
        let (pos_in_remaining, &next) = remaining
            .iter()
            .enumerate()
            .max_by_key(|&(k, &i)| (rays.iter().filter(|r| r.vals[i].is_negative()).count(), std::cmp::Reverse(k)))
            .expect("nonempty");
        remaining.remove(pos_in_remaining);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for (k, r) in rays.iter().enumerate() {
            if r.vals[next].is_negative() {
                neg.push(k);
            } else if r.vals[next].is_zero() {
                zero.push(k);
            } else {
                pos.push(k);
            }
        }
        if neg.is_empty() {
            processed.insert(next);
            continue;
        }
        let rays_ref = &rays;
        let processed_ref = &processed;
        let make = |&p: &usize| -> Vec<DdRay> {
            let mut out = Vec::new();
            let rp = &rays_ref[p];
            for &n in &neg {
                let rn = &rays_ref[n];
                let mut common = rp.zeros.clone();
                common.intersect_with(&rn.zeros);
                common.intersect_with(processed_ref);
                if common.count_ones(..) < need {
                    continue;
                }
                let blocked = rays_ref
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != n && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                let a = rp.vals[next].clone();
                let b = -rn.vals[next].clone();
                out.push(DdRay::combine(&b, rp, &a, rn));
            }
            out
        };
        let created: Vec<DdRay> = if pos.len() * neg.len() > 2048 {
            pos.par_iter().map(make).collect::<Vec<_>>().into_iter().flatten().collect()
        } else {
            pos.iter().flat_map(make).collect()
        };
        let mut keep = vec![false; rays.len()];
        for &k in pos.iter().chain(&zero) {
            keep[k] = true;
        }
        let mut next_rays: Vec<DdRay> = rays
            .into_iter()
            .zip(keep)
            .filter_map(|(r, k)| k.then_some(r))
            .collect();
        next_rays.extend(created);
        rays = next_rays;
        processed.insert(next);
    }
    let mut out: Vec<Ray> = rays
        .into_iter()
        .map(|r| Ray { incidence: r.zeros.ones().collect(), direction: r.dir })
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ints;
    use crate::error::Error;
    use crate::polyhedral::test_cones::*;
    use rand::Rng;

    #[test]
    fn simplicial_and_square() {
        let rays = dual_description(&simplicial(3)).unwrap();
        let dirs: Vec<_> = rays.iter().map(|r| r.direction.clone()).collect();
        assert_eq!(dirs, vec![ints(&[0, 0, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]);
        assert_eq!(dual_description(&square()).unwrap().len(), 4);
    }

    #[test]
    fn non_pointed_names_lineality() {
        let c = HCone::new(3, vec![ints(&[1, 0, 0]), ints(&[0, 1, 0])]).unwrap();
        match dual_description(&c) {
            Err(Error::NotPointed(v)) => assert_eq!(v, ints(&[0, 0, 1])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn random_cones_match_subset_oracle() {
        let mut r = rng(11);
        for _ in 0..80 {
            let d = r.gen_range(2..=5);
            let m = r.gen_range(d..=10);
            let c = random_cone(&mut r, d, m);
            assert_eq!(dual_description(&c).unwrap(), brute_force_rays(&c), "{c:?}");
        }
    }

    #[test]
    fn roundtrip_h_v() {
        let mut r = rng(5);
        for _ in 0..30 {
            let d = r.gen_range(2..=5);
            let m = r.gen_range(d..=9);
            let c = random_cone(&mut r, d, m);
            let rays = dual_description(&c).unwrap();
            let dual = HCone::new(d, rays.iter().map(|x| x.direction.clone()).collect()).unwrap();
            let facets: std::collections::BTreeSet<Vec<Int>> =
                dual_description(&dual).unwrap().into_iter().map(|x| x.direction).collect();
            // irredundant facets of c: those whose incident rays have rank d-1
            let irredundant: std::collections::BTreeSet<Vec<Int>> = (0..c.facets.len())
                .filter(|&i| {
                    let inc: Vec<Vec<Int>> =
                        rays.iter().filter(|x| x.incidence.contains(&i)).map(|x| x.direction.clone()).collect();
                    crate::linalg::rank_int(&inc) + 1 == d
                })
                .map(|i| c.facets[i].clone())
                .collect();
            assert_eq!(facets, irredundant);
        }
    }
}
