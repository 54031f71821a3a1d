//! Initial ray by lexicographic LP and neighbors of a ray by projecting the
//! cone along it.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{dual_description, HCone, Ray, SymmetryAction};
use crate::arith::{from_int, make_primitive, primitive_direction, to_rationals, Int, Rational};
use crate::error::{Error, Result};
use crate::lp::{rational_lp, Constraint, LpOutcome};

#[derive(Clone, Debug)]
pub struct AdjacencyOptions {
    /// Projected cones with more facets than this are handled by a nested
    /// adjacency decomposition instead of a plain double description.
    pub recursion_threshold: usize,
    pub strict_balinski: bool,
}

impl Default for AdjacencyOptions {
    fn default() -> Self {
        AdjacencyOptions { recursion_threshold: 40, strict_balinski: false }
    }
}

/// Lexicographically maximal point of `C ∩ {Σ f_i(x) = 1}`, which is a vertex
/// of that section and hence an extreme ray.
pub fn initial_ray(cone: &HCone) -> Result<Ray> {
    cone.check_pointed()?;
    let d = cone.ambient_dim;
    let mut cons: Vec<Constraint> = cone
        .facets
        .iter()
        .map(|f| Constraint::ge(to_rationals(f), Rational::zero()))
        .collect();
    let mut total = vec![Int::zero(); d];
    for f in &cone.facets {
        for (t, x) in total.iter_mut().zip(f) {
            *t += x;
        }
    }
    cons.push(Constraint::eq(to_rationals(&total), Rational::one()));
    let mut point = Vec::new();
    for k in 0..d {
        let mut obj = vec![Rational::zero(); d];
        obj[k] = Rational::one();
        match rational_lp(&cons, &obj) {
            LpOutcome::Optimal { value, point: p } => {
                cons.push(Constraint::eq(obj, value));
                point = p;
            }
            LpOutcome::Infeasible => return Err(Error::EmptyCone),
            LpOutcome::Unbounded { ray, .. } => return Err(Error::NotPointed(primitive_direction(&ray))),
        }
    }
    Ok(cone.ray(primitive_direction(&point)))
}

/// Rays sharing a 2-face with the extreme ray `e`.
pub fn adjacent_rays(cone: &HCone, e: &Ray, group: Option<&SymmetryAction>, opts: &AdjacencyOptions) -> Result<Vec<Ray>> {
    if !cone.is_extreme(&e.direction) {
        return Err(Error::NotExtreme);
    }
    let d = cone.ambient_dim;
    let dir = &e.direction;
    let inc = cone.incidence(dir);
    // drop a coordinate where e is nonzero, preferring small entries
    let k = (0..d)
        .filter(|&i| !dir[i].is_zero())
        .min_by_key(|&i| (dir[i].abs(), i))
        .expect("nonzero ray");
    let drop = |f: &[Int]| -> Vec<Int> { f.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x.clone()).collect() };
    let lift = |y: &[Int]| -> Vec<Int> {
        let mut x = y.to_vec();
        x.insert(k, Int::zero());
        x
    };
    let projected: Vec<Vec<Int>> = inc
        .iter()
        .map(|&i| make_primitive(drop(&cone.facets[i])))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pcone = HCone::new(d - 1, projected)?;
    let prays: Vec<Vec<Int>> = if d == 1 {
        Vec::new()
    } else if pcone.facets.len() > opts.recursion_threshold {
        let sub_group = match group {
            Some(g) => g.project_stabilizer(dir, k, &pcone)?,
            None => SymmetryAction::trivial(&pcone),
        };
        let reg = super::adjacency_decomposition(&pcone, &sub_group, opts, None, |_| {})?;
        reg.expand(&sub_group, &pcone).into_iter().map(|r| r.direction).collect()
    } else {
        dual_description(&pcone)?.into_iter().map(|r| r.direction).collect()
    };
    let outside: Vec<usize> = (0..cone.facets.len()).filter(|i| !inc.contains(i)).collect();
    let mut out = BTreeSet::new();
    for y in prays {
        let u = lift(&y);
        // smallest alpha with alpha·e + u in the cone: the 2-dimensional program in closed form
        let mut alpha: Option<Rational> = None;
        for &j in &outside {
            let fe = cone.value(j, dir);
            let fu = cone.value(j, &u);
            let a = Rational::new(-fu, fe);
            if alpha.as_ref().map_or(true, |b| a > *b) {
                alpha = Some(a);
            }
        }
        let alpha = alpha.expect("a pointed cone has facets not containing e");
        let point: Vec<Rational> = dir.iter().zip(&u).map(|(ei, ui)| &alpha * from_int(ei) + from_int(ui)).collect();
        out.insert(cone.ray(primitive_direction(&point)));
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ints;
    use crate::polyhedral::skeleton_graph;
    use crate::polyhedral::test_cones::*;
    use rand::Rng;

    #[test]
    fn initial_ray_examples() {
        assert_eq!(initial_ray(&simplicial(3)).unwrap().direction, ints(&[1, 0, 0]));
        let sq = square();
        let r = initial_ray(&sq).unwrap();
        assert!(sq.is_extreme(&r.direction));
        assert_eq!(r.direction, ints(&[1, 1, 1]));
    }

    #[test]
    fn neighbor_counts() {
        let sq = square();
        for r in dual_description(&sq).unwrap() {
            assert_eq!(adjacent_rays(&sq, &r, None, &AdjacencyOptions::default()).unwrap().len(), 2);
        }
        let s4 = simplicial(4);
        for r in dual_description(&s4).unwrap() {
            assert_eq!(adjacent_rays(&s4, &r, None, &AdjacencyOptions::default()).unwrap().len(), 3);
        }
        let bogus = s4.ray(ints(&[1, 1, 0, 0]));
        assert!(matches!(adjacent_rays(&s4, &bogus, None, &AdjacencyOptions::default()), Err(Error::NotExtreme)));
    }

    #[test]
    fn neighbors_match_oracle_skeleton() {
        let mut r = rng(21);
        for _ in 0..40 {
            let m = r.gen_range(5..=11);
            let c = random_cone(&mut r, 5, m);
            let rays = brute_force_rays(&c);
            let sk = skeleton_graph(&c).unwrap();
            assert_eq!(sk.rays, rays);
            for (i, ray) in rays.iter().enumerate() {
                let nb = adjacent_rays(&c, ray, None, &AdjacencyOptions::default()).unwrap();
                let expected: Vec<Ray> = sk.neighbors(i).into_iter().map(|j| rays[j].clone()).collect();
                assert_eq!(nb, expected);
                // algebraic oracle: common facets have rank D-2
                let by_rank: Vec<Ray> = rays
                    .iter()
                    .filter(|o| *o != ray)
                    .filter(|o| {
                        let common: Vec<usize> =
                            ray.incidence.iter().copied().filter(|x| o.incidence.contains(x)).collect();
                        c.rank_of(&common) == 3
                    })
                    .cloned()
                    .collect();
                assert_eq!(nb, by_rank);
            }
        }
    }

    #[test]
    fn initial_ray_is_extreme_on_random_cones() {
        let mut r = rng(3);
        for _ in 0..30 {
            let d = r.gen_range(2..=6);
            let m = r.gen_range(d..=12);
            let c = random_cone(&mut r, d, m);
            let e = initial_ray(&c).unwrap();
            assert!(c.is_extreme(&e.direction));
            assert_eq!(c.rank_of(&e.incidence) + 1, d);
        }
    }
}
