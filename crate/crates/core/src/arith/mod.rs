//! Exact integers and rationals, plus small vector helpers shared by every
//! other module.

mod int;

pub use int::Int;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
pub type Rational = Ratio<Int>;

#[inline]
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

#[inline]
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

#[inline]
pub fn from_int(n: &Int) -> Rational {
    Rational::from_integer(n.clone())
}

/// Parses `"7"`, `"-3/4"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match t.split_once('/') {
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(rint(v)),
            Repr::Str(s) => parse_rational(&s).map_err(serde::de::Error::custom),
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            v: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            #[derive(Deserialize)]
            struct W(#[serde(with = "super")] Rational);
            let v: Vec<W> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|w| w.0).collect())
        }
    }
}

pub fn gcd_all<'a>(v: impl IntoIterator<Item = &'a Int>) -> Int {
    let mut g = Int::zero();
    for x in v {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Divides by the (positive) gcd of the entries. The zero vector is returned
/// unchanged.
pub fn make_primitive(mut v: Vec<Int>) -> Vec<Int> {
    let g = gcd_all(&v);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// Flips the sign so the first nonzero entry is positive.
pub fn canonical_sign(mut v: Vec<Int>) -> Vec<Int> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
    v
}

/// Multiplies by the lcm of the denominators.
pub fn clear_denominators(v: &[Rational]) -> Vec<Int> {
    let l = v.iter().fold(Int::one(), |acc, q| acc.lcm(q.denom()));
    v.iter().map(|q| q.numer() * &(&l / q.denom())).collect()
}

/// Primitive integer vector pointing in the same direction as `v`.
pub fn primitive_direction(v: &[Rational]) -> Vec<Int> {
    make_primitive(clear_denominators(v))
}

#[inline]
pub fn dot(a: &[Int], b: &[Int]) -> Int {
    let mut acc = Int::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn dot_rat(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn to_rationals(v: &[Int]) -> Vec<Rational> {
    v.iter().map(from_int).collect()
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// `Some(vector)` when every entry is an integer.
pub fn as_integers(v: &[Rational]) -> Option<Vec<Int>> {
    v.iter()
        .map(|q| q.is_integer().then(|| q.numer().clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rint(5)), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(make_primitive(ints(&[4, -6, 0])), ints(&[2, -3, 0]));
        assert_eq!(canonical_sign(ints(&[0, -1, 2])), ints(&[0, 1, -2]));
        assert_eq!(
            primitive_direction(&[rat(1, 2), rat(-1, 3), rint(0)]),
            ints(&[3, -2, 0])
        );
    }
}
