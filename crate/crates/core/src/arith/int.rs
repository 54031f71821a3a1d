//! Arbitrary-precision integer with an inline fast path for values that fit
//! in an `i64`.
//!
//! Nearly every number met in low-dimensional lattice work is tiny, so the
//! common case never touches the heap. Results that overflow silently promote
//! to a [`BigInt`]; results that fit demote back, which keeps the
//! representation canonical (equal values have equal representations).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    #[inline]
    pub fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    #[inline]
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    #[inline]
    pub fn is_positive(&self) -> bool {
        match self {
            Int::Small(v) => *v > 0,
            Int::Big(b) => b.is_positive(),
        }
    }

    #[inline]
    pub fn sign(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Floor of the square root; `None` for negative input.
    pub fn isqrt(&self) -> Option<Int> {
        if self.is_negative() {
            return None;
        }
        match self {
            Int::Small(v) => {
                let mut r = (*v as f64).sqrt() as i64;
                while r > 0 && r.checked_mul(r).map_or(true, |s| s > *v) {
                    r -= 1;
                }
                while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= *v) {
                    r += 1;
                }
                Some(Int::Small(r))
            }
            Int::Big(b) => Some(Int::from_big(b.sqrt())),
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl From<i64> for Int {
    #[inline]
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    #[inline]
    fn from(v: i32) -> Int {
        Int::Small(v as i64)
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Int {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(BigInt::from(v)),
        }
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Int {
        Int::from_big(b)
    }
}

impl PartialEq for Int {
    #[inline]
    fn eq(&self, other: &Int) -> bool {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a == b,
            (Int::Big(a), Int::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl Hash for Int {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Int::Small(v) => {
                state.write_u8(0);
                v.hash(state)
            }
            Int::Big(b) => {
                state.write_u8(1);
                b.hash(state)
            }
        }
    }
}

impl Ord for Int {
    #[inline]
    fn cmp(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Int {
    #[inline]
    fn partial_cmp(&self, other: &Int) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Int> for &'a Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: &'a Int) -> Int {
                if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
                    if let Some(r) = a.$checked(*b) {
                        return Int::Small(r);
                    }
                }
                Int::from_big(self.to_bigint().$method(rhs.to_bigint()))
            }
        }
        impl $trait<Int> for Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: Int) -> Int {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Int> for Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: &'a Int) -> Int {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Int> for &'a Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: Int) -> Int {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);
binop!(Rem, rem, checked_rem);

impl AddAssign<&Int> for Int {
    #[inline]
    fn add_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(r) = a.checked_add(*b) {
                *self = Int::Small(r);
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl AddAssign<Int> for Int {
    #[inline]
    fn add_assign(&mut self, rhs: Int) {
        *self += &rhs;
    }
}

impl SubAssign<&Int> for Int {
    #[inline]
    fn sub_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(r) = a.checked_sub(*b) {
                *self = Int::Small(r);
                return;
            }
        }
        *self = &*self - rhs;
    }
}

impl SubAssign<Int> for Int {
    #[inline]
    fn sub_assign(&mut self, rhs: Int) {
        *self -= &rhs;
    }
}

impl MulAssign<&Int> for Int {
    #[inline]
    fn mul_assign(&mut self, rhs: &Int) {
        *self = &*self * rhs;
    }
}

impl MulAssign<Int> for Int {
    #[inline]
    fn mul_assign(&mut self, rhs: Int) {
        *self = &*self * &rhs;
    }
}

impl DivAssign<&Int> for Int {
    fn div_assign(&mut self, rhs: &Int) {
        *self = &*self / rhs;
    }
}

impl DivAssign<Int> for Int {
    fn div_assign(&mut self, rhs: Int) {
        *self = &*self / &rhs;
    }
}

impl RemAssign<&Int> for Int {
    fn rem_assign(&mut self, rhs: &Int) {
        *self = &*self % rhs;
    }
}

impl RemAssign<Int> for Int {
    fn rem_assign(&mut self, rhs: Int) {
        *self = &*self % &rhs;
    }
}

impl Neg for &Int {
    type Output = Int;
    #[inline]
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(r) => Int::Small(r),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-b),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    #[inline]
    fn neg(self) -> Int {
        -&self
    }
}

impl Sum for Int {
    fn sum<I: Iterator<Item = Int>>(iter: I) -> Int {
        let mut acc = Int::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl<'a> Sum<&'a Int> for Int {
    fn sum<I: Iterator<Item = &'a Int>>(iter: I) -> Int {
        let mut acc = Int::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl Product for Int {
    fn product<I: Iterator<Item = Int>>(iter: I) -> Int {
        let mut acc = Int::one();
        for x in iter {
            acc *= &x;
        }
        acc
    }
}

impl Zero for Int {
    #[inline]
    fn zero() -> Int {
        Int::Small(0)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }
}

impl One for Int {
    #[inline]
    fn one() -> Int {
        Int::Small(1)
    }
    #[inline]
    fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }
}

impl Num for Int {
    type FromStrRadixErr = num_bigint::ParseBigIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Int, Self::FromStrRadixErr> {
        BigInt::from_str_radix(s, radix).map(Int::from_big)
    }
}

impl Integer for Int {
    fn div_floor(&self, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            if *b != 0 && !(*a == i64::MIN && *b == -1) {
                return Int::Small(a.div_floor(b));
            }
        }
        Int::from_big(self.to_bigint().div_floor(&other.to_bigint()))
    }

    fn mod_floor(&self, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            if *b != 0 && !(*a == i64::MIN && *b == -1) {
                return Int::Small(a.mod_floor(b));
            }
        }
        Int::from_big(self.to_bigint().mod_floor(&other.to_bigint()))
    }

    fn gcd(&self, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            let g = gcd_u64(a.unsigned_abs(), b.unsigned_abs());
            return match i64::try_from(g) {
                Ok(v) => Int::Small(v),
                Err(_) => Int::Big(BigInt::from(g)),
            };
        }
        Int::from_big(self.to_bigint().gcd(&other.to_bigint()))
    }

    fn lcm(&self, other: &Int) -> Int {
        if self.is_zero() || other.is_zero() {
            return Int::zero();
        }
        let g = self.gcd(other);
        ((self / &g) * other).abs()
    }

    fn is_multiple_of(&self, other: &Int) -> bool {
        if other.is_zero() {
            return self.is_zero();
        }
        (self % other).is_zero()
    }

    fn is_even(&self) -> bool {
        match self {
            Int::Small(v) => v % 2 == 0,
            Int::Big(b) => b.is_even(),
        }
    }

    fn is_odd(&self) -> bool {
        !self.is_even()
    }

    fn div_rem(&self, other: &Int) -> (Int, Int) {
        (self / other, self % other)
    }
}

impl Signed for Int {
    fn abs(&self) -> Int {
        Int::abs(self)
    }
    fn abs_sub(&self, other: &Int) -> Int {
        if self <= other {
            Int::zero()
        } else {
            self - other
        }
    }
    fn signum(&self) -> Int {
        Int::from(self.sign() as i64)
    }
    fn is_positive(&self) -> bool {
        Int::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Int::is_negative(self)
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => fmt::Display::fmt(v, f),
            Int::Big(b) => fmt::Display::fmt(b, f),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Int, Self::Err> {
        match s.parse::<i64>() {
            Ok(v) => Ok(Int::Small(v)),
            Err(_) => BigInt::from_str(s).map(Int::from_big),
        }
    }
}

/// Small values serialize as JSON numbers, large ones as decimal strings.
impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Int::Small(v) => s.serialize_i64(*v),
            Int::Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Int::Small(v)),
            Repr::Str(s) => s.trim().parse().map_err(serde::de::Error::custom),
        }
    }
}
