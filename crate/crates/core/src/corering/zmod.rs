//! The coefficient rings `Z/p^M` and p-adic valuations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::arith::is_prime;
use crate::{Error, Result};

/// p-adic valuation of an integer: a natural number, or `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// A valuation read at finite precision `M`.
///
/// Anything that reaches the precision is `AtLeast(M)`; it is never
/// confused with a genuine finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CappedValuation {
    Exact(u32),
    AtLeast(u32),
}

impl CappedValuation {
    pub fn exact(self) -> Option<u32> {
        match self {
            CappedValuation::Exact(v) => Some(v),
            CappedValuation::AtLeast(_) => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, CappedValuation::Exact(_))
    }

    /// A lower bound that is valid in either case.
    pub fn lower_bound(self) -> u32 {
        match self {
            CappedValuation::Exact(v) | CappedValuation::AtLeast(v) => v,
        }
    }

    /// Minimum of two readings; `AtLeast(m)` only wins over values `>= m`.
    pub fn min(self, other: Self) -> Self {
        use CappedValuation::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Exact(a.min(b)),
            (Exact(a), AtLeast(b)) | (AtLeast(b), Exact(a)) => {
                if a < b {
                    Exact(a)
                } else {
                    AtLeast(b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }
}

impl fmt::Display for CappedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CappedValuation::Exact(v) => write!(f, "{v}"),
            CappedValuation::AtLeast(m) => write!(f, ">={m}"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Valuation;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a natural number or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Valuation, E> {
                u32::try_from(v)
                    .map(Valuation::Finite)
                    .map_err(|_| E::custom("valuation out of range"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Valuation, E> {
                if v == "inf" {
                    Ok(Valuation::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for CappedValuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CappedValuation::Exact(v) => s.serialize_u32(*v),
            CappedValuation::AtLeast(m) => {
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry("geq", m)?;
                map.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for CappedValuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CappedValuation;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a natural number or {\"geq\": M}")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                u32::try_from(v)
                    .map(CappedValuation::Exact)
                    .map_err(|_| E::custom("valuation out of range"))
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
                let mut bound = None;
                while let Some(key) = map.next_key::<String>()? {
                    if key == "geq" {
                        bound = Some(map.next_value::<u32>()?);
                    } else {
                        return Err(de::Error::unknown_field(&key, &["geq"]));
                    }
                }
                bound
                    .map(CappedValuation::AtLeast)
                    .ok_or_else(|| de::Error::missing_field("geq"))
            }
        }
        d.deserialize_any(V)
    }
}

/// `v_p(x)`, with `Infinite` for `x = 0`.
pub fn valuation_p(x: i128, p: u64) -> Valuation {
    if x == 0 {
        return Valuation::Infinite;
    }
    let p = p as u128;
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Valuation::Finite(v)
}

/// The ring `Z/p^M` with `p > 3` prime and `p^M < 2^128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    exp: u32,
    q: u128,
}

impl Modulus {
    pub fn new(p: u64, exp: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p <= 3 {
            return Err(Error::PrimeTooSmall(p));
        }
        if exp == 0 {
            return Err(Error::InvalidModulus("exponent must be at least 1".into()));
        }
        let mut q: u128 = 1;
        for _ in 0..exp {
            q = q
                .checked_mul(p as u128)
                .ok_or_else(|| Error::InvalidModulus(format!("{p}^{exp} exceeds 128 bits")))?;
        }
        Ok(Modulus { p, exp, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn q(&self) -> u128 {
        self.q
    }

    /// `Z/p^k` for `1 <= k`, same prime.
    pub fn with_exp(&self, exp: u32) -> Result<Self> {
        Modulus::new(self.p, exp)
    }

    pub fn residue_field(&self) -> Self {
        Modulus { p: self.p, exp: 1, q: self.p as u128 }
    }

    pub fn elem(&self, v: i128) -> ZmodElem {
        ZmodElem { value: self.reduce_i128(v), modulus: *self }
    }

    pub fn zero(&self) -> ZmodElem {
        ZmodElem { value: 0, modulus: *self }
    }

    pub fn one(&self) -> ZmodElem {
        ZmodElem { value: 1, modulus: *self }
    }

    #[inline]
    pub fn reduce_i128(&self, v: i128) -> u128 {
        if v >= 0 {
            v as u128 % self.q
        } else {
            let r = v.unsigned_abs() % self.q;
            if r == 0 {
                0
            } else {
                self.q - r
            }
        }
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.q {
            s.wrapping_sub(self.q)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            self.q - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.q <= 1u128 << 64 {
            (a * b) % self.q
        } else {
            mul_mod_wide(a, b, self.q)
        }
    }

    pub fn pow(&self, mut base: u128, mut e: u64) -> u128 {
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u128) -> bool {
        a % self.p as u128 != 0
    }

    /// Inverse of a unit; `None` for non-units.
    pub fn inv(&self, a: u128) -> Option<u128> {
        if !self.is_unit(a) {
            return None;
        }
        // Newton iteration from the inverse modulo p.
        let p = self.p as u128;
        let a0 = (a % p) as u64;
        let mut x = super::arith::inv_mod(a0, self.p)? as u128;
        let mut prec = 1u32;
        while prec < self.exp {
            // x <- x (2 - a x)
            let ax = self.mul(a, x);
            x = self.mul(x, self.sub(2 % self.q, ax));
            prec *= 2;
        }
        Some(x % self.q)
    }

    /// Valuation of a residue, capped at the exponent.
    pub fn valuation(&self, a: u128) -> CappedValuation {
        if a == 0 {
            return CappedValuation::AtLeast(self.exp);
        }
        let p = self.p as u128;
        let mut a = a;
        let mut v = 0;
        while a % p == 0 {
            a /= p;
            v += 1;
        }
        CappedValuation::Exact(v)
    }

    /// Valuation as an integer in `0..=exp`, with `exp` standing for zero.
    pub fn val_u32(&self, a: u128) -> u32 {
        self.valuation(a).lower_bound()
    }

    /// `p^k mod q`.
    pub fn p_pow(&self, k: u32) -> u128 {
        if k >= self.exp {
            0
        } else {
            (self.p as u128).pow(k)
        }
    }

    /// Signed representative in `(-q/2, q/2]`, when it fits.
    pub fn signed(&self, a: u128) -> i128 {
        if a > self.q / 2 {
            -((self.q - a) as i128)
        } else {
            a as i128
        }
    }
}

fn mul_mod_wide(mut a: u128, mut b: u128, q: u128) -> u128 {
    let mut acc = 0u128;
    a %= q;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_wide(acc, a, q);
        }
        a = add_wide(a, a, q);
        b >>= 1;
    }
    acc
}

#[inline]
fn add_wide(a: u128, b: u128, q: u128) -> u128 {
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= q {
        s.wrapping_sub(q)
    } else {
        s
    }
}

/// An element of `Z/p^M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZmodElem {
    value: u128,
    modulus: Modulus,
}

impl ZmodElem {
    pub fn new(value: i128, modulus: Modulus) -> Self {
        modulus.elem(value)
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_unit(&self) -> bool {
        self.modulus.is_unit(self.value)
    }

    pub fn inv(&self) -> Option<Self> {
        self.modulus
            .inv(self.value)
            .map(|value| ZmodElem { value, modulus: self.modulus })
    }

    pub fn pow(&self, e: u64) -> Self {
        ZmodElem { value: self.modulus.pow(self.value, e), modulus: self.modulus }
    }

    pub fn valuation(&self) -> CappedValuation {
        self.modulus.valuation(self.value)
    }

    /// Reduction to a smaller exponent.
    pub fn reduce_to(&self, target: Modulus) -> Self {
        debug_assert_eq!(target.p, self.modulus.p);
        debug_assert!(target.exp <= self.modulus.exp);
        ZmodElem { value: self.value % target.q, modulus: target }
    }
}

impl fmt::Display for ZmodElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for ZmodElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        ZmodElem { value: self.modulus.add(self.value, rhs.value), modulus: self.modulus }
    }
}

impl Sub for ZmodElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        ZmodElem { value: self.modulus.sub(self.value, rhs.value), modulus: self.modulus }
    }
}

impl Mul for ZmodElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        ZmodElem { value: self.modulus.mul(self.value, rhs.value), modulus: self.modulus }
    }
}

impl Neg for ZmodElem {
    type Output = Self;
    fn neg(self) -> Self {
        ZmodElem { value: self.modulus.neg(self.value), modulus: self.modulus }
    }
}

impl AddAssign for ZmodElem {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for ZmodElem {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for ZmodElem {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation_p(3000, 5), Valuation::Finite(3));
        assert_eq!(valuation_p(0, 7), Valuation::Infinite);
        assert_eq!(valuation_p(336, 7), Valuation::Finite(1));
        assert_eq!(valuation_p(-25, 5), Valuation::Finite(2));
        assert!(Valuation::Finite(100) < Valuation::Infinite);
    }

    #[test]
    fn modulus_validation() {
        assert_eq!(Modulus::new(4, 2), Err(Error::NotPrime(4)));
        assert_eq!(Modulus::new(3, 2), Err(Error::PrimeTooSmall(3)));
        assert!(Modulus::new(5, 0).is_err());
        assert!(Modulus::new(5, 55).is_ok());
        assert!(Modulus::new(5, 56).is_err());
    }

    #[test]
    fn capped_valuation_reads() {
        let m = Modulus::new(5, 3).unwrap();
        assert_eq!(m.valuation(0), CappedValuation::AtLeast(3));
        assert_eq!(m.valuation(50), CappedValuation::Exact(2));
        assert_eq!(m.valuation(7), CappedValuation::Exact(0));
        let a = CappedValuation::Exact(2);
        assert_eq!(a.min(CappedValuation::AtLeast(3)), a);
        assert_eq!(CappedValuation::Exact(3).min(CappedValuation::AtLeast(3)), CappedValuation::AtLeast(3));
    }

    #[test]
    fn serde_shapes() {
        let v: Vec<CappedValuation> = vec![CappedValuation::Exact(2), CappedValuation::AtLeast(4)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[2,{"geq":4}]"#);
        assert_eq!(serde_json::from_str::<Vec<CappedValuation>>(&s).unwrap(), v);
        let w = vec![Valuation::Finite(1), Valuation::Infinite];
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"[1,"inf"]"#);
        assert_eq!(serde_json::from_str::<Vec<Valuation>>(&s).unwrap(), w);
    }

    #[test]
    fn wide_modulus_arithmetic() {
        // 2^61 - 1 squared exceeds 2^64, exercising the slow multiply.
        let m = Modulus::new(2_305_843_009_213_693_951, 2).unwrap();
        let a = m.q() - 1;
        assert_eq!(m.mul(a, a), 1);
        let x = 123_456_789_012_345_678_901u128;
        let ix = m.inv(x).unwrap();
        assert_eq!(m.mul(x, ix), 1);
    }

    proptest! {
        #[test]
        fn ring_laws(a in any::<i64>(), b in any::<i64>(), c in any::<i64>(), e in 1u32..6) {
            let m = Modulus::new(7, e).unwrap();
            let (a, b, c) = (m.elem(a as i128), m.elem(b as i128), m.elem(c as i128));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - b + b, a);
            prop_assert_eq!(a + (-a), m.zero());
            if a.is_unit() {
                prop_assert_eq!(a * a.inv().unwrap(), m.one());
            } else {
                prop_assert!(a.inv().is_none());
            }
        }
    }
}
