//! Dense univariate polynomials over `Z/p^M`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::zmod::{CappedValuation, Modulus, ZmodElem};

/// Polynomial over `Z/p^M`, constant term first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicPoly {
    coeffs: Vec<u128>,
    modulus: Modulus,
}

impl PadicPoly {
    pub fn from_raw(mut coeffs: Vec<u128>, modulus: Modulus) -> Self {
        for c in coeffs.iter_mut() {
            *c %= modulus.q();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PadicPoly { coeffs, modulus }
    }

    pub fn from_i128(coeffs: &[i128], modulus: Modulus) -> Self {
        Self::from_raw(coeffs.iter().map(|&c| modulus.reduce_i128(c)).collect(), modulus)
    }

    pub fn from_elems(coeffs: &[ZmodElem]) -> Option<Self> {
        let modulus = coeffs.first()?.modulus();
        if coeffs.iter().any(|c| c.modulus() != modulus) {
            return None;
        }
        Some(Self::from_raw(coeffs.iter().map(|c| c.value()).collect(), modulus))
    }

    pub fn zero(modulus: Modulus) -> Self {
        PadicPoly { coeffs: Vec::new(), modulus }
    }

    pub fn one(modulus: Modulus) -> Self {
        Self::constant(1, modulus)
    }

    pub fn constant(c: i128, modulus: Modulus) -> Self {
        Self::from_i128(&[c], modulus)
    }

    /// `y^k`.
    pub fn monomial(k: usize, modulus: Modulus) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        PadicPoly { coeffs, modulus }
    }

    /// `prod (y - r)` over the given roots.
    pub fn from_roots(roots: &[i128], modulus: Modulus) -> Self {
        roots.iter().fold(Self::one(modulus), |acc, &r| {
            &acc * &Self::from_i128(&[-r, 1], modulus)
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn raw(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn coeffs(&self) -> Vec<ZmodElem> {
        self.coeffs.iter().map(|&c| self.modulus.elem(c as i128)).collect()
    }

    /// Coefficient of `y^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> u128 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> u128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1 % self.modulus.q()
            && !self.coeffs.is_empty()
    }

    /// Monic with every lower coefficient divisible by `p`.
    pub fn is_distinguished(&self) -> bool {
        let p = self.modulus.p() as u128;
        self.is_monic() && self.coeffs[..self.coeffs.len() - 1].iter().all(|c| c % p == 0)
    }

    pub fn valuation_of_coeff(&self, i: usize) -> CappedValuation {
        self.modulus.valuation(self.coeff(i))
    }

    pub fn eval(&self, x: u128) -> u128 {
        let m = &self.modulus;
        self.coeffs.iter().rev().fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    pub fn scale(&self, c: u128) -> Self {
        let m = self.modulus;
        Self::from_raw(self.coeffs.iter().map(|&a| m.mul(a, c)).collect(), m)
    }

    /// Multiply by `y^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        PadicPoly { coeffs, modulus: self.modulus }
    }

    /// Remainder modulo `y^k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::from_raw(self.coeffs.iter().take(k).copied().collect(), self.modulus)
    }

    /// Reduction to `Z/p^k` for `k <= M`.
    pub fn reduce_to(&self, target: Modulus) -> Self {
        debug_assert_eq!(target.p(), self.modulus.p());
        Self::from_raw(self.coeffs.clone(), target)
    }

    /// Reinterpret the coefficients (already reduced) in a larger ring.
    pub fn lift_to(&self, target: Modulus) -> Self {
        debug_assert_eq!(target.p(), self.modulus.p());
        PadicPoly { coeffs: self.coeffs.clone(), modulus: target }
    }

    /// Coefficients divided exactly by `p^k`; `None` if some coefficient is not divisible.
    pub fn div_p_pow(&self, k: u32) -> Option<Self> {
        let d = (self.modulus.p() as u128).pow(k);
        if self.coeffs.iter().any(|c| c % d != 0) {
            return None;
        }
        Some(Self::from_raw(self.coeffs.iter().map(|c| c / d).collect(), self.modulus))
    }

    /// Division with remainder by a monic polynomial.
    pub fn divrem_monic(&self, d: &PadicPoly) -> (PadicPoly, PadicPoly) {
        assert!(d.is_monic(), "divisor must be monic");
        let m = self.modulus;
        let dd = d.degree().unwrap();
        if self.coeffs.len() <= dd {
            return (Self::zero(m), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![0u128; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd];
            if c == 0 {
                continue;
            }
            q[i] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i + j] = m.sub(r[i + j], m.mul(c, dj));
            }
        }
        r.truncate(dd);
        (Self::from_raw(q, m), Self::from_raw(r, m))
    }

    /// Division by a polynomial whose leading coefficient is a unit.
    pub fn divrem_unit_lead(&self, d: &PadicPoly) -> Option<(PadicPoly, PadicPoly)> {
        let inv = self.modulus.inv(d.leading())?;
        let monic = d.scale(inv);
        let (q, r) = self.divrem_monic(&monic);
        Some((q.scale(inv), r))
    }

    pub fn rem_monic(&self, d: &PadicPoly) -> PadicPoly {
        self.divrem_monic(d).1
    }

    pub fn derivative(&self) -> Self {
        let m = self.modulus;
        Self::from_raw(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| m.mul(c, i as u128 % m.q()))
                .collect(),
            m,
        )
    }

    /// Substitute `y -> c * y`.
    pub fn scale_variable(&self, c: u128) -> Self {
        let m = self.modulus;
        let mut pow = 1 % m.q();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            out.push(m.mul(a, pow));
            pow = m.mul(pow, c);
        }
        Self::from_raw(out, m)
    }

    /// Composition `self(g(y))`.
    pub fn compose(&self, g: &PadicPoly) -> Self {
        let m = self.modulus;
        let mut acc = Self::zero(m);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::from_raw(vec![c], m);
        }
        acc
    }

    /// `self^k` modulo a monic polynomial.
    pub fn powmod(&self, mut k: u64, modp: &PadicPoly) -> Self {
        let mut base = self.rem_monic(modp);
        let mut acc = Self::one(self.modulus).rem_monic(modp);
        while k > 0 {
            if k & 1 == 1 {
                acc = (&acc * &base).rem_monic(modp);
            }
            base = (&base * &base).rem_monic(modp);
            k >>= 1;
        }
        acc
    }

    pub fn make_monic(&self) -> Option<Self> {
        let inv = self.modulus.inv(self.leading())?;
        Some(self.scale(inv))
    }
}

/// Extended Euclid over the residue field `F_p`: returns `(g, s, t)` with
/// `s a + t b = g` and `g` monic (or zero).
pub fn ext_gcd_fp(a: &PadicPoly, b: &PadicPoly) -> (PadicPoly, PadicPoly, PadicPoly) {
    let m = a.modulus();
    assert_eq!(m.exp(), 1, "ext_gcd_fp works over the residue field");
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (PadicPoly::one(m), PadicPoly::zero(m));
    let (mut t0, mut t1) = (PadicPoly::zero(m), PadicPoly::one(m));
    while !r1.is_zero() {
        let (q, r) = r0.divrem_unit_lead(&r1).expect("field");
        let s2 = &s0 - &(&q * &s1);
        let t2 = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_zero() {
        return (r0, s0, t0);
    }
    let inv = m.inv(r0.leading()).unwrap();
    (r0.scale(inv), s0.scale(inv), t0.scale(inv))
}

/// Factorization of a monic polynomial over `F_p` into monic irreducibles
/// with multiplicities, by trial division in increasing degree.
pub fn factor_fp(f: &PadicPoly) -> Vec<(PadicPoly, usize)> {
    let m = f.modulus();
    assert_eq!(m.exp(), 1);
    assert!(f.is_monic());
    let p = m.p() as u128;
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut k = 1;
    while rest.degree().unwrap() >= 2 * k {
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut x = idx;
            for _ in 0..k {
                coeffs.push(x % p);
                x /= p;
            }
            coeffs.push(1);
            let cand = PadicPoly::from_raw(coeffs, m);
            let mut mult = 0;
            loop {
                let (q, r) = rest.divrem_monic(&cand);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((cand, mult));
            }
            if rest.degree().unwrap() < 2 * k {
                break;
            }
        }
        k += 1;
    }
    if rest.degree().unwrap() > 0 {
        if let Some(entry) = out.iter_mut().find(|(g, _)| *g == rest) {
            entry.1 += 1;
        } else {
            out.push((rest, 1));
        }
    }
    out
}

impl Add for &PadicPoly {
    type Output = PadicPoly;
    fn add(self, rhs: &PadicPoly) -> PadicPoly {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let m = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PadicPoly::from_raw((0..n).map(|i| m.add(self.coeff(i), rhs.coeff(i))).collect(), m)
    }
}

impl Sub for &PadicPoly {
    type Output = PadicPoly;
    fn sub(self, rhs: &PadicPoly) -> PadicPoly {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let m = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PadicPoly::from_raw((0..n).map(|i| m.sub(self.coeff(i), rhs.coeff(i))).collect(), m)
    }
}

impl Mul for &PadicPoly {
    type Output = PadicPoly;
    fn mul(self, rhs: &PadicPoly) -> PadicPoly {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let m = self.modulus;
        if self.is_zero() || rhs.is_zero() {
            return PadicPoly::zero(m);
        }
        let mut out = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = m.add(out[i + j], m.mul(a, b));
            }
        }
        PadicPoly::from_raw(out, m)
    }
}

impl Neg for &PadicPoly {
    type Output = PadicPoly;
    fn neg(self) -> PadicPoly {
        let m = self.modulus;
        PadicPoly::from_raw(self.coeffs.iter().map(|&c| m.neg(c)).collect(), m)
    }
}

impl fmt::Display for PadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("y")?,
                (1, _) => write!(f, "{c}*y")?,
                (_, 1) => write!(f, "y^{i}")?,
                _ => write!(f, "{c}*y^{i}")?,
            }
        }
        write!(f, " (mod {}^{})", self.modulus.p(), self.modulus.exp())
    }
}
