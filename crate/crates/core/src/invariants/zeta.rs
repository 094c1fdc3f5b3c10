use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sylow_exponent;
use crate::corering::dlog::{build_dlog_table, DlogTable};
use crate::corering::howell::HowellForm;
use crate::corering::poly::PadicPoly;
use crate::corering::zmod::{CappedValuation, Modulus};
use crate::{Error, Result};

/// Largest `N - 1` for which `ord_zeta` also runs the full group-ring path.
pub const FULL_PATH_MAX_ORDER: u64 = 120;

/// An element of `(Z/p^s)[(Z/N)^x]`, coefficient of `[i]` stored at `i - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    n: u64,
    modulus: Modulus,
    coeffs: Vec<u64>,
}

impl GroupRingElement {
    pub fn zero(n: u64, modulus: Modulus) -> Self {
        GroupRingElement { n, modulus, coeffs: vec![0; n as usize - 1] }
    }

    /// The group element `[g]`.
    pub fn basis(n: u64, g: u64, modulus: Modulus) -> Self {
        let mut out = Self::zero(n, modulus);
        out.coeffs[(g % n) as usize - 1] = 1;
        out
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Coefficient of `[i]`, `i` prime to `N`.
    pub fn coeff(&self, i: u64) -> u64 {
        let i = i % self.n;
        assert!(i != 0, "0 is not in (Z/N)^x");
        self.coeffs[i as usize - 1]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Image under `[g] -> 1`.
    pub fn augmentation(&self) -> u64 {
        let m = self.modulus;
        self.coeffs.iter().fold(0u128, |acc, &c| m.add(acc, c as u128)) as u64
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.modulus;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| m.add(a as u128, b as u128) as u64).collect();
        GroupRingElement { coeffs, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.modulus;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| m.sub(a as u128, b as u128) as u64).collect();
        GroupRingElement { coeffs, ..*self }
    }

    /// Convolution over the multiplicative group.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let m = self.modulus;
        let mut out = vec![0u128; self.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = ((i as u64 + 1) * (j as u64 + 1) % self.n) as usize - 1;
                out[k] = m.add(out[k], m.mul(a as u128, b as u128));
            }
        }
        GroupRingElement { coeffs: out.into_iter().map(|c| c as u64).collect(), ..*self }
    }

    /// Push-forward to `(Z/p^s)[Z/p^t]` along `i -> log(i) mod p^t`.
    pub fn project_sylow(&self, table: &DlogTable, t: u32) -> Vec<u64> {
        let d = self.modulus.p().pow(t);
        let m = self.modulus;
        let mut out = vec![0u128; d as usize];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let k = (table.log(idx as u64 + 1) % d) as usize;
            out[k] = m.add(out[k], c as u128);
        }
        out.into_iter().map(|c| c as u64).collect()
    }
}

/// `zeta = sum_i B_2(i/N) [i]` with `B_2(x) = x^2 - x + 1/6`.
pub fn zeta_element(n: u64, p: u64, s: u32) -> Result<GroupRingElement> {
    if p <= 3 {
        return Err(Error::PrimeTooSmall(p));
    }
    sylow_exponent(n, p)?;
    let m = Modulus::new(p, s)?;
    if m.q() >= 1 << 63 {
        return Err(Error::InvalidModulus(format!("{p}^{s} is too large")));
    }
    let inv_n = m.inv(n as u128).expect("N = 1 mod p");
    let inv_n2 = m.mul(inv_n, inv_n);
    let inv6 = m.inv(6).expect("p > 3");
    let coeffs = (1..n)
        .map(|i| {
            let i = i as u128 % m.q();
            let sq = m.mul(m.mul(i, i), inv_n2);
            m.add(m.sub(sq, m.mul(i, inv_n)), inv6) as u64
        })
        .collect();
    Ok(GroupRingElement { n, modulus: m, coeffs })
}

/// Orders of `zeta` for `1 <= s <= s_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub n: u64,
    pub p: u64,
    pub cap: u64,
    pub ord_s: BTreeMap<u32, CappedValuation>,
    /// Set when the image of `zeta` in the Sylow quotient ring vanishes.
    pub degenerate: bool,
    /// Whether the full group-ring path was run and agreed.
    pub full_path_checked: bool,
}

impl ZetaReport {
    pub fn ord1(&self) -> Option<CappedValuation> {
        self.ord_s.get(&1).copied()
    }
}

fn default_cap(p: u64, t: u32) -> u64 {
    p.pow(t) + 1
}

/// `ord_s(zeta)`: the largest `r` with `zeta` in `I^r`, or `AtLeast(cap)`.
///
/// `cap` defaults to `p^t + 1`. The Sylow-projection path is always used;
/// for `N - 1 <= FULL_PATH_MAX_ORDER` the full group-ring path is run too and
/// the two must agree.
pub fn ord_zeta(n: u64, p: u64, s: u32, cap: Option<u64>) -> Result<CappedValuation> {
    let table = build_dlog_table(n)?;
    Ok(ord_zeta_with(&table, p, s, cap)?.0)
}

fn ord_zeta_with(table: &DlogTable, p: u64, s: u32, cap: Option<u64>) -> Result<(CappedValuation, bool, bool)> {
    let n = table.n();
    let t = sylow_exponent(n, p)?;
    let cap = cap.unwrap_or_else(|| default_cap(p, t));
    let zeta = zeta_element(n, p, s)?;
    let proj = zeta.project_sylow(table, t);
    let degenerate = proj.iter().all(|&c| c == 0);
    let fast = ord_sylow(&proj, zeta.modulus(), t, cap);
    let mut checked = false;
    if n - 1 <= FULL_PATH_MAX_ORDER {
        let full = ord_full(&zeta, table, cap);
        if full != fast {
            return Err(Error::Mismatch(format!(
                "ord_zeta paths disagree for (N, p, s) = ({n}, {p}, {s}): sylow {fast}, full {full}"
            )));
        }
        checked = true;
    }
    Ok((fast, degenerate, checked))
}

/// The Sylow-projection path on its own.
pub fn ord_zeta_sylow(n: u64, p: u64, s: u32, cap: Option<u64>) -> Result<CappedValuation> {
    let table = build_dlog_table(n)?;
    let t = sylow_exponent(n, p)?;
    let zeta = zeta_element(n, p, s)?;
    let cap = cap.unwrap_or_else(|| default_cap(p, t));
    Ok(ord_sylow(&zeta.project_sylow(&table, t), zeta.modulus(), t, cap))
}

/// The full group-ring path on its own: membership of `zeta` in the span of
/// `([g] - 1)^r [g]^k`, decided by Howell forms of size `N - 1`.
pub fn ord_zeta_full(n: u64, p: u64, s: u32, cap: Option<u64>) -> Result<CappedValuation> {
    let table = build_dlog_table(n)?;
    let t = sylow_exponent(n, p)?;
    let zeta = zeta_element(n, p, s)?;
    Ok(ord_full(&zeta, &table, cap.unwrap_or_else(|| default_cap(p, t))))
}

pub fn zeta_report(n: u64, p: u64, s_max: u32, cap: Option<u64>) -> Result<ZetaReport> {
    let table = build_dlog_table(n)?;
    zeta_report_with(&table, p, s_max, cap)
}

pub(crate) fn zeta_report_with(table: &DlogTable, p: u64, s_max: u32, cap: Option<u64>) -> Result<ZetaReport> {
    let n = table.n();
    let t = sylow_exponent(n, p)?;
    if s_max == 0 || s_max > t {
        return Err(Error::OutOfRange(format!("s_max = {s_max} must lie in 1..={t}")));
    }
    let cap_value = cap.unwrap_or_else(|| default_cap(p, t));
    let mut ord_s = BTreeMap::new();
    let mut degenerate = false;
    let mut full_path_checked = true;
    for s in 1..=s_max {
        let (ord, deg, checked) = ord_zeta_with(table, p, s, Some(cap_value))?;
        if ord == CappedValuation::Exact(0) {
            return Err(Error::Mismatch(format!("zeta not in the augmentation ideal for (N, p, s) = ({n}, {p}, {s})")));
        }
        degenerate |= deg;
        full_path_checked &= checked;
        ord_s.insert(s, ord);
    }
    Ok(ZetaReport { n, p, cap: cap_value, ord_s, degenerate, full_path_checked })
}

/// Order of `a = sum c_k x^k` in the augmentation filtration of
/// `(Z/p^s)[x]/(x^D - 1)`, `D = p^t`, tested for `r = 1..=cap`.
fn ord_sylow(coeffs: &[u64], m: Modulus, t: u32, cap: u64) -> CappedValuation {
    let d = m.p().pow(t) as usize;
    debug_assert_eq!(coeffs.len(), d);
    if coeffs.iter().all(|&c| c == 0) {
        return CappedValuation::AtLeast(cap as u32);
    }
    for r in 1..=cap {
        let inside = if (r as usize) <= d {
            in_power_truncated(coeffs, m, d, r as usize)
        } else {
            in_power_general(coeffs, m, d, r as usize)
        };
        if !inside {
            return CappedValuation::Exact(r as u32 - 1);
        }
    }
    CappedValuation::AtLeast(cap as u32)
}

/// With `x = 1 + T` the ring is `(Z/p^s)[T]/(h)`, `h = (1+T)^D - 1`, and
/// `I^r = (T^r)`. For `r <= D`, membership reduces to the span of
/// `T^j h mod T^r` inside `(Z/p^s)[T]/(T^r)`.
fn in_power_truncated(coeffs: &[u64], m: Modulus, d: usize, r: usize) -> bool {
    let q = m.q();
    // a_j = sum_k c_k binom(k, j), for j < r.
    let mut a = vec![0u128; r];
    let mut binom = vec![0u128; r];
    binom[0] = 1 % q;
    for (k, &c) in coeffs.iter().enumerate() {
        if k > 0 {
            for j in (1..r).rev() {
                binom[j] = m.add(binom[j], binom[j - 1]);
            }
        }
        if c != 0 {
            for j in 0..r {
                a[j] = m.add(a[j], m.mul(c as u128, binom[j]));
            }
        }
    }
    // h mod T^r: binom(D, i) for 1 <= i < r.
    let mut hrow = vec![0u128; r];
    let mut row = vec![0u128; r];
    row[0] = 1 % q;
    for _ in 0..d {
        for j in (1..r).rev() {
            row[j] = m.add(row[j], row[j - 1]);
        }
    }
    hrow[1..r].copy_from_slice(&row[1..r]);
    let gens: Vec<Vec<u64>> = (0..r)
        .map(|shift| {
            let mut g = vec![0u64; r];
            for i in 0..r - shift {
                g[i + shift] = hrow[i] as u64;
            }
            g
        })
        .collect();
    let target: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    HowellForm::from_rows(&gens, r, m).contains(&target).is_some()
}

/// Membership of `a` in `(T^r)` inside `(Z/p^s)[T]/(h)` for any `r`.
fn in_power_general(coeffs: &[u64], m: Modulus, d: usize, r: usize) -> bool {
    let one_plus_t = PadicPoly::from_i128(&[1, 1], m);
    let mut h = PadicPoly::one(m);
    for _ in 0..d {
        h = &h * &one_plus_t;
    }
    let h = &h - &PadicPoly::one(m);
    let mut a = PadicPoly::zero(m);
    let mut pw = PadicPoly::one(m);
    for &c in coeffs {
        a = &a + &pw.scale(c as u128);
        pw = (&pw * &one_plus_t).rem_monic(&h);
    }
    let a = a.rem_monic(&h);
    let tee = PadicPoly::monomial(1, m);
    let mut g = PadicPoly::monomial(1, m).powmod(r as u64, &h);
    let mut gens = Vec::with_capacity(d);
    for _ in 0..d {
        gens.push((0..d).map(|i| g.coeff(i) as u64).collect::<Vec<u64>>());
        g = (&g * &tee).rem_monic(&h);
    }
    let target: Vec<u64> = (0..d).map(|i| a.coeff(i) as u64).collect();
    HowellForm::from_rows(&gens, d, m).contains(&target).is_some()
}

fn ord_full(zeta: &GroupRingElement, table: &DlogTable, cap: u64) -> CappedValuation {
    let m = zeta.modulus();
    let n = (table.n() - 1) as usize;
    // Index group elements by their logarithm so that [g] acts by a shift.
    let z: Vec<u64> = (0..n).map(|k| zeta.coeff(table.exp(k as u64))).collect();
    let mut base = vec![0u64; n];
    base[0] = 1;
    for r in 1..=cap {
        // base <- base * ([g] - 1)
        let next: Vec<u64> = (0..n)
            .map(|k| m.sub(base[(k + n - 1) % n] as u128, base[k] as u128) as u64)
            .collect();
        base = next;
        let gens: Vec<Vec<u64>> = (0..n)
            .map(|shift| (0..n).map(|k| base[(k + n - shift) % n]).collect())
            .collect();
        if HowellForm::from_rows(&gens, n, m).contains(&z).is_none() {
            return CappedValuation::Exact(r as u32 - 1);
        }
    }
    CappedValuation::AtLeast(cap as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corering::arith::primes_below;

    /// `B_2(i/N) mod p^s` through exact rational arithmetic.
    fn b2_rational(i: i128, n: i128, m: Modulus) -> u64 {
        // (6 i^2 - 6 i N + N^2) / (6 N^2)
        let num = 6 * i * i - 6 * i * n + n * n;
        let den = 6 * n * n;
        let g = gcd_i(num.abs(), den);
        let (num, den) = (num / g, den / g);
        m.mul(m.reduce_i128(num), m.inv(m.reduce_i128(den)).unwrap()) as u64
    }

    fn gcd_i(a: i128, b: i128) -> i128 {
        if b == 0 {
            a
        } else {
            gcd_i(b, a % b)
        }
    }

    #[test]
    fn zeta_coefficients_match_rational_oracle() {
        let z = zeta_element(11, 5, 1).unwrap();
        let m = z.modulus();
        for i in 1..11 {
            assert_eq!(z.coeff(i), b2_rational(i as i128, 11, m));
        }
        assert!(zeta_element(13, 3, 1).is_err());
        assert!(zeta_element(13, 5, 1).is_err());
    }

    #[test]
    fn augmentation_vanishes_up_to_t() {
        for n in [11u64, 31, 41, 101, 151, 251, 751] {
            let t = sylow_exponent(n, 5).unwrap();
            for s in 1..=t + 1 {
                let z = zeta_element(n, 5, s).unwrap();
                assert_eq!(z.augmentation() == 0, s <= t, "N = {n}, s = {s}");
            }
        }
    }

    #[test]
    fn group_ring_multiplication() {
        let m = Modulus::new(5, 2).unwrap();
        let a = GroupRingElement::basis(11, 2, m);
        let b = GroupRingElement::basis(11, 6, m);
        assert_eq!(a.mul(&b), GroupRingElement::basis(11, 1, m));
        let z = zeta_element(11, 5, 2).unwrap();
        assert_eq!(z.mul(&GroupRingElement::basis(11, 1, z.modulus())), z);
    }

    #[test]
    fn golden_orders() {
        assert_eq!(ord_zeta(181, 5, 1, Some(10)).unwrap(), CappedValuation::Exact(3));
        assert_eq!(ord_zeta(11, 5, 1, None).unwrap(), CappedValuation::Exact(1));
    }

    #[test]
    fn paths_agree_on_small_levels() {
        for p in [5u64, 7, 11, 13] {
            for n in primes_below(FULL_PATH_MAX_ORDER + 2) {
                if n < 5 || (n - 1) % p != 0 {
                    continue;
                }
                let t = sylow_exponent(n, p).unwrap();
                for s in 1..=t {
                    let fast = ord_zeta_sylow(n, p, s, None).unwrap();
                    let full = ord_zeta_full(n, p, s, None).unwrap();
                    assert_eq!(fast, full, "(N, p, s) = ({n}, {p}, {s})");
                    assert!(fast.lower_bound() >= 1);
                }
            }
        }
    }

    #[test]
    fn general_membership_agrees_with_truncated() {
        let m = Modulus::new(5, 2).unwrap();
        let coeffs: Vec<u64> = (0..25).map(|k| (k * k * 7 + 3 * k) % 25).collect();
        for r in 1..=25 {
            assert_eq!(in_power_truncated(&coeffs, m, 25, r), in_power_general(&coeffs, m, 25, r), "r = {r}");
        }
    }
}
