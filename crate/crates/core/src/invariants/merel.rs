use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sylow_exponent;
use crate::corering::arith::{is_prime, pow_mod};
use crate::corering::dlog::{build_dlog_table, is_power, DlogTable};
use crate::{Error, Result};

/// `prod_{i=1}^{(N-1)/2} i^i mod N`.
pub fn merel_number(n: u64) -> Result<u64> {
    if !is_prime(n) || n == 2 {
        return Err(Error::NotPrime(n));
    }
    Ok((1..=(n - 1) / 2).fold(1 % n, |acc, i| acc * pow_mod(i, i, n) % n))
}

/// Merel's number with its `p^s`-power status for `1 <= s <= s_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MerelReport {
    pub n: u64,
    pub p: u64,
    pub merel_value: u64,
    /// `sum_{i <= (N-1)/2} i log(i)` in `Z/p^s`.
    pub log_sum_s: BTreeMap<u32, u64>,
    pub is_power_s: BTreeMap<u32, bool>,
}

impl MerelReport {
    /// Whether Merel's number is a `p`-th power.
    pub fn is_pth_power(&self) -> bool {
        self.is_power_s.get(&1).copied().unwrap_or(true)
    }
}

pub fn merel_report(n: u64, p: u64, s_max: u32) -> Result<MerelReport> {
    let table = build_dlog_table(n)?;
    merel_report_with(&table, p, s_max)
}

pub(crate) fn merel_report_with(table: &DlogTable, p: u64, s_max: u32) -> Result<MerelReport> {
    let n = table.n();
    let t = sylow_exponent(n, p)?;
    if s_max > t {
        return Err(Error::OutOfRange(format!("s_max = {s_max} exceeds v_p(N - 1) = {t}")));
    }
    let merel_value = merel_number(n)?;
    // Sum of i log(i) modulo N - 1, reduced per s below.
    let full = (1..=(n - 1) / 2).fold(0u128, |acc, i| {
        (acc + i as u128 * table.log(i) as u128) % (n - 1) as u128
    }) as u64;
    let mut log_sum_s = BTreeMap::new();
    let mut is_power_s = BTreeMap::new();
    for s in 1..=s_max {
        let ps = p.pow(s);
        let log_sum = full % ps;
        let by_exponent = is_power(merel_value, n, ps)?;
        if by_exponent != (log_sum == 0) {
            return Err(Error::Mismatch(format!(
                "power test and log-sum test disagree for N = {n}, p^s = {ps}"
            )));
        }
        log_sum_s.insert(s, log_sum);
        is_power_s.insert(s, by_exponent);
    }
    Ok(MerelReport { n, p, merel_value, log_sum_s, is_power_s })
}

/// Mazur's condition: `ell != 1 (mod p)` and `ell` is not a `p`-th power mod `N`.
pub fn is_good_prime(ell: u64, n: u64, p: u64) -> bool {
    if ell % n == 0 || ell % p == 1 {
        return false;
    }
    match is_power(ell, n, p) {
        Ok(power) => !power,
        // Every residue is a p-th power when p does not divide N - 1.
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merel_values() {
        assert_eq!(merel_number(337).unwrap(), 227);
        assert_eq!(merel_number(5).unwrap(), 4);
        assert_eq!(merel_number(3).unwrap(), 1);
        assert!(merel_number(9).is_err());
    }

    #[test]
    fn reports() {
        let r = merel_report(337, 7, 1).unwrap();
        assert_eq!(r.merel_value, 227);
        assert!(!r.is_power_s[&1]);
        let r = merel_report(181, 5, 1).unwrap();
        assert!(r.is_power_s[&1]);
        assert_eq!(r.log_sum_s[&1], 0);
        assert!(matches!(merel_report(13, 5, 1), Err(Error::NotDivisor { .. })));
        assert!(merel_report(181, 5, 2).is_err());
    }

    #[test]
    fn power_status_is_monotone() {
        for n in crate::corering::arith::primes_below(3000) {
            if n < 11 || (n - 1) % 5 != 0 {
                continue;
            }
            let t = sylow_exponent(n, 5).unwrap();
            let r = merel_report(n, 5, t).unwrap();
            let flags: Vec<bool> = r.is_power_s.values().copied().collect();
            assert!(flags.windows(2).all(|w| w[0] || !w[1]), "N = {n}");
        }
    }

    #[test]
    fn good_primes() {
        assert!(is_good_prime(2, 11, 5));
        assert!(!is_good_prime(11, 11, 5));
        assert!(!is_good_prime(11, 31, 5)); // 11 = 1 mod 5
        for n in [31u64, 41, 61, 181] {
            let fifth_powers: Vec<u64> = (1..n).map(|x| pow_mod(x, 5, n)).collect();
            for ell in crate::corering::arith::primes_below(300) {
                if ell == n {
                    continue;
                }
                let expected = ell % 5 != 1 && !fifth_powers.contains(&(ell % n));
                assert_eq!(is_good_prime(ell, n, 5), expected, "ell = {ell}, N = {n}");
            }
        }
        assert!(!is_good_prime(2, 13, 5));
    }
}
