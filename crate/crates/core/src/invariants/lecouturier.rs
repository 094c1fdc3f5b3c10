use serde::{Deserialize, Serialize};

use super::sylow_exponent;
use crate::corering::dlog::{build_dlog_table, DlogTable};
use crate::corering::zmod::Modulus;
use crate::{Error, Result};

/// The logarithm sums entering the identity, all in `Z/p^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LecouturierSums {
    /// `sum_{i=1}^{N-1} i^2 log(i)`
    pub sum_i2_log: u64,
    /// `-(4/3) sum_{i=1}^{(N-1)/2} i log(i)`
    pub rhs: u64,
    /// `sum_{i=1}^{N-1} log(i)`
    pub sum_log: u64,
    /// `sum_{i=1}^{N-1} i log(i)`
    pub sum_i_log: u64,
}

impl LecouturierSums {
    pub fn holds(&self) -> bool {
        self.sum_i2_log == self.rhs && self.sum_log == 0 && self.sum_i_log == 0
    }
}

pub fn lecouturier_sums(n: u64, p: u64, s: u32) -> Result<LecouturierSums> {
    let table = build_dlog_table(n)?;
    lecouturier_sums_with(&table, p, s)
}

pub(crate) fn lecouturier_sums_with(table: &DlogTable, p: u64, s: u32) -> Result<LecouturierSums> {
    let n = table.n();
    let t = sylow_exponent(n, p)?;
    if s == 0 || s > t {
        return Err(Error::OutOfRange(format!("s = {s} must lie in 1..={t}")));
    }
    let m = Modulus::new(p, s)?;
    let log = |i: u64| (table.log(i) % p.pow(s)) as u128;
    let (mut a, mut half, mut l0, mut l1) = (0u128, 0u128, 0u128, 0u128);
    for i in 1..n {
        let li = log(i);
        let ir = i as u128 % m.q();
        l0 = m.add(l0, li);
        l1 = m.add(l1, m.mul(ir, li));
        a = m.add(a, m.mul(m.mul(ir, ir), li));
        if i <= (n - 1) / 2 {
            half = m.add(half, m.mul(ir, li));
        }
    }
    let four_thirds = m.mul(4, m.inv(3).expect("p > 3"));
    let rhs = m.neg(m.mul(four_thirds, half));
    Ok(LecouturierSums { sum_i2_log: a as u64, rhs: rhs as u64, sum_log: l0 as u64, sum_i_log: l1 as u64 })
}

/// Checks `sum i^2 log(i) = -(4/3) sum_{i <= (N-1)/2} i log(i)` together with
/// `sum log(i) = 0` and `sum i log(i) = 0` in `Z/p^s`.
pub fn lecouturier_check(n: u64, p: u64, s: u32) -> Result<bool> {
    Ok(lecouturier_sums(n, p, s)?.holds())
}
