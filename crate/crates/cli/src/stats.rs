//! Rank frequencies `r(d)` against the heuristic `g(d) = (1/p)^(d-1) (p-1)/p`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::record::ResultRecord;
use crate::Failure;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsTable {
    pub p: u64,
    /// Largest level in the input.
    pub x: u64,
    pub n: usize,
    pub counts: BTreeMap<usize, usize>,
    /// Observed fractions, rounded half-up to three decimals.
    pub r: BTreeMap<usize, f64>,
    pub g: BTreeMap<usize, f64>,
}

/// `num / den` rounded half-up to a whole number of thousandths.
pub fn thousandths(num: u128, den: u128) -> u64 {
    ((2000 * num + den) / (2 * den)) as u64
}

/// `g(d)` in thousandths.
pub fn heuristic_thousandths(p: u64, d: usize) -> u64 {
    match (p as u128).checked_pow(d as u32) {
        Some(pd) if d >= 1 => thousandths(p as u128 - 1, pd),
        _ => 0,
    }
}

pub fn stats_table(records: &[ResultRecord]) -> Result<StatsTable, Failure> {
    let first = records.first().ok_or_else(|| Failure::Data("no records".into()))?;
    let p = first.p;
    let mut counts = BTreeMap::new();
    for r in records {
        if r.p != p {
            return Err(Failure::Data(format!("records mix p = {p} and p = {}", r.p)));
        }
        let e = r.e.ok_or_else(|| Failure::Data(format!("record for N = {} has no rank", r.n)))?;
        *counts.entry(e).or_insert(0) += 1;
    }
    let n = records.len();
    let r = counts.iter().map(|(&d, &c)| (d, thousandths(c as u128, n as u128) as f64 / 1000.0)).collect();
    let top = counts.keys().copied().max().unwrap_or(1).max(1);
    let g = (1..=top).map(|d| (d, heuristic_thousandths(p, d) as f64 / 1000.0)).collect();
    let x = records.iter().map(|r| r.n).max().unwrap_or(0);
    Ok(StatsTable { p, x, n, counts, r, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::invariants_record;

    #[test]
    fn heuristic_values() {
        let g5: Vec<u64> = (1..=6).map(|d| heuristic_thousandths(5, d)).collect();
        assert_eq!(g5, vec![800, 160, 32, 6, 1, 0]);
        let g7: Vec<u64> = (1..=4).map(|d| heuristic_thousandths(7, d)).collect();
        assert_eq!(g7, vec![857, 122, 17, 2]);
        assert_eq!(heuristic_thousandths(11, 2), 83);
        assert_eq!(heuristic_thousandths(13, 3), 5);
    }

    #[test]
    fn half_up() {
        assert_eq!(thousandths(1, 8), 125);
        assert_eq!(thousandths(1, 2000), 1);
        assert_eq!(thousandths(1, 2001), 0);
        assert_eq!(thousandths(2, 3), 667);
    }

    #[test]
    fn single_record_and_mixed_input() {
        let mut r = invariants_record(11, 5, None).unwrap();
        r.e = Some(1);
        let t = stats_table(std::slice::from_ref(&r)).unwrap();
        assert_eq!(t.r, BTreeMap::from([(1, 1.0)]));
        let mut other = r.clone();
        other.p = 7;
        assert!(matches!(stats_table(&[r, other]), Err(Failure::Data(_))));
    }
}
