//! Exhaustive searches over every cochain table, for tiny groups and
//! rank-one modules. Used as an oracle for the linear-algebra routines.

use std::collections::HashMap;

use super::cochain::{coboundary, cup, Cochain};
use super::group::FiniteGroup;
use super::module::CoeffModule;
use crate::{Error, Result};

/// Largest number of 1-cochain tables enumerated.
pub const BRUTE_FORCE_LIMIT: u128 = 5u128.pow(6);

/// Every 1-cochain, grouped by its coboundary.
pub struct CochainCensus {
    tables: Vec<Cochain>,
    by_coboundary: HashMap<Vec<u64>, Vec<usize>>,
}

impl CochainCensus {
    pub fn new(group: &FiniteGroup, module: &CoeffModule) -> Result<Self> {
        let q = module.modulus().q();
        let count = q
            .checked_pow((group.order() * module.rank()) as u32)
            .filter(|&c| c <= BRUTE_FORCE_LIMIT)
            .ok_or_else(|| Error::OutOfRange("too many cochains to enumerate".into()))?;
        let len = group.order() * module.rank();
        let mut tables = Vec::with_capacity(count as usize);
        let mut by_coboundary: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        for idx in 0..count {
            let mut x = idx;
            let table: Vec<u64> = (0..len)
                .map(|_| {
                    let v = (x % q) as u64;
                    x /= q;
                    v
                })
                .collect();
            let c = Cochain::from_table(group, module, 1, table)?;
            by_coboundary.entry(coboundary(&c, group, module)?.table().to_vec()).or_default().push(tables.len());
            tables.push(c);
        }
        Ok(CochainCensus { tables, by_coboundary })
    }

    /// Every 1-cochain `x` with `dx = z`.
    pub fn primitives(&self, z: &Cochain) -> Vec<&Cochain> {
        self.by_coboundary.get(z.table()).map_or_else(Vec::new, |v| v.iter().map(|&i| &self.tables[i]).collect())
    }

    pub fn all(&self) -> &[Cochain] {
        &self.tables
    }
}

/// Whether `<a>^k` vanishes for some defining system, by enumerating every
/// choice of `m_2, ..., m_{k-1}` and every candidate primitive.
pub fn brute_force_power_vanishes(
    a: &Cochain,
    k: usize,
    group: &FiniteGroup,
    module: &CoeffModule,
    census: &CochainCensus,
) -> Result<bool> {
    fn obstruction(chain: &[Cochain], i: usize, group: &FiniteGroup, module: &CoeffModule) -> Result<Cochain> {
        let mut acc = Cochain::zero(group, module, 2)?;
        for j in 1..i {
            acc = acc.add(&cup(&chain[j - 1], &chain[i - j - 1], group, module)?)?;
        }
        Ok(acc)
    }
    fn go(
        chain: &mut Vec<Cochain>,
        k: usize,
        group: &FiniteGroup,
        module: &CoeffModule,
        census: &CochainCensus,
    ) -> Result<bool> {
        let i = chain.len() + 1;
        let c = obstruction(chain, i, group, module)?;
        let options = census.primitives(&c);
        if i == k {
            return Ok(!options.is_empty());
        }
        for m in options {
            chain.push(m.clone());
            let found = go(chain, k, group, module, census)?;
            chain.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
    if !coboundary(a, group, module)?.is_zero() {
        return Ok(false);
    }
    go(&mut vec![a.clone()], k, group, module, census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corering::zmod::Modulus;

    #[test]
    fn census_of_z5() {
        let g = FiniteGroup::cyclic(5);
        let v = CoeffModule::trivial(&g, Modulus::new(5, 1).unwrap());
        let census = CochainCensus::new(&g, &v).unwrap();
        assert_eq!(census.all().len(), 3125);
        // Z^1 = Hom(Z/5, Z/5).
        assert_eq!(census.primitives(&Cochain::zero(&g, &v, 2).unwrap()).len(), 5);
    }
}
