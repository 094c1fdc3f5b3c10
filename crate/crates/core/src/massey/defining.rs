//! Defining systems, Massey powers and Massey products.

use std::collections::BTreeMap;

use super::cochain::{coboundary, cocycle_generators, cup, CoboundaryTester, Cochain};
use super::group::FiniteGroup;
use super::module::CoeffModule;
use crate::{Error, Result};

/// `m_1 = a, m_2, ..., m_{k-1}` with `d m_i = sum_{j<i} m_j cup m_{i-j}`:
/// a defining system for the Massey power `<a>^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSystem {
    chain: Vec<Cochain>,
}

/// `sum_{j=1}^{i-1} m_j cup m_{i-j}` for the first `i - 1` terms of `chain`.
fn power_obstruction(chain: &[Cochain], i: usize, group: &FiniteGroup, module: &CoeffModule) -> Result<Cochain> {
    let mut acc = Cochain::zero(group, module, 2)?;
    for j in 1..i {
        acc = acc.add(&cup(&chain[j - 1], &chain[i - j - 1], group, module)?)?;
    }
    Ok(acc)
}

impl DefiningSystem {
    /// Check the defining-system law for every `i <= k - 1`.
    pub fn new(chain: Vec<Cochain>, group: &FiniteGroup, module: &CoeffModule) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::InvalidDefiningSystem("empty chain".into()));
        }
        if chain.iter().any(|m| m.degree() != 1) {
            return Err(Error::InvalidDefiningSystem("entries must be 1-cochains".into()));
        }
        for i in 1..=chain.len() {
            let lhs = coboundary(&chain[i - 1], group, module)?;
            if lhs != power_obstruction(&chain, i, group, module)? {
                return Err(Error::InvalidDefiningSystem(format!("law fails at m_{i}")));
            }
        }
        Ok(DefiningSystem { chain })
    }

    /// The Massey power this system defines: `k = len + 1`.
    pub fn power(&self) -> usize {
        self.chain.len() + 1
    }

    pub fn a(&self) -> &Cochain {
        &self.chain[0]
    }

    pub fn chain(&self) -> &[Cochain] {
        &self.chain
    }

    /// Extend by `m_k`, checking the law.
    pub fn extend(&self, next: Cochain, group: &FiniteGroup, module: &CoeffModule) -> Result<Self> {
        let mut chain = self.chain.clone();
        chain.push(next);
        DefiningSystem::new(chain, group, module)
    }
}

/// `c(D) = sum_{j=1}^{k-1} m_j cup m_{k-j}`; errors if it is not a cocycle.
pub fn massey_power(d: &DefiningSystem, group: &FiniteGroup, module: &CoeffModule) -> Result<Cochain> {
    let c = power_obstruction(&d.chain, d.power(), group, module)?;
    if !coboundary(&c, group, module)?.is_zero() {
        return Err(Error::Mismatch("c(D) is not a cocycle".into()));
    }
    Ok(c)
}

/// All elements of the module generated by `gens`, or `None` if there are
/// more than `budget`.
fn enumerate_span(gens: &[Cochain], module: &CoeffModule, budget: usize) -> Option<Vec<Cochain>> {
    let m = module.modulus();
    let orders: Vec<u64> = gens
        .iter()
        .map(|g| {
            let v = g.table().iter().map(|&x| m.valuation(x as u128).lower_bound()).min().unwrap_or(m.exp());
            (m.p() as u64).pow(m.exp() - v.min(m.exp()))
        })
        .collect();
    let total = orders.iter().try_fold(1usize, |acc, &o| acc.checked_mul(o as usize))?;
    if total > budget {
        return None;
    }
    let mut out: Vec<Cochain> = vec![gens.first().map(|g| g.scale(0))?];
    for (g, &o) in gens.iter().zip(&orders) {
        let mut next = Vec::with_capacity(out.len() * o as usize);
        for base in &out {
            let mut cur = base.clone();
            for _ in 0..o {
                next.push(cur.clone());
                cur = cur.add(g).expect("same space");
            }
        }
        next.sort_by(|a, b| a.table().cmp(b.table()));
        next.dedup();
        out = next;
    }
    Some(out)
}

/// Outcome of an exhaustive search over defining systems.
#[derive(Clone, Debug)]
pub enum PowerSearch {
    /// No defining system for `<a>^k` exists.
    Undefined,
    /// A defining system with `c(D)` a coboundary, and the primitive.
    Vanishes(DefiningSystem, Cochain),
    /// Defining systems exist, and `c(D)` is never a coboundary.
    NonVanishing { systems_checked: usize },
}

/// Search every defining system for `<a>^k`: at each step `m_i` ranges over
/// one particular solution plus all of `Z^1(G, V)`. Errors if `Z^1` has more
/// than `budget` elements.
pub fn search_massey_power(
    a: &Cochain,
    k: usize,
    group: &FiniteGroup,
    module: &CoeffModule,
    budget: usize,
) -> Result<PowerSearch> {
    if k < 2 {
        return Err(Error::OutOfRange("Massey powers start at k = 2".into()));
    }
    let start = match DefiningSystem::new(vec![a.clone()], group, module) {
        Ok(d) => d,
        Err(Error::InvalidDefiningSystem(_)) => return Ok(PowerSearch::Undefined),
        Err(e) => return Err(e),
    };
    let tester = CoboundaryTester::new(group, module, 1)?;
    let z1 = if k > 2 {
        enumerate_span(&cocycle_generators(group, module)?, module, budget)
            .ok_or_else(|| Error::OutOfRange(format!("Z^1 has more than {budget} elements")))?
    } else {
        Vec::new()
    };
    let mut frontier = vec![start];
    for i in 2..=k {
        let mut next = Vec::new();
        let mut checked = 0;
        for d in &frontier {
            let c = power_obstruction(d.chain(), i, group, module)?;
            let Some(x) = tester.primitive(&c)? else {
                checked += 1;
                continue;
            };
            if i == k {
                return Ok(PowerSearch::Vanishes(d.clone(), x));
            }
            for z in &z1 {
                let mut chain = d.chain.clone();
                chain.push(x.add(z)?);
                next.push(DefiningSystem { chain });
            }
        }
        if i == k {
            return Ok(PowerSearch::NonVanishing { systems_checked: checked });
        }
        if next.is_empty() {
            return Ok(PowerSearch::Undefined);
        }
        frontier = next;
    }
    unreachable!()
}

/// A defining system `{a(i, j)}` for a Massey product `<a_1, ..., a_n>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSystem {
    n: usize,
    entries: BTreeMap<(usize, usize), Cochain>,
}

impl ProductSystem {
    /// `entries` maps `(i, j)`, `1 <= i <= j <= n`, `(i, j) != (1, n)`, to
    /// `a(i, j)`; the law `d a(i,j) = sum_{k=i}^{j-1} a(i,k) cup a(k+1,j)` is
    /// checked.
    pub fn new(
        n: usize,
        entries: BTreeMap<(usize, usize), Cochain>,
        group: &FiniteGroup,
        module: &CoeffModule,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDefiningSystem("need n >= 2".into()));
        }
        for i in 1..=n {
            for j in i..=n {
                if (i, j) == (1, n) {
                    continue;
                }
                let Some(aij) = entries.get(&(i, j)) else {
                    return Err(Error::InvalidDefiningSystem(format!("missing a({i},{j})")));
                };
                let mut rhs = Cochain::zero(group, module, 2)?;
                for k in i..j {
                    rhs = rhs.add(&cup(&entries[&(i, k)], &entries[&(k + 1, j)], group, module)?)?;
                }
                if coboundary(aij, group, module)? != rhs {
                    return Err(Error::InvalidDefiningSystem(format!("law fails at a({i},{j})")));
                }
            }
        }
        Ok(ProductSystem { n, entries })
    }

    /// The system `a(i, j) = m_{j-i+1}` attached to a Massey power.
    pub fn from_power(d: &DefiningSystem, group: &FiniteGroup, module: &CoeffModule) -> Result<Self> {
        let n = d.power();
        let mut entries = BTreeMap::new();
        for i in 1..=n {
            for j in i..=n {
                if (i, j) != (1, n) {
                    entries.insert((i, j), d.chain[j - i].clone());
                }
            }
        }
        ProductSystem::new(n, entries, group, module)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Cochain {
        &self.entries[&(i, j)]
    }

    /// `c(D) = sum_{k=1}^{n-1} a(1,k) cup a(k+1,n)`.
    pub fn obstruction(&self, group: &FiniteGroup, module: &CoeffModule) -> Result<Cochain> {
        let mut acc = Cochain::zero(group, module, 2)?;
        for k in 1..self.n {
            acc = acc.add(&cup(self.entry(1, k), self.entry(k + 1, self.n), group, module)?)?;
        }
        Ok(acc)
    }
}
