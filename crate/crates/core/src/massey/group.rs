//! Finite groups given by multiplication tables.

use crate::{Error, Result};

/// A finite group on `0..order` with identity `identity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    name: String,
}

impl FiniteGroup {
    /// Build from a row-major table `table[g * order + h] = g h`, checking the
    /// group axioms on the whole table.
    pub fn from_table(order: usize, table: Vec<usize>, name: impl Into<String>) -> Result<Self> {
        if order == 0 || table.len() != order * order || table.iter().any(|&x| x >= order) {
            return Err(Error::InvalidGroup("table has the wrong shape".into()));
        }
        let mul = |g: usize, h: usize| table[g * order + h];
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for g in 0..order {
            let h = (0..order)
                .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inverse[g] = h;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!("({a} {b}) {c} != {a} ({b} {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { order, table, identity, inverse, name: name.into() })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        FiniteGroup::from_table(n, table, format!("Z/{n}")).expect("cyclic group")
    }

    /// `G x H`, with `(g, h)` stored at index `g * |H| + h`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let n = a.order * b.order;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (g1, h1) = (x / b.order, x % b.order);
                let (g2, h2) = (y / b.order, y % b.order);
                table[x * n + y] = a.mul(g1, g2) * b.order + b.mul(h1, h2);
            }
        }
        FiniteGroup::from_table(n, table, format!("{} x {}", a.name, b.name)).expect("product of groups")
    }

    /// Symmetric group on three letters; element `i` is the `i`-th
    /// permutation of `[0, 1, 2]` in lexicographic order.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let mut table = vec![0; 36];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                // (a b)(x) = a(b(x))
                table[i * 6 + j] = idx([a[b[0]], a[b[1]], a[b[2]]]);
            }
        }
        FiniteGroup::from_table(6, table, "S3").expect("S3")
    }

    /// Dihedral group of order `2n`: `r^i s^j` at index `2 i + j`.
    pub fn dihedral(n: usize) -> Self {
        let m = 2 * n;
        let mut table = vec![0; m * m];
        for x in 0..m {
            for y in 0..m {
                let (i1, j1) = (x / 2, x % 2);
                let (i2, j2) = (y / 2, y % 2);
                // s r^i = r^-i s
                let i = if j1 == 0 { (i1 + i2) % n } else { (i1 + n - i2) % n };
                table[x * m + y] = 2 * i + (j1 ^ j2);
            }
        }
        FiniteGroup::from_table(m, table, format!("D{n}")).expect("dihedral group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        (1..=self.order).find(|&k| self.pow(g, k) == self.identity).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructions_satisfy_axioms() {
        let g = FiniteGroup::product(&FiniteGroup::cyclic(5), &FiniteGroup::cyclic(5));
        assert_eq!(g.order(), 25);
        assert_eq!(g.element_order(7), 5);
        let s3 = FiniteGroup::symmetric3();
        assert_ne!(s3.mul(1, 2), s3.mul(2, 1));
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 1], "bad").is_err());
        assert!(FiniteGroup::from_table(3, vec![0, 1, 2, 1, 2, 0, 2, 1, 0], "bad").is_err());
    }
}
