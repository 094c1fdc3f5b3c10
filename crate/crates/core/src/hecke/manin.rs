//! Weight-2 modular symbols for `Gamma_0(N)` in the Manin presentation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::p1::P1;
use crate::corering::arith::is_prime;
use crate::corering::zmod::Modulus;
use crate::{Error, Result};

/// Which quotient of the symbol space to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// All modular symbols: dimension `2g + 1`.
    Full,
    /// Coinvariants of the star involution: dimension `g + 1`.
    Plus,
}

/// Coordinates of a class of symbols in the free basis.
#[derive(Clone, Debug)]
pub enum ClassExpr {
    Basis(usize),
    Dense(Vec<u64>),
}

/// Manin symbols `(c : d)`, `(c : d) in P^1(Z/N)`, modulo the two- and
/// three-term relations (and `x = x*` for the plus quotient), solved over
/// `Z/p^M`.
#[derive(Clone, Debug)]
pub struct ManinSpace {
    n: u64,
    modulus: Modulus,
    sign: Sign,
    p1: P1,
    /// For each symbol: its class and whether it equals minus the class; `None` if zero.
    symbol_class: Vec<Option<(u32, bool)>>,
    class_expr: Vec<ClassExpr>,
    /// Representative symbol of each basis element.
    basis_symbols: Vec<usize>,
    /// Boundary of each basis element, as the coefficient of the cusp `infinity`.
    boundary: Vec<u64>,
    /// A basis index with unit boundary.
    cusp_pivot: usize,
    genus: u64,
}

/// Genus of `X_0(N)` for prime `N`.
pub fn genus_x0(n: u64) -> u64 {
    if n == 2 || n == 3 {
        return 0;
    }
    let nu2 = if n % 4 == 1 { 2 } else { 0 };
    let nu3 = if n % 3 == 1 { 2 } else { 0 };
    // 12 g = (N + 1) - 3 nu2 - 4 nu3
    (n + 1 - 3 * nu2 - 4 * nu3) / 12
}

struct SignedUnionFind {
    parent: Vec<u32>,
    /// Sign of an element relative to its parent.
    neg: Vec<bool>,
    killed: Vec<bool>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind { parent: (0..n as u32).collect(), neg: vec![false; n], killed: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] as usize != cur {
            path.push(cur);
            cur = self.parent[cur] as usize;
        }
        let root = cur;
        // Compress, accumulating signs from the top down.
        let mut acc = false;
        for &y in path.iter().rev() {
            acc ^= self.neg[y];
            self.neg[y] = acc;
            self.parent[y] = root as u32;
        }
        (root, if x == root { false } else { self.neg[x] })
    }

    /// Impose `x = (-1)^neg y`.
    fn union(&mut self, x: usize, y: usize, neg: bool) {
        let (rx, sx) = self.find(x);
        let (ry, sy) = self.find(y);
        let rel = sx ^ neg ^ sy;
        if rx == ry {
            if rel {
                self.killed[rx] = true;
            }
            return;
        }
        self.parent[rx] = ry as u32;
        self.neg[rx] = rel;
        if self.killed[rx] {
            self.killed[ry] = true;
        }
    }
}

impl ManinSpace {
    pub fn new(n: u64, modulus: Modulus, sign: Sign) -> Result<Self> {
        if !is_prime(n) {
            return Err(Error::NotPrime(n));
        }
        if n < 11 {
            return Err(Error::LevelTooSmall(n));
        }
        if modulus.q() >= 1 << 63 {
            return Err(Error::InvalidModulus("p^M must stay below 2^63".into()));
        }
        let p1 = P1::new(n);
        let nsym = p1.len();
        let mut uf = SignedUnionFind::new(nsym);
        for x in 0..nsym {
            uf.union(x, p1.sigma(x), true);
            if sign == Sign::Plus {
                uf.union(x, p1.star(x), false);
            }
        }
        let mut var_of_root = vec![u32::MAX; nsym];
        let mut nvars = 0usize;
        let mut symbol_root = Vec::with_capacity(nsym);
        for x in 0..nsym {
            let (r, neg) = uf.find(x);
            symbol_root.push((r, neg));
        }
        for x in 0..nsym {
            let (r, _) = symbol_root[x];
            if !uf.killed[r] && var_of_root[r] == u32::MAX {
                var_of_root[r] = nvars as u32;
                nvars += 1;
            }
        }
        let symbol_var = |x: usize| -> Option<(usize, bool)> {
            let (r, neg) = symbol_root[x];
            if uf.killed[r] {
                None
            } else {
                Some((var_of_root[r] as usize, neg))
            }
        };
        let mut relations: Vec<Vec<(usize, i64)>> = Vec::new();
        let mut seen = vec![false; nsym];
        for x in 0..nsym {
            if seen[x] {
                continue;
            }
            let x1 = p1.tau(x);
            let x2 = p1.tau(x1);
            seen[x] = true;
            seen[x1] = true;
            seen[x2] = true;
            let mut rel: Vec<(usize, i64)> = Vec::with_capacity(3);
            for y in [x, x1, x2] {
                if let Some((v, neg)) = symbol_var(y) {
                    let c = if neg { -1 } else { 1 };
                    match rel.iter_mut().find(|(w, _)| *w == v) {
                        Some(entry) => entry.1 += c,
                        None => rel.push((v, c)),
                    }
                }
            }
            rel.retain(|&(_, c)| c != 0);
            if !rel.is_empty() {
                relations.push(rel);
            }
        }
        let (free, exprs) = solve_sparse(nvars, &relations, modulus)?;
        let genus = genus_x0(n);
        let expected = match sign {
            Sign::Full => 2 * genus + 1,
            Sign::Plus => genus + 1,
        };
        if free.len() as u64 != expected {
            return Err(Error::NonFreeQuotient(format!(
                "N = {n}: quotient has rank {} but the genus formula predicts {expected}",
                free.len()
            )));
        }
        let mut rep_of_var = vec![usize::MAX; nvars];
        for x in 0..nsym {
            if let Some((v, false)) = symbol_var(x) {
                if rep_of_var[v] == usize::MAX {
                    rep_of_var[v] = x;
                }
            }
        }
        let basis_symbols: Vec<usize> = free.iter().map(|&v| rep_of_var[v]).collect();
        let symbol_class: Vec<Option<(u32, bool)>> =
            (0..nsym).map(|x| symbol_var(x).map(|(v, neg)| (v as u32, neg))).collect();
        let q = modulus.q();
        let delta_symbol = |x: usize| -> i128 {
            if x == n as usize {
                1
            } else if x == 0 {
                -1
            } else {
                0
            }
        };
        let boundary: Vec<u64> =
            basis_symbols.iter().map(|&x| modulus.reduce_i128(delta_symbol(x)) as u64).collect();
        let space_boundary = |e: &ClassExpr| -> u128 {
            match e {
                ClassExpr::Basis(j) => boundary[*j] as u128,
                ClassExpr::Dense(v) => v
                    .iter()
                    .zip(&boundary)
                    .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % q),
            }
        };
        // The boundary map must be well defined on the quotient.
        for x in 0..nsym {
            let expected = modulus.reduce_i128(delta_symbol(x));
            let got = match symbol_class[x] {
                None => 0,
                Some((v, neg)) => {
                    let b = space_boundary(&exprs[v as usize]);
                    if neg {
                        modulus.neg(b)
                    } else {
                        b
                    }
                }
            };
            if got != expected {
                return Err(Error::Mismatch(format!("boundary map not well defined at symbol {x}")));
            }
        }
        let cusp_pivot = boundary
            .iter()
            .position(|&d| modulus.is_unit(d as u128))
            .ok_or_else(|| Error::Mismatch("boundary map is not surjective".into()))?;
        Ok(ManinSpace { n, modulus, sign, p1, symbol_class, class_expr: exprs, basis_symbols, boundary, cusp_pivot, genus })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn p1(&self) -> &P1 {
        &self.p1
    }

    /// Rank of the whole quotient.
    pub fn dim(&self) -> usize {
        self.basis_symbols.len()
    }

    /// Rank of the kernel of the boundary map.
    pub fn cuspidal_dim(&self) -> usize {
        self.dim() - 1
    }

    pub fn basis_symbols(&self) -> &[usize] {
        &self.basis_symbols
    }

    pub fn boundary(&self) -> &[u64] {
        &self.boundary
    }

    pub fn cusp_pivot(&self) -> usize {
        self.cusp_pivot
    }

    /// Class and sign of a symbol; `None` when the symbol is zero.
    pub fn symbol_class(&self, x: usize) -> Option<(usize, bool)> {
        self.symbol_class[x].map(|(v, neg)| (v as usize, neg))
    }

    pub fn class_expr(&self, class: usize) -> &ClassExpr {
        &self.class_expr[class]
    }

    pub fn num_classes(&self) -> usize {
        self.class_expr.len()
    }

    /// `delta(v)` for a vector of basis coordinates.
    pub fn boundary_of(&self, v: &[u64]) -> u64 {
        let q = self.modulus.q();
        v.iter().zip(&self.boundary).fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % q) as u64
    }

    /// `c_i` with cuspidal basis `k_i = b_i - c_i b_j`, `j` the cusp pivot.
    pub fn cusp_coefficients(&self) -> Vec<u64> {
        let m = self.modulus;
        let inv = m.inv(self.boundary[self.cusp_pivot] as u128).unwrap();
        self.boundary.iter().map(|&d| m.mul(d as u128, inv) as u64).collect()
    }

    /// Basis coordinates of a cuspidal vector given in `k`-coordinates.
    pub fn cusp_to_full(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cuspidal_dim());
        let m = self.modulus;
        let c = self.cusp_coefficients();
        let mut out = vec![0u64; self.dim()];
        let mut pivot_coeff = 0u128;
        let mut k = 0;
        for i in 0..self.dim() {
            if i == self.cusp_pivot {
                continue;
            }
            out[i] = v[k];
            pivot_coeff = m.sub(pivot_coeff, m.mul(v[k] as u128, c[i] as u128));
            k += 1;
        }
        out[self.cusp_pivot] = pivot_coeff as u64;
        out
    }

    /// `k`-coordinates of a vector of basis coordinates that lies in the cuspidal subspace.
    pub fn full_to_cusp(&self, v: &[u64]) -> Vec<u64> {
        debug_assert_eq!(self.boundary_of(v), 0);
        v.iter().enumerate().filter(|&(i, _)| i != self.cusp_pivot).map(|(_, &x)| x).collect()
    }

    /// Add `coeff * class` into a vector of basis coordinates.
    pub(crate) fn accumulate_class(&self, acc: &mut [u64], class: usize, coeff: u64) {
        if coeff == 0 {
            return;
        }
        let q = self.modulus.q() as u64;
        match &self.class_expr[class] {
            ClassExpr::Basis(j) => acc[*j] = ((acc[*j] as u128 + coeff as u128) % q as u128) as u64,
            ClassExpr::Dense(v) => {
                for (a, &b) in acc.iter_mut().zip(v) {
                    if b != 0 {
                        *a = ((*a as u128 + coeff as u128 * b as u128) % q as u128) as u64;
                    }
                }
            }
        }
    }
}

struct PivotRow {
    time: usize,
    /// `var + sum coeff * w = 0`
    rest: Vec<(usize, u64)>,
}

/// Sparse elimination of relations over `Z/p^M`, pivoting on units only.
///
/// Returns the free variables and, for every variable, its coordinates in
/// the basis formed by the free ones.
fn solve_sparse(nvars: usize, relations: &[Vec<(usize, i64)>], m: Modulus) -> Result<(Vec<usize>, Vec<ClassExpr>)> {
    let q = m.q() as u64;
    let mulq = |a: u64, b: u64| ((a as u128 * b as u128) % q as u128) as u64;
    let mut occurrences = vec![0u32; nvars];
    for rel in relations {
        for &(v, _) in rel {
            occurrences[v] += 1;
        }
    }
    let mut pivots: Vec<Option<PivotRow>> = (0..nvars).map(|_| None).collect();
    let mut order: Vec<usize> = Vec::new();
    let mut acc = vec![0u64; nvars];
    let mut touched_flag = vec![false; nvars];
    let mut touched: Vec<usize> = Vec::new();
    let mut deferred: Vec<Vec<(usize, u64)>> = Vec::new();

    let reduce = |start: &[(usize, u64)],
                      pivots: &Vec<Option<PivotRow>>,
                      acc: &mut Vec<u64>,
                      touched: &mut Vec<usize>,
                      touched_flag: &mut Vec<bool>|
     -> Vec<(usize, u64)> {
        let mut heap = BinaryHeap::new();
        for &(v, c) in start {
            acc[v] = (acc[v] + c) % q;
            if !touched_flag[v] {
                touched_flag[v] = true;
                touched.push(v);
            }
            if let Some(pr) = &pivots[v] {
                heap.push(Reverse((pr.time, v)));
            }
        }
        while let Some(Reverse((_, v))) = heap.pop() {
            let a = acc[v];
            if a == 0 {
                continue;
            }
            acc[v] = 0;
            for &(w, r) in &pivots[v].as_ref().unwrap().rest {
                let t = mulq(a, r);
                acc[w] = if acc[w] >= t { acc[w] - t } else { acc[w] + q - t };
                if !touched_flag[w] {
                    touched_flag[w] = true;
                    touched.push(w);
                }
                if let Some(pr) = &pivots[w] {
                    heap.push(Reverse((pr.time, w)));
                }
            }
        }
        let mut out = Vec::new();
        for &v in touched.iter() {
            if acc[v] != 0 {
                out.push((v, acc[v]));
            }
            acc[v] = 0;
            touched_flag[v] = false;
        }
        touched.clear();
        out
    };

    let install = |row: Vec<(usize, u64)>, pivots: &mut Vec<Option<PivotRow>>, order: &mut Vec<usize>| -> bool {
        let choice = row
            .iter()
            .filter(|&&(_, c)| m.is_unit(c as u128))
            .min_by_key(|&&(v, _)| (occurrences[v], Reverse(v)))
            .copied();
        let Some((v, c)) = choice else { return false };
        let inv = m.inv(c as u128).unwrap() as u64;
        let rest = row.iter().filter(|&&(w, _)| w != v).map(|&(w, d)| (w, mulq(d, inv))).collect();
        pivots[v] = Some(PivotRow { time: order.len(), rest });
        order.push(v);
        true
    };

    for rel in relations {
        let start: Vec<(usize, u64)> = rel.iter().map(|&(v, c)| (v, m.reduce_i128(c as i128) as u64)).collect();
        let row = reduce(&start, &pivots, &mut acc, &mut touched, &mut touched_flag);
        if row.is_empty() {
            continue;
        }
        if !install(row.clone(), &mut pivots, &mut order) {
            deferred.push(row);
        }
    }
    loop {
        let mut progress = false;
        let mut remaining = Vec::new();
        for row in std::mem::take(&mut deferred) {
            let row = reduce(&row, &pivots, &mut acc, &mut touched, &mut touched_flag);
            if row.is_empty() {
                continue;
            }
            if install(row.clone(), &mut pivots, &mut order) {
                progress = true;
            } else {
                remaining.push(row);
            }
        }
        deferred = remaining;
        if !progress {
            break;
        }
    }
    if !deferred.is_empty() {
        return Err(Error::NonFreeQuotient(format!(
            "{} relations with no unit coefficient remain",
            deferred.len()
        )));
    }
    let free: Vec<usize> = (0..nvars).filter(|&v| pivots[v].is_none()).collect();
    let mut basis_index = vec![usize::MAX; nvars];
    for (i, &v) in free.iter().enumerate() {
        basis_index[v] = i;
    }
    let dim = free.len();
    let mut exprs: Vec<Option<ClassExpr>> = (0..nvars)
        .map(|v| (basis_index[v] != usize::MAX).then(|| ClassExpr::Basis(basis_index[v])))
        .collect();
    for &v in order.iter().rev() {
        let mut out = vec![0u64; dim];
        for &(w, r) in &pivots[v].as_ref().unwrap().rest {
            let coeff = if r == 0 { 0 } else { q - r };
            match exprs[w].as_ref().expect("later pivots resolved first") {
                ClassExpr::Basis(j) => out[*j] = (out[*j] + coeff) % q,
                ClassExpr::Dense(e) => {
                    for (o, &x) in out.iter_mut().zip(e) {
                        if x != 0 {
                            *o = ((*o as u128 + coeff as u128 * x as u128) % q as u128) as u64;
                        }
                    }
                }
            }
        }
        exprs[v] = Some(ClassExpr::Dense(out));
    }
    Ok((free, exprs.into_iter().map(|e| e.unwrap()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> Modulus {
        Modulus::new(5, 3).unwrap()
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus_x0(11), 1);
        assert_eq!(genus_x0(37), 2);
        assert_eq!(genus_x0(13), 0);
        assert_eq!(genus_x0(389), 32);
        assert_eq!(genus_x0(3001), 249);
    }

    #[test]
    fn dimensions_match_genus() {
        for n in [11u64, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 61, 67, 73, 79, 97, 101, 389] {
            let g = genus_x0(n) as usize;
            let full = ManinSpace::new(n, m(), Sign::Full).unwrap();
            assert_eq!(full.dim(), 2 * g + 1, "N = {n}");
            assert_eq!(full.cuspidal_dim(), 2 * g);
            let plus = ManinSpace::new(n, m(), Sign::Plus).unwrap();
            assert_eq!(plus.dim(), g + 1, "N = {n}");
        }
    }

    #[test]
    fn small_levels_rejected() {
        assert!(matches!(ManinSpace::new(7, m(), Sign::Plus), Err(Error::LevelTooSmall(7))));
        assert!(matches!(ManinSpace::new(15, m(), Sign::Plus), Err(Error::NotPrime(15))));
    }

    #[test]
    fn cusp_coordinates_round_trip() {
        let s = ManinSpace::new(37, m(), Sign::Full).unwrap();
        let v: Vec<u64> = (0..s.cuspidal_dim() as u64).map(|i| 3 * i + 1).collect();
        let full = s.cusp_to_full(&v);
        assert_eq!(s.boundary_of(&full), 0);
        assert_eq!(s.full_to_cusp(&full), v);
    }
}
