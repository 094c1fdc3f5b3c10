//! Dense matrices over `Z/p^M` stored as 64-bit words.

use std::fmt;

use super::poly::PadicPoly;
use super::zmod::Modulus;
use crate::{Error, Result};

/// Row-major dense matrix with entries in `[0, q)`, `q = p^M < 2^63`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    q: u64,
    modulus: Modulus,
    data: Vec<u64>,
}

fn word_modulus(modulus: Modulus) -> Result<u64> {
    if modulus.q() >= 1u128 << 63 {
        return Err(Error::InvalidModulus(format!(
            "{}^{} does not fit a 63-bit matrix entry",
            modulus.p(),
            modulus.exp()
        )));
    }
    Ok(modulus.q() as u64)
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: Modulus) -> Result<Self> {
        let q = word_modulus(modulus)?;
        Ok(ZMatrix { rows, cols, q, modulus, data: vec![0; rows * cols] })
    }

    pub fn identity(n: usize, modulus: Modulus) -> Result<Self> {
        let mut m = Self::zeros(n, n, modulus)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        modulus: Modulus,
        mut f: impl FnMut(usize, usize) -> i128,
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols, modulus)?;
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = modulus.reduce_i128(f(i, j)) as u64;
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<i128>], modulus: Modulus) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_fn(r, c, modulus, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(v < self.q);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    #[inline]
    pub(crate) fn mulq(&self, a: u64, b: u64) -> u64 {
        if self.q < 1 << 32 {
            a * b % self.q
        } else {
            ((a as u128 * b as u128) % self.q as u128) as u64
        }
    }

    #[inline]
    pub(crate) fn addq(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn subq(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = ZMatrix { rows: self.cols, cols: self.rows, data: vec![0; self.data.len()], ..*self };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Matrix product with deferred modular reduction.
    pub fn mul(&self, rhs: &ZMatrix) -> Result<ZMatrix> {
        if self.cols != rhs.rows || self.modulus != rhs.modulus {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ZMatrix { rows: self.rows, cols: rhs.cols, data: vec![0; self.rows * rhs.cols], ..*self };
        let q = self.q;
        let n = rhs.cols;
        let bound = (q - 1) as u128 * (q - 1) as u128;
        if bound < (1u128 << 63) {
            // Accumulate up to `chunk` products in a u64 before reducing.
            let chunk = ((u64::MAX as u128 - q as u128) / bound.max(1)).max(1) as usize;
            let mut acc = vec![0u64; n];
            for i in 0..self.rows {
                acc.iter_mut().for_each(|x| *x = 0);
                let mut pending = 0usize;
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a == 0 {
                        continue;
                    }
                    let brow = rhs.row(k);
                    for (x, &b) in acc.iter_mut().zip(brow) {
                        *x += a * b;
                    }
                    pending += 1;
                    if pending == chunk {
                        acc.iter_mut().for_each(|x| *x %= q);
                        pending = 0;
                    }
                }
                for (o, &x) in out.row_mut(i).iter_mut().zip(&acc) {
                    *o = x % q;
                }
            }
        } else {
            let mut acc = vec![0u128; n];
            for i in 0..self.rows {
                acc.iter_mut().for_each(|x| *x = 0);
                for k in 0..self.cols {
                    let a = self.get(i, k) as u128;
                    if a == 0 {
                        continue;
                    }
                    for (x, &b) in acc.iter_mut().zip(rhs.row(k)) {
                        *x = (*x + a * b as u128) % q as u128;
                    }
                }
                for (o, &x) in out.row_mut(i).iter_mut().zip(&acc) {
                    *o = x as u64;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u128;
                for (j, &a) in self.row(i).iter().enumerate() {
                    acc += a as u128 * v[j] as u128;
                    if j % 8 == 7 {
                        acc %= self.q as u128;
                    }
                }
                (acc % self.q as u128) as u64
            })
            .collect()
    }

    pub fn add(&self, rhs: &ZMatrix) -> Result<ZMatrix> {
        self.zip_with(rhs, |s, a, b| s.addq(a, b))
    }

    pub fn sub(&self, rhs: &ZMatrix) -> Result<ZMatrix> {
        self.zip_with(rhs, |s, a, b| s.subq(a, b))
    }

    fn zip_with(&self, rhs: &ZMatrix, f: impl Fn(&Self, u64, u64) -> u64) -> Result<ZMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols || self.modulus != rhs.modulus {
            return Err(Error::DimensionMismatch("shape or modulus differs".into()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(self, a, b)).collect();
        Ok(ZMatrix { data, ..*self })
    }

    pub fn scale(&self, c: i128) -> ZMatrix {
        let c = self.modulus.reduce_i128(c) as u64;
        ZMatrix { data: self.data.iter().map(|&a| self.mulq(a, c)).collect(), ..*self }
    }

    /// `self + c * I`.
    pub fn add_scalar(&self, c: i128) -> ZMatrix {
        assert!(self.is_square());
        let c = self.modulus.reduce_i128(c) as u64;
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.addq(out.get(i, i), c);
            out.set(i, i, v);
        }
        out
    }

    /// Evaluate a polynomial at a square matrix (Horner).
    pub fn eval_poly(&self, f: &PadicPoly) -> Result<ZMatrix> {
        assert!(self.is_square());
        let mut acc = ZMatrix::zeros(self.rows, self.cols, self.modulus)?;
        for &c in f.raw().iter().rev() {
            acc = acc.mul(self)?.add_scalar(c as i128);
        }
        Ok(acc)
    }

    pub fn reduce_to(&self, target: Modulus) -> Result<ZMatrix> {
        debug_assert_eq!(target.p(), self.modulus.p());
        let q = word_modulus(target)?;
        Ok(ZMatrix { q, modulus: target, data: self.data.iter().map(|&a| a % q).collect(), ..*self })
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ZMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        ZMatrix { rows: rows.len(), cols: cols.len(), data, ..*self }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &ZMatrix) -> Result<ZMatrix> {
        if self.rows != rhs.rows || self.modulus != rhs.modulus {
            return Err(Error::DimensionMismatch("hcat".into()));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + rhs.cols));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Ok(ZMatrix { cols: self.cols + rhs.cols, data, ..*self })
    }

    /// Rank of the reduction modulo `p`.
    pub fn rank_mod_p(&self) -> usize {
        let fp = self.reduce_to(self.modulus.residue_field()).expect("p fits");
        fp.unit_pivot_eliminate().pivots.len()
    }

    /// Gauss-Jordan elimination that only ever pivots on units.
    ///
    /// Rows are permuted and combined so that each pivot row has a 1 in its
    /// pivot column and zeros in all other pivot columns. The residual block
    /// (non-pivot rows, non-pivot columns) contains no units afterwards.
    pub fn unit_pivot_eliminate(&self) -> Elimination {
        let mut a = self.clone();
        let p = self.modulus.p();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row_used = vec![false; a.rows];
        let mut col_used = vec![false; a.cols];
        loop {
            // Column-major scan keeps pivot columns in increasing order when possible.
            let mut found = None;
            'search: for j in 0..a.cols {
                if col_used[j] {
                    continue;
                }
                for i in 0..a.rows {
                    if !row_used[i] && a.get(i, j) % p != 0 {
                        found = Some((i, j));
                        break 'search;
                    }
                }
            }
            let Some((pi, pj)) = found else { break };
            let inv = self.modulus.inv(a.get(pi, pj) as u128).unwrap() as u64;
            for j in 0..a.cols {
                let v = a.mulq(a.get(pi, j), inv);
                a.set(pi, j, v);
            }
            let prow: Vec<u64> = a.row(pi).to_vec();
            for i in 0..a.rows {
                if i == pi {
                    continue;
                }
                let c = a.get(i, pj);
                if c == 0 {
                    continue;
                }
                let q = a.q;
                let row = a.row_mut(i);
                for (x, &y) in row.iter_mut().zip(&prow) {
                    if y != 0 {
                        let t = ((c as u128 * y as u128) % q as u128) as u64;
                        *x = if *x >= t { *x - t } else { *x + q - t };
                    }
                }
            }
            row_used[pi] = true;
            col_used[pj] = true;
            pivots.push((pi, pj));
        }
        Elimination { reduced: a, pivots }
    }

    /// Inverse of a square matrix, or `None` if it is singular modulo `p`.
    pub fn inverse(&self) -> Option<ZMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hcat(&ZMatrix::identity(n, self.modulus).ok()?).ok()?;
        let el = aug.unit_pivot_eliminate();
        if el.pivots.len() != n || el.pivots.iter().any(|&(_, j)| j >= n) {
            return None;
        }
        let mut inv = ZMatrix::zeros(n, n, self.modulus).ok()?;
        for &(i, j) in &el.pivots {
            for k in 0..n {
                inv.set(j, k, el.reduced.get(i, n + k));
            }
        }
        Some(inv)
    }

    /// Basis of the kernel `{x : A x = 0}` when it is a free direct summand.
    ///
    /// Succeeds when unit pivots exhaust the matrix, i.e. the residual block
    /// vanishes modulo `p^M`; then the kernel is free of rank `cols - #pivots`
    /// and the returned vectors form a basis. Errors otherwise.
    pub fn free_kernel(&self) -> Result<Vec<Vec<u64>>> {
        let el = self.unit_pivot_eliminate();
        let a = &el.reduced;
        let pivot_rows: Vec<bool> = {
            let mut v = vec![false; a.rows];
            el.pivots.iter().for_each(|&(i, _)| v[i] = true);
            v
        };
        let mut pivot_col_of = vec![None; a.cols];
        for &(i, j) in &el.pivots {
            pivot_col_of[j] = Some(i);
        }
        for i in 0..a.rows {
            if pivot_rows[i] {
                continue;
            }
            if a.row(i).iter().any(|&x| x != 0) {
                return Err(Error::NonFreeQuotient(
                    "kernel is not a free direct summand at this precision".into(),
                ));
            }
        }
        let mut basis = Vec::new();
        for j in 0..a.cols {
            if pivot_col_of[j].is_some() {
                continue;
            }
            let mut v = vec![0u64; a.cols];
            v[j] = 1;
            for &(i, c) in &el.pivots {
                v[c] = a.subq(0, a.get(i, j));
            }
            basis.push(v);
        }
        Ok(basis)
    }
}

/// Output of [`ZMatrix::unit_pivot_eliminate`].
#[derive(Clone, Debug)]
pub struct Elimination {
    pub reduced: ZMatrix,
    /// `(row, column)` of each pivot, in the order chosen.
    pub pivots: Vec<(usize, usize)>,
}

impl fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZMatrix {}x{} mod {}", self.rows, self.cols, self.q)?;
        for i in 0..self.rows.min(12) {
            writeln!(f, "  {:?}", &self.row(i)[..self.cols.min(12)])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_mul(a: &ZMatrix, b: &ZMatrix) -> ZMatrix {
        ZMatrix::from_fn(a.rows(), b.cols(), a.modulus(), |i, j| {
            (0..a.cols()).map(|k| a.get(i, k) as i128 * b.get(k, j) as i128).sum::<i128>()
        })
        .unwrap()
    }

    proptest! {
        #[test]
        fn fast_product_matches_naive(seed in any::<u64>(), n in 1usize..9, k in 1usize..40, e in 1u32..20) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Modulus::new(7, e).unwrap();
            let q = m.q() as i128;
            let a = ZMatrix::from_fn(n, k, m, |_, _| rng.gen_range(0..q)).unwrap();
            let b = ZMatrix::from_fn(k, n + 1, m, |_, _| rng.gen_range(0..q)).unwrap();
            prop_assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
        }

        #[test]
        fn free_kernel_vectors_are_killed(seed in any::<u64>(), n in 1usize..7) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Modulus::new(5, 3).unwrap();
            // A product of a unit-pivot projection with random invertible data.
            let r = rng.gen_range(0..=n);
            let a = ZMatrix::from_fn(n, n, m, |i, j| if i < r && j < n { rng.gen_range(0..125) } else { 0 }).unwrap();
            if let Ok(basis) = a.free_kernel() {
                prop_assert_eq!(basis.len(), n - a.unit_pivot_eliminate().pivots.len());
                for v in basis {
                    prop_assert!(a.mul_vec(&v).iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let m = Modulus::new(7, 4).unwrap();
        let mut seen = 0;
        for _ in 0..200 {
            let n = rng.gen_range(1..7);
            let a = ZMatrix::from_fn(n, n, m, |_, _| rng.gen_range(0..2401)).unwrap();
            match a.inverse() {
                Some(b) => {
                    seen += 1;
                    assert_eq!(a.mul(&b).unwrap(), ZMatrix::identity(n, m).unwrap());
                }
                None => assert!(a.rank_mod_p() < n),
            }
        }
        assert!(seen > 100);
    }

    #[test]
    fn kernel_of_projection() {
        let m = Modulus::new(5, 2).unwrap();
        let a = ZMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 0]], m).unwrap();
        let k = a.free_kernel().unwrap();
        assert_eq!(k.len(), 2);
        let b = ZMatrix::from_rows(&[vec![5, 0], vec![0, 1]], m).unwrap();
        assert!(b.free_kernel().is_err());
        assert_eq!(b.rank_mod_p(), 1);
    }

    #[test]
    fn polynomial_evaluation() {
        let m = Modulus::new(5, 2).unwrap();
        let a = ZMatrix::from_rows(&[vec![0, 1], vec![0, 0]], m).unwrap();
        let f = PadicPoly::from_i128(&[3, 2, 1], m);
        let fa = a.eval_poly(&f).unwrap();
        assert_eq!(fa, ZMatrix::from_rows(&[vec![3, 2], vec![0, 3]], m).unwrap());
    }
}
