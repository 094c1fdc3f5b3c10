//! Echelon forms for submodules of `(Z/p^M)^n` and membership queries.
//!
//! The form is built column by column. At each column the row of least
//! valuation becomes the pivot, normalised to `p^v`, and `p^(M-v)` times the
//! pivot row is fed back into the pending rows. That last step gives the
//! Howell property: the vectors of the module vanishing on the first `k`
//! columns are exactly the span of the rows whose pivot lies past `k`.

use super::matrix::ZMatrix;
use super::zmod::Modulus;

#[derive(Clone, Debug)]
struct Row {
    vec: Vec<u64>,
    coeffs: Vec<u64>,
}

/// A row of a Howell form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellRow {
    pub vec: Vec<u64>,
    /// Coefficients expressing `vec` in the original generators.
    pub coeffs: Vec<u64>,
    pub pivot: usize,
    /// The pivot entry is exactly `p^pivot_val`.
    pub pivot_val: u32,
}

/// Howell form of the module spanned by a list of row vectors.
#[derive(Clone, Debug)]
pub struct HowellForm {
    modulus: Modulus,
    width: usize,
    generators: usize,
    rows: Vec<HowellRow>,
}

struct Ops {
    q: u64,
    p: u64,
}

impl Ops {
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    /// `dst -= k * src` on both the vector and its coefficients.
    fn axpy(&self, dst: &mut Row, k: u64, src: &Row) {
        if k == 0 {
            return;
        }
        for (x, &y) in dst.vec.iter_mut().zip(&src.vec).chain(dst.coeffs.iter_mut().zip(&src.coeffs)) {
            if y != 0 {
                let t = self.mul(k, y);
                *x = if *x >= t { *x - t } else { *x + self.q - t };
            }
        }
    }

    fn scale(&self, row: &mut Row, k: u64) {
        for x in row.vec.iter_mut().chain(row.coeffs.iter_mut()) {
            *x = self.mul(*x, k);
        }
    }

    fn val(&self, mut x: u64) -> u32 {
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }
}

impl HowellForm {
    /// Howell form of the span of `gens` (each of length `width`).
    pub fn from_rows(gens: &[Vec<u64>], width: usize, modulus: Modulus) -> Self {
        assert!(modulus.q() < 1u128 << 63);
        let q = modulus.q() as u64;
        let ops = Ops { q, p: modulus.p() };
        let ng = gens.len();
        let mut pending: Vec<Row> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                assert_eq!(g.len(), width);
                let mut coeffs = vec![0; ng];
                coeffs[i] = 1;
                Row { vec: g.iter().map(|x| x % q).collect(), coeffs }
            })
            .filter(|r| r.vec.iter().any(|&x| x != 0))
            .collect();
        let mut rows: Vec<HowellRow> = Vec::new();
        for col in 0..width {
            let mut best: Option<(usize, u32)> = None;
            for (i, r) in pending.iter().enumerate() {
                let x = r.vec[col];
                if x != 0 {
                    let v = ops.val(x);
                    if best.map_or(true, |(_, bv)| v < bv) {
                        best = Some((i, v));
                        if v == 0 {
                            break;
                        }
                    }
                }
            }
            let Some((bi, v)) = best else { continue };
            let mut piv = pending.swap_remove(bi);
            let pv = (modulus.p() as u64).pow(v);
            let unit = piv.vec[col] / pv;
            let inv = modulus.inv(unit as u128).expect("unit part") as u64;
            ops.scale(&mut piv, inv);
            debug_assert_eq!(piv.vec[col], pv);
            for r in pending.iter_mut() {
                let x = r.vec[col];
                if x != 0 {
                    ops.axpy(r, x / pv, &piv);
                }
            }
            pending.retain(|r| r.vec.iter().any(|&x| x != 0));
            if v > 0 {
                let mut extra = piv.clone();
                ops.scale(&mut extra, (modulus.p() as u64).pow(modulus.exp() - v));
                if extra.vec.iter().any(|&x| x != 0) {
                    pending.push(extra);
                }
            }
            for r in rows.iter_mut() {
                let y = r.vec[col];
                if y >= pv {
                    let mut tmp = Row { vec: std::mem::take(&mut r.vec), coeffs: std::mem::take(&mut r.coeffs) };
                    ops.axpy(&mut tmp, y / pv, &piv);
                    r.vec = tmp.vec;
                    r.coeffs = tmp.coeffs;
                }
            }
            rows.push(HowellRow { vec: piv.vec, coeffs: piv.coeffs, pivot: col, pivot_val: v });
        }
        HowellForm { modulus, width, generators: ng, rows }
    }

    /// Howell form of the row space of a matrix.
    pub fn of_matrix_rows(a: &ZMatrix) -> Self {
        let gens: Vec<Vec<u64>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
        Self::from_rows(&gens, a.cols(), a.modulus())
    }

    pub fn rows(&self) -> &[HowellRow] {
        &self.rows
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Coefficients `c` with `sum c_i gens_i = b`, if `b` lies in the span.
    pub fn contains(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.width);
        let q = self.modulus.q() as u64;
        let ops = Ops { q, p: self.modulus.p() };
        let mut cur = Row { vec: b.iter().map(|x| x % q).collect(), coeffs: vec![0; self.generators] };
        for r in &self.rows {
            let x = cur.vec[r.pivot];
            if x == 0 {
                continue;
            }
            let pv = (self.modulus.p() as u64).pow(r.pivot_val);
            if x % pv != 0 {
                return None;
            }
            let src = Row { vec: r.vec.clone(), coeffs: r.coeffs.clone() };
            ops.axpy(&mut cur, x / pv, &src);
        }
        if cur.vec.iter().any(|&x| x != 0) {
            return None;
        }
        // cur = b - sum k_r rows, so b = -cur.coeffs in generator terms.
        Some(cur.coeffs.iter().map(|&c| if c == 0 { 0 } else { q - c }).collect())
    }

    /// Generators of the submodule of vectors vanishing on the first `k` columns.
    pub fn tail_generators(&self, k: usize) -> Vec<&HowellRow> {
        self.rows.iter().filter(|r| r.pivot >= k).collect()
    }
}

/// Decide whether `b` lies in the column span of `a`; on success returns `x`
/// with `a x = b`.
pub fn howell_membership(a: &ZMatrix, b: &[u64]) -> Option<Vec<u64>> {
    assert_eq!(b.len(), a.rows());
    let t = a.transpose();
    HowellForm::of_matrix_rows(&t).contains(b)
}

/// Generators of `{x : a x = 0}` as a `Z/p^M`-module.
pub fn kernel_generators(a: &ZMatrix) -> Vec<Vec<u64>> {
    let m = a.modulus();
    let r = a.rows();
    let c = a.cols();
    let aug = a.transpose().hcat(&ZMatrix::identity(c, m).expect("same modulus")).expect("shapes");
    let h = HowellForm::of_matrix_rows(&aug);
    h.tail_generators(r).into_iter().map(|row| row.vec[r..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn scalar_cases() {
        let m3 = Modulus::new(5, 3).unwrap();
        let a = ZMatrix::from_rows(&[vec![5]], m3).unwrap();
        let w = howell_membership(&a, &[25]).unwrap();
        assert_eq!(a.mul_vec(&w), vec![25]);
        assert_eq!(w[0] % 25, 5);
        let m2 = Modulus::new(5, 2).unwrap();
        let a = ZMatrix::from_rows(&[vec![5]], m2).unwrap();
        assert!(howell_membership(&a, &[1]).is_none());
        let id = ZMatrix::identity(3, m2).unwrap();
        assert_eq!(howell_membership(&id, &[4, 7, 11]).unwrap(), vec![4, 7, 11]);
    }

    #[test]
    fn howell_property_needs_the_extra_row() {
        // Span of (5, 1) mod 25 contains (0, 5) = 5*(5,1).
        let m = Modulus::new(5, 2).unwrap();
        let h = HowellForm::from_rows(&[vec![5, 1]], 2, m);
        assert!(h.contains(&[0, 5]).is_some());
        assert_eq!(h.tail_generators(1).len(), 1);
    }

    fn span_brute(gens: &[Vec<u64>], q: u64) -> std::collections::HashSet<Vec<u64>> {
        let w = gens.first().map_or(0, |g| g.len());
        let mut span = std::collections::HashSet::new();
        span.insert(vec![0u64; w]);
        for g in gens {
            let cur: Vec<Vec<u64>> = span.iter().cloned().collect();
            for v in cur {
                for k in 1..q {
                    span.insert(v.iter().zip(g).map(|(a, b)| (a + k * b) % q).collect());
                }
            }
        }
        span
    }

    proptest! {
        #[test]
        fn membership_matches_brute_force(seed in any::<u64>(), ngen in 1usize..4, width in 1usize..4) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Modulus::new(5, 2).unwrap();
            let gens: Vec<Vec<u64>> = (0..ngen)
                .map(|_| (0..width).map(|_| if rng.gen_bool(0.5) { 5 * rng.gen_range(0..5) } else { rng.gen_range(0..25) }).collect())
                .collect();
            let span = span_brute(&gens, 25);
            let h = HowellForm::from_rows(&gens, width, m);
            for _ in 0..30 {
                let b: Vec<u64> = (0..width).map(|_| rng.gen_range(0..25)).collect();
                let got = h.contains(&b);
                prop_assert_eq!(got.is_some(), span.contains(&b));
                if let Some(c) = got {
                    let rec: Vec<u64> = (0..width)
                        .map(|j| (0..ngen).map(|i| c[i] * gens[i][j]).sum::<u64>() % 25)
                        .collect();
                    prop_assert_eq!(rec, b);
                }
            }
            for v in &span {
                prop_assert!(h.contains(v).is_some());
            }
        }

        #[test]
        fn kernel_generators_span_kernel(seed in any::<u64>(), r in 1usize..3, c in 1usize..4) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Modulus::new(5, 2).unwrap();
            let a = ZMatrix::from_fn(r, c, m, |_, _| if rng.gen_bool(0.5) { 5 * rng.gen_range(0..5) } else { rng.gen_range(0..25) }).unwrap();
            let gens = kernel_generators(&a);
            for g in &gens {
                prop_assert!(a.mul_vec(g).iter().all(|&x| x == 0));
            }
            let span = span_brute(&gens, 25);
            // Every kernel vector, found exhaustively, is in the span.
            let total = 25usize.pow(c as u32);
            for idx in 0..total {
                let mut x = vec![0u64; c];
                let mut t = idx;
                for xi in x.iter_mut() {
                    *xi = (t % 25) as u64;
                    t /= 25;
                }
                if a.mul_vec(&x).iter().all(|&y| y == 0) {
                    prop_assert!(span.contains(&x) || gens.is_empty() && x.iter().all(|&y| y == 0));
                }
            }
        }
    }
}
