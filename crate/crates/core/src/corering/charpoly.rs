//! Characteristic polynomials over `Z/p^M`.

use super::matrix::ZMatrix;
use super::poly::PadicPoly;

/// `det(yI - A)` by the Berkowitz recurrence; no divisions at all.
///
/// Runs in `O(n^4)` ring operations.
pub fn berkowitz_charpoly(a: &ZMatrix) -> PadicPoly {
    assert!(a.is_square(), "berkowitz_charpoly needs a square matrix");
    let n = a.rows();
    let m = a.modulus();
    // Coefficients highest degree first.
    let mut cur: Vec<u64> = vec![1 % a.q()];
    for r in 0..n {
        // Toeplitz column: 1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C.
        let mut t = Vec::with_capacity(r + 2);
        t.push(1 % a.q());
        t.push(a.subq(0, a.get(r, r)));
        let mut v: Vec<u64> = (0..r).map(|i| a.get(i, r)).collect();
        for k in 0..r {
            let dot = (0..r).fold(0u64, |acc, j| a.addq(acc, a.mulq(a.get(r, j), v[j])));
            t.push(a.subq(0, dot));
            if k + 1 < r {
                v = (0..r)
                    .map(|i| (0..r).fold(0u64, |acc, j| a.addq(acc, a.mulq(a.get(i, j), v[j]))))
                    .collect();
            }
        }
        let mut next = vec![0u64; r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, &c) in cur.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot = a.addq(*slot, a.mulq(t[i - j], c));
                }
            }
        }
        cur = next;
    }
    cur.reverse();
    PadicPoly::from_raw(cur.into_iter().map(u128::from).collect(), m)
}

/// `det(yI - A)` via unit-similarity reduction to Hessenberg form.
///
/// Pivots are chosen of least valuation in their column, so every
/// elimination multiplier is an honest element of `Z/p^M` and each step is
/// a similarity by an invertible matrix. `O(n^3)` ring operations.
pub fn hessenberg_charpoly(a: &ZMatrix) -> PadicPoly {
    assert!(a.is_square(), "hessenberg_charpoly needs a square matrix");
    let n = a.rows();
    let modulus = a.modulus();
    let p = modulus.p();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let mut best: Option<(usize, u32)> = None;
        for i in j + 1..n {
            let x = h.get(i, j);
            if x != 0 {
                let v = modulus.val_u32(x as u128);
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((pi, v)) = best else { continue };
        if pi != j + 1 {
            swap_rows(&mut h, pi, j + 1);
            swap_cols(&mut h, pi, j + 1);
        }
        let pv = p.pow(v);
        let piv = h.get(j + 1, j);
        let uinv = modulus.inv((piv / pv) as u128).unwrap() as u64;
        for k in j + 2..n {
            let x = h.get(k, j);
            if x == 0 {
                continue;
            }
            let mult = h.mulq(x / pv, uinv);
            // row_k -= mult * row_{j+1}
            let src: Vec<u64> = h.row(j + 1)[j..].to_vec();
            let q = h.q();
            let small = q < 1 << 32;
            let row = &mut h.row_mut(k)[j..];
            for (x, &y) in row.iter_mut().zip(&src) {
                if y != 0 {
                    let t = if small { mult * y % q } else { ((mult as u128 * y as u128) % q as u128) as u64 };
                    *x = if *x >= t { *x - t } else { *x + q - t };
                }
            }
            // col_{j+1} += mult * col_k
            for i in 0..n {
                let y = h.get(i, k);
                if y != 0 {
                    let t = h.mulq(mult, y);
                    let v = h.addq(h.get(i, j + 1), t);
                    h.set(i, j + 1, v);
                }
            }
        }
    }
    hessenberg_recurrence(&h)
}

fn swap_rows(h: &mut ZMatrix, a: usize, b: usize) {
    for j in 0..h.cols() {
        let (x, y) = (h.get(a, j), h.get(b, j));
        h.set(a, j, y);
        h.set(b, j, x);
    }
}

fn swap_cols(h: &mut ZMatrix, a: usize, b: usize) {
    for i in 0..h.rows() {
        let (x, y) = (h.get(i, a), h.get(i, b));
        h.set(i, a, y);
        h.set(i, b, x);
    }
}

/// Characteristic polynomial of an upper Hessenberg matrix.
fn hessenberg_recurrence(h: &ZMatrix) -> PadicPoly {
    let n = h.rows();
    let m = h.modulus();
    // polys[k] = charpoly of the leading k x k block, low degree first.
    let mut polys: Vec<Vec<u64>> = vec![vec![1 % h.q()]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        // (y - h_kk) * prev
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = h.addq(next[d + 1], c);
            next[d] = h.subq(next[d], h.mulq(h.get(k, k), c));
        }
        // - sum_{i<k} h_{i,k} * prod_{m=i+1..k} h_{m,m-1} * polys[i]
        let mut prod = 1 % h.q();
        for i in (0..k).rev() {
            prod = h.mulq(prod, h.get(i + 1, i));
            if prod == 0 {
                break;
            }
            let coef = h.mulq(h.get(i, k), prod);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = h.subq(next[d], h.mulq(coef, c));
            }
        }
        polys.push(next);
    }
    PadicPoly::from_raw(polys[n].iter().map(|&c| c as u128).collect(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corering::zmod::Modulus;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    /// Exact integer charpoly by cofactor expansion of `det(yI - A)` with
    /// polynomial entries.
    fn integer_charpoly(a: &[Vec<i128>]) -> Vec<i128> {
        let n = a.len();
        let entries: Vec<Vec<Vec<i128>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { vec![-a[i][j], 1] } else { vec![-a[i][j]] })
                    .collect()
            })
            .collect();
        fn det(m: &[Vec<Vec<i128>>], rows: &[usize], cols: &[usize]) -> Vec<i128> {
            if rows.is_empty() {
                return vec![1];
            }
            let r = rows[0];
            let mut acc = vec![0i128; rows.len() + 1];
            for (k, &c) in cols.iter().enumerate() {
                let rest_c: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = det(m, &rows[1..], &rest_c);
                let e = &m[r][c];
                for (i, &x) in e.iter().enumerate() {
                    for (j, &y) in minor.iter().enumerate() {
                        let s = if k % 2 == 0 { 1 } else { -1 };
                        acc[i + j] += s * x * y;
                    }
                }
            }
            acc
        }
        let idx: Vec<usize> = (0..n).collect();
        det(&entries, &idx, &idx)
    }

    #[test]
    fn small_cases() {
        let m = Modulus::new(5, 2).unwrap();
        let id = ZMatrix::identity(2, m).unwrap();
        assert_eq!(berkowitz_charpoly(&id), PadicPoly::from_i128(&[1, -2, 1], m));
        let d = ZMatrix::from_rows(&[vec![2, 0], vec![0, 3]], m).unwrap();
        assert_eq!(berkowitz_charpoly(&d), PadicPoly::from_i128(&[6, -5, 1], m));
        assert_eq!(hessenberg_charpoly(&d), PadicPoly::from_i128(&[6, -5, 1], m));
    }

    proptest! {
        #[test]
        fn agrees_with_cofactor_oracle(seed in any::<u64>(), n in 1usize..=5, e in 1u32..5, p in prop::sample::select(vec![5u64, 7, 11])) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Modulus::new(p, e).unwrap();
            // Bias entries towards multiples of p so that pivots are not always units.
            let rows: Vec<Vec<i128>> = (0..n)
                .map(|_| (0..n).map(|_| {
                    let x = rng.gen_range(0..m.q() as i128);
                    if rng.gen_bool(0.5) { x * p as i128 % m.q() as i128 } else { x }
                }).collect())
                .collect();
            let a = ZMatrix::from_rows(&rows, m).unwrap();
            let exact = PadicPoly::from_i128(&integer_charpoly(&rows), m);
            prop_assert_eq!(berkowitz_charpoly(&a), exact.clone());
            prop_assert_eq!(hessenberg_charpoly(&a), exact);
        }

        #[test]
        fn berkowitz_and_hessenberg_agree(seed in any::<u64>(), n in 1usize..30) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Modulus::new(5, 4).unwrap();
            let a = ZMatrix::from_fn(n, n, m, |_, _| {
                let x = rng.gen_range(0..625);
                if rng.gen_bool(0.7) { x * 5 } else { x }
            }).unwrap();
            prop_assert_eq!(berkowitz_charpoly(&a), hessenberg_charpoly(&a));
        }
    }
}
