//! Unipotent matrices and deformations attached to defining systems.

use super::cochain::{vanishes_in_h2, Cochain};
use super::defining::ProductSystem;
use super::group::FiniteGroup;
use super::module::CoeffModule;
use crate::corering::zmod::Modulus;
use crate::{Error, Result};

/// Row-major `n x n` matrices over `Z/q`, one per group element.
pub type MatrixTable = Vec<Vec<u64>>;

fn mat_mul(a: &[u64], b: &[u64], n: usize, m: Modulus) -> Vec<u64> {
    let q = m.q();
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = ((0..n).map(|l| a[i * n + l] as u128 * b[l * n + j] as u128 % q).sum::<u128>() % q) as u64;
        }
    }
    out
}

/// Whether `g -> mats[g]` is multiplicative.
pub fn is_homomorphism(group: &FiniteGroup, mats: &MatrixTable, n: usize, m: Modulus) -> bool {
    (0..group.order()).all(|g| (0..group.order()).all(|h| mat_mul(&mats[g], &mats[h], n, m) == mats[group.mul(g, h)]))
}

/// The upper unipotent `(n+1) x (n+1)` matrices with `-a(i, j)` in position
/// `(i, j + 1)` and `-corner` in the top right corner.
///
/// Under the differential and cup product used here, the defining-system
/// law `d a(i,j) = sum a(i,k) cup a(k+1,j)` is exactly the condition that
/// these negated entries multiply correctly.
pub fn unipotent_matrices(sys: &ProductSystem, corner: &Cochain, group: &FiniteGroup, m: Modulus) -> MatrixTable {
    let n = sys.n();
    let size = n + 1;
    let q = m.q() as u64;
    (0..group.order())
        .map(|g| {
            let mut mat = vec![0u64; size * size];
            for i in 0..size {
                mat[i * size + i] = 1;
            }
            for i in 1..=n {
                for j in i..=n {
                    let v = if (i, j) == (1, n) { corner.value(&[g])[0] } else { sys.entry(i, j).value(&[g])[0] };
                    mat[(i - 1) * size + j] = (q - v % q) % q;
                }
            }
            mat
        })
        .collect()
}

/// Concatenate the two `n x n` unipotent homomorphisms of a defining system
/// into an `(n+1) x (n+1)` one, using a primitive of `c(D)` as the corner.
/// `None` when `c(D)` is not a coboundary.
pub fn unipotent_concatenation(
    sys: &ProductSystem,
    group: &FiniteGroup,
    module: &CoeffModule,
) -> Result<Option<MatrixTable>> {
    if module.rank() != 1 || (0..group.order()).any(|g| module.action_matrix(g)[0] != 1) {
        return Err(Error::InvalidModule("concatenation needs trivial rank-one coefficients".into()));
    }
    let c = sys.obstruction(group, module)?;
    let Some(x) = vanishes_in_h2(&c, group, module)? else {
        return Ok(None);
    };
    let nu = unipotent_matrices(sys, &x, group, module.modulus());
    if !is_homomorphism(group, &nu, sys.n() + 1, module.modulus()) {
        return Err(Error::Mismatch("concatenated matrix is not a homomorphism".into()));
    }
    Ok(Some(nu))
}

/// Whether `nu_r = (1 - sum_{j<=r} M_j eps^j) rho` is a homomorphism into
/// `GL_n((Z/p^s)[eps]/(eps^{r+1}))`, where each `M_j` is an `End(rho)`-valued
/// 1-cochain (basis `E_st` at `s n + t`).
pub fn deformation_is_homomorphism(
    group: &FiniteGroup,
    rho: &MatrixTable,
    n: usize,
    chain: &[Cochain],
    m: Modulus,
) -> bool {
    let r = chain.len();
    let q = m.q() as u64;
    // coefficient matrices of eps^0..eps^r for each g
    let nu: Vec<Vec<Vec<u64>>> = (0..group.order())
        .map(|g| {
            let mut coeffs = vec![rho[g].clone()];
            for mj in chain {
                let neg: Vec<u64> = mj.value(&[g]).iter().map(|&x| (q - x % q) % q).collect();
                coeffs.push(mat_mul(&neg, &rho[g], n, m));
            }
            coeffs
        })
        .collect();
    for g in 0..group.order() {
        for h in 0..group.order() {
            let gh = group.mul(g, h);
            for k in 0..=r {
                let mut acc = vec![0u64; n * n];
                for i in 0..=k {
                    let prod = mat_mul(&nu[g][i], &nu[h][k - i], n, m);
                    for (a, b) in acc.iter_mut().zip(prod) {
                        *a = (*a + b) % q;
                    }
                }
                if acc != nu[gh][k] {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::massey::cochain::cup;
    use std::collections::BTreeMap;

    #[test]
    fn two_homomorphisms_concatenate() {
        let g = FiniteGroup::cyclic(5);
        let m = Modulus::new(5, 1).unwrap();
        let v = CoeffModule::trivial(&g, m);
        let a1 = Cochain::from_fn(&g, &v, 1, |x| vec![x[0] as u64]).unwrap();
        let a2 = a1.scale(3);
        let entries = BTreeMap::from([((1, 1), a1.clone()), ((2, 2), a2.clone())]);
        let sys = ProductSystem::new(2, entries, &g, &v).unwrap();
        assert_eq!(sys.obstruction(&g, &v).unwrap(), cup(&a1, &a2, &g, &v).unwrap());
        let nu = unipotent_concatenation(&sys, &g, &v).unwrap().expect("cup product vanishes");
        assert!(is_homomorphism(&g, &nu, 3, m));
    }
}
