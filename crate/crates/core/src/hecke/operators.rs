//! Hecke operators on Manin symbols via Merel's matrices.

use super::heilbronn::merel_heilbronn;
use super::manin::ManinSpace;
use crate::corering::arith::is_prime;
use crate::corering::matrix::ZMatrix;
use crate::{Error, Result};

/// Matrix of `T_ell` acting on column vectors of cuspidal coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub ell: u64,
    pub matrix: ZMatrix,
}

fn check_ell(space: &ManinSpace, ell: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == space.n() {
        return Err(Error::OutOfRange(format!("T_{ell} needs ell prime to N")));
    }
    Ok(())
}

/// Image of a vector of basis coordinates under `sum_h x h`, restricted to
/// the output coordinates in `rows` (all coordinates when `None`).
fn apply_heilbronn(space: &ManinSpace, heil: &[[i64; 4]], v: &[u64]) -> Vec<u64> {
    let m = space.modulus();
    let q = m.q() as u64;
    let mut class_coeff = vec![0u64; space.num_classes()];
    for (j, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let x = space.basis_symbols()[j];
        for &h in heil {
            let y = space.p1().act(x, h);
            if let Some((class, neg)) = space.symbol_class(y) {
                let slot = &mut class_coeff[class];
                *slot = if neg { (*slot + q - c) % q } else { (*slot + c) % q };
            }
        }
    }
    let mut out = vec![0u64; space.dim()];
    for (class, &c) in class_coeff.iter().enumerate() {
        space.accumulate_class(&mut out, class, c);
    }
    out
}

/// `T_ell` on the whole quotient (cuspidal part plus the Eisenstein line).
///
/// Asserts `delta(T_ell v) = (1 + ell) delta(v)` on every basis vector.
pub fn hecke_matrix_full(space: &ManinSpace, ell: u64) -> Result<ZMatrix> {
    check_ell(space, ell)?;
    let m = space.modulus();
    let heil = merel_heilbronn(ell);
    let d = space.dim();
    let mut mat = ZMatrix::zeros(d, d, m)?;
    for j in 0..d {
        let mut e = vec![0u64; d];
        e[j] = 1;
        let col = apply_heilbronn(space, &heil, &e);
        let lhs = space.boundary_of(&col) as u128;
        let rhs = m.mul((1 + ell) as u128 % m.q(), space.boundary()[j] as u128);
        if lhs != rhs {
            return Err(Error::Mismatch(format!("T_{ell} does not act on the boundary by 1 + ell")));
        }
        for (i, &x) in col.iter().enumerate() {
            mat.set(i, j, x);
        }
    }
    Ok(mat)
}

/// `T_ell` restricted to the cuspidal subspace (kernel of the boundary).
pub fn hecke_matrix(space: &ManinSpace, ell: u64) -> Result<HeckeMatrix> {
    let full = hecke_matrix_full(space, ell)?;
    let m = space.modulus();
    let c = space.cusp_coefficients();
    let j0 = space.cusp_pivot();
    let g = space.cuspidal_dim();
    let mut mat = ZMatrix::zeros(g, g, m)?;
    let mut col_out = 0;
    for i in 0..space.dim() {
        if i == j0 {
            continue;
        }
        // T k_i = T b_i - c_i T b_j0
        let col: Vec<u64> = (0..space.dim())
            .map(|r| m.sub(full.get(r, i) as u128, m.mul(c[i] as u128, full.get(r, j0) as u128)) as u64)
            .collect();
        for (r, x) in space.full_to_cusp(&col).into_iter().enumerate() {
            mat.set(r, col_out, x);
        }
        col_out += 1;
    }
    debug_assert_eq!(col_out, g);
    Ok(HeckeMatrix { ell, matrix: mat })
}

/// `T_ell` applied to cuspidal vectors (in cuspidal coordinates) without
/// building the whole matrix.
pub fn apply_hecke_cuspidal(space: &ManinSpace, ell: u64, vectors: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    check_ell(space, ell)?;
    let heil = merel_heilbronn(ell);
    Ok(vectors
        .iter()
        .map(|v| {
            let full = space.cusp_to_full(v);
            let image = apply_heilbronn(space, &heil, &full);
            space.full_to_cusp(&image)
        })
        .collect())
}
