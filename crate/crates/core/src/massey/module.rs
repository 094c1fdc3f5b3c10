//! Finite coefficient modules `(Z/p^s)^k` with a group action and a pairing.

use super::group::FiniteGroup;
use crate::corering::zmod::Modulus;
use crate::{Error, Result};

/// A free `Z/p^s`-module of rank `k`, a left action of a finite group by
/// `k x k` matrices, and optionally an equivariant bilinear pairing `V x V -> V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffModule {
    modulus: Modulus,
    rank: usize,
    /// Row-major `k x k` matrix for each group element, acting on columns.
    action: Vec<Vec<u64>>,
    /// `pairing[(i * k + j) * k + l]` is the `l`-th coordinate of `e_i e_j`.
    pairing: Option<Vec<u64>>,
    /// Whether the action is by scalars on each coordinate.
    diagonal: bool,
}

impl CoeffModule {
    /// Build and validate: the action must be a homomorphism into invertible
    /// matrices and the pairing must be equivariant.
    pub fn new(
        group: &FiniteGroup,
        modulus: Modulus,
        rank: usize,
        action: Vec<Vec<u64>>,
        pairing: Option<Vec<u64>>,
    ) -> Result<Self> {
        let q = modulus.q() as u64;
        if rank == 0 || action.len() != group.order() || action.iter().any(|a| a.len() != rank * rank) {
            return Err(Error::InvalidModule("action has the wrong shape".into()));
        }
        if let Some(c) = &pairing {
            if c.len() != rank * rank * rank {
                return Err(Error::InvalidModule("pairing has the wrong shape".into()));
            }
        }
        let action: Vec<Vec<u64>> = action.into_iter().map(|a| a.into_iter().map(|x| x % q).collect()).collect();
        let pairing = pairing.map(|c| c.into_iter().map(|x| x % q).collect());
        let diagonal = action.iter().all(|a| (0..rank).all(|i| (0..rank).all(|j| i == j || a[i * rank + j] == 0)));
        let v = CoeffModule { modulus, rank, action, pairing, diagonal };
        let id = group.identity();
        for i in 0..rank {
            for j in 0..rank {
                if v.action[id][i * rank + j] != u64::from(i == j) {
                    return Err(Error::InvalidModule("identity does not act trivially".into()));
                }
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if v.action[group.mul(g, h)] != v.mat_mul(&v.action[g], &v.action[h]) {
                    return Err(Error::InvalidModule(format!("action is not multiplicative at ({g}, {h})")));
                }
            }
        }
        if v.pairing.is_some() {
            for g in 0..group.order() {
                for i in 0..rank {
                    for j in 0..rank {
                        let (ei, ej) = (v.basis(i), v.basis(j));
                        let lhs = v.act(g, &v.pair(&ei, &ej));
                        let rhs = v.pair(&v.act(g, &ei), &v.act(g, &ej));
                        if lhs != rhs {
                            return Err(Error::InvalidModule("pairing is not equivariant".into()));
                        }
                    }
                }
            }
        }
        Ok(v)
    }

    /// `Z/p^s` with trivial action and multiplication as pairing.
    pub fn trivial(group: &FiniteGroup, modulus: Modulus) -> Self {
        CoeffModule::new(group, modulus, 1, vec![vec![1]; group.order()], Some(vec![1])).expect("trivial module")
    }

    /// `Z/p^s(chi)` for a character given by its values. No pairing unless
    /// `chi` is trivial.
    pub fn character(group: &FiniteGroup, modulus: Modulus, chi: &[u64]) -> Result<Self> {
        let trivial = chi.iter().all(|&x| x % modulus.q() as u64 == 1);
        let pairing = trivial.then(|| vec![1]);
        CoeffModule::new(group, modulus, 1, chi.iter().map(|&x| vec![x]).collect(), pairing)
    }

    /// `End(rho)` for a representation `rho: G -> GL_n(Z/p^s)`, with `G`
    /// acting by conjugation and matrix multiplication as pairing. The basis
    /// is `E_{st}` at index `s * n + t`.
    pub fn endomorphisms(group: &FiniteGroup, modulus: Modulus, n: usize, rho: &[Vec<u64>]) -> Result<Self> {
        let q = modulus.q() as u64;
        if rho.len() != group.order() || rho.iter().any(|r| r.len() != n * n) {
            return Err(Error::InvalidModule("representation has the wrong shape".into()));
        }
        let k = n * n;
        let mut action = Vec::with_capacity(group.order());
        for g in 0..group.order() {
            let r = &rho[g];
            let rinv = &rho[group.inv(g)];
            // Column (s, t) of the action is rho E_st rho^{-1}.
            let mut a = vec![0u64; k * k];
            for s in 0..n {
                for t in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let v = (r[i * n + s] as u128 * rinv[t * n + j] as u128 % q as u128) as u64;
                            a[(i * n + j) * k + s * n + t] = v;
                        }
                    }
                }
            }
            action.push(a);
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let lhs = &rho[group.mul(g, h)];
                let mut rhs = vec![0u64; n * n];
                for i in 0..n {
                    for j in 0..n {
                        rhs[i * n + j] = ((0..n)
                            .map(|l| rho[g][i * n + l] as u128 * rho[h][l * n + j] as u128)
                            .sum::<u128>()
                            % q as u128) as u64;
                    }
                }
                if lhs.iter().map(|x| x % q).ne(rhs.iter().copied()) {
                    return Err(Error::InvalidModule("not a representation".into()));
                }
            }
        }
        let mut pairing = vec![0u64; k * k * k];
        for s in 0..n {
            for t in 0..n {
                for u in 0..n {
                    // E_st E_tu = E_su
                    pairing[((s * n + t) * k + (t * n + u)) * k + s * n + u] = 1;
                }
            }
        }
        CoeffModule::new(group, modulus, k, action, Some(pairing))
    }

    /// `End(chi1 + chi2)`, the 2 x 2 matrix module of a pair of characters.
    pub fn diagonal_endomorphisms(group: &FiniteGroup, modulus: Modulus, chi1: &[u64], chi2: &[u64]) -> Result<Self> {
        let rho: Vec<Vec<u64>> = (0..group.order()).map(|g| vec![chi1[g], 0, 0, chi2[g]]).collect();
        CoeffModule::endomorphisms(group, modulus, 2, &rho)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn has_pairing(&self) -> bool {
        self.pairing.is_some()
    }

    /// Number of elements, `q^k`, saturating.
    pub fn size(&self) -> u128 {
        (self.modulus.q()).saturating_pow(self.rank as u32)
    }

    pub fn action_matrix(&self, g: usize) -> &[u64] {
        &self.action[g]
    }

    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        v
    }

    fn q(&self) -> u64 {
        self.modulus.q() as u64
    }

    fn mat_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.rank;
        let q = self.q() as u128;
        let mut out = vec![0u64; k * k];
        for i in 0..k {
            for j in 0..k {
                out[i * k + j] = ((0..k).map(|l| a[i * k + l] as u128 * b[l * k + j] as u128).sum::<u128>() % q) as u64;
            }
        }
        out
    }

    /// `g . x`
    pub fn act(&self, g: usize, x: &[u64]) -> Vec<u64> {
        let k = self.rank;
        let a = &self.action[g];
        let q = self.q() as u128;
        if self.diagonal {
            return (0..k).map(|i| (a[i * k + i] as u128 * x[i] as u128 % q) as u64).collect();
        }
        (0..k).map(|i| ((0..k).map(|j| a[i * k + j] as u128 * x[j] as u128).sum::<u128>() % q) as u64).collect()
    }

    /// `x . y` under the pairing. Panics if the module has none.
    pub fn pair(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let c = self.pairing.as_ref().expect("module has a pairing");
        let k = self.rank;
        let q = self.q() as u128;
        let mut out = vec![0u128; k];
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                if y[j] == 0 {
                    continue;
                }
                let xy = x[i] as u128 * y[j] as u128 % q;
                let row = &c[(i * k + j) * k..(i * k + j + 1) * k];
                for (o, &s) in out.iter_mut().zip(row) {
                    if s != 0 {
                        *o = (*o + xy * s as u128) % q;
                    }
                }
            }
        }
        out.into_iter().map(|x| x as u64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let g = FiniteGroup::cyclic(4);
        let m = Modulus::new(5, 2).unwrap();
        // 7 has order 4 modulo 25.
        let chi: Vec<u64> = (0..4).map(|i| 7u64.pow(i) % 25).collect();
        assert!(CoeffModule::character(&g, m, &chi).is_ok());
        let bad: Vec<u64> = vec![1, 2, 4, 8];
        assert!(CoeffModule::character(&g, m, &bad).is_err());
        let v = CoeffModule::diagonal_endomorphisms(&g, m, &chi, &vec![1; 4]).unwrap();
        assert_eq!(v.rank(), 4);
        // E_12 is scaled by chi1 chi2^{-1}.
        assert_eq!(v.act(1, &[0, 1, 0, 0]), vec![0, 7, 0, 0]);
        assert_eq!(v.act(1, &[0, 0, 1, 0]), vec![0, 0, 18, 0]);
        assert_eq!(v.pair(&[0, 1, 0, 0], &[0, 0, 1, 0]), vec![1, 0, 0, 0]);
    }

    #[test]
    fn conjugation_by_a_unipotent_representation() {
        let g = FiniteGroup::cyclic(5);
        let m = Modulus::new(5, 1).unwrap();
        let rho: Vec<Vec<u64>> = (0..5).map(|i| vec![1, 0, i as u64, 1]).collect();
        let v = CoeffModule::endomorphisms(&g, m, 2, &rho).unwrap();
        // rho E_12 rho^{-1} for rho = [[1, 0], [1, 1]].
        assert_eq!(v.act(1, &[0, 1, 0, 0]), vec![4, 1, 4, 1]);
    }
}
