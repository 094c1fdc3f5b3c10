//! Coordinates of Massey powers with coefficients in `End(chi_1 + chi_2)`.
//!
//! A cochain `A` valued in `End(chi_1 + chi_2)` has four scalar coordinates
//! `a_{st}`; with `G` acting on `End` by conjugation, `a_{st}` lives in the
//! rank-one module on which `g` acts by `chi_s(g) chi_t(g)^{-1}`.

use super::cochain::{vanishes_in_h2, Cochain};
use super::defining::DefiningSystem;
use super::group::FiniteGroup;
use super::module::CoeffModule;
use crate::corering::zmod::Modulus;
use crate::{Error, Result};

/// A pair of characters `chi_1, chi_2: G -> (Z/p^s)^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterPair {
    modulus: Modulus,
    chi: [Vec<u64>; 2],
}

impl CharacterPair {
    pub fn new(group: &FiniteGroup, modulus: Modulus, chi1: Vec<u64>, chi2: Vec<u64>) -> Result<Self> {
        CoeffModule::character(group, modulus, &chi1)?;
        CoeffModule::character(group, modulus, &chi2)?;
        Ok(CharacterPair { modulus, chi: [chi1, chi2] })
    }

    pub fn trivial(group: &FiniteGroup, modulus: Modulus) -> Self {
        CharacterPair { modulus, chi: [vec![1; group.order()], vec![1; group.order()]] }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn chi(&self, i: usize) -> &[u64] {
        &self.chi[i - 1]
    }

    /// `End(chi_1 + chi_2)`, basis `E_11, E_12, E_21, E_22`.
    pub fn module(&self, group: &FiniteGroup) -> Result<CoeffModule> {
        CoeffModule::diagonal_endomorphisms(group, self.modulus, &self.chi[0], &self.chi[1])
    }

    /// Values of `chi_s chi_t^{-1}`.
    pub fn twist(&self, s: usize, t: usize) -> Vec<u64> {
        let m = self.modulus;
        self.chi[s - 1]
            .iter()
            .zip(&self.chi[t - 1])
            .map(|(&a, &b)| m.mul(a as u128, m.inv(b as u128).expect("characters take unit values")) as u64)
            .collect()
    }

    /// The rank-one module carrying the `(s, t)` coordinate.
    pub fn coordinate_module(&self, group: &FiniteGroup, s: usize, t: usize) -> Result<CoeffModule> {
        CoeffModule::character(group, self.modulus, &self.twist(s, t))
    }
}

/// The `(s, t)` coordinate of an `End`-valued cochain, as a rank-one cochain.
pub fn coordinate(c: &Cochain, s: usize, t: usize, group: &FiniteGroup, target: &CoeffModule) -> Result<Cochain> {
    if c.rank() != 4 || !(1..=2).contains(&s) || !(1..=2).contains(&t) {
        return Err(Error::DimensionMismatch("expected a 2 x 2 matrix cochain".into()));
    }
    let idx = 2 * (s - 1) + (t - 1);
    let table = c.table().chunks(4).map(|v| v[idx]).collect();
    Cochain::from_table(group, target, c.degree(), table)
}

/// `(x cup y)(g, h) = x(g) psi(g) y(h)` for scalar 1-cochains, `y` valued in
/// the rank-one module with character `psi`.
fn scalar_cup(x: &Cochain, y: &Cochain, psi: &[u64], group: &FiniteGroup, target: &CoeffModule) -> Result<Cochain> {
    let m = target.modulus();
    Cochain::from_fn(group, target, 2, |g| {
        let v = m.mul(m.mul(x.value(&g[..1])[0] as u128, psi[g[0]] as u128), y.value(&g[1..])[0] as u128);
        vec![v as u64]
    })
}

/// The `(s, t)` entry of `sum_j A_j * A_{r-j}` computed coordinatewise:
/// `sum_j sum_k a_{sk}^{(j)} cup a_{kt}^{(r-j)}`.
pub fn coordinate_obstruction(
    d: &DefiningSystem,
    s: usize,
    t: usize,
    pair: &CharacterPair,
    group: &FiniteGroup,
) -> Result<Cochain> {
    let target = pair.coordinate_module(group, s, t)?;
    let r = d.power();
    let scalar = |c: &Cochain, u: usize, v: usize| -> Result<Cochain> {
        coordinate(c, u, v, group, &pair.coordinate_module(group, u, v)?)
    };
    let mut acc = Cochain::zero(group, &target, 2)?;
    for j in 1..r {
        for k in 1..=2 {
            let x = scalar(&d.chain()[j - 1], s, k)?;
            let y = scalar(&d.chain()[r - j - 1], k, t)?;
            let x = Cochain::from_table(group, &target, 1, x.table().to_vec())?;
            let y = Cochain::from_table(group, &target, 1, y.table().to_vec())?;
            acc = acc.add(&scalar_cup(&x, &y, &pair.twist(k, t), group, &target)?)?;
        }
    }
    Ok(acc)
}

/// Whether the Massey relation for `<A_1>^r_D` holds in the `(s, t)`
/// coordinate: the `(s, t)` entry of the obstruction is a coboundary in the
/// rank-one module `chi_s chi_t^{-1}`.
pub fn coordinate_relation(
    d: &DefiningSystem,
    coord: (usize, usize),
    pair: &CharacterPair,
    group: &FiniteGroup,
) -> Result<bool> {
    let (s, t) = coord;
    let target = pair.coordinate_module(group, s, t)?;
    let z = coordinate_obstruction(d, s, t, pair, group)?;
    Ok(vanishes_in_h2(&z, group, &target)?.is_some())
}

/// The index-shifted data attached to a defining system `D = {A_1..A_{r-1}}`
/// for `<A_1>^r` in `End(chi_1 + chi_2)`, `r >= 3`.
pub struct ShiftedSystem {
    /// `nu'(g)`, row-major 2 x 2.
    pub rep: Vec<Vec<u64>>,
    /// `End(nu')` with the conjugation action.
    pub module: CoeffModule,
    /// `A'_1, ..., A'_{r-2}`.
    pub chain: Vec<Cochain>,
}

/// Move the `(2,1)` coordinates one step down and the `(1,2)` coordinates
/// one step up, and re-base at `nu' = [[chi_1, 0], [-a_21^(1) chi_1, chi_2]]`.
///
/// With `P_i = [[a_11^(i), a_12^(i-1)], [a_21^(i+1), a_22^(i)]]` (and
/// `a_12^(0) = 0`), `A'_i(g) = P_i(g) (1 + N(g))` where `N` has `a_21^(1)` as
/// its only entry, in position `(2,1)`.
pub fn index_shift(d: &DefiningSystem, pair: &CharacterPair, group: &FiniteGroup) -> Result<ShiftedSystem> {
    let r = d.power();
    if r < 3 {
        return Err(Error::OutOfRange("the index shift needs r >= 3".into()));
    }
    let m = pair.modulus();
    let q = m.q() as u64;
    let a = |i: usize, s: usize, t: usize, g: usize| -> u64 {
        if i == 0 {
            0
        } else {
            d.chain()[i - 1].value(&[g])[2 * (s - 1) + (t - 1)]
        }
    };
    let rep: Vec<Vec<u64>> = (0..group.order())
        .map(|g| {
            let (c1, c2) = (pair.chi(1)[g], pair.chi(2)[g]);
            let low = m.mul(m.neg(a(1, 2, 1, g) as u128), c1 as u128) as u64;
            vec![c1 % q, 0, low, c2 % q]
        })
        .collect();
    let module = CoeffModule::endomorphisms(group, m, 2, &rep)?;
    let mut chain = Vec::with_capacity(r - 2);
    for i in 1..r - 1 {
        let c = Cochain::from_fn(group, &module, 1, |g| {
            let g = g[0];
            let p = [a(i, 1, 1, g), a(i - 1, 1, 2, g), a(i + 1, 2, 1, g), a(i, 2, 2, g)];
            let n21 = a(1, 2, 1, g) as u128;
            // [[p11, p12], [p21, p22]] * [[1, 0], [n21, 1]]
            vec![
                m.add(p[0] as u128, m.mul(p[1] as u128, n21)) as u64,
                p[1],
                m.add(p[2] as u128, m.mul(p[3] as u128, n21)) as u64,
                p[3],
            ]
        })?;
        chain.push(c);
    }
    Ok(ShiftedSystem { rep, module, chain })
}
