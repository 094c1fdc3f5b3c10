//! Inhomogeneous cochains `G^n -> V`, the differential and cup products.

use rand::Rng;

use super::group::FiniteGroup;
use super::module::CoeffModule;
use crate::corering::howell::{kernel_generators, HowellForm};
use crate::corering::matrix::ZMatrix;
use crate::{Error, Result};

/// Highest cochain degree stored.
pub const MAX_DEGREE: usize = 3;

/// A function `G^n -> V`, stored as a flat table: the value at
/// `(g_1, ..., g_n)` starts at `k * (((g_1 |G| + g_2) |G| + ...) )`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    rank: usize,
    order: usize,
    q: u64,
    table: Vec<u64>,
}

impl Cochain {
    pub fn zero(group: &FiniteGroup, module: &CoeffModule, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::OutOfRange(format!("cochains of degree {degree}")));
        }
        let len = group.order().pow(degree as u32) * module.rank();
        Ok(Cochain { degree, rank: module.rank(), order: group.order(), q: module.modulus().q() as u64, table: vec![0; len] })
    }

    pub fn from_fn(
        group: &FiniteGroup,
        module: &CoeffModule,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Vec<u64>,
    ) -> Result<Self> {
        let mut c = Cochain::zero(group, module, degree)?;
        let mut args = vec![0usize; degree];
        for idx in 0..c.cells() {
            c.unflatten(idx, &mut args);
            let v = f(&args);
            assert_eq!(v.len(), c.rank);
            for (slot, x) in c.table[idx * c.rank..(idx + 1) * c.rank].iter_mut().zip(v) {
                *slot = x % c.q;
            }
        }
        Ok(c)
    }

    /// A uniformly random table.
    pub fn random(group: &FiniteGroup, module: &CoeffModule, degree: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut c = Cochain::zero(group, module, degree)?;
        let q = c.q;
        c.table.iter_mut().for_each(|x| *x = rng.gen_range(0..q));
        Ok(c)
    }

    /// Rebuild from a flat table.
    pub fn from_table(group: &FiniteGroup, module: &CoeffModule, degree: usize, table: Vec<u64>) -> Result<Self> {
        let mut c = Cochain::zero(group, module, degree)?;
        if table.len() != c.table.len() {
            return Err(Error::DimensionMismatch(format!("table of length {} for degree {degree}", table.len())));
        }
        c.table = table.into_iter().map(|x| x % c.q).collect();
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&x| x == 0)
    }

    fn cells(&self) -> usize {
        self.order.pow(self.degree as u32)
    }

    fn flatten(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &g| acc * self.order + g)
    }

    fn unflatten(&self, mut idx: usize, args: &mut [usize]) {
        for slot in args.iter_mut().rev() {
            *slot = idx % self.order;
            idx /= self.order;
        }
    }

    pub fn value(&self, args: &[usize]) -> &[u64] {
        assert_eq!(args.len(), self.degree);
        let i = self.flatten(args) * self.rank;
        &self.table[i..i + self.rank]
    }

    pub fn set_value(&mut self, args: &[usize], v: &[u64]) {
        let i = self.flatten(args) * self.rank;
        for (slot, &x) in self.table[i..i + self.rank].iter_mut().zip(v) {
            *slot = x % self.q;
        }
    }

    fn check_same(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.rank != other.rank || self.order != other.order || self.q != other.q {
            return Err(Error::DimensionMismatch("cochains live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_same(other)?;
        let q = self.q;
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| (a + b) % q).collect();
        Ok(Cochain { table, ..self.clone() })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.check_same(other)?;
        let q = self.q;
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| (a + q - b) % q).collect();
        Ok(Cochain { table, ..self.clone() })
    }

    pub fn neg(&self) -> Cochain {
        let q = self.q;
        Cochain { table: self.table.iter().map(|&a| (q - a) % q).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: u64) -> Cochain {
        let q = self.q;
        let c = c % q;
        Cochain { table: self.table.iter().map(|&a| (a as u128 * c as u128 % q as u128) as u64).collect(), ..self.clone() }
    }

    fn check_fits(&self, group: &FiniteGroup, module: &CoeffModule) -> Result<()> {
        if self.order != group.order() || self.rank != module.rank() || self.q != module.modulus().q() as u64 {
            return Err(Error::DimensionMismatch("cochain does not match group and module".into()));
        }
        Ok(())
    }
}

/// The inhomogeneous differential
/// `(dc)(g_1..g_{n+1}) = g_1 c(g_2..) + sum_i (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{n+1} c(g_1..g_n)`.
pub fn coboundary(c: &Cochain, group: &FiniteGroup, module: &CoeffModule) -> Result<Cochain> {
    c.check_fits(group, module)?;
    let n = c.degree;
    if n >= MAX_DEGREE {
        return Err(Error::OutOfRange(format!("coboundary of a degree {n} cochain")));
    }
    let q = c.q;
    let k = c.rank;
    let mut scratch = vec![0usize; n];
    Cochain::from_fn(group, module, n + 1, |g| {
        let mut acc = module.act(g[0], c.value(&g[1..]));
        let mut add = |v: &[u64], sign: bool| {
            for (a, &x) in acc.iter_mut().zip(v) {
                *a = if sign { (*a + x) % q } else { (*a + q - x) % q };
            }
        };
        for i in 0..n {
            // merge g_{i+1} g_{i+2} (0-based i, i+1)
            for (j, slot) in scratch.iter_mut().enumerate() {
                *slot = match j.cmp(&i) {
                    std::cmp::Ordering::Less => g[j],
                    std::cmp::Ordering::Equal => group.mul(g[i], g[i + 1]),
                    std::cmp::Ordering::Greater => g[j + 1],
                };
            }
            add(c.value(&scratch), i % 2 == 1);
        }
        add(c.value(&g[..n]), (n + 1) % 2 == 0);
        debug_assert_eq!(acc.len(), k);
        acc
    })
}

/// `(a cup b)(g_1..g_i, h_1..h_j) = a(g_1..g_i) . ((g_1 ... g_i) b(h_1..h_j))`
/// using the module pairing.
pub fn cup(a: &Cochain, b: &Cochain, group: &FiniteGroup, module: &CoeffModule) -> Result<Cochain> {
    a.check_fits(group, module)?;
    b.check_fits(group, module)?;
    if !module.has_pairing() {
        return Err(Error::InvalidModule("cup products need a pairing".into()));
    }
    let (i, j) = (a.degree, b.degree);
    Cochain::from_fn(group, module, i + j, |g| {
        let prod = g[..i].iter().fold(group.identity(), |acc, &x| group.mul(acc, x));
        module.pair(a.value(&g[..i]), &module.act(prod, b.value(&g[i..])))
    })
}

/// Matrix of `d: C^n -> C^{n+1}` on the standard basis of `C^n`, one column
/// per basis cochain.
fn coboundary_matrix(group: &FiniteGroup, module: &CoeffModule, n: usize) -> Result<ZMatrix> {
    let zero = Cochain::zero(group, module, n)?;
    let cols = zero.table.len();
    let rows = zero.cells() * group.order() * module.rank();
    let mut mat = ZMatrix::zeros(rows, cols, module.modulus())?;
    for col in 0..cols {
        let mut e = zero.clone();
        e.table[col] = 1;
        let de = coboundary(&e, group, module)?;
        for (r, &x) in de.table.iter().enumerate() {
            if x != 0 {
                mat.set(r, col, x);
            }
        }
    }
    Ok(mat)
}

/// Decides membership in `B^{n+1}(G, V)` for a fixed group and module.
pub struct CoboundaryTester {
    degree: usize,
    howell: HowellForm,
    template: Cochain,
}

impl CoboundaryTester {
    /// Tester for `B^{n+1}`, i.e. images of `n`-cochains.
    pub fn new(group: &FiniteGroup, module: &CoeffModule, n: usize) -> Result<Self> {
        let mat = coboundary_matrix(group, module, n)?;
        let gens: Vec<Vec<u64>> = (0..mat.cols()).map(|j| mat.column(j)).collect();
        let howell = HowellForm::from_rows(&gens, mat.rows(), module.modulus());
        Ok(CoboundaryTester { degree: n + 1, howell, template: Cochain::zero(group, module, n)? })
    }

    /// A primitive `x` with `dx = z`, if one exists.
    pub fn primitive(&self, z: &Cochain) -> Result<Option<Cochain>> {
        if z.degree != self.degree {
            return Err(Error::DimensionMismatch(format!("expected a {}-cochain", self.degree)));
        }
        Ok(self.howell.contains(&z.table).map(|x| Cochain { table: x, ..self.template.clone() }))
    }
}

/// Decide whether a 2-cocycle is a coboundary; the witness `x` with `dx = z`
/// is returned when it is.
pub fn vanishes_in_h2(z: &Cochain, group: &FiniteGroup, module: &CoeffModule) -> Result<Option<Cochain>> {
    if z.degree != 2 {
        return Err(Error::DimensionMismatch("expected a 2-cochain".into()));
    }
    if !coboundary(z, group, module)?.is_zero() {
        return Err(Error::NotCocycle);
    }
    CoboundaryTester::new(group, module, 1)?.primitive(z)
}

/// Generators of the 1-cocycles `Z^1(G, V)` as a `Z/p^s`-module.
pub fn cocycle_generators(group: &FiniteGroup, module: &CoeffModule) -> Result<Vec<Cochain>> {
    let mat = coboundary_matrix(group, module, 1)?;
    let template = Cochain::zero(group, module, 1)?;
    Ok(kernel_generators(&mat).into_iter().map(|t| Cochain { table: t, ..template.clone() }).collect())
}
