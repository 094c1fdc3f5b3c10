//! The Eisenstein-local cuspidal Hecke algebra at a prime `p` dividing
//! `N - 1`: its rank `e`, a distinguished polynomial presenting it, and the
//! invariants read off that polynomial.
//!
//! Pipeline: modular symbols with sign `+1` over `Z/p^M`, `Y = T_ell - ell - 1`
//! on the cuspidal part for a good prime `ell`, the distinguished factor
//! `f_ell` of its characteristic polynomial, the kernel `W` of `f_ell(Y)`, and
//! then the generalized kernels of `T_q - q - 1` for further primes `q` to cut
//! `W` down to the Eisenstein-local summand. `f` is the characteristic
//! polynomial of `Y` on that summand.

use serde::{Deserialize, Serialize};

use super::components::{component_slopes, Component};
use super::manin::{ManinSpace, Sign};
use super::operators::{apply_hecke_cuspidal, hecke_matrix};
use crate::corering::arith::{is_prime, primes_below};
use crate::corering::charpoly::{berkowitz_charpoly, hessenberg_charpoly};
use crate::corering::hensel::hensel_split_distinguished;
use crate::corering::howell::howell_membership;
use crate::corering::matrix::ZMatrix;
use crate::corering::newton::{lower_convex_hull, t_sequence, NewtonPolygon};
use crate::corering::poly::PadicPoly;
use crate::corering::zmod::{valuation_p, CappedValuation, Modulus, Valuation};
use crate::invariants::{is_good_prime, sylow_exponent};
use crate::{Error, Result};

/// How far to look for a good prime before giving up.
pub const GOOD_PRIME_SEARCH_BOUND: u64 = 10_000;

/// Largest prime used to isolate the Eisenstein-local summand.
pub const ISOLATION_PRIME_CAP: u64 = 100;

/// Primes below this bound are tested by [`EisensteinLocal::generator_check`]
/// when a report is built.
pub const GENERATOR_CHECK_BOUND: u64 = 30;

#[derive(Clone, Debug, Default)]
pub struct EisensteinOptions {
    /// Use this prime for `T_ell`. Must be good.
    pub ell: Option<u64>,
    /// Working precision `M`; defaults to `v_p(N - 1) + 3`.
    pub precision: Option<u32>,
    /// Isolation primes are taken below `min(bound, (N + 1) / 6)`.
    pub isolation_bound: Option<u64>,
}

/// Whether `T_ell - ell - 1` generates the Eisenstein ideal of the local
/// algebra, compared against the good-prime criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub ell: u64,
    pub generates: bool,
    pub good: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub cuspidal_dim: usize,
    /// Degree of the distinguished factor of the characteristic polynomial
    /// of `T_ell - ell - 1`.
    pub d_ell: usize,
    /// Dimension of the generalized kernel of `T_ell - ell - 1` modulo `p`,
    /// computed by ranks.
    pub d_ell_mod_p: usize,
    /// Whether the iterated kernel had stabilised at `d_ell` steps.
    pub kernel_stable: bool,
    /// `d_ell - e`: non-Eisenstein maximal ideals sharing the residue of
    /// `T_ell` and removed by isolation.
    pub contamination: usize,
    pub f0_valuation: CappedValuation,
    /// Primes whose Hecke operator shrank the candidate summand.
    pub isolation_primes: Vec<u64>,
    pub generator_checks: Vec<GeneratorCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinReport {
    pub n: u64,
    pub p: u64,
    /// `v_p(N - 1)`.
    pub t: u32,
    pub ell: Option<u64>,
    pub precision: u32,
    pub e: usize,
    /// Coefficients of `f`, constant term first, reduced mod `p^precision`.
    pub f: Vec<u64>,
    /// `t_1, ..., t_{e+1}` for `g = y f`.
    pub t_seq: Vec<CappedValuation>,
    /// Lower hull of the points `(i - 1, t_i)`.
    pub newton_polygon: NewtonPolygon,
    pub components: Vec<Component>,
    pub diagnostics: Diagnostics,
}

impl EisensteinReport {
    fn trivial(n: u64, p: u64) -> Self {
        EisensteinReport {
            n,
            p,
            t: 0,
            ell: None,
            precision: 0,
            e: 0,
            f: vec![1],
            t_seq: vec![CappedValuation::Exact(0)],
            newton_polygon: NewtonPolygon { vertices: vec![(0, 0)] },
            components: Vec::new(),
            diagnostics: Diagnostics {
                cuspidal_dim: 0,
                d_ell: 0,
                d_ell_mod_p: 0,
                kernel_stable: true,
                contamination: 0,
                f0_valuation: CappedValuation::Exact(0),
                isolation_primes: Vec::new(),
                generator_checks: Vec::new(),
            },
        }
    }

    /// `f` as a polynomial over `Z/p^precision`.
    pub fn polynomial(&self) -> Result<PadicPoly> {
        if self.e == 0 {
            return Ok(PadicPoly::one(Modulus::new(self.p, 1)?));
        }
        let m = Modulus::new(self.p, self.precision)?;
        Ok(PadicPoly::from_raw(self.f.iter().map(|&c| c as u128).collect(), m))
    }

    /// Least `i >= 1` with `t_i = 0`.
    pub fn first_zero(&self) -> Option<usize> {
        self.t_seq.iter().position(|v| *v == CappedValuation::Exact(0)).map(|i| i + 1)
    }
}

/// A free `Z/p^M`-submodule of the cuspidal symbols, with a coordinate map.
struct LocalBasis {
    vectors: Vec<Vec<u64>>,
    rows: Vec<usize>,
    section_inv: ZMatrix,
}

impl LocalBasis {
    fn new(vectors: Vec<Vec<u64>>, m: Modulus) -> Result<Self> {
        let d = vectors.len();
        let g = vectors.first().map_or(0, |v| v.len());
        let wt = ZMatrix::from_fn(d, g, m, |i, j| vectors[i][j] as i128)?;
        let el = wt.unit_pivot_eliminate();
        if el.pivots.len() != d {
            return Err(Error::NonFreeQuotient("local summand is not a free direct summand".into()));
        }
        let rows: Vec<usize> = el.pivots.iter().map(|&(_, j)| j).collect();
        let section = ZMatrix::from_fn(d, d, m, |a, b| vectors[b][rows[a]] as i128)?;
        let section_inv = section.inverse().expect("unit pivots give an invertible minor");
        Ok(LocalBasis { vectors, rows, section_inv })
    }

    fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Matrix of an operator on this module, given the images of the basis.
    /// Errors if some image leaves the module.
    fn matrix_of(&self, images: &[Vec<u64>], m: Modulus) -> Result<ZMatrix> {
        let d = self.dim();
        let mut out = ZMatrix::zeros(d, d, m)?;
        let q = m.q();
        for (j, img) in images.iter().enumerate() {
            let picked: Vec<u64> = self.rows.iter().map(|&r| img[r]).collect();
            let c = self.section_inv.mul_vec(&picked);
            for (i, &x) in c.iter().enumerate() {
                out.set(i, j, x);
            }
            for (r, &target) in img.iter().enumerate() {
                let mut acc = 0u128;
                for (k, v) in self.vectors.iter().enumerate() {
                    acc = (acc + c[k] as u128 * v[r] as u128) % q;
                }
                if acc != target as u128 {
                    return Err(Error::Mismatch("a Hecke operator does not preserve the local summand".into()));
                }
            }
        }
        Ok(out)
    }

    /// The submodule spanned by combinations with the given coordinates.
    fn sub(&self, coords: &[Vec<u64>], m: Modulus) -> Result<Self> {
        let g = self.vectors[0].len();
        let q = m.q();
        let vectors = coords
            .iter()
            .map(|c| {
                (0..g)
                    .map(|r| {
                        let mut acc = 0u128;
                        for (k, v) in self.vectors.iter().enumerate() {
                            acc = (acc + c[k] as u128 * v[r] as u128) % q;
                        }
                        acc as u64
                    })
                    .collect()
            })
            .collect();
        LocalBasis::new(vectors, m)
    }
}

/// A finished computation: the report plus what is needed to test further
/// Hecke operators against it.
pub struct EisensteinLocal {
    report: EisensteinReport,
    space: Option<ManinSpace>,
    basis: Option<LocalBasis>,
    y_local: Option<ZMatrix>,
}

fn distinguished_part(b: &ZMatrix) -> Result<PadicPoly> {
    let q = if b.rows() > 64 { hessenberg_charpoly(b) } else { berkowitz_charpoly(b) };
    Ok(hensel_split_distinguished(&q)?.0)
}

fn reduce_mod_p(a: &ZMatrix) -> ZMatrix {
    a.reduce_to(a.modulus().residue_field()).expect("p fits a word")
}

/// Smallest good prime for `(N, p)`.
pub fn smallest_good_prime(n: u64, p: u64) -> Result<u64> {
    primes_below(GOOD_PRIME_SEARCH_BOUND)
        .into_iter()
        .find(|&l| is_good_prime(l, n, p))
        .ok_or(Error::NoGoodPrime { n, p, bound: GOOD_PRIME_SEARCH_BOUND })
}

/// The two smallest good primes for `(N, p)`.
pub fn two_smallest_good_primes(n: u64, p: u64) -> Result<(u64, u64)> {
    let mut it = primes_below(GOOD_PRIME_SEARCH_BOUND).into_iter().filter(|&l| is_good_prime(l, n, p));
    match (it.next(), it.next()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::NoGoodPrime { n, p, bound: GOOD_PRIME_SEARCH_BOUND }),
    }
}

/// Eisenstein-local invariants of level `N` at `p` with default options.
pub fn eisenstein_local_factor(n: u64, p: u64) -> Result<EisensteinReport> {
    Ok(EisensteinLocal::compute(n, p, &EisensteinOptions::default())?.report)
}

impl EisensteinLocal {
    pub fn compute(n: u64, p: u64, opts: &EisensteinOptions) -> Result<Self> {
        if !is_prime(n) {
            return Err(Error::NotPrime(n));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p <= 3 {
            return Err(Error::PrimeTooSmall(p));
        }
        let t = match valuation_p((n - 1) as i128, p) {
            Valuation::Finite(0) => {
                return Ok(EisensteinLocal { report: EisensteinReport::trivial(n, p), space: None, basis: None, y_local: None });
            }
            Valuation::Finite(t) => t,
            Valuation::Infinite => unreachable!("N > 1"),
        };
        debug_assert_eq!(sylow_exponent(n, p)?, t);
        let precision = opts.precision.unwrap_or(t + 3);
        if precision <= t {
            return Err(Error::PrecisionExhausted(format!("precision {precision} must exceed v_p(N - 1) = {t}")));
        }
        let ell = match opts.ell {
            Some(l) => {
                if !is_prime(l) || !is_good_prime(l, n, p) {
                    return Err(Error::NotGoodPrime { ell: l, n, p });
                }
                l
            }
            None => smallest_good_prime(n, p)?,
        };
        let m = Modulus::new(p, precision)?;
        let space = ManinSpace::new(n, m, Sign::Plus)?;
        let g = space.cuspidal_dim();

        let y = hecke_matrix(&space, ell)?.matrix.add_scalar(-((ell + 1) as i128));
        let (f_ell, _) = hensel_split_distinguished(&hessenberg_charpoly(&y))?;
        let d_ell = f_ell.degree().unwrap();
        if d_ell == 0 {
            return Err(Error::Mismatch(format!("T_{ell} - {ell} - 1 is invertible although p | N - 1")));
        }
        let kill = y.eval_poly(&f_ell)?;
        let kill_bar = reduce_mod_p(&kill);
        let y_bar = reduce_mod_p(&y);
        let rank = kill_bar.rank_mod_p();
        let kernel_stable = kill_bar.mul(&y_bar)?.rank_mod_p() == rank;
        let d_ell_mod_p = g - rank;

        let mut basis = LocalBasis::new(kill.free_kernel()?, m)?;
        let sturm = (n + 1) / 6;
        let cap = opts.isolation_bound.unwrap_or(ISOLATION_PRIME_CAP).min(sturm);
        let mut isolation_primes = Vec::new();
        for q in primes_below(cap + 1) {
            if q == n || q == ell {
                continue;
            }
            let images = apply_hecke_cuspidal(&space, q, &basis.vectors)?;
            let b = basis.matrix_of(&images, m)?.add_scalar(-((q + 1) as i128));
            let fq = distinguished_part(&b)?;
            let dq = fq.degree().unwrap();
            if dq == basis.dim() {
                continue;
            }
            if dq == 0 {
                return Err(Error::Mismatch(format!("T_{q} - {q} - 1 is invertible on the local summand")));
            }
            let coords = b.eval_poly(&fq)?.free_kernel()?;
            basis = basis.sub(&coords, m)?;
            isolation_primes.push(q);
        }
        let e = basis.dim();
        let y_images: Vec<Vec<u64>> = basis.vectors.iter().map(|v| y.mul_vec(v)).collect();
        let y_local = basis.matrix_of(&y_images, m)?;
        let f = berkowitz_charpoly(&y_local);
        if !f.is_distinguished() {
            return Err(Error::Mismatch("Y is not topologically nilpotent on the local summand".into()));
        }
        if e == d_ell && f != f_ell {
            return Err(Error::Mismatch("local characteristic polynomial differs from f_ell".into()));
        }
        let g_poly = f.shift(1);
        let full = t_sequence(&g_poly)?;
        let t_seq: Vec<CappedValuation> = full[1..].to_vec();
        if let Some(i) = t_seq.iter().position(|v| !v.is_exact()) {
            return Err(Error::PrecisionExhausted(format!("t_{} reached the working precision {precision}", i + 1)));
        }
        let pts: Vec<(usize, Valuation)> =
            t_seq.iter().enumerate().map(|(i, v)| (i, Valuation::Finite(v.lower_bound()))).collect();
        let newton_polygon = lower_convex_hull(&pts)?;
        let components = component_slopes(&newton_polygon, &f);
        let report = EisensteinReport {
            n,
            p,
            t,
            ell: Some(ell),
            precision,
            e,
            f: f.raw().iter().map(|&c| c as u64).collect(),
            t_seq,
            newton_polygon,
            components,
            diagnostics: Diagnostics {
                cuspidal_dim: g,
                d_ell,
                d_ell_mod_p,
                kernel_stable,
                contamination: d_ell - e,
                f0_valuation: m.valuation(f.coeff(0)),
                isolation_primes,
                generator_checks: Vec::new(),
            },
        };
        let mut local = EisensteinLocal { report, space: Some(space), basis: Some(basis), y_local: Some(y_local) };
        let mut checks = Vec::new();
        for q in primes_below(GENERATOR_CHECK_BOUND) {
            if q == n {
                continue;
            }
            let c = local.generator_check(q)?;
            if c.generates != c.good {
                return Err(Error::Mismatch(format!(
                    "T_{q} - {q} - 1 {} the Eisenstein ideal but the good-prime test says {}",
                    if c.generates { "generates" } else { "does not generate" },
                    c.good
                )));
            }
            checks.push(c);
        }
        local.report.diagnostics.generator_checks = checks;
        Ok(local)
    }

    pub fn report(&self) -> &EisensteinReport {
        &self.report
    }

    pub fn into_report(self) -> EisensteinReport {
        self.report
    }

    /// Matrix of `T_ell - ell - 1` on the local summand, in the basis where
    /// `Y` has characteristic polynomial `f`.
    pub fn local_operator(&self, ell: u64) -> Result<ZMatrix> {
        let (Some(space), Some(basis)) = (&self.space, &self.basis) else {
            return Err(Error::OutOfRange("the local algebra is zero".into()));
        };
        let m = space.modulus();
        let images = apply_hecke_cuspidal(space, ell, &basis.vectors)?;
        Ok(basis.matrix_of(&images, m)?.add_scalar(-((ell + 1) as i128)))
    }

    /// Decide whether `T_ell - ell - 1` generates the Eisenstein ideal.
    ///
    /// Writes it as `h(y)` with `deg h < e`, then as `y w(y)` modulo `f`, and
    /// tests whether `w(0)` is a unit.
    pub fn generator_check(&self, ell: u64) -> Result<GeneratorCheck> {
        let r = &self.report;
        let good = is_good_prime(ell, r.n, r.p);
        let y = self.y_local.as_ref().ok_or_else(|| Error::OutOfRange("the local algebra is zero".into()))?;
        let m = y.modulus();
        let e = r.e;
        let b = self.local_operator(ell)?;
        let mut powers = vec![ZMatrix::identity(e, m)?];
        for k in 1..e {
            powers.push(powers[k - 1].mul(y)?);
        }
        let a = ZMatrix::from_fn(e * e, e, m, |idx, k| powers[k].get(idx / e, idx % e) as i128)?;
        let fp = m.residue_field();
        if reduce_mod_p(&a).rank_mod_p() != e {
            return Err(Error::Mismatch("powers of Y are dependent modulo p; the local algebra is not monogenic".into()));
        }
        let target: Vec<u64> = (0..e * e).map(|idx| b.get(idx / e, idx % e)).collect();
        let c = howell_membership(&a, &target)
            .ok_or_else(|| Error::Mismatch(format!("T_{ell} is not a polynomial in Y on the local summand")))?;
        let f = self.report.polynomial()?;
        let t = r.t;
        let c0 = c[0] as u128;
        if m.val_u32(c0) < t {
            return Err(Error::Mismatch(format!("T_{ell} - {ell} - 1 does not lie in the Eisenstein ideal")));
        }
        let low = m.with_exp(m.exp() - t)?;
        let gamma = low.mul(low.reduce_i128((c0 / m.p_pow(t)) as i128), {
            let f0 = f.coeff(0) / m.p_pow(t);
            low.inv(f0 % low.q()).expect("v_p(f(0)) = t")
        });
        let c1 = if e > 1 { c[1] as u128 } else { 0 };
        let k0 = fp.sub(c1 % fp.q(), fp.mul(gamma % fp.q(), f.coeff(1) % fp.q()));
        Ok(GeneratorCheck { ell, generates: k0 != 0, good })
    }
}

/// Individual outcomes of the rank and valuation consistency checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankConsistency {
    /// `v_p(f(0)) = v_p(N - 1)`.
    pub constant_term: bool,
    /// `t_1 = v_p(N - 1)`.
    pub first_term: bool,
    /// `t_{e+1} = 0`.
    pub last_term: bool,
    /// The iterated kernel of `T_ell - ell - 1` modulo `p` has stabilised at
    /// dimension `deg f_ell`.
    pub kernel_dimension: bool,
    /// `e <= deg f_ell`.
    pub rank_bound: bool,
}

impl RankConsistency {
    pub fn ok(&self) -> bool {
        self.constant_term && self.first_term && self.last_term && self.kernel_dimension && self.rank_bound
    }
}

pub fn rank_consistency_check(report: &EisensteinReport) -> RankConsistency {
    let d = &report.diagnostics;
    let t = CappedValuation::Exact(report.t);
    RankConsistency {
        constant_term: d.f0_valuation == t,
        first_term: report.t_seq.first() == Some(&t),
        last_term: report.t_seq.last() == Some(&CappedValuation::Exact(0)),
        kernel_dimension: d.kernel_stable && d.d_ell_mod_p == d.d_ell,
        rank_bound: report.e <= d.d_ell,
    }
}
