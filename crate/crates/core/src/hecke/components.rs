//! Slope components of a distinguished polynomial.

use serde::{Deserialize, Serialize};

use crate::corering::newton::NewtonPolygon;
use crate::corering::poly::{factor_fp, PadicPoly};

/// One factor of `f` over `Q_p` as far as slopes and residual polynomials
/// can see it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    /// Valuation of the roots, `num / den` in lowest terms.
    pub slope_num: i64,
    pub slope_den: u64,
    pub degree: usize,
    /// `true` when this factor is known to be irreducible over `Q_p`.
    pub resolved: bool,
}

impl Component {
    pub fn slope_string(&self) -> String {
        if self.slope_den == 1 {
            format!("{}", self.slope_num)
        } else {
            format!("{}/{}", self.slope_num, self.slope_den)
        }
    }
}

/// Split `f` along the edges of its Newton polygon, refining each edge by
/// the factorisation of its residual polynomial over `F_p`.
///
/// For an edge of length `L` and drop `h`, with `e' = L / gcd(h, L)`, the
/// residual polynomial has degree `gcd(h, L)`. Each simple irreducible
/// factor of degree `k` gives an irreducible factor of `f` of degree `e' k`;
/// a repeated factor of multiplicity `mu` gives a factor of degree
/// `e' k mu` that is left unresolved.
pub fn component_slopes(np: &NewtonPolygon, f: &PadicPoly) -> Vec<Component> {
    let m = f.modulus();
    let fp = m.residue_field();
    let p = m.p() as u128;
    let mut out = Vec::new();
    for seg in np.segments() {
        let (num, den) = seg.root_valuation();
        let len = seg.length();
        let e1 = den as usize;
        let d = len / e1;
        let h1 = num as u32;
        if d == 1 {
            out.push(Component { slope_num: num, slope_den: den, degree: len, resolved: true });
            continue;
        }
        let mut residual = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let i = seg.start.0 + k * e1;
            let target = seg.start.1 - k as u32 * h1;
            let c = f.coeff(i);
            let val = m.val_u32(c);
            residual.push(if c != 0 && val == target { (c / p.pow(target)) % p } else { 0 });
        }
        let r = PadicPoly::from_raw(residual, fp).make_monic().expect("edge endpoints are units");
        let mut factors = factor_fp(&r);
        factors.sort_by_key(|(g, mu)| (g.degree().unwrap(), *mu));
        for (g, mu) in factors {
            out.push(Component {
                slope_num: num,
                slope_den: den,
                degree: e1 * g.degree().unwrap() * mu,
                resolved: mu == 1,
            });
        }
    }
    out
}
