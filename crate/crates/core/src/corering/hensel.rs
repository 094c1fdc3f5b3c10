//! Splitting off the distinguished factor of a monic polynomial.

use super::poly::{ext_gcd_fp, PadicPoly};
use crate::{Error, Result};

/// Factor a monic `Q` over `Z/p^M` as `f * u` with `f` monic distinguished of
/// degree `e` (the multiplicity of `y` in `Q mod p`) and `u(0)` a unit.
///
/// Quadratic Hensel lifting from `Q mod p = y^e * u_bar`.
pub fn hensel_split_distinguished(q: &PadicPoly) -> Result<(PadicPoly, PadicPoly)> {
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    let m = q.modulus();
    let fp = m.residue_field();
    let qbar = q.reduce_to(fp);
    let e = (0..).find(|&i| qbar.coeff(i) != 0).expect("monic");
    let n = q.degree().unwrap();
    let (f, u) = if e == 0 {
        (PadicPoly::one(m), q.clone())
    } else if e == n {
        (q.clone(), PadicPoly::one(m))
    } else {
        let h0 = PadicPoly::monomial(e, fp);
        let g0 = qbar.divrem_monic(&h0).0;
        let (one, s0, t0) = ext_gcd_fp(&g0, &h0);
        debug_assert_eq!(one, PadicPoly::one(fp));
        let mut g = g0.lift_to(m);
        let mut h = h0.lift_to(m);
        let mut s = s0.lift_to(m);
        let mut t = t0.lift_to(m);
        let mut prec = 1;
        while prec < m.exp() {
            // Lift g h = Q and s g + t h = 1 from p^prec to p^(2 prec).
            let err = q - &(&g * &h);
            let (qq, r) = (&s * &err).divrem_monic(&h);
            let g_new = &(&g + &(&t * &err)) + &(&qq * &g);
            let h_new = &h + &r;
            let b = &(&(&s * &g_new) + &(&t * &h_new)) - &PadicPoly::one(m);
            let (c, d) = (&s * &b).divrem_monic(&h_new);
            s = &s - &d;
            t = &(&t - &(&t * &b)) - &(&c * &g_new);
            g = g_new;
            h = h_new;
            prec *= 2;
        }
        (h, g)
    };
    assert_eq!(&f * &u, *q, "Hensel split does not reproduce the input");
    assert!(f.is_distinguished() && f.degree() == Some(e), "split factor is not distinguished");
    assert!(m.is_unit(u.coeff(0)), "cofactor has non-unit constant term");
    Ok((f, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corering::zmod::Modulus;
    use proptest::prelude::*;

    #[test]
    fn spec_shapes() {
        let m = Modulus::new(5, 4).unwrap();
        let q = PadicPoly::from_roots(&[5, 1], m);
        let (f, u) = hensel_split_distinguished(&q).unwrap();
        assert_eq!(f, PadicPoly::from_roots(&[5], m));
        assert_eq!(u, PadicPoly::from_roots(&[1], m));

        let y3 = PadicPoly::monomial(3, m);
        let (f, u) = hensel_split_distinguished(&y3).unwrap();
        assert_eq!((f, u), (y3, PadicPoly::one(m)));

        let unit = PadicPoly::from_i128(&[2, 3, 1], m);
        let (f, u) = hensel_split_distinguished(&unit).unwrap();
        assert_eq!(f, PadicPoly::one(m));
        assert_eq!(u, unit);

        assert_eq!(hensel_split_distinguished(&PadicPoly::from_i128(&[1, 2], m)), Err(Error::NotMonic));
    }

    proptest! {
        #[test]
        fn recovers_planted_factors(
            small in prop::collection::vec(-3i128..4, 1..5),
            big in prop::collection::vec(-40i128..40, 0..5),
            exp in 1u32..8,
        ) {
            let m = Modulus::new(7, exp).unwrap();
            // Roots divisible by p give the distinguished factor; unit roots the rest.
            let dist_roots: Vec<i128> = small.iter().map(|r| 7 * r).collect();
            let unit_roots: Vec<i128> = big.iter().map(|r| if r % 7 == 0 { r + 1 } else { *r }).collect();
            let f0 = PadicPoly::from_roots(&dist_roots, m);
            let u0 = PadicPoly::from_roots(&unit_roots, m);
            let (f, u) = hensel_split_distinguished(&(&f0 * &u0)).unwrap();
            prop_assert_eq!(f, f0);
            prop_assert_eq!(u, u0);
        }
    }
}
