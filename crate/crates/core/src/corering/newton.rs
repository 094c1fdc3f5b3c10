//! Newton polygons and the running-minimum valuation sequence.

use serde::{Deserialize, Serialize};

use super::arith::gcd;
use super::poly::PadicPoly;
use super::zmod::{CappedValuation, Valuation};
use crate::{Error, Result};

/// Vertices of a lower convex hull, strictly increasing in `i`, with
/// strictly increasing slopes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, u32)>,
}

/// One edge of a Newton polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: (usize, u32),
    pub end: (usize, u32),
}

impl Segment {
    pub fn length(&self) -> usize {
        self.end.0 - self.start.0
    }

    /// Height lost from left to right (negative if the edge rises).
    pub fn drop(&self) -> i64 {
        self.start.1 as i64 - self.end.1 as i64
    }

    /// `drop / length` in lowest terms, as `(numerator, denominator)`.
    ///
    /// For a polygon of a polynomial this is the valuation of the roots
    /// belonging to the edge.
    pub fn root_valuation(&self) -> (i64, u64) {
        let l = self.length() as u64;
        let d = self.drop();
        let g = gcd(d.unsigned_abs(), l).max(1);
        (d / g as i64, l / g)
    }
}

impl NewtonPolygon {
    pub fn segments(&self) -> Vec<Segment> {
        self.vertices.windows(2).map(|w| Segment { start: w[0], end: w[1] }).collect()
    }

    /// Value of the polygon at abscissa `x`, as an exact fraction `(num, den)`.
    pub fn height_at(&self, x: usize) -> Option<(i64, u64)> {
        let segs = self.segments();
        if self.vertices.len() == 1 {
            return (self.vertices[0].0 == x).then_some((self.vertices[0].1 as i64, 1));
        }
        let s = segs.iter().find(|s| s.start.0 <= x && x <= s.end.0)?;
        let l = s.length() as i64;
        let num = s.start.1 as i64 * l - s.drop() * (x - s.start.0) as i64;
        Some((num, l as u64))
    }
}

/// Lower convex hull of points `(i, v)` with increasing `i`; infinite points
/// are omitted and collinear interior points are not vertices.
pub fn lower_convex_hull(points: &[(usize, Valuation)]) -> Result<NewtonPolygon> {
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::OutOfRange("abscissae must strictly increase".into()));
    }
    if points.last().map_or(true, |p| p.1.is_infinite()) {
        return Err(Error::OutOfRange("last point must be finite".into()));
    }
    let mut hull: Vec<(usize, u32)> = Vec::new();
    for &(i, v) in points {
        let Some(v) = v.finite() else { continue };
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as i64 - a.0 as i64) * (v as i64 - a.1 as i64)
                - (b.1 as i64 - a.1 as i64) * (i as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((i, v));
    }
    Ok(NewtonPolygon { vertices: hull })
}

/// Running minima `z_i = min(z_{i-1}, v_p(a_i))` of the coefficient
/// valuations of a distinguished polynomial, indices `0..=deg`.
///
/// Readings that reach the working precision are reported as `AtLeast(M)`.
pub fn t_sequence(g: &PadicPoly) -> Result<Vec<CappedValuation>> {
    if !g.is_distinguished() {
        return Err(Error::NotDistinguished);
    }
    let deg = g.degree().unwrap();
    let mut out = Vec::with_capacity(deg + 1);
    let mut z: Option<CappedValuation> = None;
    for i in 0..=deg {
        let v = g.valuation_of_coeff(i);
        let next = match z {
            None => v,
            Some(prev) => prev.min(v),
        };
        out.push(next);
        z = Some(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corering::zmod::Modulus;
    use proptest::prelude::*;
    use Valuation::{Finite as F, Infinite};

    #[test]
    fn hull_examples() {
        let pts: Vec<(usize, Valuation)> =
            [(0, 3), (1, 2), (2, 2), (3, 1), (4, 1), (5, 1), (6, 0)].iter().map(|&(i, v)| (i, F(v))).collect();
        assert_eq!(lower_convex_hull(&pts).unwrap().vertices, vec![(0, 3), (1, 2), (3, 1), (6, 0)]);
        let pts = [(0, F(2)), (1, F(1)), (2, F(0))];
        assert_eq!(lower_convex_hull(&pts).unwrap().vertices, vec![(0, 2), (2, 0)]);
        let pts = [(0, Infinite), (1, F(3)), (2, F(0))];
        assert_eq!(lower_convex_hull(&pts).unwrap().vertices, vec![(1, 3), (2, 0)]);
    }

    #[test]
    fn convex_input_is_kept() {
        let pts = [(0, F(3)), (1, F(1)), (2, F(0))];
        assert_eq!(lower_convex_hull(&pts).unwrap().vertices, vec![(0, 3), (1, 1), (2, 0)]);
    }

    #[test]
    fn segment_slopes() {
        let np = NewtonPolygon { vertices: vec![(0, 3), (1, 2), (3, 1), (6, 0)] };
        let slopes: Vec<(i64, u64)> = np.segments().iter().map(|s| s.root_valuation()).collect();
        assert_eq!(slopes, vec![(1, 1), (1, 2), (1, 3)]);
    }

    #[test]
    fn t_sequence_examples() {
        let m = Modulus::new(5, 4).unwrap();
        let g = PadicPoly::from_i128(&[25, 5, 1], m);
        assert_eq!(
            t_sequence(&g).unwrap(),
            vec![CappedValuation::Exact(2), CappedValuation::Exact(1), CappedValuation::Exact(0)]
        );
        let g = PadicPoly::from_i128(&[25, 125, 1], m);
        assert_eq!(
            t_sequence(&g).unwrap(),
            vec![CappedValuation::Exact(2), CappedValuation::Exact(2), CappedValuation::Exact(0)]
        );
        let g = PadicPoly::monomial(1, m);
        assert_eq!(t_sequence(&g).unwrap(), vec![CappedValuation::AtLeast(4), CappedValuation::Exact(0)]);
        assert_eq!(t_sequence(&PadicPoly::from_i128(&[1, 1], m)), Err(Error::NotDistinguished));
    }

    proptest! {
        #[test]
        fn hull_is_lower_and_convex(vals in prop::collection::vec(prop::option::weighted(0.85, 0u32..12), 1..12), last in 0u32..12) {
            let mut pts: Vec<(usize, Valuation)> = vals
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.map_or(Infinite, F)))
                .collect();
            pts.push((pts.len(), F(last)));
            let np = lower_convex_hull(&pts).unwrap();
            let segs = np.segments();
            for w in segs.windows(2) {
                // slope(w0) < slope(w1), slopes being -drop/length
                let (a, b) = (w[0], w[1]);
                prop_assert!(-a.drop() * (b.length() as i64) < -b.drop() * (a.length() as i64));
            }
            for &(i, v) in &pts {
                if let (Some(v), Some((num, den))) = (v.finite(), np.height_at(i)) {
                    prop_assert!(v as i64 * den as i64 >= num);
                }
            }
            let first_finite = pts.iter().find(|p| !p.1.is_infinite()).unwrap().0;
            prop_assert_eq!(np.vertices[0].0, first_finite);
        }
    }
}
