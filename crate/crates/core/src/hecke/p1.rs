//! The projective line over `Z/N` for prime `N`.

/// `P^1(Z/N)`: index `i < N` is `(1 : i)`, index `N` is `(0 : 1)`.
#[derive(Clone, Debug)]
pub struct P1 {
    n: u64,
    inv: Vec<u32>,
}

impl P1 {
    pub fn new(n: u64) -> Self {
        let mut inv = vec![0u32; n as usize];
        for x in 1..n {
            if inv[x as usize] == 0 {
                let y = crate::corering::arith::inv_mod(x, n).expect("N prime");
                inv[x as usize] = y as u32;
                inv[y as usize] = x as u32;
            }
        }
        P1 { n, inv }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the point `(c : d)`; `(0 : 0)` is not a point.
    #[inline]
    pub fn index(&self, c: i64, d: i64) -> usize {
        let n = self.n as i64;
        let c = c.rem_euclid(n) as u64;
        let d = d.rem_euclid(n) as u64;
        if c == 0 {
            debug_assert!(d != 0, "(0 : 0) is not in P^1");
            self.n as usize
        } else {
            (d * self.inv[c as usize] as u64 % self.n) as usize
        }
    }

    /// A representative `(c, d)` of a point.
    #[inline]
    pub fn point(&self, idx: usize) -> (i64, i64) {
        if idx == self.n as usize {
            (0, 1)
        } else {
            (1, idx as i64)
        }
    }

    /// Right action `(c, d) * [[a, b], [e, f]] = (c a + d e, c b + d f)`.
    #[inline]
    pub fn act(&self, idx: usize, m: [i64; 4]) -> usize {
        let (c, d) = self.point(idx);
        let n = self.n as i64;
        let [a, b, e, f] = m.map(|x| x.rem_euclid(n));
        self.index((c * a + d * e) % n, (c * b + d * f) % n)
    }

    pub fn sigma(&self, idx: usize) -> usize {
        self.act(idx, [0, -1, 1, 0])
    }

    pub fn tau(&self, idx: usize) -> usize {
        self.act(idx, [0, -1, 1, -1])
    }

    /// `(c : d) -> (-c : d)`.
    pub fn star(&self, idx: usize) -> usize {
        self.act(idx, [-1, 0, 0, 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involutions() {
        let p1 = P1::new(37);
        assert_eq!(p1.len(), 38);
        for i in 0..p1.len() {
            let (c, d) = p1.point(i);
            assert_eq!(p1.index(c, d), i);
            assert_eq!(p1.index(5 * c, 5 * d), i);
            assert_eq!(p1.sigma(p1.sigma(i)), i);
            assert_eq!(p1.tau(p1.tau(p1.tau(i))), i);
            assert_eq!(p1.star(p1.star(i)), i);
        }
        assert_eq!(p1.sigma(37), 0);
    }
}
