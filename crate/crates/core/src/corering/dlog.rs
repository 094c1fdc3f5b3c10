//! Discrete logarithms in `F_N^x` by a full table of generator powers.

use super::arith::{is_prime, pow_mod, prime_factors};
use crate::{Error, Result};

/// `log_g` on `F_N^x` for the smallest generator `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlogTable {
    n: u64,
    generator: u64,
    /// `table[x] = log_g(x)` for `1 <= x < N`; slot 0 is unused.
    table: Vec<u32>,
    /// `powers[k] = g^k mod N`.
    powers: Vec<u32>,
}

impl DlogTable {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// `log_g(x)`, for `x` prime to `N` (reduced mod `N` first).
    pub fn log(&self, x: u64) -> u64 {
        let x = x % self.n;
        assert!(x != 0, "log of zero");
        self.table[x as usize] as u64
    }

    /// `g^k mod N`.
    pub fn exp(&self, k: u64) -> u64 {
        self.powers[(k % (self.n - 1)) as usize] as u64
    }
}

/// Smallest generator of `F_N^x`.
pub fn primitive_root(n: u64) -> Result<u64> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    if n == 2 {
        return Ok(1);
    }
    let factors = prime_factors(n - 1);
    Ok((2..n)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (n - 1) / f, n) != 1))
        .expect("F_N^x is cyclic"))
}

pub fn build_dlog_table(n: u64) -> Result<DlogTable> {
    if !is_prime(n) || n == 2 {
        return Err(Error::NotPrime(n));
    }
    if n >= 1 << 26 {
        return Err(Error::OutOfRange(format!("N = {n} is too large for a full table")));
    }
    let g = primitive_root(n)?;
    let mut table = vec![0u32; n as usize];
    let mut powers = Vec::with_capacity(n as usize - 1);
    let mut x = 1u64;
    for k in 0..n - 1 {
        table[x as usize] = k as u32;
        powers.push(x as u32);
        x = x * g % n;
    }
    Ok(DlogTable { n, generator: g, table, powers })
}

/// Whether `x` is a `q`-th power in `F_N^x`, for `q | N - 1`.
pub fn is_power(x: u64, n: u64, q: u64) -> Result<bool> {
    if q == 0 || (n - 1) % q != 0 {
        return Err(Error::NotDivisor { q, n_minus_one: n - 1 });
    }
    if x % n == 0 {
        return Err(Error::OutOfRange(format!("{x} is not prime to {n}")));
    }
    Ok(pow_mod(x, (n - 1) / q, n) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let t = build_dlog_table(7).unwrap();
        assert_eq!(t.generator(), 3);
        assert_eq!(t.log(3), 1);
        assert_eq!(t.log(2), 2);
        assert_eq!(build_dlog_table(5).unwrap().log(1), 0);
        let t = build_dlog_table(11).unwrap();
        assert_eq!(t.generator(), 2);
        assert_eq!(t.log(10), 5);
        assert!(build_dlog_table(9).is_err());
    }

    #[test]
    fn round_trip_and_injective() {
        for n in [3u64, 5, 7, 11, 181, 337, 3001] {
            let t = build_dlog_table(n).unwrap();
            let mut seen = vec![false; n as usize - 1];
            for x in 1..n {
                let k = t.log(x);
                assert_eq!(pow_mod(t.generator(), k, n), x);
                assert_eq!(t.exp(k), x);
                assert!(!seen[k as usize]);
                seen[k as usize] = true;
            }
        }
    }

    #[test]
    fn powers() {
        assert!(!is_power(227, 337, 7).unwrap());
        assert!(is_power(1, 337, 7).unwrap());
        assert!(is_power(4, 5, 2).unwrap());
        assert!(!is_power(2, 5, 2).unwrap());
        assert!(is_power(3, 337, 5).is_err());
        // Brute force: squares mod 11 are exactly the quadratic residues.
        let squares: Vec<u64> = (1..11u64).map(|x| x * x % 11).collect();
        for x in 1..11 {
            assert_eq!(is_power(x, 11, 2).unwrap(), squares.contains(&x));
        }
    }
}
