//! Elementary invariants of `(N, p, s)`: Merel's number, the Mazur–Tate
//! zeta element and its augmentation order, good primes, and the
//! logarithm-sum identities linking them.

mod lecouturier;
mod merel;
mod zeta;

pub use lecouturier::{lecouturier_check, lecouturier_sums, LecouturierSums};
pub use merel::{is_good_prime, merel_number, merel_report, MerelReport};
pub use zeta::{
    ord_zeta, ord_zeta_full, ord_zeta_sylow, zeta_element, zeta_report, GroupRingElement, ZetaReport,
};

use crate::corering::arith::is_prime;
use crate::corering::zmod::valuation_p;
use crate::{Error, Result};

/// `t = v_p(N - 1)` after checking that `N` and `p` are primes with `p | N - 1`.
pub fn sylow_exponent(n: u64, p: u64) -> Result<u32> {
    if !is_prime(n) || n == 2 {
        return Err(Error::NotPrime(n));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match valuation_p((n - 1) as i128, p).finite() {
        Some(0) | None => Err(Error::NotDivisor { q: p, n_minus_one: n - 1 }),
        Some(t) => Ok(t),
    }
}
