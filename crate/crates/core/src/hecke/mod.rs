//! Modular symbols of prime level and the Eisenstein-local cuspidal Hecke
//! algebra: its rank, a presenting distinguished polynomial, the
//! `t`-sequence, the Newton polygon and its slope components.

mod components;
mod eisenstein;
mod heilbronn;
mod manin;
mod operators;
mod p1;

pub use heilbronn::merel_heilbronn;
pub use manin::{genus_x0, ClassExpr, ManinSpace, Sign};
pub use operators::{apply_hecke_cuspidal, hecke_matrix, hecke_matrix_full, HeckeMatrix};
pub use p1::P1;
pub use components::{component_slopes, Component};
pub use eisenstein::{
    eisenstein_local_factor, rank_consistency_check, smallest_good_prime, two_smallest_good_primes, Diagnostics,
    EisensteinLocal, EisensteinOptions, EisensteinReport, GeneratorCheck, RankConsistency, GENERATOR_CHECK_BOUND,
    GOOD_PRIME_SEARCH_BOUND, ISOLATION_PRIME_CAP,
};
