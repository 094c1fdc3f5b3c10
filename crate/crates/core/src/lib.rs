//! Arithmetic of the Eisenstein ideal in prime level.
//!
//! For a pair of primes `(N, p)` with `p | N - 1` this crate computes
//!
//! * Merel's number `prod i^i (mod N)` and its `p^s`-power status,
//! * the Mazur–Tate zeta element in `(Z/p^s)[(Z/N)^x]` and its order in the
//!   augmentation filtration,
//! * the `Z_p`-rank `e` of the Eisenstein-local cuspidal Hecke algebra, a
//!   distinguished polynomial `f(y)` presenting it, the associated
//!   `t`-sequence, Newton polygon and slope components,
//!
//! together with a small calculus of cochains, cup products and Massey
//! products over finite groups.
//!
//! The modules are layered: [`corering`] holds the scalar, polynomial and
//! linear-algebra substrate over `Z/p^M`; [`invariants`] and [`hecke`] build
//! the number-theoretic quantities on top of it; [`massey`] is independent of
//! both and only uses the linear algebra.

pub mod corering;
mod error;
pub mod hecke;
pub mod invariants;
pub mod massey;

pub use error::{Error, Result};
