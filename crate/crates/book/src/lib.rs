//! The guide in `book/`, compiled so that its examples run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/invariants.md")]
pub mod invariants {}
#[doc = include_str!("../../../book/src/hecke.md")]
pub mod hecke {}
#[doc = include_str!("../../../book/src/massey.md")]
pub mod massey {}
#[doc = include_str!("../../../book/src/sweeps.md")]
pub mod sweeps {}
