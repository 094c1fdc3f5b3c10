//! Cochains on finite groups with finite coefficients, cup products,
//! defining systems, Massey powers and products, matrix coordinates of
//! Massey powers, and the unipotent matrices they control.
//!
//! Conventions: `(dc)(g_1..g_{n+1}) = g_1 c(g_2..) + sum (-1)^i c(.., g_i g_{i+1}, ..)
//! + (-1)^{n+1} c(g_1..g_n)` and `(a cup b)(g, h) = a(g) . (g b(h))`. With these,
//! a defining system satisfies `d m_i = sum m_j cup m_{i-j}`, and the
//! matching deformation is `(1 - sum M_j eps^j) rho`.

mod brute;
mod cochain;
mod coords;
mod defining;
mod group;
mod module;
pub mod selftest;
mod unipotent;

pub use brute::{brute_force_power_vanishes, CochainCensus, BRUTE_FORCE_LIMIT};
pub use cochain::{coboundary, cocycle_generators, cup, vanishes_in_h2, CoboundaryTester, Cochain, MAX_DEGREE};
pub use coords::{coordinate, coordinate_obstruction, coordinate_relation, index_shift, CharacterPair, ShiftedSystem};
pub use defining::{massey_power, search_massey_power, DefiningSystem, PowerSearch, ProductSystem};
pub use group::FiniteGroup;
pub use module::CoeffModule;
pub use selftest::{run_selftest, SelftestCheck, SelftestReport};
pub use unipotent::{
    deformation_is_homomorphism, is_homomorphism, unipotent_concatenation, unipotent_matrices, MatrixTable,
};
