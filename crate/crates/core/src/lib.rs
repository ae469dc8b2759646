//! Element-order statistics for extraspecial-type p-groups.
//!
//! The crate has three layers:
//!
//! - [`group_model`] builds explicit finite groups (cyclic, dihedral,
//!   quaternion, Heisenberg and modular atoms, direct products, central
//!   products) with exact element-order queries, and [`families`] names the
//!   twelve classification families and realizes them from those atoms.
//! - [`order_stats`] evaluates the closed-form censuses, ψ (the sum of
//!   element orders) and cyclic-subgroup counts, while [`oracle`] recomputes
//!   everything by brute force on the realized models so the formulas and the
//!   models check each other.
//! - [`cdeg`] handles cyclicity degrees |C(G)|/|L(G)|: the closed form for
//!   modular groups, multiplicativity over coprime products, and a greedy
//!   scan that approximates any target degree in (0, 1] from above by a
//!   finite product of (p+1)/(p+2) factors over distinct odd primes.
//!
//! All counting is exact: big integers for censuses and ψ, big rationals for
//! cyclicity degrees. The `extraspecial` binary exposes the same operations
//! on the command line.

pub mod arith;
pub mod cdeg;
pub mod families;
pub mod fixtures;
pub mod group_model;
pub mod oracle;
pub mod order_stats;

pub use cdeg::{approximate_cdeg, cdeg_modular, cdeg_product, odd_primes, PrimeSelection};
pub use families::{FamilyKind, FamilySpec, GroupStats};
pub use group_model::{Atom, GroupElement, GroupModel};
pub use oracle::{census_bruteforce, enumerate_lattice, omega1_size, verify_family, LatticeReport};
pub use order_stats::{
    closed_form_census, cyclic_subgroup_counts, group_stats, n2_recurrence_step,
    np_direct_product, psi_closed_form, OrderCensus,
};
