//! Fundamental groups of totally ramified abelian covers, computed exactly
//! from building data.
//!
//! Given the Galois group `G`, the inertia generators `g_j` of the branch
//! components, a basis of characters and a model of the relevant Picard and
//! cohomology groups, this crate computes the kernel `K` of
//! `π₁(Y) → π₁(X)`, the deck group `G̃` of the lifted cover and the class of
//! the central extension `0 → K → π₁(Y) → π₁(X) → 1`.
//!
//! Modules, bottom up:
//!
//! * [`abgrp`]: finitely generated abelian groups, Smith normal form, linear
//!   systems over `Z` with moduli, tensor products, splitting of sequences.
//! * [`congruence`]: the prime-power lifting solver for character systems and
//!   CRT recombination.
//! * [`cover`]: building data, characters, eigensheaf classes.
//! * [`topology`]: the groups `N`, `K` and `G̃`.
//! * [`decomp`]: decompositions `D = C·M` with columns in `N`.
//! * [`extclass`]: the extension class, its image in `H² ⊗ G̃`, the
//!   uniqueness conditions and cyclic realization.

pub mod abgrp;
pub mod arith;
pub mod congruence;
pub mod cover;
pub mod decomp;
pub mod extclass;
pub mod report;
pub mod topology;

pub use abgrp::{FgAbGroup, GroupElement, Homomorphism, IntMatrix};
pub use num_bigint::BigInt;
pub use report::ValidationReport;
