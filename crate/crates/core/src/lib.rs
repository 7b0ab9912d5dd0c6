//! Exact computational character theory for finite permutation groups.
//!
//! This crate computes, with zero numerical error:
//!
//! * ordinary character tables of finite permutation groups
//!   ([`chartab::compute_table`]), using class-algebra eigenvectors over a
//!   prime field lifted back to exact cyclotomic values;
//! * π-partial characters (restrictions of ordinary characters to the
//!   π-elements), their irreducible constituents, decomposition matrices and
//!   lifts ([`partial`]); for a p-solvable group the irreducible
//!   {p}′-partial characters are exactly the irreducible Brauer characters;
//! * the kernel subgroups `L(φ)` and `K(φ)` of a partial character, together
//!   with a battery of cross-checks that pin `K(φ)` down three independent
//!   ways ([`kernels`]);
//! * normal-subgroup structure: the full lattice, the cores `O_π(G)`, relative
//!   cores over a normal subgroup, and π-separability witnesses ([`normal`]).
//!
//! Everything is driven by exact cyclotomic arithmetic ([`cyclo`]), so every
//! equality test in the library is a decision, not an approximation.
//!
//! See the crate examples for end-to-end walkthroughs (`cargo run --example
//! character_table`, `--example brauer_characters`, ...). The `picore` binary
//! exposes the same functionality as a small command line tool.

pub mod arith;
pub mod chartab;
pub mod cli;
pub mod corpus;
pub mod cyclo;
pub mod kernels;
mod linalg;
pub mod normal;
pub mod partial;
pub mod perm;
pub mod pi;
pub mod verify;

pub use chartab::{CharTabError, Character, CharacterTable};
pub use cyclo::{Cyclotomic, CycloError};
pub use kernels::{KernelError, KernelReport};
pub use normal::{NormalError, NormalSubgroup};
pub use partial::{DecompositionMatrix, PartialCharacter, PartialError};
pub use perm::{ConjugacyClasses, Group, GroupError, Permutation};
pub use pi::{PiSpec, PrimeSet};
