//! Decorated nested chains and the three object families they index.
//!
//! A chain `(I_1 ⊊ … ⊊ I_k ⊆ [n], a: I_k → Z_r)` determines
//!
//! * a boundary stratum of the moduli space of `r`-pinwheel curves, modeled by its
//!   dual graph ([`strata`]),
//! * a right coset `⟨t_1, …, t_d⟩·A` of a subgroup of the complex reflection group
//!   `S(r,n)` generated by elements of `T = {s_0, …, s_{n-1}}` ([`cosets`]),
//! * a Δ-face of the `r`-permutohedral complex `Δ^r_n` ([`complex`]).
//!
//! All three dictionaries are dimension- and inclusion-preserving; [`verify`]
//! checks this exhaustively for small `(r, n)` using exact rational and
//! cyclotomic arithmetic only. No floating point is used anywhere.

pub mod chains;
pub mod complex;
pub mod cosets;
pub mod cyclo;
pub mod dot;
pub mod group;
pub mod rational;
pub mod strata;
pub mod verify;

pub use chains::{Chain, ChainError};
pub use complex::{DecoratedSubset, DeltaFace, YCoord, YPoint};
pub use cosets::TCosetHandle;
pub use cyclo::{CycloNum, RootExponent};
pub use group::GenPerm;
pub use rational::Rational;
pub use strata::PinwheelStratum;
