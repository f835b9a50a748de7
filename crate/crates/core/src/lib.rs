//! Exact algebra for a characteristic-free Artin–Schreier theory: cyclotomic
//! integers, presented commutative `Z[ρ]`-algebras, the η-adic operation
//! calculus, cyclic Galois extensions with `σ(θ) = ρθ + 1`, ρ-free descent,
//! and the algebra `xy − ρyx = 1` with its Azumaya locus.

#![allow(clippy::needless_range_loop)]

pub mod certificate;
pub mod cyclotomic;
pub mod descent;
mod error;
pub mod eta_calculus;
pub mod galois;
pub mod identities;
pub mod lattice;
pub mod qweyl;
pub mod ring;

pub use cyclotomic::{compute_eta_data, delta_s, tau_on_cyc, CycInt, EtaData, Prime};
pub use error::{Error, Result};
pub use ring::{BaseDesc, BaseRing, CoeffMap, RingBuilder, RingCtx, RingElem, RingHom};
