//! Classification, normalization and numerical verification of Real
//! structures on primary Hopf surfaces `H_f = (C^2 \ {0}) / <f>`.
//!
//! The crate is organized around the exact algebra of polynomial self-maps of
//! W = C^2 \ {0} ([`polymap`]), validated Wehler normal forms
//! ([`contraction`]), Real-structure parity and constructive normalization
//! ([`realstruct`]), closed-form roots and flows ([`flows`]), the equivariant
//! model charts onto S^1 x S^3 ([`topology`]), Real Picard data ([`picard`])
//! and Real automorphism groups ([`autgroup`]). Seeded sampling and the
//! verification suites backing the `hopf verify` subcommand live in
//! [`sampling`] and [`verify`].

pub mod autgroup;
pub mod chain;
pub mod contraction;
pub mod cx;
pub mod error;
pub mod flows;
pub mod picard;
pub mod polymap;
pub mod realstruct;
pub mod sampling;
pub mod topology;
pub mod verify;

pub use contraction::{classify, is_biholomorphic_pair, Contraction, WehlerClass};
pub use error::{Error, Result};
pub use polymap::PolyMap;
