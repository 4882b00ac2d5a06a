//! Exact computations for equal-rank pairs of compact Lie algebras:
//! multiplets in the representation ring, the cubic Dirac operator on
//! `V ⊗ S` as an explicit rational matrix, its kernel, and the equivariant
//! index of the associated twisted operators.
//!
//! All arithmetic is exact (arbitrary-precision rationals); identities hold
//! literally or the functions report failure.
//!
//! ```
//! use gkrs::rootsystem::{build_root_system, LieType, Weight};
//! use gkrs::subpair::{build_subpair, HSpec};
//! use gkrs::multiplet::{multiplet, harmonic_inverse};
//!
//! let g2 = build_root_system(&LieType::parse("G2").unwrap()).unwrap();
//! let pair = build_subpair(&g2, &HSpec::parse("bds:0").unwrap()).unwrap();
//! let entries = multiplet(&pair, &Weight::from_i64(&[1, 0])).unwrap();
//! assert_eq!(entries.len(), 2);
//! // Each entry inverts back to the weight it came from, with its sign.
//! for e in &entries {
//!     let (sign, lambda) = harmonic_inverse(&pair, &e.mu).unwrap().unwrap();
//!     assert_eq!((sign, lambda), (e.sign, Weight::from_i64(&[1, 0])));
//! }
//! ```

pub mod error;
pub mod ratio;

pub mod matrix;

pub mod rootsystem;
pub mod weylgroup;
pub mod subpair;
pub mod characters;
pub mod multiplet;
pub mod chevalley;
pub mod cliffordspin;
pub mod diracop;
pub mod indexcalc;

pub use error::{Error, Result};
pub use ratio::Rat;
pub use rootsystem::{build_root_system, LieType, RootDatum, Weight};
