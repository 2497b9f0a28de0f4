//! Skew-Hadamard matrices from cyclotomic difference families.
//!
//! The crate builds the bordered skew-Hadamard array of order `2(q + 1)` from
//! two unions of cyclotomic classes in GF(q), and certifies the result
//! exactly:
//!
//! * [`field`] builds GF(p^e) with log tables and the cyclotomic classes;
//! * [`group`] provides the additive group, subsets and periodic autocorrelation;
//! * [`shdf`] certifies the difference family condition on the two blocks;
//! * [`hadamard`] develops and assembles the matrix and checks `HH^T = nI`, `H + H^T = 2I`;
//! * [`rank`] computes p-rank fingerprints;
//! * [`autgroup`] verifies the affine automorphism subgroup;
//! * [`sketch`] is a top-k compression codec on the orthogonal transform;
//! * [`manifest`] ties it together with reproducible build configuration and digests.
//!
//! ```
//! use skewhad::field::FieldConfig;
//! use skewhad::hadamard::{construct_from_blocks, gate0_verify};
//! use skewhad::shdf::find_valid_generator;
//!
//! // GF(3) with two classes, D0 = D1 = C_0 = {1}: a skew-Hadamard matrix of order 8.
//! let found = find_valid_generator(&FieldConfig::new(3, 1), 2, &[0], &[0]).unwrap();
//! let h = construct_from_blocks(&found.group, &found.pair.d0, &found.pair.d1).unwrap();
//! assert_eq!(h.n(), 8);
//! assert!(gate0_verify(&h).pass());
//! ```

pub mod autgroup;
mod bits;
pub mod error;
pub mod field;
pub mod group;
pub mod hadamard;
pub mod manifest;
pub mod matrix;
pub mod rank;
pub mod shdf;
pub mod sketch;

pub use error::{Error, Result};
pub use matrix::{BitMatrix, PmMatrix};

// Book chapters are compiled as doctests so the guide cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/difference_families.md")]
    mod difference_families {}
    #[doc = include_str!("../../../book/src/bordered_array.md")]
    mod bordered_array {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/automorphisms.md")]
    mod automorphisms {}
    #[doc = include_str!("../../../book/src/sketch.md")]
    mod sketch {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
