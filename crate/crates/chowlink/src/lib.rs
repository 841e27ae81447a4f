//! Exact intersection numbers on 3-folds fibered over the projective line,
//! elementary links between quadric fibrations and P2-bundles, and
//! normalization of compactifications of affine 3-space to the standard
//! models, with replayable certificates.
//!
//! Runnable tours live in `examples/`:
//!
//! * `cargo run --example intersection_numbers`
//! * `cargo run --example blow_ups`
//! * `cargo run --example surfaces`
//! * `cargo run --example links`
//! * `cargo run --example classify`
//! * `cargo run --example normalize_quadric`
//! * `cargo run --example normalize_p2`
//! * `cargo run --example expressions`
//! * `cargo run --example corpus`

pub mod chow_core;
pub mod cli;
pub mod compactify;
pub mod error;
pub mod exprs;
pub mod links;
pub mod models;
pub mod verify;

pub use error::{Error, Result};
