//! Exact solvability analysis for the n×n×n Rubik's Cube.
//!
//! The crate models states as permutations of the 6n² facets and provides:
//!
//! - [`geometry`]: classification of facets into piece classes and circles,
//!   slot tables, slice depths, and the a/b typing of coupled-edge slots;
//! - [`engine`]: permutations, labelled states, move compilation, induced
//!   piece actions and per-class signs;
//! - [`notation`]: a move-word grammar with inverses, powers, commutators and
//!   slice moves, plus the catalogue of named moves (z, e, w, p, m, ...);
//! - [`codec`]: conversion between labelled states and configuration tuples
//!   (σ, τ, τ_k, ρ_{c_k}, ρ_{e_k}, x, y_k, z), colour projection, and random
//!   assembly under the sticker and mechanical models;
//! - [`law`]: the solvability criterion for labelled configurations of both
//!   parities, and for colour-only states;
//! - [`counting`]: exact configuration-space sizes, orbit counts, group
//!   orders and solvability probabilities;
//! - [`bsgs`]: an independent Schreier–Sims oracle certifying group orders,
//!   pointwise-stabilizer orders and membership;
//! - [`harness`]: executable verification of the theorem-level claims.
//!
//! The verification suites and Monte Carlo estimators run their independent
//! trials through [`exec`], which is backed by rayon when the default
//! `parallel` feature is enabled and falls back to a sequential driver
//! otherwise. Results are identical either way: every trial derives its own
//! RNG stream from the master seed and the trial index.

pub mod bsgs;
pub mod codec;
pub mod counting;
pub mod engine;
pub mod exec;
pub mod geometry;
pub mod harness;
pub mod law;
pub mod notation;

pub use engine::{ColorState, LabelledState, Permutation};
pub use geometry::{build_layout, Face, Gen, Layout, PieceClass, WingType};
