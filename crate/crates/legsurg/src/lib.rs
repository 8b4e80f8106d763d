//! Legendrian fronts, rational contact surgery diagrams and their invariants.
//!
//! The crate is organised bottom-up:
//!
//! * [`rational`] and [`linalg`] — exact arithmetic, Smith normal form, signatures;
//! * [`front`] — Legendrian front projections, classical invariants, cables, PD export;
//! * [`surgery`] — contact surgery diagrams, generalized linking matrices, normalization;
//! * [`invariants`] — first homology, Euler class and the d3-invariant;
//! * [`kirby`] — contact Kirby moves and the annulus-twist / RGB constructions;
//! * [`poly`] — Laurent polynomials and the HOMFLY / Conway / Alexander skein engine;
//! * [`slope`] — characterizing-slope obstruction pipelines.

// Matrix code reads most clearly with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod front;
pub mod invariants;
pub mod kirby;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod slope;
pub mod surgery;

pub use error::{Error, Result};
