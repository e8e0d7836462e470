//! Exact computations on flow polytopes, order polytopes and the ASM faces
//! that interpolate between them: volumes, Ehrhart counts, triangulations and
//! the bijections linking them.

// matrix and table code reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod asm;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod graph;
pub mod kostant;
pub mod planar;
pub mod polynomial;
pub mod poset;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
