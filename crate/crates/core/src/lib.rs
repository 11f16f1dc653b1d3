//! Exact twisted KO-theory of finite Δ-complexes through the
//! Atiyah–Hirzebruch spectral sequence, with the cohomology operations that
//! drive its differentials and the computable part of differential KO.

pub mod ahss;
pub mod algebra;
pub mod complex;
pub mod diff_ko;
pub mod error;
pub mod ops;
pub mod verify;

pub use error::{Error, Result};

/// Engine version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
