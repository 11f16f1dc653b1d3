//! Exact linear algebra over ℤ and ℤ/2 and the cohomology of complexes.

pub mod cohomology;
pub mod group;
pub mod matrix;
pub mod num_serde;

pub use cohomology::{
    apply_coboundary, coboundary_matrix, Coeff, Cohomology, IntCohomology, Mod2Cohomology, QmodZCochain,
    QmodZCohomology, QmodZCoords, QmodZGroup,
};
pub use group::{AbelianGroup, GroupHom, Subquotient};
pub use matrix::{from_dense, smith_normal_form, to_dense, Euclid, IntMatrix, Snf, SparseMatrix, SparseVec, Track, F2};
