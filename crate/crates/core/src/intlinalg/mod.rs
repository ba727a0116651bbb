//! Exact integer linear algebra: sparse matrices, Smith normal form, lattice
//! kernels and quotients, and homology of complexes of finitely presented
//! abelian groups.
//!
//! Every algorithm runs first in checked `i64` arithmetic and restarts in
//! arbitrary precision if an intermediate value overflows, so results are
//! always exact.

mod complex;
mod fpgroup;
mod int;
mod lattice;
mod matrix;
mod snf;

pub use complex::{homology_of_fp_complex, induces_isomorphism, FPComplex};
pub use fpgroup::FPAbelianGroup;
pub use lattice::{
    column_lattice_basis, columns_in_lattice, express_in_basis, kernel_basis, quotient_lattice,
};
pub use matrix::SparseIntMatrix;
pub use snf::{invariant_factors, snf, SnfResult};
