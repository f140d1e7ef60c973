//! Exact bar constructions for operads, modules over operads and simplicial
//! cochain algebras, over the rationals and prime fields.

pub mod algebra;
pub mod bar;
pub mod catbar;
pub mod cochains;
pub mod combinat;
pub mod dg;
pub mod error;
pub mod field;
pub mod linalg;
pub mod lincomb;
pub mod modules;
pub mod operad;
pub mod relative;
pub mod right;
pub mod sigma;
pub mod tree;
pub mod verify;

pub use dg::{DegreeWindow, DgMap, DgModule, Keyed};
pub use error::{Error, Result};
pub use field::{CoeffField, Scalar};
pub use linalg::{homology_dimension, kernel_basis, rank, SparseMatrix};
pub use lincomb::LinComb;

/// Caps the global worker pool used for per-degree parallel work. Must be
/// called before any parallel computation runs.
pub fn limit_threads(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("the thread limit must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Invalid(format!("cannot configure the thread pool: {e}")))
}
