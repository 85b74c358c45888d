//! Exact Frobenius-Schreier-Sims decomposition of finite-dimensional
//! associative algebras acting on (possibly unfaithful) modules.
pub mod algebra;
pub mod error;
pub mod factor;
pub mod field;
pub mod fss;
pub mod idempotents;
pub mod io;
pub mod linalg;
pub mod meataxe;
pub mod oracle;
pub mod perm;
pub mod poly;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::{Matrix, Subspace, Vector, Word};
