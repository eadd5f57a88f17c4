//! Exact quadratic Fourier analysis over `F_p^n` at small scale.
//!
//! Functions on `F_p^n` are dense complex tables. Everything that can be
//! enumerated is enumerated: Gowers norms are computed exactly, quadratic
//! phase searches are exhaustive, and linear-form averages run over the full
//! product space.

pub mod check;
pub mod counting;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod forms;
pub mod harmonic;
pub mod linalg;
pub mod quadave;
pub mod random;
pub mod subspace;
pub mod suites;
pub mod system;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use forms::{bilinear_rank, quad_rank, restrict_form, BilinearForm, QuadraticForm};
pub use linalg::Matrix;
pub use subspace::Subspace;
pub use system::{cs_complexity, square_independent, LinearSystem};
