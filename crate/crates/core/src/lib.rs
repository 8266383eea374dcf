//! Exact computation of Chevalley-Eilenberg (co)homology dimensions for
//! the truncated Hamiltonian and Poisson Lie p-algebras over GF(p).
//!
//! The pipeline: build a divided-power monomial basis for one of the four
//! families (po, h, h1, h2), tabulate the symplectic Poisson bracket as
//! structure constants, enumerate graded wedge bases C_{k,g}, assemble
//! sparse boundary matrices per (grade, degree) box, and compute exact
//! ranks over GF(p). Three symmetries of the symmetric grading (grade
//! reflection, Poincare duality, and the inner grading element) prune the
//! computation to a small set of representative boxes.

pub mod algebra;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod gfp;
pub mod linalg;
pub mod monomials;

pub use algebra::{AlgebraSpec, Family, Grading, LiePAlgebra};
pub use cohomology::{CohomologyTable, ComputeOptions, PropFlags};
pub use error::{Error, Result};
pub use gfp::PrimeField;
pub use linalg::SparseMatrixFp;
pub use monomials::{AlgebraElement, Monomial};
