//! Principal-angle geometry of two subspaces of ℂⁿ.
//!
//! The crate computes principal angles and vectors, the Jordan planes they
//! span, the orthogonal five-part splitting of ℂⁿ induced by a pair `(M, N)`,
//! and uses those to obtain closed forms for:
//!
//! - the spectra of `P+Q`, `P−Q`, `PQ`, `QP`, `PQ+QP` and `PQ−QP`,
//! - the numerical range of `P+Q` (an interval),
//! - the numerical range of `PQ` (convex hull of elliptic disks),
//! - the skew-Hermitian unitary that carries `(M, N)` onto `(M⊥, N⊥)`.
//!
//! Every closed form has an independent numerical counterpart (a general
//! eigensolver, the support-function method for numerical ranges, a direct
//! maximization for principal angles) so that results can be cross-checked.
//!
//! ```
//! use jordanlens::{principal, subspace};
//!
//! let (m, n) = subspace::synthesize_pair(&[0.3, 0.9], 0, 0, 0, 0, 11).unwrap();
//! let dec = principal::principal_angles(&m, &n, jordanlens::DEFAULT_TOL).unwrap();
//! assert!((dec.angles[0] - 0.3).abs() < 1e-10);
//! assert!((dec.angles[1] - 0.9).abs() < 1e-10);
//! ```

pub mod equivalence;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod numrange;
pub mod principal;
pub mod spectra;
pub mod subspace;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use num_complex::Complex64;
pub use principal::{AngleDecomposition, JordanFrame};
pub use subspace::{FivePartDecomposition, ProjectorPair, Subspace};

/// Default rank / angle classification tolerance.
///
/// An angle is classified zero when `cos θ ≥ 1 − tol` and right when
/// `cos θ ≤ tol`.
pub const DEFAULT_TOL: f64 = 1e-8;
