//! Thin numeric substrate for dense complex matrices.
//!
//! Matrices are `nalgebra` types throughout the crate; the decompositions
//! (SVD, Hermitian eigensolver, general eigenvalues, QR) are delegated to
//! `faer`. The geometry lives elsewhere.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `⟨x, y⟩ = Σ xᵢ ȳᵢ`, linear in the first argument.
#[inline]
pub fn inner(x: &CVector, y: &CVector) -> Complex64 {
    y.dotc(x)
}

/// Rank-one operator `x ⊗ y*`, i.e. `f ↦ ⟨f, y⟩ x`.
pub fn outer(x: &CVector, y: &CVector) -> CMatrix {
    x * y.adjoint()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Thin SVD with singular values sorted in descending order.
#[derive(Debug, Clone)]
pub struct SortedSvd {
    /// Left singular vectors, `rows × k`.
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns, `cols × k`.
    pub v: CMatrix,
}

pub fn svd_sorted(a: &CMatrix) -> SortedSvd {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return SortedSvd {
            u: CMatrix::zeros(rows, 0),
            sigma: Vec::new(),
            v: CMatrix::zeros(cols, 0),
        };
    }
    // faer returns singular values in non-increasing order
    let svd = to_faer(a).thin_svd().expect("SVD failed to converge");
    let k = rows.min(cols);
    let (fu, fs, fv) = (svd.U(), svd.S().column_vector(), svd.V());
    SortedSvd {
        u: CMatrix::from_fn(rows, k, |r, c| fu[(r, c)]),
        sigma: (0..k).map(|i| fs[i].re).collect(),
        v: CMatrix::from_fn(cols, k, |r, c| fv[(r, c)]),
    }
}

fn to_faer(a: &CMatrix) -> Mat<Complex64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Largest singular value (operator 2-norm). Zero for empty matrices.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    svd_sorted(a).sigma[0]
}

/// Eigen-decomposition of the Hermitian part of `h`, eigenvalues ascending.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let sym = to_faer(&(h + h.adjoint()).scale(0.5));
    let eig = sym
        .self_adjoint_eigen(Side::Lower)
        .expect("Hermitian eigensolver failed to converge");
    let (fs, fu) = (eig.S().column_vector(), eig.U());
    let values = (0..n).map(|i| fs[i].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| fu[(r, c)]);
    (values, vectors)
}

/// Eigenvalues of an arbitrary square complex matrix (Hessenberg QR, no
/// structure assumed).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidInput(format!(
            "eigenvalues of a non-square {}x{} matrix",
            n,
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    to_faer(a)
        .eigenvalues()
        .map_err(|_| Error::NoConvergence(n))
}

/// Rotate `col` so that its largest-magnitude entry is real and positive.
///
/// Returns the applied phase factor (unit modulus) so callers can rotate
/// companion vectors by the same amount.
pub fn fix_phase(col: &mut CVector) -> Complex64 {
    let mut best = 0usize;
    let mut best_abs = -1.0;
    for (i, z) in col.iter().enumerate() {
        let a = z.norm();
        // ties resolve to the first index, with slack for roundoff
        if a > best_abs * (1.0 + 1e-12) {
            best = i;
            best_abs = a;
        }
    }
    if best_abs <= 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let z = col[best];
    let phase = z.conj() / z.norm();
    for e in col.iter_mut() {
        *e *= phase;
    }
    col[best] = Complex64::new(col[best].re, 0.0);
    phase
}

/// Haar-distributed random unitary: QR of a complex Ginibre matrix with the
/// diagonal phases of `R` folded back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let g = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    });
    let qr = to_faer(&g).qr();
    let (fq, fr) = (qr.compute_Q(), qr.R());
    let phase = |j: usize| {
        let d = fr[(j, j)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c64(1.0, 0.0)
        }
    };
    CMatrix::from_fn(n, n, |i, j| fq[(i, j)] * phase(j))
}

/// Operator-norm distance of `a* a` from the identity.
pub fn unitarity_defect(a: &CMatrix) -> f64 {
    op_norm(&(a.adjoint() * a - identity(a.ncols())))
}

pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
