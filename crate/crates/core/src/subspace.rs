//! Subspaces of ℂⁿ carried as orthonormal column bases, their projectors,
//! intersections, and the orthogonal five-part splitting induced by a pair.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, fix_phase, svd_sorted, CMatrix};

/// Orthonormality tolerance enforced on every stored basis.
const BASIS_TOL: f64 = 1e-12;

/// A subspace of ℂⁿ represented by an `n × p` matrix with orthonormal columns.
///
/// `p = 0` (the zero subspace) is an ordinary value.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Span of the columns of `raw`, with rank decided relative to the
    /// largest singular value.
    pub fn orthonormalize(raw: &CMatrix, tol: f64) -> Result<Self> {
        let n = raw.nrows();
        if n == 0 {
            return Err(Error::InvalidInput(
                "ambient dimension must be at least 1".into(),
            ));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "rank tolerance must be positive, got {tol}"
            )));
        }
        if !linalg::is_finite(raw) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        if raw.ncols() == 0 {
            return Ok(Self::zero(n));
        }
        let svd = svd_sorted(raw);
        let smax = svd.sigma.first().copied().unwrap_or(0.0);
        let rank = if smax > 0.0 {
            svd.sigma.iter().take_while(|&&s| s > tol * smax).count()
        } else {
            0
        };
        Ok(Self::from_columns_unchecked(
            svd.u.columns(0, rank).into_owned(),
        ))
    }

    /// Wraps a basis that is already orthonormal (checked to 1e-12).
    pub fn from_orthonormal(basis: CMatrix) -> Result<Self> {
        if basis.nrows() == 0 {
            return Err(Error::InvalidInput(
                "ambient dimension must be at least 1".into(),
            ));
        }
        let defect = linalg::unitarity_defect(&basis);
        if basis.ncols() > basis.nrows() || defect > BASIS_TOL {
            return Err(Error::InvalidInput(format!(
                "columns are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Self::from_columns_unchecked(basis))
    }

    fn from_columns_unchecked(mut basis: CMatrix) -> Self {
        for j in 0..basis.ncols() {
            let mut col = basis.column(j).into_owned();
            fix_phase(&mut col);
            basis.set_column(j, &col);
        }
        Self { basis }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            basis: CMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            basis: CMatrix::identity(n, n),
        }
    }

    /// Span of the listed standard basis vectors `e_i` (0-based).
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self> {
        if let Some(&bad) = axes.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidInput(format!(
                "axis {bad} out of range for ℂ^{n}"
            )));
        }
        let raw = CMatrix::from_fn(n, axes.len(), |r, c| {
            c64(if r == axes[c] { 1.0 } else { 0.0 }, 0.0)
        });
        Self::orthonormalize(&raw, crate::DEFAULT_TOL)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projector `B·B*`.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Subspace {
        let n = self.ambient_dim();
        let (values, vectors) = linalg::hermitian_eigen(&(linalg::identity(n) - self.projector()));
        // eigenvalues of I − P are 0 (on S) and 1 (on S⊥)
        let keep: Vec<usize> = (0..n).filter(|&i| values[i] > 0.5).collect();
        let basis = CMatrix::from_fn(n, keep.len(), |r, c| vectors[(r, keep[c])]);
        Self::from_columns_unchecked(basis)
    }

    /// `M ∩ N` from the singular directions of `B₁*·B₂` with `σ ≥ 1 − tol`.
    pub fn intersect(&self, other: &Subspace, tol: f64) -> Result<Subspace> {
        check_same_ambient(self, other)?;
        let svd = svd_sorted(&(self.basis.adjoint() * &other.basis));
        let k = svd.sigma.iter().take_while(|&&s| s >= 1.0 - tol).count();
        Ok(Self::from_columns_unchecked(
            &self.basis * svd.u.columns(0, k),
        ))
    }

    /// Image `U·S` under a unitary `U`.
    pub fn transform(&self, unitary: &CMatrix) -> Result<Subspace> {
        if unitary.nrows() != self.ambient_dim() || unitary.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim(),
                right: unitary.nrows(),
            });
        }
        Self::from_orthonormal(unitary * &self.basis)
    }

    /// Span of the columns of both subspaces.
    pub fn join(&self, other: &Subspace, tol: f64) -> Result<Subspace> {
        check_same_ambient(self, other)?;
        let mut raw = CMatrix::zeros(self.ambient_dim(), self.dim() + other.dim());
        raw.columns_mut(0, self.dim()).copy_from(&self.basis);
        raw.columns_mut(self.dim(), other.dim())
            .copy_from(&other.basis);
        Self::orthonormalize(&raw, tol)
    }

    /// Gap metric `‖P₁ − P₂‖`.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        check_same_ambient(self, other)?;
        Ok(linalg::op_norm(&(self.projector() - other.projector())))
    }
}

pub(crate) fn check_same_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: a.ambient_dim(),
            right: b.ambient_dim(),
        });
    }
    Ok(())
}

pub fn orthonormalize(raw_columns: &CMatrix, tol: f64) -> Result<Subspace> {
    Subspace::orthonormalize(raw_columns, tol)
}

pub fn projector(s: &Subspace) -> CMatrix {
    s.projector()
}

pub fn complement(s: &Subspace) -> Subspace {
    s.complement()
}

pub fn intersect(s1: &Subspace, s2: &Subspace, tol: f64) -> Result<Subspace> {
    s1.intersect(s2, tol)
}

/// The projectors `P = P_M`, `Q = P_N` together with their sources.
#[derive(Debug, Clone)]
pub struct ProjectorPair {
    pub p: CMatrix,
    pub q: CMatrix,
    pub source_m: Subspace,
    pub source_n: Subspace,
}

impl ProjectorPair {
    pub fn new(m: &Subspace, n: &Subspace) -> Result<Self> {
        check_same_ambient(m, n)?;
        Ok(Self {
            p: m.projector(),
            q: n.projector(),
            source_m: m.clone(),
            source_n: n.clone(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.p.nrows()
    }
}

/// `ℂⁿ = (M∩N) ⊕ (M∩N⊥) ⊕ (M⊥∩N) ⊕ (M⊥∩N⊥) ⊕ R`.
#[derive(Debug, Clone)]
pub struct FivePartDecomposition {
    pub mn: Subspace,
    pub mn_perp: Subspace,
    pub m_perp_n: Subspace,
    pub both_perp: Subspace,
    /// Generic remainder, of dimension `2r`.
    pub r_part: Subspace,
    /// `dim(M∩N)`
    pub a: usize,
    /// `dim(M⊥∩N⊥)`
    pub b: usize,
    /// `dim(M∩N⊥)`
    pub c: usize,
    /// `dim(M⊥∩N)`
    pub d: usize,
    /// Half the dimension of `R`; equals the number of Jordan planes.
    pub r: usize,
}

impl FivePartDecomposition {
    pub fn counts(&self) -> (usize, usize, usize, usize, usize) {
        (self.a, self.b, self.c, self.d, self.r)
    }

    pub fn is_generic(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0 && self.d == 0
    }
}

pub fn five_part_decompose(m: &Subspace, n: &Subspace, tol: f64) -> Result<FivePartDecomposition> {
    check_same_ambient(m, n)?;
    if !(tol.is_finite() && tol > 0.0 && tol < 0.1) {
        return Err(Error::InvalidInput(format!(
            "classification tolerance must lie in (0, 0.1), got {tol}"
        )));
    }
    let m_perp = m.complement();
    let n_perp = n.complement();

    let mn = m.intersect(n, tol)?;
    let mn_perp = m.intersect(&n_perp, tol)?;
    let m_perp_n = m_perp.intersect(n, tol)?;
    let both_perp = m_perp.intersect(&n_perp, tol)?;

    let sum = mn
        .join(&mn_perp, tol)?
        .join(&m_perp_n, tol)?
        .join(&both_perp, tol)?;
    let (a, b, c, d) = (mn.dim(), both_perp.dim(), mn_perp.dim(), m_perp_n.dim());
    if sum.dim() != a + b + c + d {
        return Err(Error::Inconsistent(format!(
            "intersections are not independent: joined dimension {} vs {}",
            sum.dim(),
            a + b + c + d
        )));
    }
    let r_part = sum.complement();
    let total = m.ambient_dim();
    let rest = r_part.dim();
    if rest % 2 != 0 || a + c + rest / 2 != m.dim() || a + d + rest / 2 != n.dim() {
        return Err(Error::Inconsistent(format!(
            "dimension ledger fails for (a,b,c,d,dim R) = ({a},{b},{c},{d},{rest}) with dim M = {}, dim N = {}, n = {total}",
            m.dim(),
            n.dim()
        )));
    }
    Ok(FivePartDecomposition {
        mn,
        mn_perp,
        m_perp_n,
        both_perp,
        r_part,
        a,
        b,
        c,
        d,
        r: rest / 2,
    })
}

pub fn is_generic_position(m: &Subspace, n: &Subspace, tol: f64) -> Result<bool> {
    Ok(five_part_decompose(m, n, tol)?.is_generic())
}

/// `M∩N = M⊥∩N⊥ = {0}` and `dim(M∩N⊥) = dim(M⊥∩N)`.
pub fn is_generalized_generic(m: &Subspace, n: &Subspace, tol: f64) -> Result<bool> {
    let f = five_part_decompose(m, n, tol)?;
    Ok(f.a == 0 && f.b == 0 && f.c == f.d)
}

/// Builds a pair with prescribed interior angles and intersection counts.
///
/// The canonical pair is a direct sum of one 2×2 block per angle
/// (`M = span{e₁}`, `N = span{cos θ e₁ + sin θ e₂}`) followed by `a` shared
/// axes, `b` axes in neither, `c` axes in `M` only and `d` axes in `N` only.
/// The whole pair is then rotated by a seeded Haar unitary.
pub fn synthesize_pair(
    angles: &[f64],
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    seed: u64,
) -> Result<(Subspace, Subspace)> {
    if let Some(bad) = angles.iter().find(|&&t| !(t > 0.0 && t < FRAC_PI_2)) {
        return Err(Error::InvalidInput(format!(
            "angle {bad} not in the open interval (0, π/2)"
        )));
    }
    let k = angles.len();
    let n = a + b + c + d + 2 * k;
    if n == 0 {
        return Err(Error::InvalidInput("requested pair lives in ℂ⁰".into()));
    }
    let p = k + a + c;
    let q = k + a + d;
    let mut bm = CMatrix::zeros(n, p);
    let mut bn = CMatrix::zeros(n, q);

    for (i, &theta) in angles.iter().enumerate() {
        bm[(2 * i, i)] = c64(1.0, 0.0);
        bn[(2 * i, i)] = c64(theta.cos(), 0.0);
        bn[(2 * i + 1, i)] = c64(theta.sin(), 0.0);
    }
    let mut axis = 2 * k;
    let (mut jm, mut jn) = (k, k);
    for _ in 0..a {
        bm[(axis, jm)] = c64(1.0, 0.0);
        bn[(axis, jn)] = c64(1.0, 0.0);
        axis += 1;
        jm += 1;
        jn += 1;
    }
    axis += b;
    for _ in 0..c {
        bm[(axis, jm)] = c64(1.0, 0.0);
        axis += 1;
        jm += 1;
    }
    for _ in 0..d {
        bn[(axis, jn)] = c64(1.0, 0.0);
        axis += 1;
        jn += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = linalg::random_unitary(n, &mut rng);
    let m = Subspace::from_orthonormal(&u * bm)?;
    let nn = Subspace::from_orthonormal(&u * bn)?;
    Ok((m, nn))
}
