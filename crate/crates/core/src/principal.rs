//! Principal angles and vectors, Jordan planes, and the four-vector frames.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{c64, fix_phase, inner, svd_sorted, CMatrix, CVector};
use crate::subspace::{check_same_ambient, five_part_decompose, Subspace};
use num_complex::Complex64;

/// Sorted principal angles of a pair `(M, N)` with matched principal vectors.
#[derive(Debug, Clone)]
pub struct AngleDecomposition {
    /// Ascending, in `[0, π/2]`; length `q = min(dim M, dim N)`.
    pub angles: Vec<f64>,
    /// Principal vectors of `M`, `n × q`.
    pub u_vectors: CMatrix,
    /// Principal vectors of `N`, `n × q`.
    pub v_vectors: CMatrix,
    pub n_zero: usize,
    pub n_interior: usize,
    pub n_right: usize,
    pub tol: f64,
}

impl AngleDecomposition {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Smallest principal angle θ₁; `None` when `q = 0`.
    pub fn dixmier(&self) -> Option<f64> {
        self.angles.first().copied()
    }

    /// Smallest non-zero principal angle; `None` when every angle is zero.
    pub fn friedrichs(&self) -> Option<f64> {
        self.angles.get(self.n_zero).copied()
    }

    pub fn u(&self, k: usize) -> CVector {
        self.u_vectors.column(k).into_owned()
    }

    pub fn v(&self, k: usize) -> CVector {
        self.v_vectors.column(k).into_owned()
    }

    /// Indices of the angles strictly inside `(0, π/2)`.
    pub fn interior_indices(&self) -> std::ops::Range<usize> {
        self.n_zero..self.n_zero + self.n_interior
    }
}

/// Principal angles via the SVD of the cross-Gram matrix `B_M*·B_N`.
///
/// Each angle is evaluated as `atan2(‖(I − P_M) v_k‖, σ_k)`, which keeps both
/// tiny and near-right angles at full relative accuracy; `σ_k` alone loses
/// half the digits near zero.
pub fn principal_angles(m: &Subspace, n: &Subspace, tol: f64) -> Result<AngleDecomposition> {
    check_same_ambient(m, n)?;
    let dim = m.ambient_dim();
    let bm = m.basis();
    let bn = n.basis();
    let svd = svd_sorted(&(bm.adjoint() * bn));
    let q = svd.sigma.len();

    let u_all = bm * &svd.u;
    let v_all = bn * &svd.v;

    let mut items: Vec<(f64, CVector, CVector)> = (0..q)
        .map(|k| {
            let mut u = u_all.column(k).into_owned();
            let mut v = v_all.column(k).into_owned();
            // make ⟨u, v⟩ real non-negative
            let uv = inner(&u, &v);
            if uv.norm() > 0.0 {
                v *= uv / uv.norm();
            }
            let phase = fix_phase(&mut u);
            v *= phase;

            let cos = svd.sigma[k].clamp(0.0, 1.0);
            let resid = &v - bm * (bm.adjoint() * &v);
            let theta = resid.norm().atan2(cos).clamp(0.0, FRAC_PI_2);
            (theta, u, v)
        })
        .collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut u_vectors = CMatrix::zeros(dim, q);
    let mut v_vectors = CMatrix::zeros(dim, q);
    let mut angles = Vec::with_capacity(q);
    for (k, (theta, u, v)) in items.into_iter().enumerate() {
        u_vectors.set_column(k, &u);
        v_vectors.set_column(k, &v);
        angles.push(theta);
    }
    let n_zero = angles.iter().filter(|t| t.cos() >= 1.0 - tol).count();
    let n_right = angles.iter().filter(|t| t.cos() <= tol).count();
    Ok(AngleDecomposition {
        n_interior: q - n_zero - n_right,
        angles,
        u_vectors,
        v_vectors,
        n_zero,
        n_right,
        tol,
    })
}

/// Largest subspace dimension the brute-force oracle accepts.
pub const ORACLE_MAX_DIM: usize = 3;

/// Upper bound on grid evaluations per deflation step; dimensions whose full
/// grid would exceed it are coarsened and rely on the local refinement.
const ORACLE_BUDGET: f64 = 4.0e6;

/// Principal angles straight from the recursive sup definition.
///
/// Step `i` maximizes `|⟨u, v⟩|` over unit `u ∈ M ∩ M_{i-1}⊥`,
/// `v ∈ N ∩ N_{i-1}⊥`. The inner supremum over `v` is `‖P_N u‖`, attained at
/// `v = P_N u / ‖P_N u‖`; the outer one is a grid search over the unit sphere
/// of the smaller side followed by a compass search. The maximizers are then
/// deflated out of both sides.
pub fn greedy_angle_oracle(m: &Subspace, n: &Subspace, grid: usize) -> Result<Vec<f64>> {
    check_same_ambient(m, n)?;
    for s in [m, n] {
        if s.dim() > ORACLE_MAX_DIM {
            return Err(Error::TooLarge {
                dim: s.dim(),
                limit: ORACLE_MAX_DIM,
            });
        }
    }
    if grid < 2 {
        return Err(Error::InvalidInput(
            "oracle grid must have at least 2 points".into(),
        ));
    }
    // parameterize the smaller side; the sup is symmetric
    let (mut small, mut large) = if m.dim() <= n.dim() {
        (m.basis().clone(), n.basis().clone())
    } else {
        (n.basis().clone(), m.basis().clone())
    };

    let mut angles = Vec::new();
    while small.ncols() > 0 && large.ncols() > 0 {
        // cross-Gram in coefficient space: ‖P_large (B_small c)‖ = ‖G c‖
        let g = large.adjoint() * &small;
        let d = small.ncols();
        let objective = |params: &[f64]| -> f64 { (&g * sphere_point(d, params)).norm() };

        let best = maximize_on_sphere(d, grid, &objective);
        let c = sphere_point(d, &best);
        let cos = objective(&best).min(1.0);
        angles.push(cos.acos());

        let u = &small * &c;
        let pu = &large * (large.adjoint() * &u);
        let v = if pu.norm() > 1e-300 {
            pu.unscale(pu.norm())
        } else {
            // any unit vector of the large side is a maximizer
            large.column(0).into_owned()
        };
        small = deflate(&small, &u);
        large = deflate(&large, &v);
    }
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Orthonormal basis of `span(B) ∩ x⊥` for unit `x ∈ span(B)`.
fn deflate(basis: &CMatrix, x: &CVector) -> CMatrix {
    let raw = basis - x * (x.adjoint() * basis);
    let svd = svd_sorted(&raw);
    let k = basis.ncols().saturating_sub(1);
    svd.u.columns(0, k.min(svd.sigma.len())).into_owned()
}

/// Unit vector of ℂᵈ modulo global phase from `2d − 2` real parameters:
/// `d − 1` hyperspherical magnitudes in `[0, π/2]` then `d − 1` phases.
fn sphere_point(d: usize, params: &[f64]) -> CVector {
    let mut mags = vec![0.0; d];
    let mut rem = 1.0;
    for i in 0..d - 1 {
        mags[i] = rem * params[i].cos();
        rem *= params[i].sin();
    }
    mags[d - 1] = rem;
    CVector::from_fn(d, |i, _| {
        if i == 0 {
            c64(mags[0], 0.0)
        } else {
            Complex64::from_polar(mags[i], params[d - 1 + i - 1])
        }
    })
}

fn maximize_on_sphere(d: usize, grid: usize, f: &dyn Fn(&[f64]) -> f64) -> Vec<f64> {
    let nparams = 2 * d - 2;
    if nparams == 0 {
        return Vec::new();
    }
    let per_dim = (grid as f64)
        .min(ORACLE_BUDGET.powf(1.0 / nparams as f64).floor())
        .max(2.0) as usize;
    let nmag = d - 1;
    let coord = |dim: usize, j: usize| -> f64 {
        if dim < nmag {
            FRAC_PI_2 * j as f64 / (per_dim - 1) as f64
        } else {
            2.0 * PI * j as f64 / per_dim as f64
        }
    };

    let mut idx = vec![0usize; nparams];
    let mut params = vec![0.0; nparams];
    let mut best = params.clone();
    let mut best_val = f64::NEG_INFINITY;
    loop {
        for (k, &j) in idx.iter().enumerate() {
            params[k] = coord(k, j);
        }
        let val = f(&params);
        if val > best_val {
            best_val = val;
            best.copy_from_slice(&params);
        }
        // odometer increment
        let mut k = 0;
        while k < nparams {
            idx[k] += 1;
            if idx[k] < per_dim {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == nparams {
            break;
        }
    }

    // compass search from the best grid node
    let mut step = 2.0 * PI / per_dim as f64;
    let mut trial = best.clone();
    while step > 1e-12 {
        let mut improved = false;
        for k in 0..nparams {
            for sign in [1.0, -1.0] {
                trial.copy_from_slice(&best);
                trial[k] += sign * step;
                let val = f(&trial);
                if val > best_val {
                    best_val = val;
                    best.copy_from_slice(&trial);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// The four unit vectors of one Jordan plane.
///
/// `u ∈ M`, `v ∈ N` are principal vectors; `s ⊥ u` and `t ⊥ v` lie in the same
/// plane with `⟨v, s⟩ > 0` and `⟨s, t⟩ > 0`.
#[derive(Debug, Clone)]
pub struct JordanFrame {
    pub theta: f64,
    pub u: CVector,
    pub v: CVector,
    pub s: CVector,
    pub t: CVector,
    /// `cos θ`
    pub lambda: f64,
    /// `sin θ`
    pub mu: f64,
}

impl JordanFrame {
    /// Largest deviation among the frame identities
    /// `⟨u,v⟩ = ⟨s,t⟩ = cos θ`, `⟨s,v⟩ = −⟨u,t⟩ = sin θ`, `⟨u,s⟩ = ⟨v,t⟩ = 0`,
    /// `u = cot θ·s − csc θ·t`, and unit norms.
    pub fn identity_defect(&self) -> f64 {
        let (c, s) = (self.lambda, self.mu);
        let recon = self.s.scale(c / s) - self.t.scale(1.0 / s);
        [
            (inner(&self.u, &self.v) - c).norm(),
            (inner(&self.s, &self.t) - c).norm(),
            (inner(&self.s, &self.v) - s).norm(),
            (inner(&self.u, &self.t) + s).norm(),
            inner(&self.u, &self.s).norm(),
            inner(&self.v, &self.t).norm(),
            (&self.u - recon).norm(),
            (self.u.norm() - 1.0).abs(),
            (self.v.norm() - 1.0).abs(),
            (self.s.norm() - 1.0).abs(),
            (self.t.norm() - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// One frame per interior angle, built by two Gram–Schmidt steps:
/// `s = normalize(v − ⟨v,u⟩u)`, `t = normalize(s − ⟨s,v⟩v)`.
pub fn jordan_frames(dec: &AngleDecomposition) -> Vec<JordanFrame> {
    dec.interior_indices()
        .map(|k| {
            let theta = dec.angles[k];
            let u = dec.u(k);
            let v = dec.v(k);
            let s_raw = &v - &u * inner(&v, &u);
            let s = s_raw.unscale(s_raw.norm());
            let t_raw = &s - &v * inner(&s, &v);
            let mut t = t_raw.unscale(t_raw.norm());
            if inner(&s, &t).re < 0.0 {
                t = -t;
            }
            JordanFrame {
                theta,
                u,
                v,
                s,
                t,
                lambda: theta.cos(),
                mu: theta.sin(),
            }
        })
        .collect()
}

/// Outcome of one clause of the angle bookkeeping between `(M,N)` and `(M⊥,N⊥)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseCheck {
    pub name: &'static str,
    pub pass: bool,
    pub max_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct AngleRelationReport {
    /// Angles between `M` and `N` (after orienting so `dim M ≥ dim N`).
    pub theta: Vec<f64>,
    /// Angles between `M⊥` and `N⊥`.
    pub eta: Vec<f64>,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub r: usize,
    /// `true` when the inputs were swapped to make `dim M ≥ dim N`.
    pub swapped: bool,
    pub clauses: [ClauseCheck; 3],
}

impl AngleRelationReport {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn max_deviation(&self) -> f64 {
        self.clauses
            .iter()
            .map(|c| c.max_deviation)
            .fold(0.0, f64::max)
    }
}

/// Checks how the angles of `(M,N)` line up with those of `(M⊥,N⊥)`.
///
/// With `dim M ≥ dim N`:
/// 1. `θ₁..θ_a` and `η₁..η_b` vanish;
/// 2. `θ_{a+i} = η_{b+i}` for `i = 1..r`;
/// 3. the remaining `θ_{a+r+1}..θ_q` and `η_{b+r+1}..` are right angles.
///
/// Both lists end with exactly `d = dim(M⊥∩N)` right angles; a list whose
/// length is not `a + r + d` (resp. `b + r + d`) fails clause 3 with infinite
/// deviation.
pub fn complement_angle_relation(
    m: &Subspace,
    n: &Subspace,
    tol: f64,
) -> Result<AngleRelationReport> {
    check_same_ambient(m, n)?;
    let swapped = m.dim() < n.dim();
    let (m, n) = if swapped { (n, m) } else { (m, n) };

    let five = five_part_decompose(m, n, tol)?;
    let (a, b, c, d, r) = five.counts();
    let theta = principal_angles(m, n, tol)?.angles;
    let eta = principal_angles(&m.complement(), &n.complement(), tol)?.angles;

    let dev_to =
        |xs: &[f64], target: f64| xs.iter().map(|x| (x - target).abs()).fold(0.0, f64::max);
    let slice = |xs: &[f64], from: usize, len: usize| -> Option<Vec<f64>> {
        xs.get(from..from + len).map(|s| s.to_vec())
    };

    let clause1 = match (slice(&theta, 0, a), slice(&eta, 0, b)) {
        (Some(t), Some(e)) => dev_to(&t, 0.0).max(dev_to(&e, 0.0)),
        _ => f64::INFINITY,
    };
    let clause2 = match (slice(&theta, a, r), slice(&eta, b, r)) {
        (Some(t), Some(e)) => t
            .iter()
            .zip(&e)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    };
    let clause3 = if theta.len() != a + r + d || eta.len() != b + r + d {
        f64::INFINITY
    } else {
        dev_to(&theta[a + r..], FRAC_PI_2).max(dev_to(&eta[b + r..], FRAC_PI_2))
    };

    let check = |name, dev: f64| ClauseCheck {
        name,
        pass: dev <= tol,
        max_deviation: dev,
    };
    Ok(AngleRelationReport {
        clauses: [
            check("leading zero angles", clause1),
            check("shared interior angles", clause2),
            check("trailing right angles", clause3),
        ],
        theta,
        eta,
        a,
        b,
        c,
        d,
        r,
        swapped,
    })
}

/// Largest biorthogonality defect `|⟨u_i, v_j⟩ − δ_ij cos θ_i|`.
pub fn biorthogonality_defect(dec: &AngleDecomposition) -> f64 {
    let gram = dec.v_vectors.adjoint() * &dec.u_vectors; // (j, i) entry is ⟨u_i, v_j⟩
    let q = dec.len();
    let mut worst: f64 = 0.0;
    for i in 0..q {
        for j in 0..q {
            let want = if i == j { dec.angles[i].cos() } else { 0.0 };
            worst = worst.max((gram[(j, i)] - c64(want, 0.0)).norm());
        }
    }
    worst
}

/// Largest of `‖P_M v_j − cos θ_j u_j‖` and `‖P_N u_j − cos θ_j v_j‖`.
pub fn projection_action_defect(dec: &AngleDecomposition, m: &Subspace, n: &Subspace) -> f64 {
    let pm = m.projector();
    let pn = n.projector();
    (0..dec.len())
        .map(|j| {
            let c = dec.angles[j].cos();
            let (u, v) = (dec.u(j), dec.v(j));
            let e1 = (&pm * &v - u.scale(c)).norm();
            let e2 = (&pn * &u - v.scale(c)).norm();
            e1.max(e2)
        })
        .fold(0.0, f64::max)
}

/// Gram matrix of the stacked frame vectors `[u₁ s₁ u₂ s₂ …]`, which is the
/// identity exactly when the Jordan planes are mutually orthogonal.
pub fn frame_plane_gram(frames: &[JordanFrame]) -> CMatrix {
    let n = frames.first().map_or(0, |f| f.u.len());
    let mut stack = CMatrix::zeros(n, 2 * frames.len());
    for (k, f) in frames.iter().enumerate() {
        stack.set_column(2 * k, &f.u);
        stack.set_column(2 * k + 1, &f.s);
    }
    stack.adjoint() * stack
}

/// Largest cross-frame inner product among `⟨u_i,v_j⟩, ⟨s_i,t_j⟩, ⟨s_i,v_j⟩, ⟨u_i,t_j⟩`, `i ≠ j`.
pub fn cross_frame_defect(frames: &[JordanFrame]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, fi) in frames.iter().enumerate() {
        for (j, fj) in frames.iter().enumerate() {
            if i == j {
                continue;
            }
            for z in [
                inner(&fi.u, &fj.v),
                inner(&fi.s, &fj.t),
                inner(&fi.s, &fj.v),
                inner(&fi.u, &fj.t),
            ] {
                worst = worst.max(z.norm());
            }
        }
    }
    worst
}

pub(crate) fn columns_matrix(vectors: impl Iterator<Item = CVector>, n: usize) -> CMatrix {
    let cols: Vec<CVector> = vectors.collect();
    if cols.is_empty() {
        return CMatrix::zeros(n, 0);
    }
    CMatrix::from_columns(&cols)
}

/// Frames stacked by role: `(U, V, S, T)` with one column per frame.
pub fn frame_bases(frames: &[JordanFrame], n: usize) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
    (
        columns_matrix(frames.iter().map(|f| f.u.clone()), n),
        columns_matrix(frames.iter().map(|f| f.v.clone()), n),
        columns_matrix(frames.iter().map(|f| f.s.clone()), n),
        columns_matrix(frames.iter().map(|f| f.t.clone()), n),
    )
}
