//! Numerical ranges `W(A) = {⟨Ax, x⟩ : ‖x‖ = 1}` of `P+Q` and `PQ` in closed
//! form, and a support-function oracle that works for any square matrix.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, polygon_hausdorff};
use crate::linalg::{self, c64, CMatrix};
use crate::principal::{jordan_frames, principal_angles, AngleDecomposition, JordanFrame};
use crate::subspace::{check_same_ambient, five_part_decompose, ProjectorPair, Subspace};

/// Default boundary resolution for ellipse sampling and the oracle.
pub const DEFAULT_SAMPLES: usize = 720;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInput(format!(
                "interval bounds out of order: [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }
}

/// Closed axis-aligned elliptic disk: semi-major axis along the real axis,
/// semi-minor along the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticDisk {
    #[serde(serialize_with = "ser_complex")]
    pub center: Complex64,
    pub semi_major: f64,
    pub semi_minor: f64,
}

impl EllipticDisk {
    pub fn foci(&self) -> (Complex64, Complex64) {
        let c = (self.semi_major * self.semi_major - self.semi_minor * self.semi_minor)
            .max(0.0)
            .sqrt();
        (self.center - c, self.center + c)
    }

    pub fn boundary_point(&self, phi: f64) -> Complex64 {
        self.center + c64(self.semi_major * phi.cos(), self.semi_minor * phi.sin())
    }

    /// Boundary point with outward normal `e^{iψ}`.
    pub fn support_point(&self, psi: f64) -> Complex64 {
        let (a, b) = (self.semi_major, self.semi_minor);
        let (x, y) = (a * a * psi.cos(), b * b * psi.sin());
        let scale = (a * a * psi.cos().powi(2) + b * b * psi.sin().powi(2)).sqrt();
        if scale == 0.0 {
            return self.center;
        }
        self.center + c64(x / scale, y / scale)
    }

    /// `k` boundary points whose outward normals are evenly spaced, the same
    /// directions the support oracle probes.
    pub fn sample_boundary(&self, k: usize) -> Vec<Complex64> {
        (0..k)
            .map(|j| self.support_point(std::f64::consts::TAU * j as f64 / k as f64))
            .collect()
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        let d = z - self.center;
        let (a, b) = (self.semi_major + slack, self.semi_minor + slack);
        (d.re / a).powi(2) + (d.im / b).powi(2) <= 1.0
    }

    /// Inscribed polygon with `k` vertices.
    pub fn to_region(&self, k: usize) -> ConvexRegion {
        ConvexRegion {
            vertices: convex_hull(&self.sample_boundary(k)),
            generators: vec![Generator::Disk(*self)],
        }
    }
}

/// A piece whose convex hull makes up a [`ConvexRegion`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Generator {
    Disk(EllipticDisk),
    Segment(
        #[serde(serialize_with = "ser_complex")] Complex64,
        #[serde(serialize_with = "ser_complex")] Complex64,
    ),
    Point(#[serde(serialize_with = "ser_complex")] Complex64),
}

/// Counterclockwise convex polygon approximating a convex subset of ℂ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexRegion {
    #[serde(serialize_with = "ser_complex_vec")]
    pub vertices: Vec<Complex64>,
    pub generators: Vec<Generator>,
}

impl ConvexRegion {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `(min re, max re, min im, max im)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        self.vertices.iter().fold(
            (
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
            ),
            |(a, b, c, d), z| (a.min(z.re), b.max(z.re), c.min(z.im), d.max(z.im)),
        )
    }

    pub fn distance_to(&self, z: Complex64) -> f64 {
        crate::geometry::point_polygon_distance(z, &self.vertices)
    }

    /// Largest distance from a conjugated vertex back to the region.
    pub fn conjugation_asymmetry(&self) -> f64 {
        self.vertices
            .iter()
            .map(|z| self.distance_to(z.conj()))
            .fold(0.0, f64::max)
    }
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

fn ser_complex_vec<S: serde::Serializer>(
    zs: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(zs.iter().map(|z| [z.re, z.im]))
}

/// Both sides of `‖P+Q‖ = 1 + ‖PQ‖` and `‖PQ‖ = cos θ₁`.
#[derive(Debug, Clone, Serialize)]
pub struct NormIdentityReport {
    pub norm_sum: f64,
    pub norm_product: f64,
    /// `cos θ₁`; absent when one of the subspaces is zero.
    pub cos_dixmier: Option<f64>,
    /// `|‖P+Q‖ − (1 + ‖PQ‖)|`
    pub sum_deviation: f64,
    /// `|‖PQ‖ − cos θ₁|`
    pub product_deviation: Option<f64>,
    /// `|‖P+Q‖ − (1 + cos θ₁)|`
    pub combined_deviation: Option<f64>,
}

pub fn operator_norm_identities(
    pair: &ProjectorPair,
    dec: &AngleDecomposition,
) -> NormIdentityReport {
    let norm_sum = linalg::op_norm(&(&pair.p + &pair.q));
    let norm_product = linalg::op_norm(&(&pair.p * &pair.q));
    let cos_dixmier = dec.dixmier().map(f64::cos);
    NormIdentityReport {
        norm_sum,
        norm_product,
        cos_dixmier,
        sum_deviation: (norm_sum - 1.0 - norm_product).abs(),
        product_deviation: cos_dixmier.map(|c| (norm_product - c).abs()),
        combined_deviation: cos_dixmier.map(|c| (norm_sum - 1.0 - c).abs()),
    }
}

/// `W(P_M + P_N) = [2 sin²(η₁/2), 2 cos²(θ₁/2)]` with `θ₁` the Dixmier angle
/// of `(M, N)` and `η₁` that of `(M⊥, N⊥)`.
pub fn sum_range(m: &Subspace, n: &Subspace) -> Result<Interval> {
    check_same_ambient(m, n)?;
    let (mp, np) = (m.complement(), n.complement());
    for (name, s) in [("M", m), ("N", n), ("M⊥", &mp), ("N⊥", &np)] {
        if s.is_zero() {
            return Err(Error::Undefined(format!(
                "Dixmier angle needs non-zero subspaces, but {name} = {{0}}"
            )));
        }
    }
    let theta1 = principal_angles(m, n, crate::DEFAULT_TOL)?.angles[0];
    let eta1 = principal_angles(&mp, &np, crate::DEFAULT_TOL)?.angles[0];
    Interval::new(
        2.0 * (eta1 / 2.0).sin().powi(2),
        2.0 * (theta1 / 2.0).cos().powi(2),
    )
}

/// Numerical range of `[[0, a], [b, 0]]`: centered at 0 with semi-axes
/// `(a+b)/2` and `|a−b|/2`, foci `±√(ab)`.
pub fn offdiag_ellipse(a: f64, b: f64) -> Result<EllipticDisk> {
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "entries must be finite and non-negative, got a={a}, b={b}"
        )));
    }
    Ok(EllipticDisk {
        center: c64(0.0, 0.0),
        semi_major: (a + b) / 2.0,
        semi_minor: (a - b).abs() / 2.0,
    })
}

/// `W(PQ|_{J_k})`: center `λ²/2`, semi-axes `λ/2` and `λμ/2`, foci `0`, `λ²`.
pub fn product_disks(frames: &[JordanFrame]) -> Vec<EllipticDisk> {
    frames
        .iter()
        .map(|f| EllipticDisk {
            center: c64(f.lambda * f.lambda / 2.0, 0.0),
            semi_major: f.lambda / 2.0,
            semi_minor: f.lambda * f.mu / 2.0,
        })
        .collect()
}

/// `W(P_M P_N)` as the hull of the Jordan-plane disks, the segment `[0, 1]`
/// when `M ∩ N ≠ {0}`, and the point `0` when any of `M⊥∩N⊥`, `M∩N⊥`,
/// `M⊥∩N` is non-trivial (`PQ` vanishes there).
pub fn product_range(
    m: &Subspace,
    n: &Subspace,
    samples_per_disk: usize,
    tol: f64,
) -> Result<ConvexRegion> {
    check_same_ambient(m, n)?;
    if m.is_zero() && n.is_zero() {
        return Err(Error::EmptyRegion("both subspaces are {0}".into()));
    }
    if samples_per_disk < 3 {
        return Err(Error::InvalidInput(
            "need at least 3 samples per disk".into(),
        ));
    }
    let five = five_part_decompose(m, n, tol)?;
    let frames = jordan_frames(&principal_angles(m, n, tol)?);

    let mut generators: Vec<Generator> = product_disks(&frames)
        .into_iter()
        .map(Generator::Disk)
        .collect();
    if five.a > 0 {
        generators.push(Generator::Segment(c64(0.0, 0.0), c64(1.0, 0.0)));
    }
    if five.b + five.c + five.d > 0 {
        generators.push(Generator::Point(c64(0.0, 0.0)));
    }
    Ok(hull_of_generators(generators, samples_per_disk))
}

/// Convex hull of sampled generators.
pub fn hull_of_generators(generators: Vec<Generator>, samples_per_disk: usize) -> ConvexRegion {
    let mut points = Vec::new();
    for g in &generators {
        match g {
            Generator::Disk(e) => points.extend(e.sample_boundary(samples_per_disk)),
            Generator::Segment(a, b) => points.extend([*a, *b]),
            Generator::Point(z) => points.push(*z),
        }
    }
    ConvexRegion {
        vertices: convex_hull(&points),
        generators,
    }
}

/// Inner approximation of `W(A)` by the support-function method.
///
/// For `φⱼ = 2πj/k` the top eigenvector `x` of `Re(e^{iφ}A)` is a boundary
/// point `⟨Ax, x⟩` of `W(A)` with outward normal `e^{−iφ}`.
pub fn support_oracle(a: &CMatrix, num_angles: usize) -> Result<ConvexRegion> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidInput(format!(
            "matrix must be square, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("matrix must be at least 1x1".into()));
    }
    if num_angles < 3 {
        return Err(Error::InvalidInput(
            "need at least 3 support directions".into(),
        ));
    }
    let points: Vec<Complex64> = (0..num_angles)
        .map(|j| {
            let phi = std::f64::consts::TAU * j as f64 / num_angles as f64;
            let rotated = a * Complex64::from_polar(1.0, phi);
            let (_, vecs) = linalg::hermitian_eigen(&rotated);
            let x = vecs.column(n - 1);
            x.dotc(&(a * x))
        })
        .collect();
    Ok(ConvexRegion {
        vertices: convex_hull(&points),
        generators: Vec::new(),
    })
}

pub fn hausdorff_distance(r1: &ConvexRegion, r2: &ConvexRegion) -> Result<f64> {
    if r1.is_empty() || r2.is_empty() {
        return Err(Error::EmptyRegion(
            "Hausdorff distance of an empty region".into(),
        ));
    }
    Ok(polygon_hausdorff(&r1.vertices, &r2.vertices))
}

/// `W(Re A)` and `W(Im A)` with `Re A = (A+A*)/2`, `Im A = (A−A*)/2i`; their
/// product rectangle contains `W(A)`.
pub fn re_im_bounds(a: &CMatrix) -> (Interval, Interval) {
    let span = |h: &CMatrix| {
        let (vals, _) = linalg::hermitian_eigen(h);
        Interval {
            lo: vals[0],
            hi: vals[vals.len() - 1],
        }
    };
    let im_part = (a - a.adjoint()) * c64(0.0, -0.5);
    (span(a), span(&im_part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{build_operator, OperatorKind};
    use crate::subspace::{orthonormalize, synthesize_pair};
    use crate::DEFAULT_TOL;
    use std::f64::consts::PI;

    fn mat2(a: [f64; 4]) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                c64(a[0], 0.0),
                c64(a[1], 0.0),
                c64(a[2], 0.0),
                c64(a[3], 0.0),
            ],
        )
    }

    fn line_pair(theta: f64) -> (Subspace, Subspace) {
        let col = |x: f64, y: f64| CMatrix::from_column_slice(2, 1, &[c64(x, 0.0), c64(y, 0.0)]);
        (
            orthonormalize(&col(1.0, 0.0), DEFAULT_TOL).unwrap(),
            orthonormalize(&col(theta.cos(), theta.sin()), DEFAULT_TOL).unwrap(),
        )
    }

    #[test]
    fn norm_identities_examples() {
        let (m, n) = line_pair(PI / 3.0);
        let pair = ProjectorPair::new(&m, &n).unwrap();
        let rep = operator_norm_identities(&pair, &principal_angles(&m, &n, DEFAULT_TOL).unwrap());
        assert!((rep.norm_product - 0.5).abs() < 1e-12);
        assert!((rep.norm_sum - 1.5).abs() < 1e-12);
        assert!(rep.sum_deviation < 1e-12 && rep.product_deviation.unwrap() < 1e-12);

        let pair = ProjectorPair::new(&m, &m).unwrap();
        let rep = operator_norm_identities(&pair, &principal_angles(&m, &m, DEFAULT_TOL).unwrap());
        assert!((rep.norm_product - 1.0).abs() < 1e-12 && (rep.norm_sum - 2.0).abs() < 1e-12);

        let (m, n) = line_pair(PI / 2.0);
        let pair = ProjectorPair::new(&m, &n).unwrap();
        let rep = operator_norm_identities(&pair, &principal_angles(&m, &n, DEFAULT_TOL).unwrap());
        assert!(rep.norm_product < 1e-12 && (rep.norm_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sum_range_examples() {
        let (m, n) = line_pair(PI / 3.0);
        let iv = sum_range(&m, &n).unwrap();
        assert!((iv.lo - 0.5).abs() < 1e-12 && (iv.hi - 1.5).abs() < 1e-12);

        let m = Subspace::coordinate(3, &[0]).unwrap();
        let iv = sum_range(&m, &m).unwrap();
        assert!(iv.lo.abs() < 1e-12 && (iv.hi - 2.0).abs() < 1e-12);

        let (m, n) = synthesize_pair(&[], 0, 0, 2, 2, 5).unwrap();
        let iv = sum_range(&m, &n).unwrap();
        assert!((iv.lo - 1.0).abs() < 1e-12 && (iv.hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sum_range_rejects_degenerate_inputs() {
        let m = Subspace::coordinate(2, &[0]).unwrap();
        assert!(matches!(
            sum_range(&m, &Subspace::zero(2)),
            Err(Error::Undefined(_))
        ));
        match sum_range(&Subspace::full(2), &m) {
            Err(Error::Undefined(msg)) => assert!(msg.contains("M⊥")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn offdiag_ellipse_examples() {
        let e = offdiag_ellipse(2.0, 1.0).unwrap();
        assert_eq!((e.semi_major, e.semi_minor), (1.5, 0.5));
        let (f1, f2) = e.foci();
        assert!((f1.re + 2f64.sqrt()).abs() < 1e-15 && (f2.re - 2f64.sqrt()).abs() < 1e-15);
        let oracle = support_oracle(&mat2([0.0, 2.0, 1.0, 0.0]), 720).unwrap();
        assert!(hausdorff_distance(&e.to_region(720), &oracle).unwrap() < 1e-6);

        let e = offdiag_ellipse(1.0, 0.0).unwrap();
        assert_eq!((e.semi_major, e.semi_minor), (0.5, 0.5));

        let e = offdiag_ellipse(1.0, 1.0).unwrap();
        assert_eq!((e.semi_major, e.semi_minor), (1.0, 0.0));
        let oracle = support_oracle(&mat2([0.0, 1.0, 1.0, 0.0]), 720).unwrap();
        assert!(hausdorff_distance(&e.to_region(720), &oracle).unwrap() < 1e-12);

        assert!(offdiag_ellipse(-1.0, 0.5).is_err());
    }

    #[test]
    fn product_disk_examples() {
        let (m, n) = line_pair(PI / 3.0);
        let frames = jordan_frames(&principal_angles(&m, &n, DEFAULT_TOL).unwrap());
        let d = product_disks(&frames)[0];
        assert!((d.center.re - 0.125).abs() < 1e-12);
        assert!((d.semi_major - 0.25).abs() < 1e-12);
        assert!((d.semi_minor - 3f64.sqrt() / 8.0).abs() < 1e-12);
        let pq = build_operator(OperatorKind::Pq, &ProjectorPair::new(&m, &n).unwrap());
        let oracle = support_oracle(&pq, 720).unwrap();
        assert!(hausdorff_distance(&d.to_region(720), &oracle).unwrap() < 1e-6);

        let (m, n) = synthesize_pair(&[PI / 6.0, PI / 3.0], 0, 0, 0, 0, 2).unwrap();
        let disks = product_disks(&jordan_frames(
            &principal_angles(&m, &n, DEFAULT_TOL).unwrap(),
        ));
        assert!((disks[0].center.re - 0.375).abs() < 1e-12);
        assert!((disks[1].center.re - 0.125).abs() < 1e-12);
    }

    #[test]
    fn product_range_examples() {
        let (m, n) = line_pair(PI / 3.0);
        let region = product_range(&m, &n, 720, DEFAULT_TOL).unwrap();
        let pq = build_operator(OperatorKind::Pq, &ProjectorPair::new(&m, &n).unwrap());
        let oracle = support_oracle(&pq, 720).unwrap();
        assert!(hausdorff_distance(&region, &oracle).unwrap() <= 2e-3);
        let (_, max_re, _, _) = region.bounding_box();
        assert!((max_re - 0.375).abs() < 1e-9);

        let e1 = Subspace::coordinate(2, &[0]).unwrap();
        let region = product_range(&e1, &e1, 720, DEFAULT_TOL).unwrap();
        assert_eq!(region.vertices.len(), 2);
        assert!(region.vertices[0].norm() < 1e-15 && (region.vertices[1] - 1.0).norm() < 1e-15);

        let (m, n) = synthesize_pair(&[PI / 3.0], 1, 0, 0, 0, 8).unwrap();
        let region = product_range(&m, &n, 720, DEFAULT_TOL).unwrap();
        let pq = build_operator(OperatorKind::Pq, &ProjectorPair::new(&m, &n).unwrap());
        let oracle = support_oracle(&pq, 720).unwrap();
        assert!(hausdorff_distance(&region, &oracle).unwrap() <= 2e-3);
        let (_, max_re, _, max_im) = region.bounding_box();
        assert!((max_re - 1.0).abs() < 1e-12);
        assert!((max_im - 3f64.sqrt() / 8.0).abs() < 1e-4);
    }

    #[test]
    fn product_range_of_two_zero_subspaces_is_an_error() {
        let z = Subspace::zero(3);
        assert!(matches!(
            product_range(&z, &z, 720, DEFAULT_TOL),
            Err(Error::EmptyRegion(_))
        ));
        let e1 = Subspace::coordinate(3, &[0]).unwrap();
        let region = product_range(&e1, &z, 720, DEFAULT_TOL).unwrap();
        assert_eq!(region.vertices, vec![c64(0.0, 0.0)]);
    }

    #[test]
    fn support_oracle_examples() {
        let id = CMatrix::identity(2, 2);
        let r = support_oracle(&id, 36).unwrap();
        assert_eq!(r.vertices.len(), 1);
        assert!((r.vertices[0] - 1.0).norm() < 1e-12);

        let r = support_oracle(&mat2([0.0, 0.0, 0.0, 1.0]), 36).unwrap();
        assert_eq!(r.vertices.len(), 2);

        let r = support_oracle(&mat2([0.0, 2.0, 1.0, 0.0]), 720).unwrap();
        let (lo_re, hi_re, lo_im, hi_im) = r.bounding_box();
        assert!((hi_re - 1.5).abs() < 1e-4 && (lo_re + 1.5).abs() < 1e-4);
        assert!((hi_im - 0.5).abs() < 1e-4 && (lo_im + 0.5).abs() < 1e-4);

        assert!(support_oracle(&CMatrix::zeros(2, 3), 36).is_err());
        assert!(support_oracle(&id, 2).is_err());
    }

    #[test]
    fn support_oracle_affine_law() {
        let (m, n) = synthesize_pair(&[0.4, 1.0], 1, 0, 0, 0, 3).unwrap();
        let a = build_operator(OperatorKind::Pq, &ProjectorPair::new(&m, &n).unwrap());
        let id = CMatrix::identity(a.nrows(), a.nrows());
        let lhs = support_oracle(&(a.scale(2.0) + id), 720).unwrap();
        let base = support_oracle(&a, 720).unwrap();
        let rhs = ConvexRegion {
            vertices: base.vertices.iter().map(|z| z * 2.0 + 1.0).collect(),
            generators: Vec::new(),
        };
        assert!(hausdorff_distance(&lhs, &rhs).unwrap() < 2e-3);
    }

    #[test]
    fn hausdorff_of_empty_region_is_an_error() {
        let empty = ConvexRegion {
            vertices: Vec::new(),
            generators: Vec::new(),
        };
        let e = offdiag_ellipse(1.0, 0.5).unwrap().to_region(12);
        assert!(hausdorff_distance(&empty, &e).is_err());
        assert_eq!(hausdorff_distance(&e, &e).unwrap(), 0.0);
    }

    #[test]
    fn re_im_box_contains_product_range() {
        let (m, n) = synthesize_pair(&[0.3, 0.9, 1.4], 1, 1, 0, 1, 12).unwrap();
        let pq = build_operator(OperatorKind::Pq, &ProjectorPair::new(&m, &n).unwrap());
        let (re, im) = re_im_bounds(&pq);
        let region = product_range(&m, &n, 720, DEFAULT_TOL).unwrap();
        for z in &region.vertices {
            assert!(re.contains(z.re, 1e-12) && im.contains(z.im, 1e-12));
        }
        assert!(region.conjugation_asymmetry() < 1e-9);
    }
}
