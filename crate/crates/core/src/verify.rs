//! Invariant suite for a subspace pair and a seeded corpus of synthesized pairs.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equivalence::{build_swap_unitary, decide_equivalent};
use crate::error::Result;
use crate::linalg::{self, op_norm};
use crate::numrange::{
    hausdorff_distance, operator_norm_identities, product_disks, product_range, re_im_bounds,
    sum_range, support_oracle,
};
use crate::principal::{
    biorthogonality_defect, complement_angle_relation, cross_frame_defect, jordan_frames,
    principal_angles, projection_action_defect,
};
use crate::spectra::{
    analytic_eigenpairs, build_operator, numerical_spectrum, spectrum_mismatch, OperatorKind,
};
use crate::subspace::{five_part_decompose, synthesize_pair, ProjectorPair, Subspace};

pub const IDENTITY_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-9;
pub const SPECTRUM_TOL: f64 = 1e-8;
pub const SWAP_MAP_TOL: f64 = 1e-9;
pub const RANGE_TOL: f64 = 2e-3;
pub const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn push(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        });
    }

    fn push_bool(&mut self, name: impl Into<String>, ok: bool) {
        self.push(name, if ok { 0.0 } else { 1.0 }, 0.0);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Runs every invariant that applies to `(M, N)`.
///
/// `samples` sets the ellipse resolution and the number of oracle directions
/// for the product range; `0` skips the numerical-range oracle comparison.
pub fn verify_pair(m: &Subspace, n: &Subspace, tol: f64, samples: usize) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    let five = five_part_decompose(m, n, tol)?;
    let dec = principal_angles(m, n, tol)?;
    let frames = jordan_frames(&dec);
    let pair = ProjectorPair::new(m, n)?;
    let dim = m.ambient_dim();

    // principal angles and vectors
    rep.push(
        "biorthogonality",
        biorthogonality_defect(&dec),
        IDENTITY_TOL,
    );
    rep.push(
        "projection action",
        projection_action_defect(&dec, m, n),
        IDENTITY_TOL,
    );
    rep.push_bool("zero angle count equals dim(M∩N)", dec.n_zero == five.a);
    rep.push_bool("interior angle count equals r", dec.n_interior == five.r);
    // right angles come from the smaller side meeting the other's complement
    let small_side_perp = if m.dim() >= n.dim() { five.d } else { five.c };
    rep.push_bool(
        "right angle count matches the smaller side",
        dec.n_right == small_side_perp,
    );

    // Jordan frames
    let frame_defect = frames
        .iter()
        .map(|f| f.identity_defect())
        .fold(0.0, f64::max);
    rep.push("frame identities", frame_defect, IDENTITY_TOL);
    rep.push(
        "cross-frame orthogonality",
        cross_frame_defect(&frames),
        IDENTITY_TOL,
    );

    // complements
    let rel = complement_angle_relation(m, n, tol)?;
    for c in &rel.clauses {
        rep.push(
            format!("complement angles: {}", c.name),
            c.max_deviation,
            tol.max(1e-9),
        );
    }

    // norms and the sum range
    if !m.is_zero() && !n.is_zero() {
        let norms = operator_norm_identities(&pair, &dec);
        rep.push("‖P+Q‖ = 1 + ‖PQ‖", norms.sum_deviation, IDENTITY_TOL);
        if let Some(dev) = norms.product_deviation {
            rep.push("‖PQ‖ = cos θ₁", dev, IDENTITY_TOL);
        }
    }
    let any_zero = [m, n].iter().any(|s| s.is_zero() || s.dim() == dim);
    if !any_zero {
        let range = sum_range(m, n)?;
        let (vals, _) = linalg::hermitian_eigen(&(&pair.p + &pair.q));
        let dev = (range.lo - vals[0])
            .abs()
            .max((range.hi - vals[vals.len() - 1]).abs());
        rep.push("sum range matches extreme eigenvalues", dev, IDENTITY_TOL);
    }

    // spectra
    let mut pq_spectrum = Vec::new();
    for kind in OperatorKind::ALL {
        let a = build_operator(kind, &pair);
        let pairs = analytic_eigenpairs(kind, &frames, &five);
        let worst = pairs
            .iter()
            .map(|p| p.relative_residual(&a))
            .fold(0.0, f64::max);
        rep.push(
            format!("{} eigenpair residual", kind.label()),
            worst,
            RESIDUAL_TOL,
        );
        let analytic: Vec<_> = pairs.iter().map(|p| p.value).collect();
        let numeric = numerical_spectrum(kind, &pair)?;
        rep.push(
            format!("{} spectrum vs eigensolver", kind.label()),
            spectrum_mismatch(&analytic, &numeric),
            SPECTRUM_TOL,
        );
        if kind == OperatorKind::Pq {
            pq_spectrum = numeric;
        }
    }

    // swap unitary
    if five.is_generic() && !dec.is_empty() {
        let u = build_swap_unitary(m, n, tol)?;
        rep.push(
            "swap unitary: U*U = I",
            linalg::unitarity_defect(&u),
            IDENTITY_TOL,
        );
        rep.push(
            "swap unitary: U* = −U",
            op_norm(&(&u + u.adjoint())),
            IDENTITY_TOL,
        );
        let (mp, np) = (m.complement(), n.complement());
        let um = &u * m.basis();
        let un = &u * n.basis();
        let map_dev = (mp.projector() * &um - &um)
            .norm()
            .max((np.projector() * &un - &un).norm());
        rep.push("swap unitary: U M = M⊥, U N = N⊥", map_dev, SWAP_MAP_TOL);
        let eq = decide_equivalent((m, n), (&mp, &np), tol)?;
        rep.push_bool("(M,N) equivalent to (M⊥,N⊥)", eq.equivalent);
    }

    // product range
    if !(m.is_zero() && n.is_zero()) && samples >= 3 {
        let region = product_range(m, n, samples, tol)?;
        rep.push_bool(
            "product range is convex",
            crate::geometry::is_convex_ccw(&region.vertices),
        );
        rep.push(
            "product range conjugation symmetry",
            region.conjugation_asymmetry(),
            SYMMETRY_TOL,
        );

        let pq = build_operator(OperatorKind::Pq, &pair);
        let (re, im) = re_im_bounds(&pq);
        let box_dev = region
            .vertices
            .iter()
            .map(|z| {
                let dr = (re.lo - z.re).max(z.re - re.hi).max(0.0);
                let di = (im.lo - z.im).max(z.im - im.hi).max(0.0);
                dr.max(di)
            })
            .fold(0.0, f64::max);
        rep.push(
            "product range inside Re/Im bounding box",
            box_dev,
            IDENTITY_TOL,
        );

        let focus_dev = product_disks(&frames)
            .iter()
            .flat_map(|d| {
                let (f0, f1) = d.foci();
                [f0, f1]
            })
            .map(|f| {
                pq_spectrum
                    .iter()
                    .map(|z| (z - f).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        rep.push(
            "product disk foci are eigenvalues of PQ",
            focus_dev,
            SPECTRUM_TOL,
        );

        let oracle = support_oracle(&pq, samples)?;
        rep.push(
            "product range vs support oracle",
            hausdorff_distance(&region, &oracle)?,
            RANGE_TOL,
        );
    }

    if let Some(t) = dec.angles.iter().find(|t| !(0.0..=FRAC_PI_2).contains(*t)) {
        rep.push(format!("angle {t} outside [0, π/2]"), 1.0, 0.0);
    }
    Ok(rep)
}

/// Parameters of one synthesized pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub angles: Vec<f64>,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub seed: u64,
}

impl CorpusEntry {
    pub fn ambient_dim(&self) -> usize {
        2 * self.angles.len() + self.a + self.b + self.c + self.d
    }

    pub fn synthesize(&self) -> Result<(Subspace, Subspace)> {
        synthesize_pair(&self.angles, self.a, self.b, self.c, self.d, self.seed)
    }
}

pub const CORPUS_MAX_DIM: usize = 12;
pub const CORPUS_ANGLE_RANGE: (f64, f64) = (0.05, 1.52);

/// Seeded corpus of `count` pairs in ambient dimension at most 12.
///
/// Each entry has 1 to 3 interior angles drawn uniformly from
/// `[0.05, 1.52]` and intersection counts `a, b, c, d ∈ {0, 1, 2}`. Every
/// fourth entry is forced to have `a ≥ 1` so that the `M∩N ≠ {0}` branch is
/// always represented.
pub fn corpus(count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| loop {
            let k = rng.random_range(1..=3usize);
            let mut cnt = [0usize; 4];
            for x in &mut cnt {
                *x = rng.random_range(0..=2);
            }
            if i % 4 == 0 && cnt[0] == 0 {
                cnt[0] = rng.random_range(1..=2);
            }
            let entry = CorpusEntry {
                angles: (0..k)
                    .map(|_| rng.random_range(CORPUS_ANGLE_RANGE.0..=CORPUS_ANGLE_RANGE.1))
                    .collect(),
                a: cnt[0],
                b: cnt[1],
                c: cnt[2],
                d: cnt[3],
                seed: rng.random(),
            };
            if entry.ambient_dim() <= CORPUS_MAX_DIM {
                break entry;
            }
        })
        .collect()
}

/// Seeded corpus of pairs in generic position (`a = b = c = d = 0`).
pub fn generic_corpus(count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=CORPUS_MAX_DIM / 2);
            CorpusEntry {
                angles: (0..k)
                    .map(|_| rng.random_range(CORPUS_ANGLE_RANGE.0..=CORPUS_ANGLE_RANGE.1))
                    .collect(),
                a: 0,
                b: 0,
                c: 0,
                d: 0,
                seed: rng.random(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        let c1 = corpus(200, 5);
        assert_eq!(c1, corpus(200, 5));
        assert_ne!(c1, corpus(200, 6));
        assert!(c1.iter().all(|e| e.ambient_dim() <= CORPUS_MAX_DIM));
        assert!(c1.iter().all(|e| (1..=3).contains(&e.angles.len())));
        assert!(c1.iter().filter(|e| e.a > 0).count() >= 10);
        assert!(generic_corpus(50, 1)
            .iter()
            .all(|e| e.ambient_dim() <= CORPUS_MAX_DIM));
    }

    #[test]
    fn small_corpus_passes_everything() {
        for e in corpus(12, 42) {
            let (m, n) = e.synthesize().unwrap();
            let rep = verify_pair(&m, &n, DEFAULT_TOL, 180).unwrap();
            let bad: Vec<_> = rep.failures().collect();
            assert!(bad.is_empty(), "{e:?}: {bad:?}");
        }
    }

    #[test]
    fn swapped_order_passes() {
        let (m, n) = synthesize_pair(&[0.6], 1, 0, 2, 1, 3).unwrap();
        assert!(verify_pair(&n, &m, DEFAULT_TOL, 90).unwrap().all_pass());
    }

    #[test]
    fn generic_pair_includes_swap_checks() {
        let (m, n) = synthesize_pair(&[0.3, 1.1], 0, 0, 0, 0, 9).unwrap();
        let rep = verify_pair(&m, &n, DEFAULT_TOL, 0).unwrap();
        assert!(rep.all_pass());
        assert!(rep
            .checks
            .iter()
            .any(|c| c.name.starts_with("swap unitary")));
        assert!(!rep.checks.iter().any(|c| c.name.contains("oracle")));
    }

    #[test]
    fn trivial_subspaces_are_handled() {
        let m = Subspace::zero(3);
        let n = Subspace::coordinate(3, &[0]).unwrap();
        let rep = verify_pair(&m, &n, DEFAULT_TOL, 60).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.failures().collect::<Vec<_>>());
    }
}
