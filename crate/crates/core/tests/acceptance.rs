//! Acceptance suite. Runs every criterion in sequence (so the runtime gates
//! are measured without competing test threads), prints one line per
//! criterion and exits non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jordanlens::equivalence::{build_swap_unitary, decide_equivalent};
use jordanlens::linalg::{c64, hermitian_eigen, identity, inner, op_norm, CMatrix};
use jordanlens::numrange::{
    hausdorff_distance, offdiag_ellipse, product_range, sum_range, support_oracle,
};
use jordanlens::principal::{
    complement_angle_relation, greedy_angle_oracle, jordan_frames, principal_angles,
};
use jordanlens::spectra::{analytic_eigenpairs, build_operator, numerical_spectrum, OperatorKind};
use jordanlens::subspace::{five_part_decompose, synthesize_pair, ProjectorPair, Subspace};
use jordanlens::verify::{corpus, generic_corpus, CorpusEntry};
use jordanlens::{Complex64, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 20_240_611;
const CORPUS_SIZE: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("biorthogonality and projection action", c1_biorthogonality),
        ("frame identities", c2_frames),
        ("swap unitary", c3_swap_unitary),
        ("norm identities", c4_norms),
        ("sum range", c5_sum_range),
        ("eigenpairs of the six operators", c6_eigenpairs),
        (
            "elliptic range of 2x2 off-diagonal matrices",
            c7_elliptic_range,
        ),
        ("product range vs support oracle", c8_product_range),
        (
            "angle bookkeeping between a pair and its complements",
            c9_bookkeeping,
        ),
        ("recursive-definition oracle", c10_greedy_oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let mark = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {mark}  {name}: {} [{:.2}s]",
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!result.pass);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn the_corpus() -> Vec<(CorpusEntry, Subspace, Subspace)> {
    corpus(CORPUS_SIZE, CORPUS_SEED)
        .into_iter()
        .map(|e| {
            let (m, n) = e.synthesize().expect("corpus entries are valid");
            (e, m, n)
        })
        .collect()
}

/// Ground truth from the synthesis parameters: the smallest angle between
/// `M` and `N` is 0 when they meet, otherwise the smallest planted angle.
fn planted_dixmier(e: &CorpusEntry) -> f64 {
    if e.a > 0 {
        0.0
    } else {
        e.angles.iter().copied().fold(FRAC_PI_2, f64::min)
    }
}

/// Same for `(M⊥, N⊥)`, which meet in the `b` axes and share the planted
/// interior angles.
fn planted_complement_dixmier(e: &CorpusEntry) -> f64 {
    if e.b > 0 {
        0.0
    } else {
        e.angles.iter().copied().fold(FRAC_PI_2, f64::min)
    }
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, f64::max)
}

fn within(start: Instant, limit: Duration) -> (bool, f64) {
    let t = start.elapsed();
    (t < limit, t.as_secs_f64())
}

fn c1_biorthogonality() -> Outcome {
    let start = Instant::now();
    let mut bio: f64 = 0.0;
    let mut action: f64 = 0.0;
    let mut planted: f64 = 0.0;
    for (e, m, n) in the_corpus() {
        let dec = principal_angles(&m, &n, DEFAULT_TOL).unwrap();
        let pm = m.projector();
        for i in 0..dec.len() {
            let (ui, vi) = (dec.u(i), dec.v(i));
            for j in 0..dec.len() {
                let want = if i == j { dec.angles[i].cos() } else { 0.0 };
                bio = bio.max((inner(&ui, &dec.v(j)) - c64(want, 0.0)).norm());
            }
            action = action.max((&pm * &vi - ui.scale(dec.angles[i].cos())).norm());
        }
        let mut interior: Vec<f64> = dec.interior_indices().map(|k| dec.angles[k]).collect();
        let mut truth = e.angles.clone();
        interior.sort_by(f64::total_cmp);
        truth.sort_by(f64::total_cmp);
        planted = planted.max(if interior.len() == truth.len() {
            max_of(interior.iter().zip(&truth).map(|(x, y)| (x - y).abs()))
        } else {
            f64::INFINITY
        });
    }
    let (fast, secs) = within(start, Duration::from_secs(5));
    outcome(
        bio <= 1e-10 && action <= 1e-10 && planted <= 1e-10 && fast,
        format!(
            "max |<u_i,v_j> - d_ij cos| = {bio:.1e}, max |P_M v_j - cos u_j| = {action:.1e}, planted-angle error = {planted:.1e} (limits 1e-10), {secs:.2}s < 5s"
        ),
    )
}

fn c2_frames() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut frames_seen = 0;
    for (_, m, n) in the_corpus() {
        for f in jordan_frames(&principal_angles(&m, &n, DEFAULT_TOL).unwrap()) {
            let (c, s) = (f.theta.cos(), f.theta.sin());
            let recon = f.s.scale(c / s) - f.t.scale(1.0 / s);
            for dev in [
                (inner(&f.u, &f.v) - c).norm(),
                (inner(&f.s, &f.t) - c).norm(),
                (inner(&f.s, &f.v) - s).norm(),
                (inner(&f.u, &f.t) + s).norm(),
                (&f.u - recon).norm(),
            ] {
                worst = worst.max(dev);
            }
            frames_seen += 1;
        }
    }
    outcome(
        worst <= 1e-10,
        format!("{frames_seen} frames, max deviation {worst:.1e} (limit 1e-10)"),
    )
}

fn c3_swap_unitary() -> Outcome {
    let start = Instant::now();
    let (mut unitary, mut skew, mut maps) = (0.0f64, 0.0f64, 0.0f64);
    let mut all_equivalent = true;
    let entries = generic_corpus(100, CORPUS_SEED ^ 0x5a5a);
    for e in &entries {
        let (m, n) = e.synthesize().unwrap();
        let u = build_swap_unitary(&m, &n, DEFAULT_TOL).unwrap();
        let dim = m.ambient_dim();
        unitary = unitary.max(op_norm(&(u.adjoint() * &u - identity(dim))));
        skew = skew.max(op_norm(&(&u + u.adjoint())));
        let (mp, np) = (m.complement(), n.complement());
        let um = &u * m.basis();
        let un = &u * n.basis();
        maps = maps
            .max((mp.projector() * &um - &um).norm())
            .max((np.projector() * &un - &un).norm());
        all_equivalent &= decide_equivalent((&m, &n), (&mp, &np), DEFAULT_TOL)
            .unwrap()
            .equivalent;
    }
    let (fast, secs) = within(start, Duration::from_secs(5));
    outcome(
        unitary <= 1e-10 && skew <= 1e-10 && maps <= 1e-9 && all_equivalent && fast,
        format!(
            "{} pairs, ||U*U-I|| = {unitary:.1e}, ||U+U*|| = {skew:.1e} (limits 1e-10), ||P_perp U B - U B|| = {maps:.1e} (limit 1e-9), all equivalent = {all_equivalent}, {secs:.2}s < 5s",
            entries.len()
        ),
    )
}

/// Largest eigenvalue of a Hermitian matrix.
fn lambda_max(h: &CMatrix) -> f64 {
    *hermitian_eigen(h).0.last().unwrap()
}

fn c4_norms() -> Outcome {
    let (mut sum_dev, mut prod_dev): (f64, f64) = (0.0, 0.0);
    for (e, m, n) in the_corpus() {
        let pair = ProjectorPair::new(&m, &n).unwrap();
        let pq = &pair.p * &pair.q;
        // norms from eigenvalues, independent of any SVD
        let norm_sum = lambda_max(&(&pair.p + &pair.q));
        let norm_pq = lambda_max(&(pq.adjoint() * &pq)).max(0.0).sqrt();
        sum_dev = sum_dev.max((norm_sum - 1.0 - norm_pq).abs());
        prod_dev = prod_dev.max((norm_pq - planted_dixmier(&e).cos()).abs());
    }
    outcome(
        sum_dev <= 1e-10 && prod_dev <= 1e-10,
        format!("max |‖P+Q‖-(1+‖PQ‖)| = {sum_dev:.1e}, max |‖PQ‖-cos θ1| = {prod_dev:.1e} (limits 1e-10)"),
    )
}

fn c5_sum_range() -> Outcome {
    let (mut vs_eig, mut vs_formula): (f64, f64) = (0.0, 0.0);
    for (e, m, n) in the_corpus() {
        let w = sum_range(&m, &n).unwrap();
        let (vals, _) = hermitian_eigen(&(m.projector() + n.projector()));
        vs_eig = vs_eig
            .max((w.lo - vals[0]).abs())
            .max((w.hi - vals[vals.len() - 1]).abs());
        let lo = 2.0 * (planted_complement_dixmier(&e) / 2.0).sin().powi(2);
        let hi = 2.0 * (planted_dixmier(&e) / 2.0).cos().powi(2);
        vs_formula = vs_formula.max((w.lo - lo).abs()).max((w.hi - hi).abs());
    }
    outcome(
        vs_eig <= 1e-10 && vs_formula <= 1e-10,
        format!("vs extreme eigenvalues {vs_eig:.1e}, vs planted-angle formula {vs_formula:.1e} (limits 1e-10)"),
    )
}

/// Eigenvalues of a 2x2 complex matrix from its characteristic polynomial.
fn eig2(x: [[Complex64; 2]; 2]) -> [Complex64; 2] {
    let tr = x[0][0] + x[1][1];
    let det = x[0][0] * x[1][1] - x[0][1] * x[1][0];
    let disc = (tr * tr - det * 4.0).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

fn mul2(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut c = [[c64(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn combine2(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2], sign: f64) -> [[Complex64; 2]; 2] {
    let mut c = a;
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] += b[i][j] * sign;
        }
    }
    c
}

/// Spectrum of one operator kind for a planted pair: each angle contributes
/// the two eigenvalues of the operator on its 2x2 block
/// `P = diag(1, 0)`, `Q = [cos θ, sin θ]ᵀ[cos θ, sin θ]`, and each
/// degenerate axis contributes the operator evaluated at `P, Q ∈ {0, 1}`.
fn planted_spectrum(kind: OperatorKind, e: &CorpusEntry) -> Vec<Complex64> {
    let r = |x: f64| c64(x, 0.0);
    let apply = |p: [[Complex64; 2]; 2], q: [[Complex64; 2]; 2]| match kind {
        OperatorKind::Sum => combine2(p, q, 1.0),
        OperatorKind::Diff => combine2(p, q, -1.0),
        OperatorKind::Pq => mul2(p, q),
        OperatorKind::Qp => mul2(q, p),
        OperatorKind::Anticomm => combine2(mul2(p, q), mul2(q, p), 1.0),
        OperatorKind::Comm => combine2(mul2(p, q), mul2(q, p), -1.0),
    };
    let mut out = Vec::new();
    for &t in &e.angles {
        let (c, s) = (t.cos(), t.sin());
        let p = [[r(1.0), r(0.0)], [r(0.0), r(0.0)]];
        let q = [[r(c * c), r(c * s)], [r(c * s), r(s * s)]];
        out.extend(eig2(apply(p, q)));
    }
    for (count, p, q) in [
        (e.a, 1.0, 1.0),
        (e.b, 0.0, 0.0),
        (e.c, 1.0, 0.0),
        (e.d, 0.0, 1.0),
    ] {
        let one = |x: f64| [[r(x), r(0.0)], [r(0.0), r(0.0)]];
        let v = apply(one(p), one(q))[0][0];
        out.extend(std::iter::repeat_n(v, count));
    }
    out
}

/// Greedy nearest matching of two multisets; infinite when sizes differ.
fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn c6_eigenpairs() -> Outcome {
    let corpus = the_corpus();
    let mut worst_res = [0.0f64; 6];
    let mut worst_solver = [0.0f64; 6];
    let mut worst_planted = [0.0f64; 6];
    for (e, m, n) in &corpus {
        let five = five_part_decompose(m, n, DEFAULT_TOL).unwrap();
        let frames = jordan_frames(&principal_angles(m, n, DEFAULT_TOL).unwrap());
        let pair = ProjectorPair::new(m, n).unwrap();
        for (k, kind) in OperatorKind::ALL.into_iter().enumerate() {
            let a = build_operator(kind, &pair);
            let pairs = analytic_eigenpairs(kind, &frames, &five);
            for p in &pairs {
                let res = (&a * &p.vector - &p.vector * p.value).norm() / p.vector.norm();
                worst_res[k] = worst_res[k].max(res);
            }
            let values: Vec<Complex64> = pairs.iter().map(|p| p.value).collect();
            let solver = numerical_spectrum(kind, &pair).unwrap();
            worst_solver[k] = worst_solver[k].max(multiset_distance(&values, &solver));
            worst_planted[k] =
                worst_planted[k].max(multiset_distance(&values, &planted_spectrum(kind, e)));
        }
    }
    let pass = worst_res.iter().all(|&x| x <= 1e-9)
        && worst_solver.iter().all(|&x| x <= 1e-8)
        && worst_planted.iter().all(|&x| x <= 1e-8);
    let per_kind: Vec<String> = OperatorKind::ALL
        .iter()
        .enumerate()
        .map(|(k, kind)| {
            format!(
                "{kind} {:.0e}/{:.0e}/{:.0e}",
                worst_res[k], worst_solver[k], worst_planted[k]
            )
        })
        .collect();
    outcome(
        pass,
        format!(
            "residual/solver/planted per kind: {} (limits 1e-9/1e-8/1e-8)",
            per_kind.join(", ")
        ),
    )
}

fn c7_elliptic_range() -> Outcome {
    let offdiag = |a: f64, b: f64| {
        CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, 0.0), c64(a, 0.0), c64(b, 0.0), c64(0.0, 0.0)],
        )
    };
    let dist = |a: f64, b: f64| {
        let region = offdiag_ellipse(a, b).unwrap().to_region(720);
        hausdorff_distance(&region, &support_oracle(&offdiag(a, b), 720).unwrap()).unwrap()
    };
    let base = dist(2.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a: f64 = 3.0 * (1.0 - rng.random::<f64>());
        let b: f64 = a * rng.random_range(0.001..0.999);
        worst = worst.max(dist(a, b));
    }
    outcome(
        base <= 1e-3 && worst <= 1e-3,
        format!("(2,1): {base:.1e}, 20 random 0<b<a<=3: max {worst:.1e} (limit 1e-3)"),
    )
}

fn c8_product_range() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut with_a = 0;
    let corpus = the_corpus();
    for (e, m, n) in &corpus {
        let region = product_range(m, n, 720, DEFAULT_TOL).unwrap();
        let pq = build_operator(OperatorKind::Pq, &ProjectorPair::new(m, n).unwrap());
        let oracle = support_oracle(&pq, 720).unwrap();
        worst = worst.max(hausdorff_distance(&region, &oracle).unwrap());
        with_a += usize::from(e.a > 0);
    }
    let (fast, secs) = within(start, Duration::from_secs(30));
    outcome(
        worst <= 2e-3 && with_a >= 10 && fast,
        format!(
            "{} pairs ({with_a} with M∩N ≠ 0), max Hausdorff {worst:.1e} (limit 2e-3), {secs:.2}s < 30s",
            corpus.len()
        ),
    )
}

fn c9_bookkeeping() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut profiles = 0;
    let mut failures = Vec::new();
    for a in 0..=2 {
        for b in 0..=2 {
            for c in 0..=2 {
                for d in 0..=2 {
                    for (angles, seed) in [(vec![0.7], 1u64), (vec![0.35, 1.2], 2)] {
                        let (m, n) =
                            synthesize_pair(&angles, a, b, c, d, seed + 10 * profiles as u64)
                                .unwrap();
                        let rep = complement_angle_relation(&m, &n, DEFAULT_TOL).unwrap();
                        let dev = rep.max_deviation();
                        worst = worst.max(dev);
                        if !(rep.all_pass() && dev <= 1e-9) {
                            failures.push(format!("({a},{b},{c},{d})"));
                        }
                    }
                    profiles += 1;
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{profiles} profiles x 2 angle sets, max deviation {worst:.1e} (limit 1e-9), failing profiles: [{}]",
            failures.join(" ")
        ),
    )
}

fn random_subspace(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Subspace {
    let raw = CMatrix::from_fn(n, k, |_, _| {
        c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    Subspace::orthonormalize(&raw, DEFAULT_TOL).unwrap()
}

fn c10_greedy_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 10);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let (m, n) = if i % 4 == 3 {
            // planted pairs with a shared axis and a right angle
            synthesize_pair(&[rng.random_range(0.1..1.4)], 1, 0, 0, 0, i).unwrap()
        } else {
            let dim = rng.random_range(2..=4usize);
            let p = rng.random_range(1..=2usize.min(dim));
            let q = rng.random_range(1..=2usize.min(dim));
            (
                random_subspace(dim, p, &mut rng),
                random_subspace(dim, q, &mut rng),
            )
        };
        let exact = principal_angles(&m, &n, DEFAULT_TOL).unwrap().angles;
        let greedy = greedy_angle_oracle(&m, &n, 360).unwrap();
        worst = worst.max(if exact.len() == greedy.len() {
            max_of(exact.iter().zip(&greedy).map(|(x, y)| (x - y).abs()))
        } else {
            f64::INFINITY
        });
    }
    outcome(
        worst <= 0.02,
        format!("20 pairs, max |SVD - greedy| = {worst:.1e} rad (limit 0.02 at grid 360)"),
    )
}
