//! Closed-form eigensystems of the six basic operators built from `P` and `Q`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, CMatrix, CVector};
use crate::principal::JordanFrame;
use crate::subspace::{FivePartDecomposition, ProjectorPair, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorKind {
    /// `P + Q`
    Sum,
    /// `P − Q`
    Diff,
    /// `PQ`
    Pq,
    /// `QP`
    Qp,
    /// `PQ + QP`
    Anticomm,
    /// `PQ − QP`
    Comm,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 6] = [
        OperatorKind::Sum,
        OperatorKind::Diff,
        OperatorKind::Pq,
        OperatorKind::Qp,
        OperatorKind::Anticomm,
        OperatorKind::Comm,
    ];

    pub fn label(self) -> &'static str {
        match self {
            OperatorKind::Sum => "SUM",
            OperatorKind::Diff => "DIFF",
            OperatorKind::Pq => "PQ",
            OperatorKind::Qp => "QP",
            OperatorKind::Anticomm => "ANTICOMM",
            OperatorKind::Comm => "COMM",
        }
    }

    /// Scalar by which the operator acts on each degenerate part, in the
    /// order `M∩N`, `M∩N⊥`, `M⊥∩N`, `M⊥∩N⊥`.
    ///
    /// On those parts `P` and `Q` are each `0` or `I`, so every kind is a
    /// scalar there.
    fn degenerate_values(self) -> [f64; 4] {
        let eval = |p: f64, q: f64| match self {
            OperatorKind::Sum => p + q,
            OperatorKind::Diff => p - q,
            OperatorKind::Pq | OperatorKind::Qp => p * q,
            OperatorKind::Anticomm => 2.0 * p * q,
            OperatorKind::Comm => 0.0,
        };
        [
            eval(1.0, 1.0),
            eval(1.0, 0.0),
            eval(0.0, 1.0),
            eval(0.0, 0.0),
        ]
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.label() == up)
            .or(match up.as_str() {
                "P+Q" => Some(OperatorKind::Sum),
                "P-Q" => Some(OperatorKind::Diff),
                "PQ+QP" => Some(OperatorKind::Anticomm),
                "PQ-QP" => Some(OperatorKind::Comm),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidInput(format!("unknown operator kind `{s}`")))
    }
}

/// An eigenpair; the vector is not normalized.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: CVector,
}

impl EigenPair {
    /// `‖A x − λ x‖ / ‖x‖`.
    pub fn relative_residual(&self, a: &CMatrix) -> f64 {
        (a * &self.vector - &self.vector * self.value).norm() / self.vector.norm()
    }
}

pub fn build_operator(kind: OperatorKind, pair: &ProjectorPair) -> CMatrix {
    let (p, q) = (&pair.p, &pair.q);
    match kind {
        OperatorKind::Sum => p + q,
        OperatorKind::Diff => p - q,
        OperatorKind::Pq => p * q,
        OperatorKind::Qp => q * p,
        OperatorKind::Anticomm => p * q + q * p,
        OperatorKind::Comm => p * q - q * p,
    }
}

/// Eigenpairs read off the Jordan frames, plus the scalar action on the four
/// degenerate parts of the five-part splitting.
///
/// Per frame with `λ = cos θ`, `μ = sin θ`:
///
/// | kind      | pairs |
/// |-----------|-------|
/// | SUM       | `(1+λ, u+v)`, `(1−λ, u−v)` |
/// | DIFF      | `(μ, u − ((1−μ)/λ) v)`, `(−μ, u − ((1+μ)/λ) v)` |
/// | PQ        | `(λ², u)`, `(0, t)` |
/// | QP        | `(λ², v)`, `(0, s)` |
/// | ANTICOMM  | `(λ²+λ, u+v)`, `(λ²−λ, u−v)` |
/// | COMM      | `(iλμ, u − e^{−iθ} v)`, `(−iλμ, u − e^{iθ} v)` |
pub fn analytic_eigenpairs(
    kind: OperatorKind,
    frames: &[JordanFrame],
    five: &FivePartDecomposition,
) -> Vec<EigenPair> {
    let mut out = Vec::with_capacity(five.r_part.ambient_dim());
    for f in frames {
        let (l, m) = (f.lambda, f.mu);
        let (u, v) = (&f.u, &f.v);
        let pair = |value: Complex64, vector: CVector| EigenPair { value, vector };
        let real = |x: f64| c64(x, 0.0);
        match kind {
            OperatorKind::Sum => {
                out.push(pair(real(1.0 + l), u + v));
                out.push(pair(real(1.0 - l), u - v));
            }
            OperatorKind::Diff => {
                out.push(pair(real(m), u - v.scale((1.0 - m) / l)));
                out.push(pair(real(-m), u - v.scale((1.0 + m) / l)));
            }
            OperatorKind::Pq => {
                out.push(pair(real(l * l), u.clone()));
                out.push(pair(real(0.0), f.t.clone()));
            }
            OperatorKind::Qp => {
                out.push(pair(real(l * l), v.clone()));
                out.push(pair(real(0.0), f.s.clone()));
            }
            OperatorKind::Anticomm => {
                out.push(pair(real(l * l + l), u + v));
                out.push(pair(real(l * l - l), u - v));
            }
            OperatorKind::Comm => {
                let e = Complex64::from_polar(1.0, f.theta);
                out.push(pair(c64(0.0, l * m), u - v * e.conj()));
                out.push(pair(c64(0.0, -l * m), u - v * e));
            }
        }
    }
    let parts: [&Subspace; 4] = [&five.mn, &five.mn_perp, &five.m_perp_n, &five.both_perp];
    for (part, value) in parts.into_iter().zip(kind.degenerate_values()) {
        for col in part.basis().column_iter() {
            out.push(EigenPair {
                value: c64(value, 0.0),
                vector: col.into_owned(),
            });
        }
    }
    out
}

/// Eigenvalues of the assembled operator from the general (Schur) solver.
pub fn numerical_spectrum(kind: OperatorKind, pair: &ProjectorPair) -> Result<Vec<Complex64>> {
    linalg::eigenvalues(&build_operator(kind, pair))
}

/// Largest distance between matched elements of two eigenvalue multisets.
///
/// Both lists are sorted by real then imaginary part and each element of the
/// first is matched greedily to its nearest unmatched element of the second.
/// Returns infinity when the lengths differ.
pub fn spectrum_mismatch(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let sort = |xs: &[Complex64]| {
        let mut v = xs.to_vec();
        v.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        v
    };
    let (a, b) = (sort(a), sort(b));
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in &a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}
