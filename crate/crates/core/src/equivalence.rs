//! Unitary equivalence of subspace pairs and the swap unitary `(M,N) → (M⊥,N⊥)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{outer, CMatrix};
use crate::principal::{jordan_frames, principal_angles};
use crate::subspace::{check_same_ambient, five_part_decompose, Subspace};

/// One of the five dimension conditions for unitary equivalence of pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimCheck {
    pub name: &'static str,
    pub first: usize,
    pub second: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Checks on `a`, `c`, `d`, `b` and `dim R`, in that order.
    pub dim_checks: [DimCheck; 5],
    /// `max |θᵢ⁽¹⁾ − θᵢ⁽²⁾|`, infinite when the angle lists differ in length.
    pub angle_deviation: f64,
}

/// Decides whether two pairs are unitarily equivalent: all five intersection
/// dimensions agree and the principal angles coincide within `tol`.
pub fn decide_equivalent(
    pair1: (&Subspace, &Subspace),
    pair2: (&Subspace, &Subspace),
    tol: f64,
) -> Result<EquivalenceReport> {
    check_same_ambient(pair1.0, pair1.1)?;
    check_same_ambient(pair1.0, pair2.0)?;
    check_same_ambient(pair1.0, pair2.1)?;

    let f1 = five_part_decompose(pair1.0, pair1.1, tol)?;
    let f2 = five_part_decompose(pair2.0, pair2.1, tol)?;
    let t1 = principal_angles(pair1.0, pair1.1, tol)?.angles;
    let t2 = principal_angles(pair2.0, pair2.1, tol)?.angles;

    let dc = |name, first, second| DimCheck {
        name,
        first,
        second,
        pass: first == second,
    };
    let dim_checks = [
        dc("dim(M∩N)", f1.a, f2.a),
        dc("dim(M∩N⊥)", f1.c, f2.c),
        dc("dim(M⊥∩N)", f1.d, f2.d),
        dc("dim(M⊥∩N⊥)", f1.b, f2.b),
        dc("dim R", f1.r_part.dim(), f2.r_part.dim()),
    ];
    let angle_deviation = if t1.len() != t2.len() {
        f64::INFINITY
    } else {
        t1.iter()
            .zip(&t2)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    Ok(EquivalenceReport {
        equivalent: dim_checks.iter().all(|c| c.pass) && angle_deviation <= tol,
        dim_checks,
        angle_deviation,
    })
}

/// `U = Σₖ csc θₖ (tₖ ⊗ sₖ* − sₖ ⊗ tₖ*)` for a pair in generic position.
///
/// `U` is skew-Hermitian and unitary, with `U uₖ = sₖ`, `U vₖ = tₖ`,
/// `U sₖ = −uₖ`; hence `U M = M⊥` and `U N = N⊥`.
pub fn build_swap_unitary(m: &Subspace, n: &Subspace, tol: f64) -> Result<CMatrix> {
    let five = five_part_decompose(m, n, tol)?;
    if !five.is_generic() {
        let named: Vec<String> = [("a", five.a), ("b", five.b), ("c", five.c), ("d", five.d)]
            .iter()
            .filter(|(_, v)| *v > 0)
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        return Err(Error::NotGenericPosition(named.join(", ")));
    }
    let dec = principal_angles(m, n, tol)?;
    let dim = m.ambient_dim();
    let mut u = CMatrix::zeros(dim, dim);
    for f in jordan_frames(&dec) {
        u += (outer(&f.t, &f.s) - outer(&f.s, &f.t)).scale(1.0 / f.mu);
    }
    Ok(u)
}
