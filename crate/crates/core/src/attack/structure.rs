use serde::Serialize;

use crate::error::{QssError, Result};
use crate::qmath::{complete_orthonormal_basis, inner, CMatrix, CVector};

use super::spec::AttackSpec;

/// Diagnostics for the no-error, full-information conditions: mutually
/// orthogonal ancilla kets and every `|a_ij| = ½`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NasCheck {
    pub satisfied: bool,
    /// `|<ε_kl|ε_mn>|` for the six pairs in row-major order.
    pub overlaps: [f64; 6],
    /// `||a_ij| - ½|` in row-major order.
    pub magnitude_gaps: [f64; 4],
}

pub fn nas_check(spec: &AttackSpec, tol: f64) -> NasCheck {
    let e = spec.ancilla_kets();
    let mut overlaps = [0.0; 6];
    let mut k = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            overlaps[k] = inner(&e[i], &e[j]).expect("equal dimensions").norm();
            k += 1;
        }
    }
    let magnitude_gaps = spec.coefficients().map(|a| (a.norm() - 0.5).abs());
    let satisfied = overlaps.iter().chain(&magnitude_gaps).all(|&x| x <= tol);
    NasCheck {
        satisfied,
        overlaps,
        magnitude_gaps,
    }
}

/// Whether some unitary on `B, C, E` turns `GHZ ⊗ |0>_E` into the spec's state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Realizability {
    pub realizable: bool,
    /// `||v_0||²` and `||v_1||²`; both must be ½.
    pub branch_norm_sqr: [f64; 2],
    /// `|<v_0|v_1>|`; must vanish.
    pub cross: f64,
}

/// `v_i = Σ_j a_ij |j>_B |ε_ij>_CE`, the part of the state attached to
/// Alice's `|i>`.
pub fn branch_vectors(spec: &AttackSpec) -> [CVector; 2] {
    let ce = spec.ce_dim();
    [0, 1].map(|i| {
        let mut v = CVector::zeros(2 * ce);
        for j in 0..2 {
            let w = spec.weighted(i, j);
            for k in 0..ce {
                v[j * ce + k] = w[k];
            }
        }
        v
    })
}

pub fn is_realizable(spec: &AttackSpec, tol: f64) -> Realizability {
    let [v0, v1] = branch_vectors(spec);
    let branch_norm_sqr = [v0.norm_sqr(), v1.norm_sqr()];
    let cross = inner(&v0, &v1).expect("equal dimensions").norm();
    let realizable = branch_norm_sqr.iter().all(|n| (n - 0.5).abs() <= tol) && cross <= tol;
    Realizability {
        realizable,
        branch_norm_sqr,
        cross,
    }
}

/// A unitary on `B ⊗ C ⊗ E` sending `|000>` to `√2 v_0` and `|110>` to
/// `√2 v_1`; the remaining columns complete an orthonormal basis.
pub fn interaction_unitary(spec: &AttackSpec, tol: f64) -> Result<CMatrix> {
    let check = is_realizable(spec, tol);
    if !check.realizable {
        return Err(QssError::NotRealizable(format!(
            "branch norms^2 {:.6} and {:.6} (need 0.5), cross term {:.3e} (need 0)",
            check.branch_norm_sqr[0], check.branch_norm_sqr[1], check.cross
        )));
    }
    let d = spec.ancilla_dim();
    let dim = 4 * d;
    let [v0, v1] = branch_vectors(spec);
    let u0 = v0.normalized().expect("norm ½");
    let mut u1 = v1.normalized().expect("norm ½");
    // Remove the residual overlap left within tolerance.
    u1 = u1
        .sub(&u0.scale(inner(&u0, &u1)?))?
        .normalized()
        .expect("orthogonal to u0");
    let basis = complete_orthonormal_basis(&[u0, u1], dim)?;
    // Column of |110> in the B, C, E ordering.
    let one_col = 3 * d;
    let mut rest = basis[2..].iter();
    let columns: Vec<CVector> = (0..dim)
        .map(|col| {
            if col == 0 {
                basis[0].clone()
            } else if col == one_col {
                basis[1].clone()
            } else {
                rest.next().expect("enough columns").clone()
            }
        })
        .collect();
    let u = CMatrix::from_columns(&columns)?;
    debug_assert!(u.unitary_deviation() < 1e-10);
    Ok(u)
}
