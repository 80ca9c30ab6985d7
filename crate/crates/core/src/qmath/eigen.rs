//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `h[p][q]` with a diagonal
//! unitary, then applies the classic real Jacobi rotation that zeroes it.

use num_complex::Complex64;

use super::{CMatrix, STRUCT_TOL, ZERO};
use crate::error::{QssError, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, sorted descending.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn reassemble_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut out = CMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reassemble(&self) -> CMatrix {
        self.reassemble_with(|x| x)
    }
}

fn off_diagonal_mass(h: &CMatrix) -> f64 {
    let n = h.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += h[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Input must be square and Hermitian to within `1e-10` (max entry of
/// `h - h^dagger`). Convergence is declared when the off-diagonal Frobenius
/// mass drops below `1e-14` relative to `max(1, ||h||_F)`.
pub fn hermitian_eigen(h: &CMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(QssError::Shape(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let deviation = h.hermitian_deviation();
    if deviation > STRUCT_TOL {
        return Err(QssError::NotHermitian { deviation });
    }

    let n = h.rows();
    // Work on the exactly Hermitian part.
    let mut a = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
        }
    }
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);
    let threshold = OFF_DIAGONAL_TOL * scale;

    let mut converged = off_diagonal_mass(&a) < threshold;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_mass(&a) < threshold;
    }
    if !converged {
        return Err(QssError::NoConvergence {
            sweeps,
            off: off_diagonal_mass(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip pivots that are negligible next to both diagonal entries.
    if app.abs() + b * 1e2 == app.abs() && aqq.abs() + b * 1e2 == aqq.abs() {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / b; // e^{i phi}
    let theta = (aqq - app) / (2.0 * b);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let cos = 1.0 / (t * t + 1.0).sqrt();
    let sin = t * cos;

    // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
    let conj_phase = phase.conj();
    let g_pp = Complex64::new(cos, 0.0);
    let g_pq = Complex64::new(sin, 0.0);
    let g_qp = conj_phase * (-sin);
    let g_qq = conj_phase * cos;

    let n = a.rows();
    // A <- A G (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G^dagger A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{c, CVector};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn pauli_z() {
        let z = CMatrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let eig = hermitian_eigen(&z).unwrap();
        assert_eq!(eig.values, vec![1.0, -1.0]);
    }

    #[test]
    fn pauli_x_eigenvectors_are_x_kets() {
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let eig = hermitian_eigen(&x).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] + 1.0).abs() < 1e-14);
        let plus = CVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let minus = CVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap();
        assert!(eig.vectors.column(0).phase_distance(&plus).unwrap() < 1e-12);
        assert!(eig.vectors.column(1).phase_distance(&minus).unwrap() < 1e-12);
    }

    #[test]
    fn pauli_y_complex_pivot() {
        let y = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eigen(&y).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!(eig.reassemble().max_abs_diff(&y).unwrap() < 1e-14);
    }

    #[test]
    fn degenerate_and_diagonal_inputs() {
        let id = CMatrix::identity(5);
        let eig = hermitian_eigen(&id).unwrap();
        assert!(eig.values.iter().all(|&x| x == 1.0));
        assert_eq!(eig.vectors, id);
    }

    #[test]
    fn rejects_non_hermitian_with_deviation() {
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 2.0)],
            vec![c(0.0, 2.0), c(1.0, 0.0)],
        ])
        .unwrap();
        match hermitian_eigen(&m) {
            Err(QssError::NotHermitian { deviation }) => assert!((deviation - 4.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(hermitian_eigen(&CMatrix::zeros(2, 3)).is_err());
    }
}
