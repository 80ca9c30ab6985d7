#![allow(dead_code)]

use hbb_qss::attack::AttackSpec;
use hbb_qss::qmath::{adjoint, c, CMatrix, CVector};
use hbb_qss::rng::{seeded, QssRng};
use hbb_qss::sampling::{random_orthonormal_kets, random_unit_vector};
use rand::Rng;

pub fn rng(seed: u64) -> QssRng {
    seeded(seed)
}

pub fn random_matrix(n: usize, rng: &mut QssRng) -> CMatrix {
    let rows: Vec<Vec<_>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    CMatrix::from_rows(&rows).unwrap()
}

pub fn random_hermitian(n: usize, rng: &mut QssRng) -> CMatrix {
    let m = random_matrix(n, rng);
    m.add(&adjoint(&m)).unwrap().scale(c(0.5, 0.0))
}

pub fn random_unitary(n: usize, rng: &mut QssRng) -> CMatrix {
    CMatrix::from_columns(&random_orthonormal_kets(n, n, rng).unwrap()).unwrap()
}

pub fn random_density(n: usize, rng: &mut QssRng) -> CMatrix {
    let m = random_matrix(n, rng);
    let rho = hbb_qss::qmath::matmul(&m, &adjoint(&m)).unwrap();
    let tr = rho.trace().re;
    rho.scale(c(1.0 / tr, 0.0))
}

/// A spec satisfying only the normalization constraints: random complex
/// coefficients and unrelated random ancilla kets, `d_E` in 1..=3.
pub fn random_general_spec(rng: &mut QssRng) -> AttackSpec {
    let ancilla_dim = rng.random_range(1..=3);
    let a = random_unit_vector(4, rng);
    let eps = [0; 4].map(|_| random_unit_vector(2 * ancilla_dim, rng));
    AttackSpec::new(ancilla_dim, a.as_slice().try_into().unwrap(), eps).unwrap()
}

pub fn random_ket(dim: usize, rng: &mut QssRng) -> CVector {
    random_unit_vector(dim, rng)
}

/// Binary entropy in bits, written out independently of the library.
pub fn h2(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Error probability on the undetectable family at `|a_00| = c`, with
/// `|a_10| = sqrt(½ - c²)`.
pub fn family_error(cval: f64) -> f64 {
    let s = (0.5 - cval * cval).max(0.0).sqrt();
    0.5 * (1.0 - 4.0 * cval * s)
}

/// Three-sigma band of a binomial proportion.
pub fn three_sigma(p: f64, n: usize) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
