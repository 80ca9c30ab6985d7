//! Random attack specs used by property checks and the verification suite.

use std::f64::consts::TAU;

use rand::Rng;

use crate::attack::AttackSpec;
use crate::error::{QssError, Result};
use crate::qmath::{c, inner, CVector};

pub fn random_phases<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    [0; 4].map(|_| rng.random::<f64>() * TAU)
}

pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::new(
            (0..dim)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
        .expect("finite entries");
        if let Some(n) = v.normalized() {
            if v.norm() > 1e-3 {
                return n;
            }
        }
    }
}

/// `count` random orthonormal vectors of dimension `dim` (Gram-Schmidt on
/// random complex vectors).
pub fn random_orthonormal_kets<R: Rng + ?Sized>(
    dim: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<CVector>> {
    if count > dim {
        return Err(QssError::InvalidArgument(format!(
            "cannot fit {count} orthonormal vectors in dimension {dim}"
        )));
    }
    let mut out: Vec<CVector> = Vec::with_capacity(count);
    while out.len() < count {
        let mut v = random_unit_vector(dim, rng);
        for _ in 0..2 {
            for b in &out {
                v = v.sub(&b.scale(inner(b, &v)?))?;
            }
        }
        if v.norm() > 1e-6 {
            out.push(v.normalized().expect("nonzero"));
        }
    }
    Ok(out)
}


/// An attack meeting the full-information conditions: `|a_ij| = ½` with random
/// phases and a random orthonormal set of ancilla kets (`d_E` of 2 or 4).
pub fn random_nas_spec<R: Rng + ?Sized>(rng: &mut R) -> Result<AttackSpec> {
    let ancilla_dim = if rng.random_bool(0.5) { 2 } else { 4 };
    let kets = random_orthonormal_kets(2 * ancilla_dim, 4, rng)?;
    let a = random_phases(rng).map(|p| c(0.5 * p.cos(), 0.5 * p.sin()));
    AttackSpec::new(ancilla_dim, a, kets.try_into().expect("four kets"))
}

/// Shifts `|a_00|` by `delta` (keeping its phase) and renormalizes all
/// coefficients.
pub fn perturb_magnitude(spec: &AttackSpec, delta: f64) -> Result<AttackSpec> {
    let mut a = *spec.coefficients();
    let m = a[0].norm();
    let phase = if m > 0.0 { a[0] / m } else { c(1.0, 0.0) };
    a[0] = phase * (m + delta);
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if total == 0.0 {
        return Err(QssError::InvalidArgument("perturbation removed every coefficient".into()));
    }
    let a = a.map(|z| z / total);
    AttackSpec::new(spec.ancilla_dim(), a, spec.ancilla_kets().clone())
}

/// Rotates `ε_00` toward `ε_01` by `angle` within their common plane.
pub fn rotate_eps(spec: &AttackSpec, angle: f64) -> Result<AttackSpec> {
    let mut eps = spec.ancilla_kets().clone();
    let e0 = eps[0].clone();
    let e1 = eps[1].clone();
    let orth = e1.sub(&e0.scale(inner(&e0, &e1)?))?;
    let orth = orth.normalized().ok_or_else(|| {
        QssError::InvalidArgument("ancilla kets 00 and 01 are parallel".into())
    })?;
    eps[0] = e0
        .scale(c(angle.cos(), 0.0))
        .add(&orth.scale(c(angle.sin(), 0.0)))?;
    AttackSpec::new(spec.ancilla_dim(), *spec.coefficients(), eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{escape_check, nas_check, DEFAULT_TOL};
    use crate::rng::seeded;

    #[test]
    fn orthonormal_kets() {
        let kets = random_orthonormal_kets(4, 4, &mut seeded(6)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let ip = inner(&kets[i], &kets[j]).unwrap().norm();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12);
            }
        }
        assert!(random_orthonormal_kets(2, 3, &mut seeded(6)).is_err());
    }

    #[test]
    fn nas_specs_and_perturbations() {
        let mut rng = seeded(7);
        let spec = random_nas_spec(&mut rng).unwrap();
        assert!(nas_check(&spec, 1e-12).satisfied);
        let moved = perturb_magnitude(&spec, 0.05).unwrap();
        assert!(!nas_check(&moved, DEFAULT_TOL).satisfied);
        let turned = rotate_eps(&spec, 0.05).unwrap();
        assert!((turned.eps(0, 0).norm_sqr() - 1.0).abs() < 1e-12);
        assert!(!escape_check(&turned, DEFAULT_TOL).unwrap().escaped);
    }
}
