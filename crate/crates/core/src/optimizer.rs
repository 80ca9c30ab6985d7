//! Numerical maximization of the attacker's information over undetectable
//! attacks.
//!
//! With mutually orthogonal ancilla kets, an undetectable attack is fixed by
//! `c = |a_00| = |a_11|`, `s = |a_01| = |a_10| = √(½ - c²)` and four phases,
//! and the information depends on `c` alone. The search is a golden-section
//! search over `c`, checked against random phases and ancilla bases, and
//! separately against a projected random search over general attacks.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use serde::Serialize;

use crate::attack::{
    analyze, escape_check, mutual_information, pe_closed_form, pe_numeric, AttackSpec, Case,
    DEFAULT_TOL,
};
use crate::error::{QssError, Result};
use crate::qmath::{c as cplx, inner, CVector, ZERO};
use crate::sampling::{random_orthonormal_kets, random_phases, random_unit_vector};

/// Largest allowed `c`.
pub const C_MAX: f64 = FRAC_1_SQRT_2;
/// Helstrom and closed-form error probabilities must agree this closely.
pub const CROSS_CHECK_TOL: f64 = 1e-9;
/// Objective values may differ by this much under a change of phases or
/// ancilla basis.
pub const PHASE_INVARIANCE_TOL: f64 = 1e-10;

/// Ancilla kets of a family point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpsConfig {
    /// `|00>, |01>, |10>, |11>` on `C E` with one ancilla qubit.
    Standard,
    /// Four orthonormal kets given as `[re, im]` pairs.
    Explicit {
        ancilla_dim: usize,
        kets: Vec<Vec<[f64; 2]>>,
    },
}

impl EpsConfig {
    pub fn explicit(ancilla_dim: usize, kets: &[CVector]) -> Self {
        EpsConfig::Explicit {
            ancilla_dim,
            kets: kets
                .iter()
                .map(|k| k.as_slice().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    fn materialize(&self) -> Result<(usize, [CVector; 4])> {
        match self {
            EpsConfig::Standard => Ok((2, [0, 1, 2, 3].map(|k| CVector::basis(4, k)))),
            EpsConfig::Explicit { ancilla_dim, kets } => {
                if kets.len() != 4 {
                    return Err(QssError::InvalidArgument(format!(
                        "need four ancilla kets, got {}",
                        kets.len()
                    )));
                }
                let vs = kets
                    .iter()
                    .map(|k| CVector::new(k.iter().map(|&[re, im]| cplx(re, im)).collect()))
                    .collect::<Result<Vec<_>>>()?;
                Ok((*ancilla_dim, vs.try_into().expect("four kets")))
            }
        }
    }
}

/// A point of the undetectable family with orthogonal ancilla kets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eq6FamilyPoint {
    /// `|a_00| = |a_11|`.
    pub c: f64,
    /// `|a_01| = |a_10|`, derived from `c`.
    pub s: f64,
    /// Phases of `a_00, a_01, a_10, a_11`.
    pub phases: [f64; 4],
    pub eps: EpsConfig,
}

impl Eq6FamilyPoint {
    pub fn new(c: f64, phases: [f64; 4], eps: EpsConfig) -> Result<Self> {
        if !c.is_finite() || !(0.0..=C_MAX + 1e-12).contains(&c) {
            return Err(QssError::InvalidArgument(format!(
                "c = {c} lies outside [0, 1/√2]"
            )));
        }
        let c = c.min(C_MAX);
        let s = (0.5 - c * c).max(0.0).sqrt();
        Ok(Self { c, s, phases, eps })
    }

    /// Zero phases and the standard ancilla kets.
    pub fn plain(c: f64) -> Result<Self> {
        Self::new(c, [0.0; 4], EpsConfig::Standard)
    }

    pub fn to_spec(&self) -> Result<AttackSpec> {
        let (ancilla_dim, eps) = self.eps.materialize()?;
        for i in 0..4 {
            for j in i + 1..4 {
                let overlap = inner(&eps[i], &eps[j])?.norm();
                if overlap > DEFAULT_TOL {
                    return Err(QssError::InvalidArgument(format!(
                        "ancilla kets {i} and {j} overlap by {overlap:.3e}"
                    )));
                }
            }
        }
        let m = [self.c, self.s, self.s, self.c];
        let a = [0, 1, 2, 3].map(|k| cplx(m[k] * self.phases[k].cos(), m[k] * self.phases[k].sin()));
        AttackSpec::new(ancilla_dim, a, eps)
    }
}

/// Information of a family point from the closed form, cross-checked against
/// the Helstrom error of every case.
pub fn objective(point: &Eq6FamilyPoint) -> Result<f64> {
    let spec = point.to_spec()?;
    let closed = pe_closed_form(&spec)?;
    for case in Case::ALL {
        let numeric = pe_numeric(&spec, case)?;
        if (numeric - closed).abs() > CROSS_CHECK_TOL {
            return Err(QssError::Inconsistent(format!(
                "c = {}: case {case} Helstrom error {numeric:.12} vs closed form {closed:.12}",
                point.c
            )));
        }
    }
    mutual_information(closed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Random phase/basis draws used to confirm the result.
    pub restarts: usize,
    /// Golden-section iteration cap.
    pub max_iters: usize,
    /// Stop when the bracket on `c` is this narrow.
    pub bracket_tol: f64,
    /// Search interval for `c`.
    pub c_range: (f64, f64),
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 200,
            bracket_tol: 1e-10,
            c_range: (0.0, C_MAX),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    /// Best information seen so far.
    pub info: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub best_info: f64,
    pub best_point: Eq6FamilyPoint,
    pub trace: Vec<TracePoint>,
    /// The bracket shrank below the tolerance within the iteration cap.
    pub converged: bool,
    pub iterations: usize,
    /// Objective at the best `c` under each random phase/basis draw.
    pub restart_infos: Vec<f64>,
}

impl OptimizationResult {
    pub fn to_json(&self) -> Result<String> {
        crate::output::to_json(self)
    }
}

/// A family point at `c` with random phases and a random orthonormal ancilla
/// basis.
pub fn random_family_point<R: Rng + ?Sized>(c: f64, rng: &mut R) -> Result<Eq6FamilyPoint> {
    let ancilla_dim = if rng.random_bool(0.5) { 2 } else { 4 };
    let kets = random_orthonormal_kets(2 * ancilla_dim, 4, rng)?;
    Eq6FamilyPoint::new(c, random_phases(rng), EpsConfig::explicit(ancilla_dim, &kets))
}

/// Golden-section search for the most informative `c`, followed by the
/// phase and basis invariance check at the optimum.
pub fn maximize<R: Rng + ?Sized>(config: &OptimizerConfig, rng: &mut R) -> Result<OptimizationResult> {
    if config.restarts == 0 {
        return Err(QssError::InvalidArgument("need at least one restart".into()));
    }
    let (lo, hi) = config.c_range;
    if !(0.0 <= lo && lo < hi && hi <= C_MAX + 1e-12) {
        return Err(QssError::InvalidArgument(format!(
            "c range [{lo}, {hi}] must lie within [0, 1/√2]"
        )));
    }
    let f = |c: f64| objective(&Eq6FamilyPoint::plain(c)?);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;

    let (mut a, mut b) = (lo, hi.min(C_MAX));
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    let mut best = [(lo, f(lo)?), (b, f(b)?), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc });
    let mut trace = vec![TracePoint {
        iteration: 0,
        info: best.1,
    }];
    let mut iterations = 0;
    while b - a > config.bracket_tol && iterations < config.max_iters {
        iterations += 1;
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
        trace.push(TracePoint {
            iteration: iterations,
            info: best.1,
        });
    }
    let converged = b - a <= config.bracket_tol;

    let mut restart_infos = Vec::with_capacity(config.restarts);
    for _ in 0..config.restarts {
        let point = random_family_point(best.0, rng)?;
        let info = objective(&point)?;
        if (info - best.1).abs() > PHASE_INVARIANCE_TOL {
            return Err(QssError::Inconsistent(format!(
                "objective at c = {} changed from {:.12} to {info:.12} under a phase/basis change",
                best.0, best.1
            )));
        }
        restart_infos.push(info);
    }

    Ok(OptimizationResult {
        best_info: best.1.min(1.0),
        best_point: Eq6FamilyPoint::plain(best.0)?,
        trace,
        converged,
        iterations,
        restart_infos,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomSearchResult {
    pub samples: usize,
    pub best_info: f64,
}

/// Draws general attacks, projects each onto the undetectable set (equal
/// magnitudes within the two coefficient pairs, ancilla kets orthogonalized
/// wherever both coefficients are nonzero) and returns the best information
/// found. Coefficient pairs are zeroed at random so that non-orthogonal kets
/// are also explored.
pub fn random_search<R: Rng + ?Sized>(samples: usize, rng: &mut R) -> Result<RandomSearchResult> {
    let mut best_info: f64 = 0.0;
    for _ in 0..samples {
        let spec = random_projected_spec(rng)?;
        let check = escape_check(&spec, DEFAULT_TOL)?;
        if !check.escaped {
            return Err(QssError::Inconsistent(format!(
                "projected attack is detectable (residual {:.3e})",
                check.max_residual
            )));
        }
        best_info = best_info.max(analyze(&spec)?.info);
    }
    Ok(RandomSearchResult { samples, best_info })
}

fn random_projected_spec<R: Rng + ?Sized>(rng: &mut R) -> Result<AttackSpec> {
    let ancilla_dim = if rng.random_bool(0.5) { 2 } else { 4 };
    let dim = 2 * ancilla_dim;
    let mut a: Vec<_> = (0..4)
        .map(|_| cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    match rng.random_range(0..4) {
        0 => {
            a[0] = ZERO;
            a[3] = ZERO;
        }
        1 => {
            a[1] = ZERO;
            a[2] = ZERO;
        }
        _ => {}
    }
    let pair_mag = |x: usize, y: usize| (a[x].norm() + a[y].norm()) / 2.0;
    let (m0, m1) = (pair_mag(0, 3), pair_mag(1, 2));
    let scale = (2.0 * m0 * m0 + 2.0 * m1 * m1).sqrt();
    let mags = [m0, m1, m1, m0].map(|m| m / scale);
    let coeffs: Vec<_> = a
        .iter()
        .zip(mags)
        .map(|(z, m)| {
            let phase = if z.norm() > 0.0 { z / z.norm() } else { cplx(1.0, 0.0) };
            phase * m
        })
        .collect();
    let mut kets: Vec<CVector> = Vec::with_capacity(4);
    for k in 0..4 {
        let mut v = random_unit_vector(dim, rng);
        for _ in 0..2 {
            for (j, b) in kets.iter().enumerate() {
                if mags[j] > 0.0 && mags[k] > 0.0 {
                    v = v.sub(&b.scale(inner(b, &v)?))?;
                }
            }
        }
        kets.push(v.normalized().ok_or_else(|| {
            QssError::Inconsistent("orthogonalization produced a zero ket".into())
        })?);
    }
    AttackSpec::new(
        ancilla_dim,
        coeffs.try_into().expect("four coefficients"),
        kets.try_into().expect("four kets"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn objective_landmarks() {
        assert!((objective(&Eq6FamilyPoint::plain(0.5).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!(objective(&Eq6FamilyPoint::plain(C_MAX).unwrap()).unwrap().abs() < 1e-12);
        let s: f64 = (0.5f64 - 0.36).sqrt();
        let pe = 0.5 * (1.0 - 4.0 * 0.6 * s);
        let oracle = 1.0 + pe * pe.log2() + (1.0 - pe) * (1.0 - pe).log2();
        let got = objective(&Eq6FamilyPoint::plain(0.6).unwrap()).unwrap();
        assert!((got - oracle).abs() < 1e-12);
    }

    #[test]
    fn infeasible_points_are_rejected() {
        assert!(Eq6FamilyPoint::plain(0.8).is_err());
        assert!(Eq6FamilyPoint::plain(-0.1).is_err());
        let kets = vec![CVector::basis(4, 0); 4];
        let p = Eq6FamilyPoint::new(0.5, [0.0; 4], EpsConfig::explicit(2, &kets)).unwrap();
        assert!(objective(&p).is_err());
    }

    #[test]
    fn default_run_finds_the_maximum() {
        let r = maximize(&OptimizerConfig::default(), &mut seeded(3)).unwrap();
        assert!(r.converged);
        assert!(r.best_info >= 1.0 - 1e-6);
        assert!((r.best_point.c - 0.5).abs() < 1e-3);
        assert!(r.trace.windows(2).all(|w| w[1].info >= w[0].info));
        assert!(r.iterations <= 200);
    }

    #[test]
    fn restricted_range_ends_at_boundary() {
        let cfg = OptimizerConfig {
            c_range: (0.65, C_MAX),
            ..OptimizerConfig::default()
        };
        let r = maximize(&cfg, &mut seeded(4)).unwrap();
        assert!((r.best_point.c - 0.65).abs() < 1e-8);
    }

    #[test]
    fn random_search_stays_below_one() {
        let r = random_search(30, &mut seeded(5)).unwrap();
        assert!(r.best_info <= 1.0 + 1e-12);
    }
}
