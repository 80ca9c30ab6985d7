use serde::Serialize;

use crate::error::{QssError, Result};
use crate::qmath::{cross_gram_is_zero, inner, Amplitude, CVector, I};
use crate::qstate::Sign;

use super::conditional::conditional_states;
use super::spec::AttackSpec;
use super::Case;

/// Default tolerance for the escape and NAS booleans.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `a*_kl a_mn <ε_kl|ε_mn>` with `kl`, `mn` given as row-major indices.
fn gram(spec: &AttackSpec, kl: usize, mn: usize) -> Amplitude {
    let a = spec.coefficients();
    let e = spec.ancilla_kets();
    a[kl].conj() * a[mn] * inner(&e[kl], &e[mn]).expect("equal dimensions")
}

const A00: usize = 0;
const A01: usize = 1;
const A10: usize = 2;
const A11: usize = 3;

/// The four detection constraints of one case written as explicit bilinear
/// forms in the attack coefficients. Each form vanishes exactly when the
/// corresponding pair of conditional states is orthogonal.
pub fn bilinear_forms(spec: &AttackSpec, case: Case) -> [Amplitude; 4] {
    let g = |kl, mn| gram(spec, kl, mn);
    let sq = |k: usize| spec.coefficients()[k].norm_sqr();
    let one = Amplitude::new(1.0, 0.0);
    // Sign of the second term in the first two forms, and the factor in
    // front of the interference terms of the last two.
    let (s1, s2, f01, f10, f00, f11) = match case {
        Case::XX => (-one, -one, -one, one, -one, one),
        Case::XY => (one, -one, -I, -I, I, I),
        Case::YX => (-one, one, I, I, I, I),
        Case::YY => (one, one, -one, one, one, -one),
    };
    [
        g(A00, A01) + s1 * g(A11, A10),
        g(A00, A10) + s2 * g(A11, A01),
        sq(A01) + f01 * g(A01, A10) + f10 * g(A10, A01) - sq(A10),
        sq(A00) + f00 * g(A00, A11) + f11 * g(A11, A00) - sq(A11),
    ]
}

/// The four cross products `<Ψ++|Ψ+->`, `<Ψ++|Ψ-+>`, `<Ψ--|Ψ+->`, `<Ψ--|Ψ-+>`
/// of the unnormalized conditional branches.
pub fn direct_cross_products(spec: &AttackSpec, case: Case) -> Result<[Amplitude; 4]> {
    use Sign::{Minus, Plus};
    let t = conditional_states(spec, case)?;
    let b = |m, n| &t.entry(m, n).branch;
    Ok([
        inner(b(Plus, Plus), b(Plus, Minus))?,
        inner(b(Plus, Plus), b(Minus, Plus))?,
        inner(b(Minus, Minus), b(Plus, Minus))?,
        inner(b(Minus, Minus), b(Minus, Plus))?,
    ])
}

/// Magnitudes of every detection constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionResiduals {
    /// Per case (in `Case::ALL` order), the four bilinear-form magnitudes.
    pub per_case: [[f64; 4]; 4],
    /// The six cross terms `|a*_kl a_mn <ε_kl|ε_mn>|` followed by
    /// `||a_00| - |a_11||` and `||a_01| - |a_10||`.
    pub aggregate: [f64; 8],
}

impl DetectionResiduals {
    pub fn max_per_case(&self) -> f64 {
        self.per_case.iter().flatten().fold(0.0, |m, &x| m.max(x))
    }

    pub fn max_aggregate(&self) -> f64 {
        self.aggregate.iter().fold(0.0, |m, &x| m.max(x))
    }

    pub fn flat_per_case(&self) -> Vec<f64> {
        self.per_case.iter().flatten().copied().collect()
    }
}

pub fn detection_residuals(spec: &AttackSpec) -> DetectionResiduals {
    let mut per_case = [[0.0; 4]; 4];
    for (row, case) in per_case.iter_mut().zip(Case::ALL) {
        for (r, f) in row.iter_mut().zip(bilinear_forms(spec, case)) {
            *r = f.norm();
        }
    }
    let a = spec.coefficients();
    let pairs = [(A00, A01), (A00, A10), (A00, A11), (A01, A10), (A01, A11), (A10, A11)];
    let mut aggregate = [0.0; 8];
    for (slot, &(kl, mn)) in aggregate.iter_mut().zip(&pairs) {
        *slot = gram(spec, kl, mn).norm();
    }
    aggregate[6] = (a[A00].norm() - a[A11].norm()).abs();
    aggregate[7] = (a[A01].norm() - a[A10].norm()).abs();
    DetectionResiduals { per_case, aggregate }
}

/// Outcome of the two-route escape test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EscapeCheck {
    pub escaped: bool,
    /// Largest bilinear-form magnitude over all cases.
    pub max_residual: f64,
    /// Largest overlap between normalized states of the two announcement sets.
    pub max_overlap: f64,
}

/// Largest overlap between the normalized conditional states of the two
/// announcement sets of one case. Empty sets are trivially orthogonal.
pub fn announcement_overlap(spec: &AttackSpec, case: Case) -> Result<f64> {
    let table = conditional_states(spec, case)?;
    let [same, opposite] = table.announcement_sets();
    let collect = |set: [&super::ConditionalEntry; 2]| -> Vec<CVector> {
        set.iter().filter_map(|e| e.phi.clone()).collect()
    };
    match cross_gram_is_zero(&collect(same), &collect(opposite), 0.0) {
        Ok(check) => Ok(check.max_overlap),
        Err(QssError::EmptySet) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Whether Charlie can always announce correctly. The bilinear forms and the
/// direct orthogonality test must agree; a clear disagreement is reported as
/// an error. Near the tolerance boundary the conservative answer `false` is
/// returned.
pub fn escape_check(spec: &AttackSpec, tol: f64) -> Result<EscapeCheck> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(QssError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let max_residual = detection_residuals(spec).max_per_case();
    let mut max_overlap: f64 = 0.0;
    for case in Case::ALL {
        max_overlap = max_overlap.max(announcement_overlap(spec, case)?);
    }
    let by_forms = max_residual <= tol;
    let by_states = max_overlap <= tol;
    if by_forms != by_states {
        let failing = if by_forms { max_overlap } else { max_residual };
        if failing > tol.sqrt() {
            return Err(QssError::Inconsistent(format!(
                "escape routes disagree: bilinear residual {max_residual:.3e}, state overlap {max_overlap:.3e}"
            )));
        }
    }
    Ok(EscapeCheck {
        escaped: by_forms && by_states,
        max_residual,
        max_overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::c;

    fn skewed() -> AttackSpec {
        AttackSpec::new(
            2,
            [c(0.6f64.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.4f64.sqrt(), 0.0)],
            [
                CVector::basis(4, 0),
                CVector::basis(4, 0),
                CVector::basis(4, 0),
                CVector::basis(4, 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn honest_spec_has_no_residuals() {
        let r = detection_residuals(&AttackSpec::honest());
        assert!(r.max_per_case() <= 1e-12);
        assert!(r.max_aggregate() <= 1e-12);
        assert!(escape_check(&AttackSpec::honest(), DEFAULT_TOL).unwrap().escaped);
    }

    #[test]
    fn magnitude_gap_is_the_only_aggregate_residual() {
        let r = detection_residuals(&skewed());
        let gap = 0.6f64.sqrt() - 0.4f64.sqrt();
        assert!((r.aggregate[6] - gap).abs() < 1e-15);
        for (k, &x) in r.aggregate.iter().enumerate() {
            if k != 6 {
                assert_eq!(x, 0.0, "term {k}");
            }
        }
        assert!(!escape_check(&skewed(), DEFAULT_TOL).unwrap().escaped);
    }

    #[test]
    fn forms_match_direct_products_on_fixed_spec() {
        // The fourth XX form is the sum of the four cross products.
        let spec = skewed();
        let f = bilinear_forms(&spec, Case::XX);
        let d = direct_cross_products(&spec, Case::XX).unwrap();
        let sum: Amplitude = d.iter().sum();
        assert!((f[3] - sum).norm() < 1e-14);
    }

    #[test]
    fn bad_tolerance_is_rejected() {
        assert!(escape_check(&AttackSpec::honest(), 0.0).is_err());
    }
}
