use crate::error::{QssError, Result};
use crate::qmath::{binary_entropy, c, trace_norm, CMatrix};

use super::conditional::rho_pair;
use super::detection::{escape_check, DEFAULT_TOL};
use super::spec::AttackSpec;
use super::Case;

const PRIOR_TOL: f64 = 1e-12;

/// Minimum error probability for telling `rho1` (prior `p1`) from `rho2`
/// (prior `p2`): `½ - ½ ||p2 ρ2 - p1 ρ1||₁`.
pub fn helstrom(rho1: &CMatrix, rho2: &CMatrix, p1: f64, p2: f64) -> Result<f64> {
    if !(p1.is_finite() && p2.is_finite()) || p1 < 0.0 || p2 < 0.0 {
        return Err(QssError::InvalidArgument(format!(
            "priors must be non-negative, got {p1} and {p2}"
        )));
    }
    if (p1 + p2 - 1.0).abs() > PRIOR_TOL {
        return Err(QssError::InvalidArgument(format!(
            "priors must sum to 1, got {}",
            p1 + p2
        )));
    }
    if !rho1.is_square() || rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols() {
        return Err(QssError::Shape(format!(
            "density operators are {}x{} and {}x{}",
            rho1.rows(),
            rho1.cols(),
            rho2.rows(),
            rho2.cols()
        )));
    }
    let lambda = rho2.scale(c(p2, 0.0)).sub(&rho1.scale(c(p1, 0.0)))?;
    let pe = 0.5 - 0.5 * trace_norm(&lambda)?;
    Ok(pe.clamp(0.0, p1.min(p2)))
}

/// Helstrom error for guessing Alice's sign in one basis case.
pub fn pe_numeric(spec: &AttackSpec, case: Case) -> Result<f64> {
    let pair = rho_pair(spec, case)?;
    helstrom(&pair.plus, &pair.minus, pair.p_plus, pair.p_minus)
}

/// `½ (1 - 4 |a_00| |a_10|)`, valid only for attacks that escape detection.
pub fn pe_closed_form(spec: &AttackSpec) -> Result<f64> {
    let check = escape_check(spec, DEFAULT_TOL)?;
    if !check.escaped {
        return Err(QssError::InvalidArgument(format!(
            "closed-form error probability needs an undetectable attack \
             (residual {:.3e}, overlap {:.3e})",
            check.max_residual, check.max_overlap
        )));
    }
    // 4|a_00||a_10| <= 2(|a_00|² + |a_10|²) = 1 on undetectable attacks; the
    // clamp only absorbs rounding.
    Ok((0.5 * (1.0 - 4.0 * spec.a(0, 0).norm() * spec.a(1, 0).norm())).clamp(0.0, 0.5))
}

/// Information (bits) about a uniform secret bit guessed with error `pe`:
/// `1 + pe log₂ pe + (1 - pe) log₂(1 - pe)`.
pub fn mutual_information(pe: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&pe) {
        return Err(QssError::InvalidArgument(format!(
            "error probability must lie in [0, 1], got {pe}"
        )));
    }
    Ok((1.0 - binary_entropy(pe)).clamp(0.0, 1.0))
}
