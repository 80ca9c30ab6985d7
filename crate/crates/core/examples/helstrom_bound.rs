//! Minimum-error discrimination: the eigen-based Helstrom error for two
//! qubit states against its overlap formula, then the attacker's per-case
//! error for a family point.
//!
//! cargo run --example helstrom_bound -- [c]

use hbb_qss::attack::{helstrom, mutual_information, pe_closed_form, pe_numeric, Case};
use hbb_qss::optimizer::Eq6FamilyPoint;
use hbb_qss::qmath::{c, inner, CVector};

fn main() -> hbb_qss::Result<()> {
    let zero = CVector::basis(2, 0);
    for theta in [0.0f64, 0.3, 0.7854, 1.2, 1.5708] {
        let other = CVector::new(vec![c(theta.cos(), 0.0), c(0.0, theta.sin())])?;
        let pe = helstrom(&zero.projector(), &other.projector(), 0.5, 0.5)?;
        let overlap = inner(&zero, &other)?.norm_sqr();
        let formula = 0.5 * (1.0 - (1.0 - overlap).sqrt());
        println!("theta={theta:.4} pe={pe:.12} formula={formula:.12}");
    }

    let cval = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.6);
    let spec = Eq6FamilyPoint::plain(cval)?.to_spec()?;
    let closed = pe_closed_form(&spec)?;
    println!("family point c={cval}: closed-form error {closed:.12}");
    for case in Case::ALL {
        println!("  case {case}: Helstrom error {:.12}", pe_numeric(&spec, case)?);
    }
    println!("information per key bit {:.12}", mutual_information(closed)?);
    Ok(())
}
