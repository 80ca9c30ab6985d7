//! Maximizes the attacker's information over the undetectable family and
//! compares with a random search over general undetectable attacks.
//!
//! cargo run --example optimize_info -- [seed]

use hbb_qss::optimizer::{maximize, random_search, OptimizerConfig};
use hbb_qss::rng::seeded;

fn main() -> hbb_qss::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let mut rng = seeded(seed);
    let result = maximize(&OptimizerConfig::default(), &mut rng)?;
    println!(
        "best info {:.12} at c = {:.9} after {} iterations (converged: {})",
        result.best_info, result.best_point.c, result.iterations, result.converged
    );
    println!("per-restart info at the optimum: {:?}", result.restart_infos);
    for p in result.trace.iter().step_by(10) {
        println!("  iter {:3}  info {:.12}", p.iteration, p.info);
    }
    let search = random_search(500, &mut rng)?;
    println!("random search over {} attacks: best info {:.9}", search.samples, search.best_info);
    Ok(())
}
