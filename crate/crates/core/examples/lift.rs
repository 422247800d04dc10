//! Lifts the line factorization to a finite family and to a zero-limit sequence.

use powerfact::engine::FactorizationConfig;
use powerfact::verification::lift_demo;

fn main() -> powerfact::Result<()> {
    let report = lift_demo(&FactorizationConfig::default())?;
    for case in [&report.finite, &report.sequence] {
        println!(
            "{:?}: termwise = {}, same factor = {}, zero limit kept = {:?}",
            case.omega, case.termwise, case.same_factor, case.zero_limit_preserved
        );
    }
    println!("holds: {}", report.holds());
    Ok(())
}
