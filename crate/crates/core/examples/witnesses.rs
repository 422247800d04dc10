//! Counterexample witnesses: cone inverses, unbounded approximants, a deficient net.

use powerfact::verification::{cone_witnesses, deficient_net_report, unbounded_xn_witness, WITNESS_SEED};
use powerfact::worked::WorkedExample;
use powerfact::Rational;

fn main() -> powerfact::Result<()> {
    let cones = cone_witnesses(WITNESS_SEED, 20)?;
    println!("(1, delta_0)^-1 = {:?}, in cone: {}", cones.delta.inverse, cones.delta.inverse_in_cone);
    println!("random positive invertibles keep positive inverses: {}", cones.all_random_positive());

    let ex = WorkedExample::default_example()?;
    let w = unbounded_xn_witness(&ex, 1)?;
    for row in &w.rows {
        println!("band {} at t = {}: ratio {}", row.band, row.site, row.ratio);
    }

    let report = deficient_net_report(&[1, 10, 100], &[2, 5, 10], &Rational::new(1, 2), 50)?;
    for row in &report.rows {
        println!("R = {:>3}, nu = {:>2}: residual {}", row.height, row.nu, row.residual);
    }
    println!("exhausted: {:?}", report.exhausted);
    Ok(())
}
