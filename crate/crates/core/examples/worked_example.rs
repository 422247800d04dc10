//! Step-pyramid factorization on c0(Z): prints ν, the factor a, and x_n(f0) at a few sites.

use powerfact::verification::{certify_worked, worked_probe};
use powerfact::worked::WorkedExample;

fn main() -> powerfact::Result<()> {
    let ex = WorkedExample::default_example()?;
    println!("nu = {:?}, window = {}", ex.nu(), ex.window());
    let a = ex.pyramid.to_line();
    for t in [0, 3, 4, 10, 20, 74] {
        println!("a({t}) = {}", a.get(t));
    }
    let f0 = ex.envelope.truncate(ex.window());
    for n in 1..=3 {
        let x = ex.explicit_x_n(n, &f0)?.value;
        println!("x_{n}(f0)(5) = {}, x_{n}(f0)(12) = {}", x.get(5), x.get(12));
    }
    let cert = certify_worked(&ex, &worked_probe(&ex))?;
    for c in &cert.clauses {
        println!("{:>3} {:?} {}", c.id, c.status, c.margin);
    }
    Ok(())
}
