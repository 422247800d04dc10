//! The identity matrix as a one-element net: every step is closed form and x_n(s) = s.

use powerfact::engine::{run_factorization, FactorizationConfig};
use powerfact::instances::{ConstantNet, Matrix, Vector};
use powerfact::representations::{MatrixRep, ProbeSet};
use powerfact::verification::certify_engine;
use powerfact::Rational;

fn main() -> powerfact::Result<()> {
    let rep = MatrixRep::<Rational>::new(3);
    let net = ConstantNet {
        element: Matrix::identity(3),
        bound: Rational::new(1, 1),
        commutative: true,
        positive: true,
        largest: true,
    };
    let s = Vector::new(vec![Rational::new(1, 2), Rational::new(-3, 1), Rational::new(7, 5)]);
    let probe = ProbeSet::bounded(vec![s.clone()])?;
    let res = run_factorization(&rep, &net, &probe, &FactorizationConfig::default())?;
    println!("closed form: {}, a = I: {}", res.closed_form, res.a == Matrix::identity(3));
    println!("x_7(s) = s: {}", res.x_n(&rep, 7, &s)?.value == s);
    let cert = certify_engine("degenerate", &rep, &net, &probe, &res)?;
    print!("{}", cert.to_csv()?);
    Ok(())
}
