//! Runs the inductive engine on c0(Z) with the plateau net and certifies the result.

use powerfact::engine::{run_factorization, FactorizationConfig};
use powerfact::instances::{C0Line, Envelope, LineNet};
use powerfact::representations::{LineRep, ProbeSet};
use powerfact::verification::certify_engine;
use powerfact::Rational;

fn main() -> powerfact::Result<()> {
    let f0 = Envelope::<Rational>::default_envelope();
    let probe = ProbeSet::bounded(vec![f0.truncate(40), f0.truncate(10), C0Line::constant_on(2, Rational::new(1, 1))])?;
    let rep = LineRep::new();
    let net = LineNet::plateau();
    let res = run_factorization(&rep, &net, &probe, &FactorizationConfig::default())?;
    println!("j schedule = {:?}", res.j_schedule);
    println!("indices    = {:?}", res.chain.indices);
    for rec in &res.chain.ledger {
        println!("step {}: nu = {}, margin = {}, |b^-1| = {}", rec.step, rec.index, rec.margin, rec.inverse_norm);
    }
    for n in [1, 2, 5] {
        let x = res.x_n(&rep, n, &probe.elements()[0])?;
        println!("x_{n}(f0)(0) = {} (error bound {})", x.value.get(0), x.error_bound);
    }
    let cert = certify_engine("line", &rep, &net, &probe, &res)?;
    println!("all clauses pass: {}", cert.all_pass());
    Ok(())
}
