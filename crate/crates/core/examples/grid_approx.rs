//! Floating-point factorization on a sampled grid of the real line.

use powerfact::engine::{run_factorization, FactorizationConfig};
use powerfact::instances::{Grid, GridFunction, GridNet, NetKind};
use powerfact::representations::{GridRep, ProbeSet};
use powerfact::verification::certify_engine;

fn main() -> powerfact::Result<()> {
    let grid = Grid::new(30.0, 0.5)?;
    let probe = ProbeSet::bounded(vec![GridFunction::tabulate(grid.clone(), |x| (-x * x / 8.0).exp(), 0.0)])?;
    let rep = GridRep { grid: grid.clone() };
    let net = GridNet::new(NetKind::Plateau, grid);
    let res = run_factorization(&rep, &net, &probe, &FactorizationConfig::<f64>::default())?;
    println!("indices = {:?}", res.chain.indices);
    let cert = certify_engine("grid", &rep, &net, &probe, &res)?;
    print!("{}", cert.to_csv()?);
    Ok(())
}
