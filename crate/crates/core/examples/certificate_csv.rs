//! Certificate digest and CSV export for the worked example.

use powerfact::verification::{certify_worked, worked_digest, worked_probe};
use powerfact::worked::WorkedExample;

fn main() -> powerfact::Result<()> {
    let ex = WorkedExample::default_example()?;
    let cert = certify_worked(&ex, &worked_probe(&ex))?;
    println!("digest {}", worked_digest(&ex, &worked_probe(&ex))?);
    print!("{}", cert.to_csv()?);
    Ok(())
}
