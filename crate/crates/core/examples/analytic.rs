//! Truncated geometric inverse and the a^n - b^n telescoping decomposition.

use powerfact::algebra::{geometric_inverse, power_difference_decomposition, sum_all, NormedSpace, UnitalElement};
use powerfact::instances::{EventuallyConstantLine, Matrix};
use powerfact::Rational;

fn main() -> powerfact::Result<()> {
    let q = Rational::new;
    let e = EventuallyConstantLine::new(vec![(0, q(1, 1)), (1, q(-1, 2))], q(1, 3));
    let (g, trunc) = geometric_inverse(&e, &q(1, 4), &q(1, 1), &q(1, 1_000_000))?;
    println!("inverse at 0: {}, tail {}", g.get(0), g.tail());
    println!("truncation: {trunc:?}");

    let a = Matrix::from_rows(vec![vec![q(1, 2), q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 3), q(2, 1)], vec![q(1, 1), q(0, 1), q(1, 1)]])?;
    let b = Matrix::identity(3);
    let terms = power_difference_decomposition(&a, &b, 5)?;
    let direct = a.try_pow(5)?.try_sub(&b.try_pow(5)?)?;
    println!("sum of {} terms equals a^5 - b^5: {}", terms.len(), sum_all(&terms)? == direct);
    Ok(())
}
