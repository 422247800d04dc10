use crate::engine::config::ValidatedConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Strictly increasing powers `j₁ < … < j_count` with `j₁ ≥ n₀` and
/// `α_n ≥ 1 + ‖π‖Δ^k` for every `n ≥ j_k`, each chosen minimal.
pub fn build_j_schedule<S: Scalar>(config: &ValidatedConfig<S>, pi_norm: &S, count: usize) -> Result<Vec<usize>> {
    let law = &config.config.alpha;
    let cap = config.config.max_power;
    let mut out: Vec<usize> = Vec::with_capacity(count);
    let mut growth_pow = S::one();
    for k in 1..=count {
        growth_pow = growth_pow * config.growth.clone();
        let need = S::one() + pi_norm.clone() * growth_pow.clone();
        let lower = match out.last() {
            Some(prev) => prev + 1,
            None => config.config.n0.max(1),
        };
        let ok = |n: usize| law.value(n) >= need;
        if lower > cap {
            return Err(Error::ScheduleOverflow(format!("j_{k} would exceed the power cap {cap}")));
        }
        // α is nondecreasing, so the least admissible n is found by doubling then bisection
        let mut hi = lower;
        while !ok(hi) {
            if hi >= cap {
                return Err(Error::ScheduleOverflow(format!(
                    "α_n stays below {need} up to the power cap {cap} (step {k})"
                )));
            }
            hi = (hi * 2).min(cap);
        }
        let mut lo = lower;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        out.push(lo);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::config::{AlphaLaw, FactorizationConfig};
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn schedule(alpha: AlphaLaw<Rational>, n0: usize, count: usize) -> Result<Vec<usize>> {
        let cfg = FactorizationConfig {
            alpha,
            n0,
            ..FactorizationConfig::default()
        };
        build_j_schedule(&cfg.validate(&Rational::one()).unwrap(), &Rational::one(), count)
    }

    #[test]
    fn affine_law_gives_powers_of_three() {
        let j = schedule(AlphaLaw::Affine { c: Rational::one() }, 1, 4).unwrap();
        assert_eq!(j, vec![3, 9, 27, 81]);
    }

    #[test]
    fn quadratic_law() {
        let j = schedule(AlphaLaw::Power { c: Rational::one(), p: 2 }, 1, 3).unwrap();
        assert_eq!(j, vec![2, 3, 6]);
    }

    #[test]
    fn first_power_respects_n0() {
        let j = schedule(AlphaLaw::Affine { c: Rational::one() }, 5, 2).unwrap();
        assert_eq!(j, vec![5, 9]);
    }

    #[test]
    fn overflow_is_reported() {
        let cfg = FactorizationConfig {
            alpha: AlphaLaw::Affine { c: Rational::one() },
            max_power: 100,
            ..FactorizationConfig::default()
        };
        let v = cfg.validate(&Rational::one()).unwrap();
        assert!(matches!(build_j_schedule(&v, &Rational::one(), 5), Err(Error::ScheduleOverflow(_))));
    }

    proptest! {
        #[test]
        fn schedule_is_minimal_and_increasing(c in 1i64..5, d in 1i64..5, p in 1u32..3, n0 in 1usize..6) {
            let alpha = AlphaLaw::Power { c: Rational::new(c, d), p };
            let cfg = FactorizationConfig { alpha: alpha.clone(), n0, ..FactorizationConfig::default() };
            let v = cfg.validate(&Rational::one()).unwrap();
            let j = build_j_schedule(&v, &Rational::one(), 3).unwrap();
            let mut prev = 0usize;
            for (k, &jk) in j.iter().enumerate() {
                let need = Rational::one() + v.growth.powi(k as i64 + 1);
                let lower = if k == 0 { n0 } else { prev + 1 };
                prop_assert!(jk >= lower && alpha.value(jk) >= need);
                // brute-force minimality
                let least = (lower..).find(|&n| alpha.value(n) >= need).unwrap();
                prop_assert_eq!(jk, least);
                prev = jk;
            }
        }
    }
}
