use serde::{Deserialize, Serialize};

use crate::engine::AlphaLaw;
use crate::error::{Error, Result};
use crate::instances::Envelope;
use crate::scalar::{exp_neg_enclosure, Rational, Scalar};

/// Decay law `d(i)` that the envelope must undercut on the `i`-th band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum DecaySchedule {
    /// `d(i) = 4^{−i²}`, a rational lower bound for `e^{−i²}`.
    RationalGaussian,
    /// `d(i) = e^{−i²}`, compared through certified rational enclosures.
    Gaussian,
    /// `d(i) = ratio^i`.
    Geometric { ratio: Rational },
}

/// Most refinement rounds spent deciding one comparison against `e^{−m}`.
const REFINE_ROUNDS: u32 = 12;

/// Most bands a supremum or threshold scan will visit.
const BAND_SCAN_CAP: usize = 10_000;

impl Default for DecaySchedule {
    fn default() -> Self {
        DecaySchedule::RationalGaussian
    }
}

impl DecaySchedule {
    pub fn describe(&self) -> String {
        match self {
            DecaySchedule::RationalGaussian => "d(i) = 4^(-i^2)".into(),
            DecaySchedule::Gaussian => "d(i) = e^(-i^2), certified enclosures".into(),
            DecaySchedule::Geometric { ratio } => format!("d(i) = ({ratio})^i"),
        }
    }

    /// A rational upper bound for `d(i)` (the exact value for rational laws).
    pub fn upper(&self, i: usize) -> Rational {
        match self {
            DecaySchedule::RationalGaussian => Rational::new(1, 4).powi((i * i) as i64),
            DecaySchedule::Gaussian => exp_neg_enclosure((i * i) as u64, 0).1,
            DecaySchedule::Geometric { ratio } => ratio.powi(i as i64),
        }
    }

    /// Decides `x ≤ c·d(i)`. For the transcendental law an undecided
    /// comparison after all refinements counts as false, which only makes
    /// the derived thresholds larger.
    pub fn le_scaled(&self, x: &Rational, c: &Rational, i: usize) -> bool {
        match self {
            DecaySchedule::Gaussian => {
                let m = (i * i) as u64;
                let mut extra = 0;
                for _ in 0..REFINE_ROUNDS {
                    let (lo, hi) = exp_neg_enclosure(m, extra);
                    if *x <= c.clone() * lo {
                        return true;
                    }
                    if *x > c.clone() * hi {
                        return false;
                    }
                    extra = 2 * extra + 8;
                }
                false
            }
            _ => *x <= c.clone() * self.upper(i),
        }
    }

    /// Upper bound for `q·d(i+1)/d(i)`; nonincreasing in `i` for every law here.
    fn step_ratio(&self, q: &Rational, i: usize) -> Rational {
        match self {
            DecaySchedule::RationalGaussian => q.clone() * Rational::new(1, 4).powi(2 * i as i64 + 1),
            DecaySchedule::Gaussian => q.clone() * exp_neg_enclosure(2 * i as u64 + 1, 0).1,
            DecaySchedule::Geometric { ratio } => q.clone() * ratio.clone(),
        }
    }

    /// Least `i₀` with `c·q^i·d(i) < η` for every `i ≥ i₀`.
    pub fn vanishing_index(&self, q: &Rational, c: &Rational, eta: &Rational) -> Result<usize> {
        let mut last_fail = 0;
        let mut qi = Rational::one();
        for i in 1..=BAND_SCAN_CAP {
            qi = qi * q.clone();
            let bound = c.clone() * qi.clone() * self.upper(i);
            let holds = bound < *eta;
            if !holds {
                last_fail = i;
            }
            if holds && self.step_ratio(q, i) <= Rational::one() {
                return Ok(last_fail + 1);
            }
            if matches!(self, DecaySchedule::Geometric { .. }) && self.step_ratio(q, i) >= Rational::one() {
                break;
            }
        }
        Err(Error::DecayTooSlow(format!(
            "{} does not beat the growth factor {q}",
            self.describe()
        )))
    }
}

/// Parameters of the closed-form construction on the discrete line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkedParams {
    pub r: Rational,
    pub epsilon: Rational,
    pub delta: Rational,
    pub n0: usize,
    pub alpha: AlphaLaw<Rational>,
    /// Number of represented levels `I`.
    pub levels: usize,
    #[serde(default)]
    pub decay: DecaySchedule,
}

impl Default for WorkedParams {
    fn default() -> Self {
        WorkedParams {
            r: Rational::new(1, 4),
            epsilon: Rational::new(1, 10),
            delta: Rational::one(),
            n0: 2,
            alpha: AlphaLaw::Affine { c: Rational::one() },
            levels: 6,
            decay: DecaySchedule::RationalGaussian,
        }
    }
}

impl WorkedParams {
    /// `(1 − r)^{-1}`.
    pub fn growth(&self) -> Rational {
        (Rational::one() - self.r.clone()).recip()
    }

    /// `δ` clamped to at most 1.
    pub fn effective_delta(&self) -> Rational {
        Rational::min_of(self.delta.clone(), Rational::one())
    }

    fn validate(&self) -> Result<()> {
        if !(self.r.is_positive() && self.r < Rational::one()) {
            return Err(Error::ParameterOutOfRange(format!("r = {} must lie in (0, 1)", self.r)));
        }
        if !self.epsilon.is_positive() || !self.delta.is_positive() {
            return Err(Error::ParameterOutOfRange("epsilon and delta must be positive".into()));
        }
        if self.n0 == 0 || self.levels == 0 {
            return Err(Error::ParameterOutOfRange("n0 and levels must be at least 1".into()));
        }
        if let DecaySchedule::Geometric { ratio } = &self.decay {
            if !(ratio.is_positive() && *ratio < Rational::one()) {
                return Err(Error::ParameterOutOfRange(format!("decay ratio {ratio} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

/// The threshold sequences `N₁, N₂, N₃, N′` and the constant `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSchedules {
    pub n1: Vec<usize>,
    pub n2: Vec<usize>,
    pub n3: Vec<usize>,
    pub n_prime: Vec<usize>,
    /// Certified upper bound for `sup_{n ≤ n₀, i ≥ 1} [(1−r)^{−in} − 1] d(i)`
    /// (exact for rational decay laws).
    pub k_constant: Rational,
    pub decay: DecaySchedule,
}

/// `sup_{i ≥ 1} (q^i − 1)·d(i)`, scanning until the majorant `q^i d(i)` is
/// below the running maximum and decreasing from then on.
fn band_supremum(decay: &DecaySchedule, q: &Rational) -> Result<Rational> {
    let mut best = Rational::zero();
    let mut qi = Rational::one();
    for i in 1..=BAND_SCAN_CAP {
        qi = qi * q.clone();
        let d = decay.upper(i);
        let value = (qi.clone() - Rational::one()) * d.clone();
        best = Rational::max_of(best, value);
        let ratio = decay.step_ratio(q, i);
        if matches!(decay, DecaySchedule::Geometric { .. }) && ratio >= Rational::one() {
            break;
        }
        if qi.clone() * d <= best && ratio <= Rational::one() {
            return Ok(best);
        }
    }
    Err(Error::DecayTooSlow(format!(
        "(q^i − 1)·d(i) with q = {q} and {} does not reach a decreasing tail",
        decay.describe()
    )))
}

/// Builds the minimal threshold sequences for `levels` bands.
pub fn build_thresholds(envelope: &Envelope<Rational>, params: &WorkedParams) -> Result<ThresholdSchedules> {
    params.validate()?;
    if envelope.norm() <= Rational::one() {
        return Err(Error::PreconditionFailed(format!(
            "envelope norm {} must exceed 1",
            envelope.norm()
        )));
    }
    let growth = params.growth();
    let decay = &params.decay;
    let delta = params.effective_delta();

    let mut k_constant = Rational::zero();
    for n in 1..=params.n0 {
        k_constant = Rational::max_of(k_constant, band_supremum(decay, &growth.powi(n as i64))?);
    }
    let eps_over_k = params.epsilon.clone() / k_constant.clone();

    let mut n1 = Vec::with_capacity(params.levels);
    let mut n2 = Vec::with_capacity(params.levels);
    let mut n3 = Vec::with_capacity(params.levels);
    let mut n_prime = Vec::with_capacity(params.levels);
    for i in 1..=params.levels {
        n1.push(envelope.least_radius_where(1, |v| decay.le_scaled(v, &Rational::one(), i))?);
        n2.push(envelope.least_radius_where(1, |v| decay.le_scaled(v, &eps_over_k, i))?);
        let level = growth.powi(i as i64);
        let np = (1..=BAND_SCAN_CAP)
            .find(|&n| params.alpha.value(n) >= level)
            .ok_or_else(|| Error::ScheduleOverflow(format!("α_n never reaches {level}")))?;
        n_prime.push(np);
        let caps: Vec<(Rational, Rational)> = (1..np)
            .map(|n| (level.powi(n as i64), params.alpha.power_bound(n) * delta.clone()))
            .collect();
        n3.push(envelope.least_radius_where(1, |v| caps.iter().all(|(grow, cap)| grow.clone() * v.clone() <= *cap))?);
    }
    Ok(ThresholdSchedules {
        n1,
        n2,
        n3,
        n_prime,
        k_constant,
        decay: decay.clone(),
    })
}

/// `ν_i = max(N₁(i), N₂(i), N₃(i), ν_{i−1} + 1)`, with `ν₁` also past the
/// last site where `f₀ > min(1, δ)`.
pub fn choose_nu(schedules: &ThresholdSchedules, envelope: &Envelope<Rational>, delta: &Rational) -> Result<Vec<usize>> {
    let floor = Rational::min_of(delta.clone(), Rational::one());
    let first = envelope.least_radius_below(&floor)?;
    let mut out: Vec<usize> = Vec::with_capacity(schedules.n1.len());
    for i in 0..schedules.n1.len() {
        let lower = match out.last() {
            Some(prev) => prev + 1,
            None => first,
        };
        out.push(schedules.n1[i].max(schedules.n2[i]).max(schedules.n3[i]).max(lower));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::EnvelopeTail;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn default_schedules() {
        let env = Envelope::default_envelope();
        let s = build_thresholds(&env, &WorkedParams::default()).unwrap();
        assert_eq!(s.n1, vec![3, 8, 18, 32, 50, 72]);
        assert_eq!(s.k_constant, q(7, 36));
        assert_eq!(s.n2, vec![3, 9, 19, 33, 51, 73]);
        assert_eq!(s.n_prime, vec![1, 1, 2, 3, 4, 5]);
        assert_eq!(&s.n3[..3], &[1, 1, 3]);
        let nu = choose_nu(&s, &env, &q(1, 1)).unwrap();
        assert_eq!(nu, vec![3, 9, 19, 33, 51, 73]);
    }

    /// Independent brute-force scan: least N with f₀(t) ≤ bound for all |t| ≥ N.
    fn brute_threshold(env: &Envelope<Rational>, bound: impl Fn(&Rational) -> bool) -> usize {
        (1..200).find(|&n| (n..400).all(|t| bound(&env.value(t as i64)))).unwrap()
    }

    #[test]
    fn thresholds_match_brute_force() {
        let env = Envelope::default_envelope();
        let params = WorkedParams::default();
        let s = build_thresholds(&env, &params).unwrap();
        for i in 1..=6 {
            let d = q(1, 4).powi((i * i) as i64);
            assert_eq!(s.n1[i - 1], brute_threshold(&env, |v| *v <= d));
            let d2 = q(1, 10) / q(7, 36) * d.clone();
            assert_eq!(s.n2[i - 1], brute_threshold(&env, |v| *v <= d2));
        }
    }

    #[test]
    fn gaussian_thresholds_use_enclosures() {
        let env = Envelope::default_envelope();
        let params = WorkedParams {
            decay: DecaySchedule::Gaussian,
            levels: 2,
            ..WorkedParams::default()
        };
        let s = build_thresholds(&env, &params).unwrap();
        assert_eq!(s.n1, vec![3, 6]);
        // K is certified from above: (16/9 − 1)·e^{-1} ≈ 0.2861
        assert!(s.k_constant >= q(2861, 10000) && s.k_constant <= q(2862, 10000));
    }

    #[test]
    fn slow_decay_is_rejected() {
        let env = Envelope::default_envelope();
        let params = WorkedParams {
            decay: DecaySchedule::Geometric { ratio: q(1, 2) },
            n0: 3,
            ..WorkedParams::default()
        };
        assert!(matches!(build_thresholds(&env, &params), Err(Error::DecayTooSlow(_))));
        let ok = WorkedParams {
            decay: DecaySchedule::Geometric { ratio: q(1, 2) },
            n0: 2,
            ..WorkedParams::default()
        };
        assert!(build_thresholds(&env, &ok).is_ok());
    }

    #[test]
    fn compact_envelope_gives_bounded_schedules() {
        let env = Envelope::new(vec![q(3, 1), q(3, 1), q(1, 2), q(1, 8)], EnvelopeTail::Zero).unwrap();
        let s = build_thresholds(&env, &WorkedParams::default()).unwrap();
        for v in s.n1.iter().chain(&s.n2).chain(&s.n3) {
            assert!(*v <= 4);
        }
    }

    #[test]
    fn nu_respects_delta_and_strict_increase() {
        let env = Envelope::default_envelope();
        let s = build_thresholds(&env, &WorkedParams::default()).unwrap();
        assert_eq!(choose_nu(&s, &env, &q(1, 64)).unwrap()[0], 6);
        let flat = ThresholdSchedules {
            n1: vec![4; 4],
            n2: vec![4; 4],
            n3: vec![4; 4],
            n_prime: vec![1; 4],
            k_constant: q(1, 1),
            decay: DecaySchedule::RationalGaussian,
        };
        assert_eq!(choose_nu(&flat, &env, &q(1, 1)).unwrap(), vec![4, 5, 6, 7]);
    }

    #[test]
    fn vanishing_index_for_geometric_growth() {
        // 2·(4/3)^i·4^{-i²} < 1/100 first holds from i = 3 on
        let i0 = DecaySchedule::RationalGaussian
            .vanishing_index(&q(4, 3), &q(2, 1), &q(1, 100))
            .unwrap();
        let brute = (1..50)
            .find(|&i0| (i0..60).all(|i| q(2, 1) * q(4, 3).powi(i) * q(1, 4).powi(i * i) < q(1, 100)))
            .unwrap();
        assert_eq!(i0 as i64, brute);
        assert!(DecaySchedule::Geometric { ratio: q(1, 2) }
            .vanishing_index(&q(64, 27), &q(2, 1), &q(1, 100))
            .is_err());
    }
}
