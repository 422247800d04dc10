use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Growth law for the sequence `α_n > 1`, `α_n → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case", bound = "S: Scalar")]
pub enum AlphaLaw<S> {
    /// `α_n = 1 + c·n`.
    Affine { c: S },
    /// `α_n = 1 + c·n^p`.
    Power { c: S, p: u32 },
}

impl<S: Scalar> AlphaLaw<S> {
    pub fn value(&self, n: usize) -> S {
        let n = S::from_i64(n as i64);
        match self {
            AlphaLaw::Affine { c } => S::one() + c.clone() * n,
            AlphaLaw::Power { c, p } => S::one() + c.clone() * n.powi(*p as i64),
        }
    }

    /// `α_n^n`.
    pub fn power_bound(&self, n: usize) -> S {
        self.value(n).powi(n as i64)
    }

    fn validate(&self) -> Result<()> {
        let (c, p) = match self {
            AlphaLaw::Affine { c } => (c, 1),
            AlphaLaw::Power { c, p } => (c, *p),
        };
        if !c.is_positive() || p == 0 {
            return Err(Error::ParameterOutOfRange(format!(
                "alpha law needs c > 0 and p ≥ 1 so that α_n > 1 increases to infinity, got c = {c}, p = {p}"
            )));
        }
        Ok(())
    }
}

impl<S: Scalar> Default for AlphaLaw<S> {
    fn default() -> Self {
        AlphaLaw::Affine { c: S::one() }
    }
}

/// Which hypothesis licenses the chain: a bounded probe or a commutative net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    BoundedS,
    Commutative,
}

/// Free parameters of the factorization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar", default, deny_unknown_fields)]
pub struct FactorizationConfig<S> {
    pub r: S,
    pub epsilon: S,
    pub delta: S,
    pub n0: usize,
    pub alpha: AlphaLaw<S>,
    /// Number of chain steps `K`.
    pub steps: usize,
    /// Largest index `ν` a scan may try.
    pub index_cap: usize,
    pub tau: S,
    pub path: PathKind,
    /// Largest power `j` the schedule may demand.
    #[serde(default = "default_max_power")]
    pub max_power: usize,
}

fn default_max_power() -> usize {
    4096
}

impl<S: Scalar> Default for FactorizationConfig<S> {
    fn default() -> Self {
        FactorizationConfig {
            r: S::ratio(1, 4),
            epsilon: S::ratio(1, 10),
            delta: S::one(),
            n0: 2,
            alpha: AlphaLaw::default(),
            steps: 3,
            index_cap: 1_000_000,
            tau: S::from_f64(1e-9),
            path: PathKind::BoundedS,
            max_power: default_max_power(),
        }
    }
}

/// A configuration checked against the net bound `M`, with derived constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct ValidatedConfig<S> {
    pub config: FactorizationConfig<S>,
    pub m: S,
    /// `Δ = (1 − r − rM)^{-1} + 1`.
    pub growth: S,
    /// `ε` after tightening to `ε ≤ inf{δ, (α_nⁿ − 1)δ}`.
    pub epsilon: S,
    /// `δ` after tightening to `δ ≤ 1`.
    pub delta: S,
}

impl<S: Scalar> FactorizationConfig<S> {
    pub fn validate(&self, m: &S) -> Result<ValidatedConfig<S>> {
        let one = S::one();
        if *m < one {
            return Err(Error::ParameterOutOfRange(format!("net bound M = {m} must be at least 1")));
        }
        let limit = (m.clone() + one.clone()).recip();
        if !(self.r.is_positive() && self.r < limit) {
            return Err(Error::ParameterOutOfRange(format!(
                "r = {} must lie in (0, 1/(M+1)) = (0, {limit})",
                self.r
            )));
        }
        for (name, v) in [("epsilon", &self.epsilon), ("delta", &self.delta), ("tau", &self.tau)] {
            if !v.is_positive() {
                return Err(Error::ParameterOutOfRange(format!("{name} = {v} must be positive")));
            }
        }
        if self.n0 == 0 || self.steps == 0 || self.index_cap == 0 {
            return Err(Error::ParameterOutOfRange("n0, steps and index_cap must be at least 1".into()));
        }
        self.alpha.validate()?;
        let growth = (one.clone() - self.r.clone() - self.r.clone() * m.clone()).recip() + one.clone();
        let delta = S::min_of(self.delta.clone(), one.clone());
        // α_n^n − 1 increases with n, so the infimum sits at n = 1
        let alpha_floor = (self.alpha.power_bound(1) - one) * delta.clone();
        let epsilon = S::min_of(S::min_of(self.epsilon.clone(), delta.clone()), alpha_floor);
        Ok(ValidatedConfig {
            config: self.clone(),
            m: m.clone(),
            growth,
            epsilon,
            delta,
        })
    }
}

impl<S: Scalar> ValidatedConfig<S> {
    pub fn r(&self) -> &S {
        &self.config.r
    }

    /// `ε / 2^k`.
    pub fn threshold(&self, k: usize) -> S {
        self.epsilon.clone() / S::from_i64(2).powi(k as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn growth_constant_for_unit_bound() {
        let cfg = FactorizationConfig::<Rational>::default();
        let v = cfg.validate(&q(1, 1)).unwrap();
        assert_eq!(v.growth, q(3, 1));
        assert_eq!(v.epsilon, q(1, 10));
        assert_eq!(v.delta, q(1, 1));
    }

    #[test]
    fn epsilon_and_delta_are_tightened() {
        let cfg = FactorizationConfig {
            epsilon: q(5, 1),
            delta: q(3, 1),
            alpha: AlphaLaw::Affine { c: q(1, 2) },
            ..FactorizationConfig::default()
        };
        let v = cfg.validate(&q(1, 1)).unwrap();
        assert_eq!(v.delta, q(1, 1));
        assert_eq!(v.epsilon, q(1, 2));
    }

    #[test]
    fn out_of_range_parameters() {
        let bad_r = FactorizationConfig::<Rational> {
            r: q(1, 2),
            ..FactorizationConfig::default()
        };
        assert!(matches!(bad_r.validate(&q(1, 1)), Err(Error::ParameterOutOfRange(_))));
        let bad_alpha = FactorizationConfig::<Rational> {
            alpha: AlphaLaw::Power { c: q(1, 1), p: 0 },
            ..FactorizationConfig::default()
        };
        assert!(bad_alpha.validate(&q(1, 1)).is_err());
    }

    #[test]
    fn config_json_rejects_unknown_keys() {
        let json = serde_json::to_value(FactorizationConfig::<Rational>::default()).unwrap();
        let back: FactorizationConfig<Rational> = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(back, FactorizationConfig::default());
        let mut bad = json;
        bad["bogus"] = serde_json::json!(1);
        assert!(serde_json::from_value::<FactorizationConfig<Rational>>(bad).is_err());
    }
}
