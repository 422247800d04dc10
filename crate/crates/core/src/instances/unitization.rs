//! The unitization `ℝ ⊕ c₀(ℤ)` with the cone `ℝ≥0 ⊕ c₀⁺`.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, InstanceTag, NormedSpace, UnitalElement};
use crate::error::{Error, Result};
use crate::instances::line::C0Line;
use crate::scalar::Scalar;

/// `β·1 + a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct UnitizationPair<S> {
    pub beta: S,
    pub a: C0Line<S>,
}

impl<S: Scalar> UnitizationPair<S> {
    pub fn new(beta: S, a: C0Line<S>) -> Self {
        UnitizationPair { beta, a }
    }

    pub fn scalar(beta: S) -> Self {
        UnitizationPair {
            beta,
            a: C0Line::zero(),
        }
    }

    /// Value of `β + a(t)` as a function on `ℤ`.
    pub fn value_at(&self, t: i64) -> S {
        self.beta.clone() + self.a.get(t)
    }
}

impl<S: Scalar> NormedSpace for UnitizationPair<S> {
    type Scalar = S;

    fn tag(&self) -> InstanceTag {
        InstanceTag::Unitization
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(UnitizationPair {
            beta: self.beta.clone() + other.beta.clone(),
            a: self.a.add(&other.a),
        })
    }

    fn scale(&self, c: &S) -> Self {
        UnitizationPair {
            beta: self.beta.clone() * c.clone(),
            a: self.a.scale(c),
        }
    }

    fn norm(&self) -> S {
        self.beta.abs() + self.a.norm()
    }

    fn zero_like(&self) -> Self {
        Self::scalar(S::zero())
    }

    fn in_cone(&self) -> Option<bool> {
        Some(self.beta.is_nonnegative() && self.a.in_cone() == Some(true))
    }
}

impl<S: Scalar> AlgebraElement for UnitizationPair<S> {
    /// `(β, a)(γ, b) = (βγ, βb + γa + ab)`.
    fn try_mul(&self, other: &Self) -> Result<Self> {
        let a = other
            .a
            .scale(&self.beta)
            .add(&self.a.scale(&other.beta))
            .add(&self.a.mul(&other.a));
        Ok(UnitizationPair {
            beta: self.beta.clone() * other.beta.clone(),
            a,
        })
    }
}

impl<S: Scalar> UnitalElement for UnitizationPair<S> {
    fn unit_like(&self) -> Self {
        Self::scalar(S::one())
    }

    fn try_inverse(&self) -> Result<Self> {
        unitization_inverse(self)
            .map(|(inv, _)| inv)
            .map_err(|e| Error::NotInvertible(e.to_string()))
    }
}

/// Inverse of `β·1 + a`, computed as the pointwise reciprocal of `β + a(t)`,
/// together with the verdict whether the inverse lies in `ℝ≥0 ⊕ c₀⁺`.
pub fn unitization_inverse<S: Scalar>(p: &UnitizationPair<S>) -> Result<(UnitizationPair<S>, bool)> {
    if p.beta.is_zero() {
        return Err(Error::Singular("scalar part is zero".into()));
    }
    let inv_beta = p.beta.recip();
    let mut entries = Vec::new();
    for (t, v) in p.a.iter() {
        let total = p.beta.clone() + v.clone();
        if total.is_zero() {
            return Err(Error::Singular(format!("beta + a(t) vanishes at t = {t}")));
        }
        entries.push((t, total.recip() - inv_beta.clone()));
    }
    let inv = UnitizationPair {
        beta: inv_beta,
        a: C0Line::from_pairs(entries),
    };
    let in_cone = inv.in_cone() == Some(true);
    Ok((inv, in_cone))
}
