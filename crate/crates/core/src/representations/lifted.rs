//! The lifted module of bounded maps `Ω → X` with the sup norm and the
//! pointwise action, for finite `Ω` and for convergent sequences that are
//! eventually constant.

use serde::{Deserialize, Serialize};

use crate::algebra::{InstanceTag, NormedSpace};
use crate::error::{Error, Result};
use crate::instances::Envelope;
use crate::representations::{ProbeValue, Representation};
use crate::scalar::{max_or_zero, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Omega {
    /// `Ω = {1, …, n}`.
    Finite(usize),
    /// Sequences indexed by `ℕ`, given by a prefix of this length and a limit.
    Sequence(usize),
}

/// A map `Ω → X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftedValue<X> {
    Finite(Vec<X>),
    /// `(prefix[0], prefix[1], …, limit, limit, …)`.
    Sequence { prefix: Vec<X>, limit: X },
}

impl<X: NormedSpace> LiftedValue<X> {
    /// Every stored term, including the limit of a sequence.
    pub fn terms(&self) -> Vec<&X> {
        match self {
            LiftedValue::Finite(v) => v.iter().collect(),
            LiftedValue::Sequence { prefix, limit } => prefix.iter().chain(std::iter::once(limit)).collect(),
        }
    }

    /// Term at index `i` (zero-based), the limit past the prefix.
    pub fn term(&self, i: usize) -> Option<&X> {
        match self {
            LiftedValue::Finite(v) => v.get(i),
            LiftedValue::Sequence { prefix, limit } => Some(prefix.get(i).unwrap_or(limit)),
        }
    }

    pub fn limit(&self) -> Option<&X> {
        match self {
            LiftedValue::Finite(_) => None,
            LiftedValue::Sequence { limit, .. } => Some(limit),
        }
    }

    pub fn map<Y, F: Fn(&X) -> Result<Y>>(&self, g: F) -> Result<LiftedValue<Y>> {
        Ok(match self {
            LiftedValue::Finite(v) => LiftedValue::Finite(v.iter().map(&g).collect::<Result<_>>()?),
            LiftedValue::Sequence { prefix, limit } => LiftedValue::Sequence {
                prefix: prefix.iter().map(&g).collect::<Result<_>>()?,
                limit: g(limit)?,
            },
        })
    }

    fn zip<F: Fn(&X, &X) -> Result<X>>(&self, other: &Self, g: F) -> Result<Self> {
        match (self, other) {
            (LiftedValue::Finite(a), LiftedValue::Finite(b)) if a.len() == b.len() => Ok(LiftedValue::Finite(
                a.iter().zip(b).map(|(x, y)| g(x, y)).collect::<Result<_>>()?,
            )),
            (LiftedValue::Sequence { prefix: pa, limit: la }, LiftedValue::Sequence { prefix: pb, limit: lb }) => {
                let n = pa.len().max(pb.len());
                let prefix = (0..n)
                    .map(|i| g(pa.get(i).unwrap_or(la), pb.get(i).unwrap_or(lb)))
                    .collect::<Result<_>>()?;
                Ok(LiftedValue::Sequence {
                    prefix,
                    limit: g(la, lb)?,
                })
            }
            _ => Err(Error::InstanceMismatch {
                left: "lifted value".into(),
                right: "lifted value over a different index set".into(),
            }),
        }
    }
}

impl<X: NormedSpace> NormedSpace for LiftedValue<X> {
    type Scalar = X::Scalar;

    fn tag(&self) -> InstanceTag {
        InstanceTag::Lifted
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |x, y| x.try_add(y))
    }

    fn scale(&self, c: &X::Scalar) -> Self {
        self.map(|x| Ok(x.scale(c))).expect("scaling cannot fail")
    }

    fn norm(&self) -> X::Scalar {
        max_or_zero(self.terms().into_iter().map(NormedSpace::norm))
    }

    fn zero_like(&self) -> Self {
        self.map(|x| Ok(x.zero_like())).expect("zero cannot fail")
    }

    fn in_cone(&self) -> Option<bool> {
        self.terms()
            .into_iter()
            .map(NormedSpace::in_cone)
            .try_fold(true, |acc, c| c.map(|c| acc && c))
    }
}

impl<X: ProbeValue> ProbeValue for LiftedValue<X> {
    fn envelope_check(&self, envelope: &Envelope<X::Scalar>) -> Result<()> {
        self.terms().into_iter().try_for_each(|x| x.envelope_check(envelope))
    }
}

/// The representation of `A` on maps `Ω → X` acting term by term.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedRep<R> {
    pub base: R,
    pub omega: Omega,
}

/// Lifts `rep` to the module of maps over `omega`.
pub fn lift<R: Representation>(rep: R, omega: Omega) -> LiftedRep<R> {
    LiftedRep { base: rep, omega }
}

impl<R: Representation> LiftedRep<R> {
    /// The constant map with value `x`.
    pub fn constant(&self, x: &R::Module) -> LiftedValue<R::Module> {
        match self.omega {
            Omega::Finite(n) => LiftedValue::Finite(vec![x.clone(); n]),
            Omega::Sequence(n) => LiftedValue::Sequence {
                prefix: vec![x.clone(); n],
                limit: x.clone(),
            },
        }
    }

    /// Builds a value, checking its shape against `Ω`.
    pub fn value(&self, terms: Vec<R::Module>, limit: Option<R::Module>) -> Result<LiftedValue<R::Module>> {
        match (self.omega, limit) {
            (Omega::Finite(n), None) if terms.len() == n => Ok(LiftedValue::Finite(terms)),
            (Omega::Sequence(n), Some(limit)) if terms.len() == n => Ok(LiftedValue::Sequence { prefix: terms, limit }),
            _ => Err(Error::Config(format!(
                "value of {} terms does not match index set {:?}",
                terms.len(),
                self.omega
            ))),
        }
    }
}

impl<R: Representation> Representation for LiftedRep<R> {
    type Scalar = R::Scalar;
    type Algebra = R::Algebra;
    type Super = R::Super;
    type Module = LiftedValue<R::Module>;

    fn embed(&self, a: &R::Algebra) -> R::Super {
        self.base.embed(a)
    }

    fn unit(&self) -> R::Super {
        self.base.unit()
    }

    fn act(&self, b: &R::Super, x: &LiftedValue<R::Module>) -> Result<LiftedValue<R::Module>> {
        x.map(|t| self.base.act(b, t))
    }

    fn pi_norm(&self) -> R::Scalar {
        self.base.pi_norm()
    }
}

/// Checks whether a lifted value's limit is exactly zero.
pub fn limit_is_zero<X: NormedSpace>(x: &LiftedValue<X>) -> bool {
    x.limit().is_some_and(|l| l.norm().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{C0Line, LineNet};
    use crate::representations::{uniform_residual, LineRep, ProbeSet};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn bump(center: i64, h: i64) -> C0Line<Rational> {
        C0Line::from_pairs([(center, q(h, 1)), (center + 1, q(h, 2))])
    }

    #[test]
    fn singleton_lift_matches_base() {
        let rep = LineRep::<Rational>::new();
        let lifted = lift(rep, Omega::Finite(1));
        let f = bump(3, 2);
        let base_probe = ProbeSet::bounded(vec![f.clone()]).unwrap();
        let lifted_probe = ProbeSet::bounded(vec![lifted.constant(&f)]).unwrap();
        let net = LineNet::plateau();
        for nu in 1..6 {
            assert_eq!(
                uniform_residual(&rep, &net, nu, &base_probe).unwrap(),
                uniform_residual(&lifted, &net, nu, &lifted_probe).unwrap()
            );
        }
    }

    #[test]
    fn lifted_residual_is_max_of_base_residuals() {
        let rep = LineRep::<Rational>::new();
        let lifted = lift(rep, Omega::Finite(3));
        let maps: Vec<Vec<C0Line<Rational>>> = (0..3)
            .map(|k| (0..3).map(|w| bump(2 * k + w, k + w + 1)).collect())
            .collect();
        let lifted_probe =
            ProbeSet::bounded(maps.iter().map(|m| lifted.value(m.clone(), None).unwrap()).collect()).unwrap();
        let net = LineNet::plateau();
        for nu in 1..8 {
            let brute = maps
                .iter()
                .flatten()
                .map(|f| uniform_residual(&rep, &net, nu, &ProbeSet::bounded(vec![f.clone()]).unwrap()).unwrap())
                .fold(q(0, 1), Rational::max_of);
            assert_eq!(uniform_residual(&lifted, &net, nu, &lifted_probe).unwrap(), brute);
        }
    }

    #[test]
    fn action_preserves_zero_limit() {
        let rep = LineRep::<Rational>::new();
        let lifted = lift(rep, Omega::Sequence(2));
        let x = lifted.value(vec![bump(0, 1), bump(4, 3)], Some(C0Line::zero())).unwrap();
        let b = rep.embed(&bump(4, 7));
        let y = lifted.act(&b, &x).unwrap();
        assert!(limit_is_zero(&y));
        assert_eq!(y.term(1).unwrap(), &rep.act(&b, &bump(4, 3)).unwrap());
    }

    #[test]
    fn constant_lift_is_isometric() {
        let rep = LineRep::<Rational>::new();
        let f = bump(-2, 9);
        for omega in [Omega::Finite(4), Omega::Sequence(3)] {
            assert_eq!(lift(rep, omega).constant(&f).norm(), f.norm());
        }
    }
}
