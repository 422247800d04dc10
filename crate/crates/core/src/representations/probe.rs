//! Finite probe sets standing in for the set `S`, and uniformity scans.
//!
//! A probe is a finite list of module values plus the properties it claims
//! (a norm bound, cone membership, membership in an envelope-defined `S`).
//! Every claim is checked when the probe is built.

use serde::{Deserialize, Serialize};

use crate::algebra::NormedSpace;
use crate::error::{Error, Result};
use crate::instances::{ApproximateIdentity, C0Line, Envelope, GridFunction, Vector};
use crate::representations::Representation;
use crate::scalar::{max_or_zero, Scalar};

/// Module values that can be tested against an envelope-defined set `S`.
pub trait ProbeValue: NormedSpace {
    fn envelope_check(&self, _envelope: &Envelope<Self::Scalar>) -> Result<()> {
        Err(Error::Unsupported(format!(
            "{} values carry no envelope predicate",
            self.tag()
        )))
    }
}

impl<S: Scalar> ProbeValue for C0Line<S> {
    fn envelope_check(&self, envelope: &Envelope<S>) -> Result<()> {
        envelope.check_member(self)
    }
}

impl<S: Scalar> ProbeValue for Vector<S> {}

impl ProbeValue for GridFunction {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar", deny_unknown_fields)]
pub struct ProbeClaims<S> {
    #[serde(default)]
    pub bounded: Option<S>,
    #[serde(default)]
    pub subset_of_cone: bool,
    #[serde(default)]
    pub s_predicate: Option<Envelope<S>>,
}

impl<S> Default for ProbeClaims<S> {
    fn default() -> Self {
        ProbeClaims {
            bounded: None,
            subset_of_cone: false,
            s_predicate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "X: Serialize, X::Scalar: Scalar")]
pub struct ProbeSet<X: NormedSpace> {
    elements: Vec<X>,
    claims: ProbeClaims<X::Scalar>,
}

impl<X: ProbeValue> ProbeSet<X> {
    pub fn new(elements: Vec<X>, claims: ProbeClaims<X::Scalar>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Config("probe set must be nonempty".into()));
        }
        if let Some(bound) = &claims.bounded {
            if let Some((i, x)) = elements.iter().enumerate().find(|(_, x)| x.norm() > *bound) {
                return Err(Error::PreconditionFailed(format!(
                    "probe element {i} has norm {} above the claimed bound {bound}",
                    x.norm()
                )));
            }
        }
        if claims.subset_of_cone {
            if let Some(i) = elements.iter().position(|x| x.in_cone() != Some(true)) {
                return Err(Error::PreconditionFailed(format!(
                    "probe element {i} is not in the positive cone"
                )));
            }
        }
        if let Some(env) = &claims.s_predicate {
            for x in &elements {
                x.envelope_check(env)?;
            }
        }
        Ok(ProbeSet { elements, claims })
    }

    /// A probe claiming only the bound given by its largest norm.
    pub fn bounded(elements: Vec<X>) -> Result<Self> {
        let bound = max_or_zero(elements.iter().map(NormedSpace::norm));
        Self::new(
            elements,
            ProbeClaims {
                bounded: Some(bound),
                ..ProbeClaims::default()
            },
        )
    }

    pub fn elements(&self) -> &[X] {
        &self.elements
    }

    pub fn claims(&self) -> &ProbeClaims<X::Scalar> {
        &self.claims
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `max ‖s‖` over the probe.
    pub fn max_norm(&self) -> X::Scalar {
        max_or_zero(self.elements.iter().map(NormedSpace::norm))
    }

    /// Image of the probe under a map, keeping only the boundedness claim.
    pub fn map<Y: ProbeValue<Scalar = X::Scalar>, F: Fn(&X) -> Result<Y>>(&self, g: F) -> Result<ProbeSet<Y>> {
        let elements = self.elements.iter().map(g).collect::<Result<Vec<_>>>()?;
        ProbeSet::bounded(elements)
    }
}

impl<X: ProbeValue + serde::de::DeserializeOwned> ProbeSet<X> {
    /// Parses `{"elements": […], "claims": {…}}` and verifies every claim.
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields, bound = "X: serde::de::DeserializeOwned, S: Scalar")]
        struct Raw<X, S: Scalar> {
            elements: Vec<X>,
            #[serde(default = "ProbeClaims::default")]
            claims: ProbeClaims<S>,
        }
        let raw: Raw<X, X::Scalar> = serde_json::from_value(value)?;
        Self::new(raw.elements, raw.claims)
    }
}

/// `sup_{s ∈ probe} ‖π(e_ν)s − s‖`.
pub fn uniform_residual<R, N>(rep: &R, net: &N, nu: usize, probe: &ProbeSet<R::Module>) -> Result<R::Scalar>
where
    R: Representation,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    let e = rep.embed(&net.element(nu));
    let mut worst = R::Scalar::zero();
    for s in probe.elements() {
        let r = rep.act(&e, s)?.try_sub(s)?.norm();
        worst = R::Scalar::max_of(worst, r);
    }
    Ok(worst)
}

/// Least `ν ≤ cap` with `uniform_residual < tol`, scanning upward from 1.
pub fn uniformity_threshold<R, N>(
    rep: &R,
    net: &N,
    probe: &ProbeSet<R::Module>,
    tol: &R::Scalar,
    cap: usize,
) -> Result<usize>
where
    R: Representation,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    if !tol.is_positive() {
        return Err(Error::ParameterOutOfRange(format!("tolerance {tol} must be positive")));
    }
    let mut best: Option<R::Scalar> = None;
    for nu in 1..=cap {
        let r = uniform_residual(rep, net, nu, probe)?;
        if r < *tol {
            return Ok(nu);
        }
        best = Some(match best {
            Some(b) => R::Scalar::min_of(b, r),
            None => r,
        });
    }
    Err(Error::Exhausted {
        stage: "uniformity".into(),
        cap,
        best_margin: best.map_or_else(|| "none".into(), |b| b.to_string()),
    })
}
