//! Element contracts for normed algebras and the analytic functional calculus
//! used by the factorization chain.

use std::fmt::{self, Debug, Display};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which concrete instance a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceTag {
    C0Line,
    EventuallyConstantLine,
    Matrix,
    Vector,
    GridFunction,
    GridSuper,
    Unitization,
    Lifted,
}

impl Display for InstanceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InstanceTag::C0Line => "c0-line",
            InstanceTag::EventuallyConstantLine => "eventually-constant-line",
            InstanceTag::Matrix => "matrix",
            InstanceTag::Vector => "vector",
            InstanceTag::GridFunction => "grid-function",
            InstanceTag::GridSuper => "grid-super",
            InstanceTag::Unitization => "unitization",
            InstanceTag::Lifted => "lifted",
        };
        f.write_str(s)
    }
}

/// A vector in a normed space over a real scalar field.
pub trait NormedSpace: Clone + Debug + PartialEq + Send + Sync {
    type Scalar: Scalar;

    fn tag(&self) -> InstanceTag;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn scale(&self, c: &Self::Scalar) -> Self;
    fn norm(&self) -> Self::Scalar;
    fn zero_like(&self) -> Self;

    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Self::Scalar::one()))
    }

    /// Membership in the positive cone, `None` when the space carries no order.
    fn in_cone(&self) -> Option<bool> {
        None
    }
}

/// An element of a normed algebra with submultiplicative norm.
pub trait AlgebraElement: NormedSpace {
    fn try_mul(&self, other: &Self) -> Result<Self>;
}

/// An element of a unital normed algebra whose unit has norm one.
pub trait UnitalElement: AlgebraElement {
    /// The unit of the algebra this element lives in.
    fn unit_like(&self) -> Self;

    /// Exact inverse where the instance has one (pointwise reciprocal,
    /// Gauss–Jordan elimination), otherwise `NotInvertible`.
    fn try_inverse(&self) -> Result<Self>;

    fn try_pow(&self, n: u32) -> Result<Self> {
        let mut acc = self.unit_like();
        for _ in 0..n {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }
}

pub(crate) fn mismatch<T: NormedSpace>(a: &T, b: &T, what: &str) -> Error {
    Error::InstanceMismatch {
        left: format!("{} ({what})", a.tag()),
        right: b.tag().to_string(),
    }
}

/// Record of how a power series was cut off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTruncation<S> {
    pub terms_used: usize,
    /// Rigorous upper bound on the norm of the dropped tail.
    pub tail_bound: S,
}

/// Coefficients `α_n` of a power series: an explicit prefix followed by an
/// exact geometric law `α_n = scale · ratio^n` for `n ≥ prefix.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries<S> {
    pub prefix: Vec<S>,
    pub tail: Option<GeometricTail<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricTail<S> {
    pub scale: S,
    pub ratio: S,
}

impl<S: Scalar> PowerSeries<S> {
    pub fn polynomial(coeffs: Vec<S>) -> Self {
        PowerSeries {
            prefix: coeffs,
            tail: None,
        }
    }

    /// Maclaurin coefficients of `z ↦ 1/(1 − r + r z)`:
    /// `α_n = (1/(1−r)) · (r/(r−1))^n`.
    pub fn geometric_resolvent(r: &S) -> Self {
        let one = S::one();
        PowerSeries {
            prefix: Vec::new(),
            tail: Some(GeometricTail {
                scale: (one.clone() - r.clone()).recip(),
                ratio: r.clone() / (r.clone() - one),
            }),
        }
    }

    pub fn coefficient(&self, n: usize) -> S {
        if n < self.prefix.len() {
            return self.prefix[n].clone();
        }
        match &self.tail {
            Some(t) => t.scale.clone() * t.ratio.powi(n as i64),
            None => S::zero(),
        }
    }

    /// Radius of convergence implied by the coefficient law.
    pub fn radius(&self) -> Option<S> {
        match &self.tail {
            Some(t) if !t.ratio.is_zero() && !t.scale.is_zero() => Some(t.ratio.abs().recip()),
            _ => None,
        }
    }
}

/// Result of evaluating a power series at an algebra element.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticValue<E: NormedSpace> {
    pub value: E,
    pub truncation: SeriesTruncation<E::Scalar>,
    /// `L = Σ n |α_n| M^{n−1}`.
    pub lipschitz: E::Scalar,
}

/// Least `N ≥ start` with `scale · x^N / (1 − x) ≤ tau`, for `0 ≤ x < 1`.
fn geometric_cutoff<S: Scalar>(scale: &S, x: &S, start: usize, tau: &S) -> Result<(usize, S)> {
    let denom = S::one() - x.clone();
    let mut n = start;
    let mut pow = x.powi(start as i64);
    loop {
        let tail = scale.clone() * pow.clone() / denom.clone();
        if tail <= *tau {
            return Ok((n, tail));
        }
        n += 1;
        pow = pow * x.clone();
        if n > start + 1_000_000 {
            return Err(Error::DivergentMajorant(format!(
                "tail of ratio {x} does not reach {tau} within 10^6 terms"
            )));
        }
    }
}

/// `Σ_{n≥p} n x^{n−1}` for `0 ≤ x < 1` and `p ≥ 1`, closed form.
fn derivative_geometric_tail<S: Scalar>(x: &S, p: usize) -> S {
    let one_minus = S::one() - x.clone();
    let mut head = S::zero();
    for n in 1..p {
        head = head + S::from_i64(n as i64) * x.powi(n as i64 - 1);
    }
    (one_minus.clone() * one_minus).recip() - head
}

/// Evaluates `Σ α_n e^n` with a rigorous geometric tail bound `≤ τ`.
///
/// `m` is the declared norm bound of `e`. The returned Lipschitz constant
/// is `Σ n|α_n| m^{n−1}`.
pub fn apply_analytic<E: UnitalElement>(
    series: &PowerSeries<E::Scalar>,
    radius: &E::Scalar,
    e: &E,
    m: &E::Scalar,
    tau: &E::Scalar,
) -> Result<AnalyticValue<E>> {
    type S<E> = <E as NormedSpace>::Scalar;
    let norm = e.norm();
    if norm > *m {
        return Err(Error::NormBoundViolated {
            norm: norm.to_string(),
            bound: m.to_string(),
        });
    }
    let p = series.prefix.len();
    let (terms, tail_bound, tail_lipschitz) = match &series.tail {
        None => (p, S::<E>::zero(), S::<E>::zero()),
        Some(t) => {
            let x = t.ratio.abs() * m.clone();
            let law_radius = series.radius();
            let within = match &law_radius {
                Some(lr) => m < lr && m < radius,
                None => m < radius,
            };
            if !within || x >= S::<E>::one() {
                return Err(Error::DivergentMajorant(format!(
                    "bound {m} is not inside the radius of convergence (ratio {})",
                    t.ratio
                )));
            }
            let scale = t.scale.abs();
            let (n, tail) = geometric_cutoff(&scale, &x, p, tau)?;
            let lip = scale * t.ratio.abs() * derivative_geometric_tail(&x, p.max(1));
            (n, tail, lip)
        }
    };
    if series.tail.is_none() && *m >= *radius {
        return Err(Error::DivergentMajorant(format!(
            "bound {m} is not inside the declared radius {radius}"
        )));
    }

    let mut acc = e.zero_like();
    let mut power = e.unit_like();
    let mut lipschitz = tail_lipschitz;
    for n in 0..terms {
        let alpha = series.coefficient(n);
        if !alpha.is_zero() {
            acc = acc.try_add(&power.scale(&alpha))?;
        }
        if n >= 1 && n < p {
            lipschitz = lipschitz + S::<E>::from_i64(n as i64) * alpha.abs() * m.powi(n as i64 - 1);
        }
        if n + 1 < terms {
            power = power.try_mul(e)?;
        }
    }
    Ok(AnalyticValue {
        value: acc,
        truncation: SeriesTruncation {
            terms_used: terms,
            tail_bound,
        },
        lipschitz,
    })
}

/// Truncated series for `f(e) = ((1−r)·1 + r·e)^{-1}`.
///
/// Requires `0 < r < (M+1)^{-1}` and `‖e‖ ≤ M`. The tail bound is
/// `(|q|M)^N / ((1−r)(1−|q|M))` with `q = r/(r−1)`.
pub fn geometric_inverse<E: UnitalElement>(
    e: &E,
    r: &E::Scalar,
    m: &E::Scalar,
    tau: &E::Scalar,
) -> Result<(E, SeriesTruncation<E::Scalar>)> {
    type S<E> = <E as NormedSpace>::Scalar;
    let one = S::<E>::one();
    let limit = (m.clone() + one.clone()).recip();
    if !(*r > S::<E>::zero() && *r < limit) {
        return Err(Error::ParameterOutOfRange(format!(
            "r = {r} must lie in (0, 1/(M+1)) = (0, {limit})"
        )));
    }
    let norm = e.norm();
    if norm > *m {
        return Err(Error::NormBoundViolated {
            norm: norm.to_string(),
            bound: m.to_string(),
        });
    }
    let series = PowerSeries::geometric_resolvent(r);
    let radius = (one.clone() - r.clone()) / r.clone();
    let out = apply_analytic(&series, &radius, e, m, tau)?;
    Ok((out.value, out.truncation))
}

/// `((1−r)·1 + r·e)`, the inverse of `f(e)`.
pub fn resolvent_base<E: UnitalElement>(e: &E, r: &E::Scalar) -> Result<E> {
    let one = <E::Scalar as Scalar>::one();
    e.unit_like()
        .scale(&(one - r.clone()))
        .try_add(&e.scale(r))
}

/// The summands `a^{n−1−i}(a−b)b^i`, `i = 0..n`, whose sum is `aⁿ − bⁿ`.
pub fn power_difference_decomposition<E: UnitalElement>(a: &E, b: &E, n: u32) -> Result<Vec<E>> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
    }
    if a.tag() != b.tag() {
        return Err(mismatch(a, b, "power difference"));
    }
    let diff = a.try_sub(b)?;
    let mut a_pows = vec![a.unit_like()];
    let mut b_pows = vec![b.unit_like()];
    for _ in 1..n {
        a_pows.push(a_pows.last().unwrap().try_mul(a)?);
        b_pows.push(b_pows.last().unwrap().try_mul(b)?);
    }
    (0..n as usize)
        .map(|i| a_pows[n as usize - 1 - i].try_mul(&diff)?.try_mul(&b_pows[i]))
        .collect()
}

/// Sum of a nonempty list of elements.
pub fn sum_all<E: NormedSpace>(items: &[E]) -> Result<E> {
    let first = items
        .first()
        .ok_or_else(|| Error::PreconditionFailed("empty sum".into()))?;
    items[1..].iter().try_fold(first.clone(), |acc, x| acc.try_add(x))
}

/// Inverse of `target` obtained from a known inverse of `base` by the Neumann
/// series `Σ (base^{-1}(base − target))^j base^{-1}`, returned with its tail bound.
///
/// Used as an independent check of instance inverters.
pub fn neumann_inverse<E: UnitalElement>(
    base_inv: &E,
    base: &E,
    target: &E,
    tau: &E::Scalar,
) -> Result<(E, SeriesTruncation<E::Scalar>)> {
    type S<E> = <E as NormedSpace>::Scalar;
    let step = base_inv.try_mul(&base.try_sub(target)?)?;
    let q = step.norm();
    if q >= S::<E>::one() {
        return Err(Error::DivergentMajorant(format!(
            "Neumann ratio {q} is not below 1"
        )));
    }
    let scale = base_inv.norm();
    let (terms, tail) = geometric_cutoff(&scale, &q, 1, tau)?;
    let mut acc = base_inv.clone();
    let mut term = base_inv.clone();
    for _ in 1..terms {
        term = step.try_mul(&term)?;
        acc = acc.try_add(&term)?;
    }
    Ok((
        acc,
        SeriesTruncation {
            terms_used: terms,
            tail_bound: tail,
        },
    ))
}
