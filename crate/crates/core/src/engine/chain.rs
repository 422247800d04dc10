use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{neumann_inverse, resolvent_base, AlgebraElement, NormedSpace, UnitalElement};
use crate::engine::config::{PathKind, ValidatedConfig};
use crate::error::{Error, Result};
use crate::instances::ApproximateIdentity;
use crate::representations::{ProbeSet, Representation};
use crate::scalar::{Scalar, Tolerance};

/// One accepted (or forced) chain step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct StepRecord<S> {
    /// Step number `k ≥ 1` produced by this record.
    pub step: usize,
    pub index: usize,
    /// `max_{s, j ≤ j_k} ‖π(b_k^{-j})s − π(b_{k−1}^{-j})s‖`.
    pub margin: S,
    /// `ε / 2^k`.
    pub threshold: S,
    pub j_max: usize,
    pub inverse_norm: S,
    /// `Δ^k`.
    pub inverse_bound: S,
    pub forced: bool,
}

/// State after `k` chain steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "A: Serialize + DeserializeOwned, B: Serialize + DeserializeOwned, S: Scalar")]
pub struct ChainState<A, B, S> {
    pub k: usize,
    pub indices: Vec<usize>,
    /// The chosen net elements `u_i = e_{ν_i}`.
    pub elements: Vec<A>,
    pub b: B,
    pub b_inv: B,
    /// `b_0^{-1}, …, b_k^{-1}`.
    pub inverse_history: Vec<B>,
    pub ledger: Vec<StepRecord<S>>,
}

pub type ChainOf<R> =
    ChainState<<R as Representation>::Algebra, <R as Representation>::Super, <R as Representation>::Scalar>;

impl<A: AlgebraElement, B: UnitalElement<Scalar = A::Scalar>> ChainState<A, B, A::Scalar> {
    /// The empty chain `b_0 = 1`.
    pub fn initial(unit: B) -> Self {
        ChainState {
            k: 0,
            indices: Vec::new(),
            elements: Vec::new(),
            b: unit.clone(),
            b_inv: unit.clone(),
            inverse_history: vec![unit],
            ledger: Vec::new(),
        }
    }

    /// Coefficients `r(1−r)^{i−1}`, `i = 1..k`, followed by `(1−r)^k`.
    pub fn coefficients(&self, r: &A::Scalar) -> (Vec<A::Scalar>, A::Scalar) {
        let one_minus = A::Scalar::one() - r.clone();
        let head = (0..self.k)
            .map(|i| r.clone() * one_minus.powi(i as i64))
            .collect();
        (head, one_minus.powi(self.k as i64))
    }

    /// `a_k = Σ r(1−r)^{i−1} u_i`, the zero element for the empty chain.
    pub fn partial_sum(&self, r: &A::Scalar) -> Result<Option<A>> {
        let (coeffs, _) = self.coefficients(r);
        let mut acc: Option<A> = None;
        for (u, c) in self.elements.iter().zip(&coeffs) {
            let term = u.scale(c);
            acc = Some(match acc {
                Some(a) => a.try_add(&term)?,
                None => term,
            });
        }
        Ok(acc)
    }
}

/// The candidate built from one net element.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<B> {
    /// `g(ν) = f(e_ν)·b(ν)`.
    pub g: B,
    pub b: B,
    pub b_inv: B,
}

/// Builds `b(ν) = b_k + r(1−r)^k (e − 1)` and its inverse.
///
/// Inversion failures, and inverses whose residual `‖b·b^{-1} − 1‖` exceeds
/// the slack, come back as `NotInvertible` so scans can skip the index.
pub fn candidate<R: Representation>(
    rep: &R,
    chain: &ChainOf<R>,
    e: &R::Algebra,
    config: &ValidatedConfig<R::Scalar>,
) -> Result<Candidate<R::Super>> {
    let norm = e.norm();
    if norm > config.m {
        return Err(Error::NormBoundViolated {
            norm: norm.to_string(),
            bound: config.m.to_string(),
        });
    }
    let r = config.r();
    let (_, lead) = chain.coefficients(r);
    let weight = r.clone() * lead;
    let u = rep.embed(e);
    let unit = rep.unit();
    let b = chain.b.try_add(&u.try_sub(&unit)?.scale(&weight))?;
    let f = resolvent_base(&u, r)?
        .try_inverse()
        .map_err(|err| Error::NotInvertible(err.to_string()))?;
    let g = f.try_mul(&b)?;
    let b_inv = b.try_inverse().map_err(|err| Error::NotInvertible(err.to_string()))?;
    let residual = b.try_mul(&b_inv)?.try_sub(&unit)?.norm();
    let tol = Tolerance::new(config.config.tau.clone());
    if !tol.is_zero(&residual) {
        return Err(Error::NotInvertible(format!("inverse residual {residual} exceeds tolerance")));
    }
    Ok(Candidate { g, b, b_inv })
}

/// `π(b^{-j})s` for `j = 1..=count`, per probe element.
pub fn inverse_orbits<R: Representation>(
    rep: &R,
    b_inv: &R::Super,
    probe: &ProbeSet<R::Module>,
    count: usize,
) -> Result<Vec<Vec<R::Module>>> {
    probe
        .elements()
        .iter()
        .map(|s| {
            let mut out = Vec::with_capacity(count);
            let mut cur = s.clone();
            for _ in 0..count {
                cur = rep.act(b_inv, &cur)?;
                out.push(cur.clone());
            }
            Ok(out)
        })
        .collect()
}

/// `max_{s, j} ‖π(b^{-j})s − reference[s][j]‖`.
fn orbit_gap<R: Representation>(
    rep: &R,
    b_inv: &R::Super,
    probe: &ProbeSet<R::Module>,
    reference: &[Vec<R::Module>],
) -> Result<R::Scalar> {
    let mut worst = R::Scalar::zero();
    for (s, orbit) in probe.elements().iter().zip(reference) {
        let mut cur = s.clone();
        for target in orbit {
            cur = rep.act(b_inv, &cur)?;
            worst = R::Scalar::max_of(worst, cur.try_sub(target)?.norm());
        }
    }
    Ok(worst)
}

/// Rejects runs whose path flag is not backed by the probe or the net.
pub fn check_path<X, N>(net: &N, probe: &ProbeSet<X>, config: &ValidatedConfig<X::Scalar>) -> Result<()>
where
    X: crate::representations::ProbeValue,
    N: ApproximateIdentity,
{
    match config.config.path {
        PathKind::BoundedS if probe.claims().bounded.is_some() => Ok(()),
        PathKind::Commutative if net.is_commutative() => Ok(()),
        PathKind::BoundedS => Err(Error::IllegalPath(
            "bounded-S path requested but the probe carries no norm bound".into(),
        )),
        PathKind::Commutative => Err(Error::IllegalPath(format!(
            "commutative path requested but {} is not commutative",
            net.describe()
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn push_step<R: Representation>(
    chain: &ChainOf<R>,
    nu: usize,
    e: R::Algebra,
    cand: Candidate<R::Super>,
    margin: R::Scalar,
    j_next: usize,
    config: &ValidatedConfig<R::Scalar>,
    forced: bool,
) -> ChainOf<R> {
    let step = chain.k + 1;
    let mut next = chain.clone();
    next.k = step;
    next.indices.push(nu);
    next.elements.push(e);
    next.inverse_history.push(cand.b_inv.clone());
    next.ledger.push(StepRecord {
        step,
        index: nu,
        margin,
        threshold: config.threshold(step),
        j_max: j_next,
        inverse_norm: cand.b_inv.norm(),
        inverse_bound: config.growth.powi(step as i64),
        forced,
    });
    next.b = cand.b;
    next.b_inv = cand.b_inv;
    next
}

/// Scans `ν = ν_k + 1, …, index_cap` and appends the first index whose
/// candidate moves every `π(b^{-j})s`, `j ≤ j_next`, by less than `ε/2^{k+1}`.
pub fn advance_chain<R, N>(
    rep: &R,
    net: &N,
    probe: &ProbeSet<R::Module>,
    chain: &ChainOf<R>,
    j_next: usize,
    config: &ValidatedConfig<R::Scalar>,
) -> Result<ChainOf<R>>
where
    R: Representation,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    check_path(net, probe, config)?;
    let reference = inverse_orbits(rep, &chain.b_inv, probe, j_next)?;
    let threshold = config.threshold(chain.k + 1);
    let start = chain.indices.last().map_or(1, |v| v + 1);
    let cap = config.config.index_cap;
    let mut best: Option<R::Scalar> = None;
    for nu in start..=cap {
        let e = net.element(nu);
        let cand = match candidate(rep, chain, &e, config) {
            Ok(c) => c,
            Err(Error::NotInvertible(_)) => continue,
            Err(err) => return Err(err),
        };
        let margin = orbit_gap(rep, &cand.b_inv, probe, &reference)?;
        if margin < threshold {
            return Ok(push_step::<R>(chain, nu, e, cand, margin, j_next, config, false));
        }
        best = Some(match best {
            Some(b) => R::Scalar::min_of(b, margin),
            None => margin,
        });
    }
    Err(Error::Exhausted {
        stage: format!("chain step {}", chain.k + 1),
        cap,
        best_margin: best.map_or_else(|| "none".into(), |b| b.to_string()),
    })
}

/// Appends a prescribed index without applying the acceptance test; the
/// achieved margin is still recorded so a certificate can judge it.
pub fn advance_chain_forced<R, N>(
    rep: &R,
    net: &N,
    probe: &ProbeSet<R::Module>,
    chain: &ChainOf<R>,
    nu: usize,
    j_next: usize,
    config: &ValidatedConfig<R::Scalar>,
) -> Result<ChainOf<R>>
where
    R: Representation,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    check_path(net, probe, config)?;
    if chain.indices.last().is_some_and(|&last| nu <= last) {
        return Err(Error::ParameterOutOfRange(format!(
            "forced index {nu} does not exceed the previous index {}",
            chain.indices.last().unwrap()
        )));
    }
    let reference = inverse_orbits(rep, &chain.b_inv, probe, j_next)?;
    let e = net.element(nu);
    let cand = candidate(rep, chain, &e, config)?;
    let margin = orbit_gap(rep, &cand.b_inv, probe, &reference)?;
    Ok(push_step::<R>(chain, nu, e, cand, margin, j_next, config, true))
}

/// Result of rebuilding a candidate inverse as a Neumann series around `b_k^{-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct NeumannCheck<S> {
    /// `‖b_k^{-1}(b_k − b(ν))‖`.
    pub ratio: S,
    /// `‖neumann − b(ν)^{-1}‖`.
    pub gap: S,
    pub tail_bound: S,
    pub terms: usize,
}

impl<S: Scalar> NeumannCheck<S> {
    pub fn passes(&self, tau: &S) -> bool {
        Tolerance::new(tau.clone()).le(&self.gap, &self.tail_bound)
    }
}

/// Cross-checks the instance inverter on `b(ν)` against the Neumann series
/// `Σ (b_k^{-1}(b_k − b(ν)))^j b_k^{-1}`; `None` when that ratio is not below 1.
pub fn neumann_cross_check<B: UnitalElement>(
    chain_b: &B,
    chain_b_inv: &B,
    cand: &Candidate<B>,
    tau: &B::Scalar,
) -> Result<Option<NeumannCheck<B::Scalar>>> {
    let ratio = chain_b_inv.try_mul(&chain_b.try_sub(&cand.b)?)?.norm();
    if ratio >= B::Scalar::one() {
        return Ok(None);
    }
    let (series, trunc) = neumann_inverse(chain_b_inv, chain_b, &cand.b, tau)?;
    let gap = series.try_sub(&cand.b_inv)?.norm();
    Ok(Some(NeumannCheck {
        ratio,
        gap,
        tail_bound: trunc.tail_bound,
        terms: trunc.terms_used,
    }))
}

/// Whether `x·y = y·x` up to the slack.
pub fn commute<B: AlgebraElement>(x: &B, y: &B, tau: &B::Scalar) -> Result<bool> {
    let gap = x.try_mul(y)?.try_sub(&y.try_mul(x)?)?.norm();
    Ok(Tolerance::new(tau.clone()).is_zero(&gap))
}
