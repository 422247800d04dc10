use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, NormedSpace, UnitalElement};
use crate::engine::chain::{advance_chain, check_path, ChainOf, ChainState};
use crate::engine::config::{FactorizationConfig, ValidatedConfig};
use crate::engine::schedule::build_j_schedule;
use crate::error::{Error, Result};
use crate::instances::ApproximateIdentity;
use crate::representations::{uniformity_threshold, ProbeSet, Representation};
use crate::scalar::{Scalar, Tolerance};

/// The factor `a`, the chain behind it, and what is needed to evaluate `xₙ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "A: Serialize + DeserializeOwned, B: Serialize + DeserializeOwned, S: Scalar")]
pub struct FactorizationResult<A, B, S> {
    /// `a_K = Σ_{i≤K} r(1−r)^{i−1}u_i`, or the exact `a` when `closed_form`.
    pub a: A,
    /// Bound on `‖a_∞ − a‖`: `(1−r)^K·M`, or zero when `closed_form`.
    pub tail_bound: S,
    /// The net reaches the unit of the superalgebra, so the infinite tail
    /// collapses and both `a` and `xₙ` are exact.
    pub closed_form: bool,
    pub chain: ChainState<A, B, S>,
    /// `j_1, …, j_{K+1}`.
    pub j_schedule: Vec<usize>,
    pub config: ValidatedConfig<S>,
    pub pi_norm: S,
    /// Least index at which the net is uniformly `ε/2^{K+1}`-close on the probe.
    pub uniformity_index: usize,
}

pub type ResultOf<R> =
    FactorizationResult<<R as Representation>::Algebra, <R as Representation>::Super, <R as Representation>::Scalar>;

/// An evaluation `xₙ(s) ≈ value` with `‖xₙ(s) − value‖ ≤ error_bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "X: Serialize + DeserializeOwned, S: Scalar")]
pub struct Approximant<X, S> {
    pub n: usize,
    pub value: X,
    pub error_bound: S,
}

impl<A, B, S> FactorizationResult<A, B, S>
where
    S: Scalar,
    A: AlgebraElement<Scalar = S>,
    B: UnitalElement<Scalar = S>,
{
    pub fn steps(&self) -> usize {
        self.chain.k
    }

    /// Largest power the evaluator certifies, `j_{K+1}`; unbounded in closed form.
    pub fn max_power(&self) -> Option<usize> {
        if self.closed_form {
            None
        } else {
            self.j_schedule.last().copied()
        }
    }

    /// Error bound `ε/2^K` of the evaluator.
    pub fn evaluator_bound(&self) -> S {
        if self.closed_form {
            S::zero()
        } else {
            self.config.threshold(self.chain.k)
        }
    }

    /// `xₙ(s) ≈ π(b_K^{-n})s`, valid for `n ≤ j_{K+1}`.
    pub fn x_n<R>(&self, rep: &R, n: usize, s: &R::Module) -> Result<Approximant<R::Module, S>>
    where
        R: Representation<Scalar = S, Algebra = A, Super = B>,
    {
        if n == 0 {
            return Err(Error::ParameterOutOfRange("xₙ is defined for n ≥ 1".into()));
        }
        if let Some(max) = self.max_power() {
            if n > max {
                return Err(Error::ParameterOutOfRange(format!(
                    "n = {n} exceeds the certified power j_(K+1) = {max}"
                )));
            }
        }
        let mut value = s.clone();
        for _ in 0..n {
            value = rep.act(&self.chain.b_inv, &value)?;
        }
        Ok(Approximant {
            n,
            value,
            error_bound: self.evaluator_bound(),
        })
    }

    /// `π(aⁿ)x`.
    pub fn apply_a_power<R>(&self, rep: &R, n: usize, x: &R::Module) -> Result<R::Module>
    where
        R: Representation<Scalar = S, Algebra = A, Super = B>,
    {
        let mut out = x.clone();
        for _ in 0..n {
            out = rep.act_algebra(&self.a, &out)?;
        }
        Ok(out)
    }
}

/// Runs the full construction from the empty chain.
pub fn run_factorization<R, N>(
    rep: &R,
    net: &N,
    probe: &ProbeSet<R::Module>,
    config: &FactorizationConfig<R::Scalar>,
) -> Result<ResultOf<R>>
where
    R: Representation,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    run_factorization_from(rep, net, probe, config, ChainState::initial(rep.unit()))
}

/// Continues the construction from a stored chain, e.g. one read back from JSON.
pub fn run_factorization_from<R, N>(
    rep: &R,
    net: &N,
    probe: &ProbeSet<R::Module>,
    config: &FactorizationConfig<R::Scalar>,
    start: ChainOf<R>,
) -> Result<ResultOf<R>>
where
    R: Representation,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    let validated = config.validate(&net.bound())?;
    check_path(net, probe, &validated)?;
    let steps = config.steps;
    if start.k > steps {
        return Err(Error::ParameterOutOfRange(format!(
            "stored chain has {} steps, more than the configured {steps}",
            start.k
        )));
    }
    let pi_norm = rep.pi_norm();
    let schedule = build_j_schedule(&validated, &pi_norm, steps + 1)?;
    let uniformity_index =
        uniformity_threshold(rep, net, probe, &validated.threshold(steps + 1), config.index_cap)?;
    let mut chain = start;
    while chain.k < steps {
        chain = advance_chain(rep, net, probe, &chain, schedule[chain.k], &validated)?;
    }
    assemble(rep, net, chain, schedule, validated, pi_norm, uniformity_index)
}

fn assemble<R, N>(
    rep: &R,
    net: &N,
    chain: ChainOf<R>,
    j_schedule: Vec<usize>,
    config: ValidatedConfig<R::Scalar>,
    pi_norm: R::Scalar,
    uniformity_index: usize,
) -> Result<ResultOf<R>>
where
    R: Representation,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    let r = config.r().clone();
    let a_k = chain
        .partial_sum(&r)?
        .ok_or_else(|| Error::PreconditionFailed("a factorization needs at least one chain step".into()))?;
    let (_, lead) = chain.coefficients(&r);
    let tol = Tolerance::new(config.config.tau.clone());
    let largest = net.largest_index().map(|l| net.element(l.max(chain.indices.last().map_or(1, |v| v + 1))));
    let closed = largest.filter(|e| {
        rep.embed(e)
            .try_sub(&rep.unit())
            .is_ok_and(|d| tol.is_zero(&d.norm()))
    });
    let (a, tail_bound, closed_form) = match closed {
        Some(e) => (a_k.try_add(&e.scale(&lead))?, R::Scalar::zero(), true),
        None => (a_k, lead * config.m.clone(), false),
    };
    Ok(FactorizationResult {
        a,
        tail_bound,
        closed_form,
        chain,
        j_schedule,
        config,
        pi_norm,
        uniformity_index,
    })
}

/// Assembles a result from a chain built by hand, e.g. with forced indices.
pub fn finish_chain<R, N>(
    rep: &R,
    net: &N,
    probe: &ProbeSet<R::Module>,
    config: &FactorizationConfig<R::Scalar>,
    chain: ChainOf<R>,
) -> Result<ResultOf<R>>
where
    R: Representation,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    let validated = config.validate(&net.bound())?;
    let pi_norm = rep.pi_norm();
    let schedule = build_j_schedule(&validated, &pi_norm, chain.k + 1)?;
    let uniformity_index =
        uniformity_threshold(rep, net, probe, &validated.threshold(chain.k + 1), config.index_cap)?;
    assemble(rep, net, chain, schedule, validated, pi_norm, uniformity_index)
}
