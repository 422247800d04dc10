use serde::Serialize;

use crate::algebra::NormedSpace;
use crate::engine::ResultOf;
use crate::error::{Error, Result};
use crate::instances::ApproximateIdentity;
use crate::representations::{uniform_residual, uniformity_threshold, ProbeSet, Representation};
use crate::scalar::{ArithmeticMode, Scalar, Tolerance};
use crate::verification::certificate::{digest_of, ClauseRecord, FactorizationCertificate, Method};

/// Largest power sampled by clauses that range over all certified `n`.
pub const MAX_SAMPLED_POWER: usize = 96;

/// Powers checked in closed form, where every `n` is certified.
pub const CLOSED_FORM_POWERS: usize = 16;

pub(crate) fn bound_method<S: Scalar>() -> Method {
    match S::MODE {
        ArithmeticMode::Exact => Method::Exact,
        ArithmeticMode::Approx => Method::Tolerance,
    }
}

/// Folds `bound − observed` margins into one record.
pub(crate) fn margin_record<S: Scalar>(
    id: &str,
    margins: impl IntoIterator<Item = S>,
    strict: bool,
    tol: &Tolerance<S>,
    method: Method,
    note: impl Into<String>,
) -> ClauseRecord {
    let worst = margins.into_iter().reduce(S::min_of);
    match worst {
        Some(m) => ClauseRecord::inequality(id, &S::zero(), &m, strict, tol, method, note),
        None => ClauseRecord::check(id, true, "0", method, format!("{} (no samples)", note.into())),
    }
}

/// Digest of the run configuration, instance tags and probe.
pub fn engine_digest<R>(result: &ResultOf<R>, probe: &ProbeSet<R::Module>) -> Result<String>
where
    R: Representation,
    R::Module: Serialize,
{
    let tags = vec![
        probe.elements()[0].tag().to_string(),
        result.a.tag().to_string(),
        result.chain.b.tag().to_string(),
    ];
    digest_of(&serde_json::json!({
        "config": result.config.config,
        "mode": <R::Scalar as Scalar>::MODE,
        "tags": tags,
        "probe": probe,
    }))
}

/// Greedy `η`-net of a finite set; returns the indices of the centres.
pub(crate) fn greedy_net<X: NormedSpace>(points: &[X], eta: &X::Scalar) -> Result<Vec<usize>> {
    let mut centres: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut covered = false;
        for &c in &centres {
            if p.try_sub(&points[c])?.norm() < *eta {
                covered = true;
                break;
            }
        }
        if !covered {
            centres.push(i);
        }
    }
    Ok(centres)
}

/// Evaluates every clause for an engine result on its probe.
///
/// Clause failures are recorded in the certificate; only arithmetic on
/// incompatible operands is an error.
pub fn certify_engine<R, N>(
    pipeline: &str,
    rep: &R,
    net: &N,
    probe: &ProbeSet<R::Module>,
    result: &ResultOf<R>,
) -> Result<FactorizationCertificate>
where
    R: Representation,
    R::Module: Serialize,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    type S<R> = <R as Representation>::Scalar;
    let cfg = &result.config;
    let tol = Tolerance::new(cfg.config.tau.clone());
    let method = bound_method::<S<R>>();
    let m = cfg.m.clone();
    let eta = result.evaluator_bound();
    let theta = result.tail_bound.clone();
    let pi = result.pi_norm.clone();
    let a_norm = result.a.norm();
    let powers = result.max_power().map_or(CLOSED_FORM_POWERS, |p| p.min(MAX_SAMPLED_POWER));
    let power_note = if result.closed_form {
        format!("closed form, n ≤ {powers}")
    } else {
        format!("n ≤ {powers} of j_(K+1) = {}", result.j_schedule.last().copied().unwrap_or(0))
    };

    // orbits[s][n-1] = π(b_K^{-n})s
    let orbits = crate::engine::inverse_orbits(rep, &result.chain.b_inv, probe, powers)?;
    let elements = probe.elements();

    // (1) s = π(aⁿ)xₙ(s) up to the tail and evaluator budgets
    let mut c1 = Vec::new();
    for (s, orbit) in elements.iter().zip(&orbits) {
        for n in 1..=powers {
            let x = &orbit[n - 1];
            let back = result.apply_a_power(rep, n, x)?;
            let residual = s.try_sub(&back)?.norm();
            let nn = S::<R>::from_i64(n as i64);
            let budget = pi.clone() * nn * theta.clone() * m.powi(n as i64 - 1) * (x.norm() + eta.clone())
                + pi.clone() * a_norm.powi(n as i64) * eta.clone();
            c1.push(budget - residual);
        }
    }
    let c1 = margin_record(
        "1",
        c1,
        false,
        &tol,
        if result.closed_form { Method::ClosedForm } else { method },
        format!("residual ‖s − π(aⁿ)x̃ₙ(s)‖ against tail (1−r)^K·M = {theta} and evaluator ε/2^K = {eta}; {power_note}"),
    );

    // (2) ‖a‖ ≤ M
    let c2 = ClauseRecord::inequality("2", &a_norm, &m, false, &tol, method, format!("‖a‖ = {a_norm}, M = {m}"));

    // (3) injectivity, inverse relation, sampled modulus
    let mut injective = true;
    let mut inverse_ok = true;
    let mut modulus = S::<R>::zero();
    let b_k = &result.chain.b;
    for n in 1..=powers.min(8) {
        for (i, (s, orbit)) in elements.iter().zip(&orbits).enumerate() {
            let mut back = orbit[n - 1].clone();
            for _ in 0..n {
                back = rep.act(b_k, &back)?;
            }
            inverse_ok &= tol.is_zero(&back.try_sub(s)?.norm());
            for (s2, orbit2) in elements.iter().zip(&orbits).skip(i + 1) {
                let ds = s.try_sub(s2)?.norm();
                let dx = orbit[n - 1].try_sub(&orbit2[n - 1])?.norm();
                if !tol.is_zero(&ds) {
                    injective &= !tol.is_zero(&dx);
                    modulus = S::<R>::max_of(modulus, dx / ds);
                }
            }
        }
    }
    let c3 = ClauseRecord::check(
        "3",
        injective && inverse_ok,
        modulus.to_string(),
        Method::Sampled,
        format!("injective on probe: {injective}; π(b_Kⁿ)x̃ₙ(s) = s: {inverse_ok}; margin is the largest observed Lipschitz ratio"),
    );

    // (4a) ‖s − xₙ(s)‖ ≤ ε for n ≤ n0
    let n0 = cfg.config.n0.min(powers);
    let c4a = margin_record(
        "4a",
        elements.iter().zip(&orbits).flat_map(|(s, orbit)| {
            (1..=n0).map(|n| {
                let d = s.try_sub(&orbit[n - 1]).map(|d| d.norm()).unwrap_or_else(|_| cfg.epsilon.clone() * S::<R>::from_i64(2));
                cfg.epsilon.clone() - d - eta.clone()
            })
        }),
        false,
        &tol,
        method,
        format!("n ≤ {n0}, ε = {}", cfg.epsilon),
    );

    // (4b) ‖xₙ(s)‖ ≤ α_nⁿ·max(‖s‖, δ)
    let c4b = margin_record(
        "4b",
        elements.iter().zip(&orbits).flat_map(|(s, orbit)| {
            let floor = S::<R>::max_of(s.norm(), cfg.delta.clone());
            let alpha = &cfg.config.alpha;
            orbit
                .iter()
                .enumerate()
                .map(|(i, x)| alpha.power_bound(i + 1) * floor.clone() - x.norm() - eta.clone())
                .collect::<Vec<_>>()
        }),
        false,
        &tol,
        method,
        format!("{power_note}, δ = {}", cfg.delta),
    );

    // (5) linearity of the approximants on probe pairs
    let c = S::<R>::ratio(-2, 3);
    let mut lin_gap = S::<R>::zero();
    for n in 1..=powers.min(3) {
        for (i, s) in elements.iter().enumerate() {
            let scaled = result.x_n(rep, n, &s.scale(&c))?.value;
            lin_gap = S::<R>::max_of(lin_gap, scaled.try_sub(&orbits[i][n - 1].scale(&c))?.norm());
            for (j, s2) in elements.iter().enumerate().skip(i + 1) {
                let sum = result.x_n(rep, n, &s.try_add(s2)?)?.value;
                let parts = orbits[i][n - 1].try_add(&orbits[j][n - 1])?;
                lin_gap = S::<R>::max_of(lin_gap, sum.try_sub(&parts)?.norm());
            }
        }
    }
    let c5 = ClauseRecord::check(
        "5",
        tol.is_zero(&lin_gap),
        (-lin_gap.clone()).to_string(),
        method,
        format!("largest additivity/homogeneity gap {lin_gap}"),
    );

    // (6) convex identity b_K = (1−r)^K + a_K, chain ledger
    let r = cfg.r().clone();
    let (coeffs, lead) = result.chain.coefficients(&r);
    let coeff_sum = coeffs.iter().cloned().fold(lead.clone(), |x, y| x + y);
    let mut parts = vec![ClauseRecord::check(
        "6",
        tol.eq(&coeff_sum, &S::<R>::one()),
        (S::<R>::one() - coeff_sum.clone()).to_string(),
        method,
        format!("coefficient sum {coeff_sum}"),
    )];
    let convex_ok = match result.chain.partial_sum(&r)? {
        Some(a_k) => {
            let rebuilt = rep.unit().scale(&lead).try_add(&rep.embed(&a_k))?;
            tol.is_zero(&rebuilt.try_sub(&result.chain.b)?.norm())
        }
        None => false,
    };
    parts.push(ClauseRecord::check("6", convex_ok, "0", method, format!("b_K = (1−r)^K·1 + a_K: {convex_ok}")));
    let increasing = result.chain.indices.windows(2).all(|w| w[0] < w[1]);
    parts.push(ClauseRecord::check("6", increasing, "0", Method::Exact, format!("indices {:?}", result.chain.indices)));
    let ledger_margin = margin_record(
        "6",
        result.chain.ledger.iter().map(|rec| rec.threshold.clone() - rec.margin.clone()),
        true,
        &tol,
        method,
        "ledger margins below ε/2^k",
    );
    parts.push(ledger_margin);
    parts.push(margin_record(
        "6",
        result.chain.ledger.iter().map(|rec| rec.inverse_bound.clone() - rec.inverse_norm.clone()),
        false,
        &tol,
        method,
        format!("‖b_k^(-1)‖ ≤ Δ^k with Δ = {}", cfg.growth),
    ));
    let c6 = ClauseRecord::all_of("6", parts, method);

    // (7a), (7b) need a bounded probe
    let (c7a, c7b) = match &probe.claims().bounded {
        Some(bound) => {
            let sup = orbits
                .iter()
                .flatten()
                .map(|x| x.norm() + eta.clone())
                .fold(S::<R>::zero(), S::<R>::max_of);
            let c7a = ClauseRecord::check(
                "7a",
                true,
                sup.to_string(),
                Method::Sampled,
                format!("S bounded by {bound}; margin is sup ‖xₙ(s)‖ over {power_note}"),
            );
            let mut largest = 0;
            for n in 1..=powers {
                let image: Vec<R::Module> = orbits.iter().map(|o| o[n - 1].clone()).collect();
                largest = largest.max(greedy_net(&image, &cfg.epsilon)?.len());
            }
            let c7b = ClauseRecord::check(
                "7b",
                true,
                largest.to_string(),
                Method::Sampled,
                format!("finite probe; largest greedy ε-net of an image has {largest} centres"),
            );
            (c7a, c7b)
        }
        None => (
            ClauseRecord::not_applicable("7a", "probe makes no boundedness claim"),
            ClauseRecord::not_applicable("7b", "probe makes no boundedness claim"),
        ),
    };

    // (7c) the net is uniformly close on each image xₙ(S)
    let uni_tol = cfg.epsilon.clone();
    let mut c7c_parts = Vec::new();
    for n in 1..=powers.min(cfg.config.n0.max(3)) {
        let image = ProbeSet::bounded(orbits.iter().map(|o| o[n - 1].clone()).collect())?;
        match uniformity_threshold(rep, net, &image, &uni_tol, cfg.config.index_cap) {
            Ok(nu) => {
                let res = uniform_residual(rep, net, nu, &image)?;
                c7c_parts.push(ClauseRecord::inequality(
                    "7c",
                    &res,
                    &uni_tol,
                    true,
                    &tol,
                    method,
                    format!("n = {n}: residual below ε from ν = {nu}"),
                ));
            }
            Err(Error::Exhausted { best_margin, cap, .. }) => c7c_parts.push(ClauseRecord::check(
                "7c",
                false,
                best_margin,
                method,
                format!("n = {n}: no index up to {cap}"),
            )),
            Err(e) => return Err(e),
        }
    }
    let c7c = ClauseRecord::all_of("7c", c7c_parts, method);

    // (8)-(10) need an order
    let (c8, c9, c10) = match result.a.in_cone() {
        None => (
            ClauseRecord::not_applicable("8", "algebra carries no positive cone"),
            ClauseRecord::not_applicable("9", "algebra carries no positive cone"),
            ClauseRecord::not_applicable("10", "algebra carries no positive cone"),
        ),
        Some(a_pos) => {
            let c8 = if net.is_positive() {
                ClauseRecord::check("8", a_pos, "0", Method::Exact, format!("a ≥ 0: {a_pos}"))
            } else {
                ClauseRecord::not_applicable("8", "net is not positive")
            };
            let c9 = if net.is_positive() && probe.claims().subset_of_cone {
                let all = orbits.iter().flatten().all(|x| x.in_cone() == Some(true));
                ClauseRecord::check("9", all, "0", Method::Exact, format!("xₙ(s) ≥ 0 for {power_note}: {all}"))
            } else {
                ClauseRecord::not_applicable("9", "probe is not claimed positive")
            };
            let m_one = tol.eq(&m, &S::<R>::one());
            let c10 = ClauseRecord::check(
                "10",
                m_one && net.is_positive(),
                (S::<R>::one() - m.clone()).to_string(),
                Method::Exact,
                format!("positive net with M = {m}"),
            );
            (c8, c9, c10)
        }
    };

    FactorizationCertificate::new(
        pipeline,
        <S<R> as Scalar>::MODE,
        engine_digest::<R>(result, probe)?,
        vec![c1, c2, c3, c4a, c4b, c5, c6, c7a, c7b, c7c, c8, c9, c10],
    )
}
