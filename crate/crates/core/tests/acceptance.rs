//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Every expected value is recomputed here from first principles rather than
//! read back from the library.

use std::process::ExitCode;
use std::time::Instant;

use powerfact::algebra::{geometric_inverse, power_difference_decomposition, sum_all, AlgebraElement, NormedSpace, UnitalElement};
use powerfact::engine::{advance_chain_forced, run_factorization, ChainState, FactorizationConfig};
use powerfact::instances::{C0Line, ConstantNet, EventuallyConstantLine, LineNet, Matrix, Vector};
use powerfact::representations::{LineRep, MatrixRep, ProbeSet, Representation};
use powerfact::verification::{
    certify_engine, cone_witnesses, deficient_net_report, lift_demo, unbounded_xn_witness, worked_probe, ClauseStatus,
    Method, WITNESS_SEED,
};
use powerfact::worked::WorkedExample;
use powerfact::{Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

/// `#{i : ν_i < |t|}`.
fn band_of(nu: &[usize], t: i64) -> i64 {
    nu.iter().filter(|&&v| (v as i64) < t.abs()).count() as i64
}

/// `f(t)·(4/3)^{band(t)·n}`, the approximant on the step pyramid.
fn xn_oracle(nu: &[usize], n: usize, f: &C0Line<Rational>) -> C0Line<Rational> {
    f.map(|t, v| v.clone() * q(4, 3).powi(band_of(nu, t) * n as i64))
}

fn sup_abs(f: &C0Line<Rational>) -> Rational {
    f.iter().map(|(_, v)| v.abs()).fold(q(0, 1), Rational::max_of)
}

fn ecl_sup(b: &EventuallyConstantLine<Rational>) -> Rational {
    b.exceptions().map(|(_, v)| v.abs()).fold(b.tail().abs(), Rational::max_of)
}

fn worked() -> Result<WorkedExample, String> {
    WorkedExample::default_example().map_err(err)
}

fn criterion_1() -> Outcome {
    let ex = worked()?;
    let nu = ex.nu().to_vec();
    let w = ex.window();
    let probe = worked_probe(&ex);
    ensure(probe.len() == 10, "probe must have 10 elements")?;
    for f in &probe {
        ensure(ex.envelope.contains(f), format!("probe element {f:?} is not in S"))?;
    }
    let a = ex.pyramid.to_line();
    for t in -w..=w {
        ensure(a.get(t) == q(3, 4).powi(band_of(&nu, t)), format!("a({t}) differs from (3/4)^band"))?;
    }
    ensure(sup_abs(&a) == q(1, 1), "norm(a) must be 1")?;
    ensure(a.iter().all(|(_, v)| *v >= q(0, 1)), "a must be nonnegative")?;
    for f in &probe {
        for n in 1..=8 {
            let x = ex.explicit_x_n(n, f).map_err(err)?.value;
            ensure(x == xn_oracle(&nu, n, f), format!("x_{n} differs from the pointwise oracle"))?;
            ensure(x.iter().all(|(_, v)| *v >= q(0, 1)), "x_n(f) must be nonnegative")?;
            for t in -w..=w {
                let back = a.get(t).powi(n as i64) * x.get(t);
                ensure(back == f.get(t), format!("a^{n}·x_{n}(f) ≠ f at t = {t}"))?;
            }
        }
    }
    let x2 = ex.explicit_x_n(2, &ex.envelope.truncate(w)).map_err(err)?.value;
    ensure(x2.get(5) == q(1, 18), format!("x_2(f0)(5) = {} instead of 1/18", x2.get(5)))?;
    Ok(format!("ν = {nu:?}, a = (3/4)^band on |t| ≤ {w}, n = 1..8 on 10 probes, x₂(f₀)(5) = 1/18"))
}

fn criterion_2() -> Outcome {
    let ex = worked()?;
    ensure(ex.nu() == ex.schedules.n2.as_slice(), format!("ν {:?} is not the N₂ schedule {:?}", ex.nu(), ex.schedules.n2))?;
    ensure(ex.nu() == [3, 9, 19, 33, 51, 73], format!("unexpected ν {:?}", ex.nu()))?;
    let mut worst = q(0, 1);
    for f in worked_probe(&ex) {
        for n in 1..=2 {
            let x = xn_oracle(ex.nu(), n, &f);
            let d = sup_abs(&f.add(&x.map(|_, v| -v.clone())));
            worst = Rational::max_of(worst, d);
        }
    }
    ensure(worst <= q(1, 10), format!("max ‖f − xₙ(f)‖ = {worst} exceeds 1/10"))?;
    Ok(format!("max ‖f − xₙ(f)‖ = {worst} ≤ 1/10 for n ≤ 2"))
}

fn criterion_3() -> Outcome {
    let ex = worked()?;
    let n3 = &ex.schedules.n3;
    ensure(ex.nu().iter().zip(n3).all(|(v, m)| v >= m), format!("ν {:?} lies below N₃ {n3:?}", ex.nu()))?;
    let mut tightest: Option<Rational> = None;
    for f in worked_probe(&ex) {
        let floor = Rational::max_of(sup_abs(&f), q(1, 1));
        for n in 1..=15usize {
            let x = ex.explicit_x_n(n, &f).map_err(err)?.value;
            let bound = Rational::from_i64(1 + n as i64).powi(n as i64) * floor.clone();
            let slack = bound - sup_abs(&x);
            ensure(slack >= q(0, 1), format!("growth bound fails at n = {n}"))?;
            tightest = Some(tightest.map_or(slack.clone(), |s| Rational::min_of(s, slack)));
        }
    }
    Ok(format!("N₃ = {n3:?} ≤ ν; smallest slack {}", tightest.unwrap_or_else(|| q(0, 1))))
}

fn criterion_4() -> Outcome {
    let ex = worked()?;
    let nu = ex.nu();
    let r = q(1, 4);
    let plateau = |v: usize| EventuallyConstantLine::embed(&C0Line::constant_on(v as i64, q(1, 1)));
    for k in 1..=6 {
        let mut product = EventuallyConstantLine::constant(q(1, 1));
        let mut sum = EventuallyConstantLine::constant(q(3, 4).powi(k as i64));
        for (i, &v) in nu.iter().take(k).enumerate() {
            let factor = EventuallyConstantLine::constant(q(3, 4)).try_add(&plateau(v).scale(&r)).map_err(err)?;
            product = product.try_mul(&factor).map_err(err)?;
            let coeff = r.clone() * q(3, 4).powi(i as i64);
            sum = sum.try_add(&plateau(v).scale(&coeff)).map_err(err)?;
        }
        ensure(product == sum, format!("product and convex sum differ at k = {k}"))?;
        ensure(ex.pyramid.b_k_definition(k).map_err(err)? == sum, format!("library b_{k} differs"))?;
        ensure(ex.pyramid.b_k_from_pyramid(k).map_err(err)? == sum, format!("pyramid b_{k} differs"))?;
        ensure(ex.pyramid.product_identity(k).map_err(err)?.agree, format!("product identity flag false at k = {k}"))?;
    }
    Ok("b_k = Π(3/4 + e_ν/4) = (3/4)^k + Σ (1/4)(3/4)^(i−1) e_ν for k = 1..6".into())
}

fn criterion_5() -> Outcome {
    let cfg = FactorizationConfig::<Rational>::default();
    let rep = LineRep::<Rational>::new();
    let net = LineNet::<Rational>::plateau();
    let f0 = powerfact::instances::Envelope::<Rational>::default_envelope();
    let probe = ProbeSet::bounded(vec![f0.truncate(40), f0.truncate(10), C0Line::constant_on(2, q(1, 1))]).map_err(err)?;
    let res = run_factorization(&rep, &net, &probe, &cfg).map_err(err)?;
    ensure(res.config.growth == q(3, 1), format!("Δ = {}", res.config.growth))?;
    ensure(rep.pi_norm() == q(1, 1), "π-norm must be 1")?;
    // threshold scan: least j above the previous one with α_j ≥ 1 + Δ^k
    let mut oracle = Vec::new();
    let mut prev = cfg.n0 - 1;
    for k in 1..=3u32 {
        let mut j = (prev + 1).max(cfg.n0);
        while Rational::from_i64(1 + j as i64) < Rational::from_i64(1 + 3i64.pow(k)) {
            j += 1;
        }
        oracle.push(j);
        prev = j;
    }
    ensure(oracle == [3, 9, 27], format!("oracle schedule {oracle:?}"))?;
    ensure(res.j_schedule[..3] == oracle[..], format!("engine schedule {:?}", res.j_schedule))?;
    let tau = cfg.tau.clone();
    for (k, rec) in res.chain.ledger.iter().enumerate() {
        let threshold = q(1, 10) / Rational::from_i64(2).powi(k as i64 + 1);
        ensure(rec.margin < threshold, format!("step {}: margin {} ≥ {threshold}", k + 1, rec.margin))?;
        let inv = ecl_sup(&res.chain.inverse_history[k + 1]);
        ensure(inv <= Rational::from_i64(3).powi(k as i64 + 1) + tau.clone(), format!("‖b_{}⁻¹‖ = {inv}", k + 1))?;
    }
    Ok(format!("j = {oracle:?}, ν = {:?}", res.chain.indices))
}

fn criterion_6() -> Outcome {
    let rep = MatrixRep::<Rational>::new(3);
    let net = ConstantNet {
        element: Matrix::identity(3),
        bound: q(1, 1),
        commutative: true,
        positive: true,
        largest: true,
    };
    let probe = ProbeSet::bounded(vec![
        Vector::new(vec![q(1, 2), q(-3, 1), q(7, 5)]),
        Vector::new(vec![q(0, 1), q(2, 9), q(-1, 1)]),
    ])
    .map_err(err)?;
    let res = run_factorization(&rep, &net, &probe, &FactorizationConfig::default()).map_err(err)?;
    ensure(res.a == Matrix::identity(3), "a must be the identity")?;
    ensure(res.chain.inverse_history.iter().all(|b| *b == Matrix::identity(3)), "every b_k⁻¹ must be the identity")?;
    ensure(res.chain.b == Matrix::identity(3), "b_K must be the identity")?;
    for s in probe.elements() {
        for n in 1..=50 {
            ensure(res.x_n(&rep, n, s).map_err(err)?.value == *s, format!("x_{n}(s) ≠ s"))?;
        }
    }
    let cert = certify_engine("degenerate", &rep, &net, &probe, &res).map_err(err)?;
    for c in &cert.clauses {
        ensure(c.status != ClauseStatus::Fail, format!("clause {} fails", c.id))?;
        ensure(c.method != Method::Tolerance, format!("clause {} is not exact", c.id))?;
    }
    Ok("a = b_k = I, xₙ(s) = s for n ≤ 50, no failing clause".into())
}

fn criterion_7() -> Outcome {
    let w = cone_witnesses(WITNESS_SEED, 20).map_err(err)?;
    let expected = powerfact::instances::UnitizationPair::new(q(1, 1), C0Line::from_pairs([(0, q(-1, 2))]));
    ensure(w.delta.inverse == expected, format!("inverse {:?}", w.delta.inverse))?;
    // independent: (1 + δ₀)(1 − δ₀/2) = 1 + δ₀ − δ₀/2 − δ₀/2 = 1
    let value_at_zero = (q(1, 1) + q(1, 1)) * (q(1, 1) + q(-1, 2));
    ensure(value_at_zero == q(1, 1), "pointwise product at 0")?;
    ensure(!w.delta.inverse_in_cone, "the inverse of (1, δ₀) must leave the cone")?;
    ensure(w.random.len() == 20, "need 20 random invertibles")?;
    for r in &w.random {
        let b = &r.element;
        ensure(b.values().all(|v| *v > q(0, 1)), "sample must be strictly positive")?;
        let inv = b.try_inverse().map_err(err)?;
        ensure(inv.values().all(|v| *v > q(0, 1)), "inverse must be positive")?;
        ensure(b.try_mul(&inv).map_err(err)? == EventuallyConstantLine::constant(q(1, 1)), "b·b⁻¹ ≠ 1")?;
    }
    Ok("(1, δ₀)⁻¹ = (1, −δ₀/2) ∉ cone; 20 positive invertibles have positive inverses".into())
}

fn criterion_8() -> Outcome {
    let rep = deficient_net_report(&[1, 10, 100], &[2, 3, 4, 5, 7, 10], &q(1, 2), 50).map_err(err)?;
    for row in &rep.rows {
        // support {|t| ≤ 2} sits inside the plateau for ν ≥ 2, where e_ν = 1 − 1/ν
        let oracle = Rational::from_i64(row.height) * q(1, row.nu as i64);
        ensure(row.residual == oracle, format!("R = {}, ν = {}: residual {}", row.height, row.nu, row.residual))?;
    }
    let (cap, best) = rep.exhausted.clone().ok_or("the deficient net must exhaust at cap 50")?;
    ensure(cap == 50, "cap must be 50")?;
    ensure(rep.plateau_residual == q(0, 1), "the plateau net must reach residual 0")?;
    Ok(format!("residual = R/ν for R ∈ {{1, 10, 100}}; exhausted at cap {cap} with best {best}; plateau exact at ν = {}", rep.plateau_index))
}

fn criterion_9() -> Outcome {
    let ex = worked()?;
    let w = unbounded_xn_witness(&ex, 1).map_err(err)?;
    let rows: Vec<_> = w.rows.iter().filter(|r| (1..=5).contains(&r.band)).collect();
    ensure(rows.len() == 5, "need five bands")?;
    for row in &rows {
        let oracle = q(4, 3).powi(row.band as i64);
        ensure(row.ratio == oracle, format!("band {}: ratio {}", row.band, row.ratio))?;
    }
    ensure(rows.windows(2).all(|p| p[0].ratio < p[1].ratio), "ratios must increase strictly")?;
    Ok(format!("ratios {:?}", rows.iter().map(|r| r.ratio.to_string()).collect::<Vec<_>>()))
}

fn criterion_10() -> Outcome {
    let report = lift_demo(&FactorizationConfig::default()).map_err(err)?;
    ensure(report.finite.omega == powerfact::representations::Omega::Finite(3), "family over Ω = {1,2,3}")?;
    ensure(report.sequence.omega == powerfact::representations::Omega::Sequence(5), "five-term sequence")?;
    for case in [&report.finite, &report.sequence] {
        ensure(case.termwise, format!("{:?}: not termwise", case.omega))?;
        ensure(case.same_factor, format!("{:?}: factor differs from the union run", case.omega))?;
        ensure(case.certificate.all_pass(), format!("{:?}: certificate fails", case.omega))?;
    }
    ensure(report.sequence.zero_limit_preserved == Some(true), "zero limit must be preserved")?;
    Ok("termwise factorizations on Ω = {1,2,3} and a 5-term sequence; zero limit preserved".into())
}

fn criterion_11() -> Outcome {
    let ex = worked()?;
    let rep = LineRep::<Rational>::new();
    let net = LineNet::<Rational>::plateau();
    let probe = ProbeSet::bounded(vec![ex.envelope.truncate(40)]).map_err(err)?;
    let cfg = FactorizationConfig::<Rational>::default().validate(&q(1, 1)).map_err(err)?;
    let mut chain = ChainState::initial(rep.unit());
    for (k, &nu) in [3usize, 9, 19].iter().enumerate() {
        chain = advance_chain_forced(&rep, &net, &probe, &chain, nu, 3usize.pow(k as u32 + 1), &cfg).map_err(err)?;
        let worked_b = ex.pyramid.b_k_definition(k + 1).map_err(err)?;
        ensure(chain.b == worked_b, format!("b_{} differs", k + 1))?;
        for t in -25..=25 {
            ensure(chain.b.get(t) == q(3, 4).powi(band_of(&[3, 9, 19][..=k], t)), format!("b_{}({t})", k + 1))?;
        }
    }
    Ok("forced ν = (3, 9, 19) reproduces b_1, b_2, b_3".into())
}

fn random_ecl(rng: &mut ChaCha8Rng) -> EventuallyConstantLine<Rational> {
    let mut draw = || {
        let d: i64 = rng.gen_range(1..=12);
        Rational::new(rng.gen_range(-d..=d), d)
    };
    let width = 4;
    let exceptions: Vec<(i64, Rational)> = (-width..=width).map(|t| (t, draw())).collect();
    EventuallyConstantLine::new(exceptions, draw())
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Result<Matrix<Rational>, String> {
    let rows = (0..3)
        .map(|_| (0..3).map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect())
        .collect();
    Matrix::from_rows(rows).map_err(err)
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let r = q(1, 4);
    let m = q(1, 1);
    let tau = q(1, 1_000_000_000);
    let mut worst_residual = q(0, 1);
    for _ in 0..50 {
        let e = random_ecl(&mut rng);
        ensure(ecl_sup(&e) <= m, "sample norm above 1")?;
        let (g, _) = geometric_inverse(&e, &r, &m, &tau).map_err(err)?;
        let base = EventuallyConstantLine::constant(q(3, 4)).try_add(&e.scale(&r)).map_err(err)?;
        let residual = ecl_sup(&g.try_mul(&base).map_err(err)?.try_sub(&EventuallyConstantLine::constant(q(1, 1))).map_err(err)?);
        ensure(residual <= tau.clone() * (q(1, 1) - r.clone() + r.clone() * m.clone()), format!("residual {residual}"))?;
        ensure(ecl_sup(&g) <= (q(1, 1) - r.clone() - r.clone() * m.clone()).recip() + tau.clone(), "norm bound")?;
        worst_residual = Rational::max_of(worst_residual, residual);
    }
    for _ in 0..10 {
        let a = random_matrix(&mut rng)?;
        let b = random_matrix(&mut rng)?;
        for n in 1..=8u32 {
            let terms = power_difference_decomposition(&a, &b, n).map_err(err)?;
            ensure(terms.len() == n as usize, "term count")?;
            let total = sum_all(&terms).map_err(err)?;
            let direct = a.try_pow(n).map_err(err)?.try_sub(&b.try_pow(n).map_err(err)?).map_err(err)?;
            ensure(total == direct, format!("decomposition sum differs at n = {n}"))?;
        }
    }
    Ok(format!("50 resolvents within τ (worst residual {:.3e}); decomposition exact for n ≤ 8", worst_residual.to_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("worked-example exactness", criterion_1),
        ("clause (4a) with the N₂ schedule", criterion_2),
        ("clause (4b) with the N₃ schedule", criterion_3),
        ("product identity", criterion_4),
        ("engine schedule and ledger", criterion_5),
        ("degenerate identity net", criterion_6),
        ("cone witnesses", criterion_7),
        ("deficient plateau contrast", criterion_8),
        ("unbounded approximant ratios", criterion_9),
        ("lifted factorizations", criterion_10),
        ("cross-path agreement", criterion_11),
        ("analytic machinery", criterion_12),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("PASS criterion {:>2} {title}: {detail} [{:.2}s]", i + 1, t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {title}: {why} [{:.2}s]", i + 1, t.elapsed().as_secs_f64());
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
