use crate::algebra::NormedSpace;
use crate::error::Result;
use crate::instances::C0Line;
use crate::scalar::{max_or_zero, ArithmeticMode, Rational, Scalar, Tolerance};
use crate::verification::certificate::{digest_of, ClauseRecord, FactorizationCertificate, Method};
use crate::verification::engine_cert::margin_record;
use crate::worked::WorkedExample;

/// Powers checked for the exact factorization identity.
pub const IDENTITY_POWERS: usize = 8;

/// Powers checked for the growth bound.
pub const GROWTH_POWERS: usize = 15;

pub fn worked_digest(ex: &WorkedExample, probe: &[C0Line<Rational>]) -> Result<String> {
    digest_of(&serde_json::json!({
        "params": ex.params,
        "envelope": ex.envelope,
        "nu": ex.nu(),
        "mode": ArithmeticMode::Exact,
        "tags": ["c0-line", "eventually-constant-line"],
        "probe": probe,
    }))
}

/// Certificate for the closed-form worked example.
pub fn certify_worked(ex: &WorkedExample, probe: &[C0Line<Rational>]) -> Result<FactorizationCertificate> {
    certify_worked_with_factor(ex, probe, &ex.pyramid.to_line())
}

/// Same as [`certify_worked`] but checks clauses (1), (2) and (8) against a
/// caller-supplied factor, e.g. a deliberately perturbed one.
pub fn certify_worked_with_factor(
    ex: &WorkedExample,
    probe: &[C0Line<Rational>],
    a: &C0Line<Rational>,
) -> Result<FactorizationCertificate> {
    let tol = Tolerance::new(Rational::zero());
    let one = Rational::one();
    let eps = ex.params.epsilon.clone();
    let delta = ex.params.effective_delta();
    let levels = ex.pyramid.levels();

    let mut xs: Vec<Vec<C0Line<Rational>>> = Vec::new();
    for f in probe {
        let row = (1..=GROWTH_POWERS)
            .map(|n| ex.explicit_x_n(n, f).map(|x| x.value))
            .collect::<Result<Vec<_>>>()?;
        xs.push(row);
    }

    // (1) aⁿ·xₙ(f) = f exactly
    let mut worst = Rational::zero();
    for (f, row) in probe.iter().zip(&xs) {
        for n in 1..=IDENTITY_POWERS {
            let mut back = row[n - 1].clone();
            for _ in 0..n {
                back = back.mul(a);
            }
            worst = Rational::max_of(worst, back.try_sub(f)?.norm());
        }
    }
    let c1 = ClauseRecord::check(
        "1",
        worst.is_zero(),
        (-worst.clone()).to_string(),
        Method::ClosedForm,
        format!("largest ‖aⁿxₙ(f) − f‖ = {worst} for n ≤ {IDENTITY_POWERS}"),
    );

    let a_norm = a.norm();
    let c2 = ClauseRecord::inequality("2", &a_norm, &one, false, &tol, Method::Exact, format!("‖a‖ = {a_norm}"));

    // (3) band majorants, injectivity and the continuity modulus
    let mut parts = Vec::new();
    let mut bands_ok = true;
    for f in probe {
        for n in 1..=3 {
            bands_ok &= ex.explicit_x_n(n, f)?.bands.iter().all(|b| b.holds);
        }
    }
    parts.push(ClauseRecord::check("3", bands_ok, "0", Method::ClosedForm, format!("band majorants hold: {bands_ok}")));
    let mut injective = true;
    for (i, f) in probe.iter().enumerate() {
        for (j, g) in probe.iter().enumerate().skip(i + 1) {
            if f != g {
                injective &= xs[i].iter().zip(&xs[j]).all(|(x, y)| x != y);
            }
        }
    }
    parts.push(ClauseRecord::check("3", injective, "0", Method::Exact, format!("injective on probe: {injective}")));
    let eta = Rational::new(1, 100);
    for n in 1..=3 {
        let modulus = ex.continuity_modulus(n, &eta)?;
        for f in probe.iter().filter(|f| !f.is_zero()) {
            // (1−θ)f stays in S and sits within the input radius of f
            let theta = modulus.input_radius.clone() / (Rational::from_i64(2) * f.norm());
            let theta = Rational::min_of(theta, Rational::new(1, 2));
            let g = f.scale(&(one.clone() - theta));
            let gap = ex.explicit_x_n(n, f)?.value.try_sub(&ex.explicit_x_n(n, &g)?.value)?.norm();
            parts.push(ClauseRecord::inequality(
                "3",
                &gap,
                &eta,
                true,
                &tol,
                Method::ClosedForm,
                format!("n = {n}: radius {} keeps images within η = {eta}", modulus.input_radius),
            ));
        }
    }
    let c3 = ClauseRecord::all_of("3", parts, Method::ClosedForm);

    let n0 = ex.params.n0;
    let c4a = margin_record(
        "4a",
        probe.iter().zip(&xs).flat_map(|(f, row)| {
            (1..=n0).map(|n| eps.clone() - f.try_sub(&row[n - 1]).map(|d| d.norm()).unwrap_or_else(|_| eps.clone() * Rational::from_i64(2))).collect::<Vec<_>>()
        }),
        false,
        &tol,
        Method::Exact,
        format!("n ≤ {n0}, ε = {eps}"),
    );

    let c4b = margin_record(
        "4b",
        probe.iter().zip(&xs).flat_map(|(f, row)| {
            let floor = Rational::max_of(f.norm(), delta.clone());
            row.iter()
                .enumerate()
                .map(|(i, x)| ex.params.alpha.power_bound(i + 1) * floor.clone() - x.norm())
                .collect::<Vec<_>>()
        }),
        false,
        &tol,
        Method::Exact,
        format!("n ≤ {GROWTH_POWERS}, δ = {delta}"),
    );

    // (5) linearity of f ↦ a^{−n}f
    let c = Rational::new(-2, 3);
    let mut lin = Rational::zero();
    for n in 1..=3 {
        for (i, f) in probe.iter().enumerate() {
            let scaled = ex.pyramid.apply_inverse_power(n, &f.scale(&c))?;
            lin = Rational::max_of(lin, scaled.try_sub(&xs[i][n - 1].scale(&c))?.norm());
            for (j, g) in probe.iter().enumerate().skip(i + 1) {
                let sum = ex.pyramid.apply_inverse_power(n, &f.add(g))?;
                lin = Rational::max_of(lin, sum.try_sub(&xs[i][n - 1].add(&xs[j][n - 1]))?.norm());
            }
        }
    }
    let c5 = ClauseRecord::check("5", lin.is_zero(), (-lin.clone()).to_string(), Method::Exact, format!("largest linearity gap {lin}"));

    // (6) product identity, convergence of b_k^{-n}f, Neumann factors
    let mut parts = Vec::new();
    for k in 1..=levels {
        let check = ex.pyramid.product_identity(k)?;
        parts.push(ClauseRecord::check("6", check.agree, "0", Method::Exact, format!("k = {k}: definition = product = pyramid")));
    }
    let increasing = ex.nu().windows(2).all(|w| w[0] < w[1]);
    parts.push(ClauseRecord::check("6", increasing, "0", Method::Exact, format!("ν = {:?}", ex.nu())));
    for f in probe {
        for k in 1..levels {
            let (gap, bound) = ex.convergence_gap(1, f, k)?;
            parts.push(ClauseRecord::inequality("6", &gap, &bound, false, &tol, Method::Exact, format!("k = {k}: ‖x₁ − b_k^(-1)f‖")));
        }
    }
    if ex.params.r < Rational::new(1, 2) {
        for i in 1..=levels {
            let nf = ex.pyramid.neumann_factor(i, &Rational::new(1, 1_000_000))?;
            parts.push(ClauseRecord::check("6", nf.holds, nf.gap.to_string(), Method::Exact, format!("Neumann factor {i}")));
        }
    }
    let c6 = ClauseRecord::all_of("6", parts, Method::Exact);

    let c7a = ClauseRecord::not_applicable("7a", "S is unbounded");
    let c7b = ClauseRecord::not_applicable("7b", "S is unbounded");

    // (7c) sup_{|t|>ν} |xₙ(f)(t)| falls below ε uniformly on the image
    let mut parts = Vec::new();
    for n in 1..=3 {
        let residual = |nu: i64| max_or_zero(xs.iter().map(|row| row[n - 1].sup_beyond(nu)));
        let found = (1..=ex.window()).find(|&nu| residual(nu) < eps);
        parts.push(match found {
            Some(nu) => ClauseRecord::inequality("7c", &residual(nu), &eps, true, &tol, Method::Exact, format!("n = {n}: ν = {nu}")),
            None => ClauseRecord::check("7c", false, residual(ex.window()).to_string(), Method::Exact, format!("n = {n}: no index in window")),
        });
    }
    let c7c = ClauseRecord::all_of("7c", parts, Method::Exact);

    let a_pos = a.in_cone() == Some(true);
    let c8 = ClauseRecord::check("8", a_pos, "0", Method::Exact, format!("a ≥ 0: {a_pos}"));
    let positive: Vec<usize> = (0..probe.len()).filter(|&i| probe[i].in_cone() == Some(true)).collect();
    let c9 = if positive.is_empty() {
        ClauseRecord::not_applicable("9", "no positive probe element")
    } else {
        let ok = positive.iter().all(|&i| xs[i].iter().all(|x| x.in_cone() == Some(true)));
        ClauseRecord::check("9", ok, "0", Method::Exact, format!("xₙ(f) ≥ 0 on {} positive probes", positive.len()))
    };
    let c10 = ClauseRecord::check("10", true, "0", Method::Exact, "positive plateau net with M = 1");

    FactorizationCertificate::new(
        "worked-example",
        ArithmeticMode::Exact,
        worked_digest(ex, probe)?,
        vec![c1, c2, c3, c4a, c4b, c5, c6, c7a, c7b, c7c, c8, c9, c10],
    )
}

/// Ten members of `S = {0 ≤ f ≤ f₀ where f₀ ≤ 1}`, used by the acceptance suite.
pub fn worked_probe(ex: &WorkedExample) -> Vec<C0Line<Rational>> {
    let f0 = &ex.envelope;
    let w = ex.window();
    let q = Rational::new;
    vec![
        f0.truncate(w),
        f0.truncate(w).scale(&q(1, 2)),
        f0.truncate(3),
        C0Line::delta(0),
        C0Line::from_pairs([(5, f0.value(5))]),
        C0Line::from_pairs([(-12, f0.value(12) * q(1, 3))]),
        C0Line::constant_on(2, q(1, 1)),
        C0Line::from_pairs([(0, q(1, 2)), (4, f0.value(4) * q(1, 5)), (20, f0.value(20))]),
        f0.truncate(w).map(|t, v| if t % 2 == 0 { v.clone() } else { Rational::zero() }),
        C0Line::zero(),
    ]
}
