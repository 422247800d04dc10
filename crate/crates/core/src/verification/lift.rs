use serde::{Deserialize, Serialize};

use crate::algebra::NormedSpace;
use crate::engine::{run_factorization, FactorizationConfig};
use crate::error::Result;
use crate::instances::{C0Line, Envelope, LineNet};
use crate::representations::lifted::limit_is_zero;
use crate::representations::{lift, LineRep, LiftedValue, Omega, ProbeSet};
use crate::scalar::Rational;
use crate::verification::certificate::FactorizationCertificate;
use crate::verification::engine_cert::certify_engine;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftCase {
    pub omega: Omega,
    /// Each term of the lifted `xₙ(s)` equals the base approximant of that term.
    pub termwise: bool,
    /// The factor found on the lifted module equals the one found on the union of all terms.
    pub same_factor: bool,
    /// `Some` for sequences: zero limits stay zero.
    pub zero_limit_preserved: Option<bool>,
    pub certificate: FactorizationCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    pub finite: LiftCase,
    pub sequence: LiftCase,
}

impl LiftReport {
    pub fn holds(&self) -> bool {
        [&self.finite, &self.sequence]
            .iter()
            .all(|c| c.termwise && c.same_factor && c.zero_limit_preserved != Some(false) && c.certificate.all_pass())
    }
}

fn run_case(
    omega: Omega,
    values: Vec<LiftedValue<C0Line<Rational>>>,
    config: &FactorizationConfig<Rational>,
) -> Result<LiftCase> {
    let base = LineRep::<Rational>::new();
    let rep = lift(base.clone(), omega);
    let net = LineNet::<Rational>::plateau();
    let probe = ProbeSet::bounded(values)?;
    let result = run_factorization(&rep, &net, &probe, config)?;

    // the sup norm over Ω makes the lifted search see exactly the union of the terms
    let union: Vec<C0Line<Rational>> = probe.elements().iter().flat_map(|v| v.terms().into_iter().cloned()).collect();
    let base_probe = ProbeSet::bounded(union)?;
    let base_result = run_factorization(&base, &net, &base_probe, config)?;
    let same_factor = base_result.a == result.a && base_result.chain.indices == result.chain.indices;

    let powers = result.j_schedule.first().copied().unwrap_or(1);
    let mut termwise = true;
    let mut zero_limit_preserved = matches!(omega, Omega::Sequence(_)).then_some(true);
    for s in probe.elements() {
        for n in 1..=powers {
            let x = result.x_n(&rep, n, s)?.value;
            for (xt, st) in x.terms().into_iter().zip(s.terms()) {
                termwise &= *xt == base_result.x_n(&base, n, st)?.value;
            }
            if let Some(flag) = zero_limit_preserved.as_mut() {
                if limit_is_zero(s) {
                    *flag &= limit_is_zero(&x);
                }
            }
        }
    }
    let certificate = certify_engine(&format!("lift-{omega:?}").to_lowercase(), &rep, &net, &probe, &result)?;
    Ok(LiftCase {
        omega,
        termwise,
        same_factor,
        zero_limit_preserved,
        certificate,
    })
}

/// Factorizes a three-map family over `Ω = {1, 2, 3}` and a sequence with
/// five explicit terms converging to zero.
pub fn lift_demo(config: &FactorizationConfig<Rational>) -> Result<LiftReport> {
    let f0 = Envelope::<Rational>::default_envelope();
    let q = Rational::new;
    let family = vec![
        LiftedValue::Finite(vec![f0.truncate(30), f0.truncate(30).scale(&q(1, 2)), C0Line::constant_on(2, q(1, 1))]),
        LiftedValue::Finite(vec![C0Line::delta(1), C0Line::zero(), f0.truncate(8).scale(&q(-1, 3))]),
    ];
    let sequence = vec![
        LiftedValue::Sequence {
            prefix: (1..=5).map(|k| f0.truncate(20).scale(&q(1, k))).collect(),
            limit: C0Line::zero(),
        },
        LiftedValue::Sequence {
            prefix: (1..=5).map(|k| C0Line::constant_on(k, q(1, k))).collect(),
            limit: C0Line::zero(),
        },
    ];
    Ok(LiftReport {
        finite: run_case(Omega::Finite(3), family, config)?,
        sequence: run_case(Omega::Sequence(5), sequence, config)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifted_factorizations_are_termwise() {
        let report = lift_demo(&FactorizationConfig::default()).unwrap();
        for case in [&report.finite, &report.sequence] {
            assert!(case.termwise);
            assert!(case.same_factor);
            assert!(case.certificate.all_pass(), "{:#?}", case.certificate);
        }
        assert_eq!(report.sequence.zero_limit_preserved, Some(true));
        assert_eq!(report.finite.zero_limit_preserved, None);
        assert!(report.holds());
    }
}
