//! Clause-by-clause certificates, witnesses and cross checks.

pub mod certificate;
pub mod engine_cert;
pub mod lift;
pub mod witnesses;
pub mod worked_cert;

pub use certificate::{
    digest_of, ClauseRecord, ClauseStatus, ExhaustedRecord, FactorizationCertificate, Method, CLAUSE_IDS,
};
pub use engine_cert::{certify_engine, engine_digest, CLOSED_FORM_POWERS, MAX_SAMPLED_POWER};
pub use lift::{lift_demo, LiftCase, LiftReport};
pub use witnesses::{
    cone_witnesses, deficient_net_report, unbounded_xn_witness, ConeWitnesses, DeficientReport, DeficientRow,
    RandomInverse, RatioRow, UnboundedWitness, UnitizationWitness, WITNESS_SEED,
};
pub use worked_cert::{certify_worked, certify_worked_with_factor, worked_digest, worked_probe};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NormedSpace;
    use crate::engine::{advance_chain_forced, finish_chain, run_factorization, ChainState, FactorizationConfig};
    use crate::instances::{ApproximateIdentity, C0Line, ConstantNet, Envelope, LineNet, Matrix, Vector};
    use crate::representations::{LineRep, MatrixRep, ProbeSet, Representation};
    use crate::scalar::{Rational, Scalar};
    use crate::worked::WorkedExample;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn statuses(cert: &FactorizationCertificate) -> Vec<(String, ClauseStatus)> {
        cert.clauses.iter().map(|c| (c.id.clone(), c.status)).collect()
    }

    #[test]
    fn worked_certificate_passes_except_boundedness() {
        let ex = WorkedExample::default_example().unwrap();
        let cert = certify_worked(&ex, &worked_probe(&ex)).unwrap();
        for c in &cert.clauses {
            let expected = if c.id == "7a" || c.id == "7b" {
                ClauseStatus::NotApplicable
            } else {
                ClauseStatus::Pass
            };
            assert_eq!(c.status, expected, "{c:?}");
        }
        assert!(cert.all_pass());
    }

    #[test]
    fn sabotaged_factor_fails_identity() {
        let ex = WorkedExample::default_example().unwrap();
        let probe = worked_probe(&ex);
        let a = ex.pyramid.to_line();
        let site = 5;
        let bad = C0Line::from_pairs(a.iter().map(|(t, v)| (t, if t == site { v.clone() + q(1, 8) } else { v.clone() })));
        let cert = certify_worked_with_factor(&ex, &probe, &bad).unwrap();
        assert_eq!(cert.clause("1").unwrap().status, ClauseStatus::Fail);
        assert!(!cert.all_pass());
    }

    #[test]
    fn line_engine_certificate_passes() {
        let f0 = Envelope::<Rational>::default_envelope();
        let probe = ProbeSet::bounded(vec![f0.truncate(40), f0.truncate(6).scale(&q(-1, 2)), C0Line::constant_on(2, q(1, 1))]).unwrap();
        let rep = LineRep::new();
        let net = LineNet::plateau();
        let res = run_factorization(&rep, &net, &probe, &FactorizationConfig::default()).unwrap();
        let cert = certify_engine("line", &rep, &net, &probe, &res).unwrap();
        assert!(cert.all_pass(), "{cert:#?}");
        assert_eq!(cert.clause("8").unwrap().status, ClauseStatus::Pass);
        assert_eq!(cert.clause("9").unwrap().status, ClauseStatus::NotApplicable);
        assert_eq!(cert.clause("7a").unwrap().status, ClauseStatus::Pass);
    }

    #[test]
    fn degenerate_matrix_certificate() {
        let rep = MatrixRep::<Rational>::new(3);
        let net = ConstantNet {
            element: Matrix::identity(3),
            bound: Rational::one(),
            commutative: true,
            positive: true,
            largest: true,
        };
        let probe = ProbeSet::bounded(vec![
            Vector::new(vec![q(1, 2), q(-3, 1), q(7, 5)]),
            Vector::new(vec![q(0, 1), q(1, 1), q(0, 1)]),
        ])
        .unwrap();
        let res = run_factorization(&rep, &net, &probe, &FactorizationConfig::default()).unwrap();
        let cert = certify_engine("degenerate", &rep, &net, &probe, &res).unwrap();
        assert!(cert.all_pass(), "{cert:#?}");
        assert_eq!(cert.clause("1").unwrap().method, Method::ClosedForm);
        for id in ["8", "9", "10"] {
            assert_eq!(cert.clause(id).unwrap().status, ClauseStatus::NotApplicable);
        }
    }

    #[test]
    fn forced_indices_reproduce_worked_chain() {
        let ex = WorkedExample::default_example().unwrap();
        let rep = LineRep::<Rational>::new();
        let net = LineNet::<Rational>::plateau();
        let probe = ProbeSet::bounded(vec![ex.envelope.truncate(40)]).unwrap();
        let cfg = FactorizationConfig::<Rational>::default();
        let v = cfg.validate(&net.bound()).unwrap();
        let mut chain = ChainState::initial(rep.unit());
        for (k, &nu) in [3usize, 9, 19].iter().enumerate() {
            chain = advance_chain_forced(&rep, &net, &probe, &chain, nu, 3usize.pow(k as u32 + 1), &v).unwrap();
            assert_eq!(chain.b, ex.pyramid.b_k_definition(k + 1).unwrap());
        }
        let res = finish_chain(&rep, &net, &probe, &cfg, chain).unwrap();
        assert!(res.chain.ledger.iter().all(|r| r.forced));
    }

    #[test]
    fn approximate_mode_is_sound_under_tighter_tau() {
        let f0 = Envelope::<Rational>::default_envelope().map_scalar(|v| v.to_f64());
        let probe = ProbeSet::bounded(vec![f0.truncate(30), C0Line::constant_on(2, 1.0)]).unwrap();
        let rep = LineRep::<f64>::new();
        let net = LineNet::<f64>::plateau();
        let cfg = FactorizationConfig::<f64>::default();
        let res = run_factorization(&rep, &net, &probe, &cfg).unwrap();
        let cert = certify_engine("approx", &rep, &net, &probe, &res).unwrap();
        assert!(cert.all_pass(), "{cert:#?}");
        let tight = FactorizationConfig { tau: cfg.tau / 10.0, ..cfg };
        let res2 = run_factorization(&rep, &net, &probe, &tight).unwrap();
        let cert2 = certify_engine("approx", &rep, &net, &probe, &res2).unwrap();
        assert_eq!(statuses(&cert), statuses(&cert2));
    }
}
