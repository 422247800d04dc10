use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::{ArithmeticMode, Scalar, Tolerance};

/// Clause identifiers in certificate order.
pub const CLAUSE_IDS: [&str; 13] = ["1", "2", "3", "4a", "4b", "5", "6", "7a", "7b", "7c", "8", "9", "10"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Tolerance,
    ClosedForm,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseRecord {
    pub id: String,
    pub status: ClauseStatus,
    /// `bound − observed` for inequality clauses; nonnegative on a pass.
    pub margin: String,
    pub method: Method,
    pub note: String,
}

impl ClauseRecord {
    pub fn not_applicable(id: &str, note: impl Into<String>) -> Self {
        ClauseRecord {
            id: id.into(),
            status: ClauseStatus::NotApplicable,
            margin: "n/a".into(),
            method: Method::Exact,
            note: note.into(),
        }
    }

    /// Records `observed ≤ bound` (or `<` when `strict`) under the mode's slack.
    pub fn inequality<S: Scalar>(
        id: &str,
        observed: &S,
        bound: &S,
        strict: bool,
        tol: &Tolerance<S>,
        method: Method,
        note: impl Into<String>,
    ) -> Self {
        let margin = bound.clone() - observed.clone();
        let ok = if strict {
            margin.clone() + tol.slack() > S::zero()
        } else {
            margin.clone() + tol.slack() >= S::zero()
        };
        ClauseRecord {
            id: id.into(),
            status: if ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
            margin: margin.to_string(),
            method,
            note: note.into(),
        }
    }

    /// Records a yes/no check with a free-form margin.
    pub fn check(id: &str, ok: bool, margin: impl Into<String>, method: Method, note: impl Into<String>) -> Self {
        ClauseRecord {
            id: id.into(),
            status: if ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
            margin: margin.into(),
            method,
            note: note.into(),
        }
    }

    /// Combines several sub-checks of one clause; the clause fails if any part fails.
    pub fn all_of(id: &str, parts: Vec<ClauseRecord>, method: Method) -> Self {
        let failed: Vec<&ClauseRecord> = parts.iter().filter(|p| p.status == ClauseStatus::Fail).collect();
        let mut notes: Vec<&str> = Vec::new();
        for p in &parts {
            if !notes.contains(&p.note.as_str()) {
                notes.push(&p.note);
            }
        }
        let note = notes.join("; ");
        let margin = match failed.first() {
            Some(f) => f.margin.clone(),
            None => parts.first().map_or_else(|| "0".into(), |p| p.margin.clone()),
        };
        ClauseRecord {
            id: id.into(),
            status: if failed.is_empty() { ClauseStatus::Pass } else { ClauseStatus::Fail },
            margin,
            method,
            note,
        }
    }
}

/// Why a construction stopped before a certificate could be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustedRecord {
    pub stage: String,
    pub cap: usize,
    pub best_margin: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCertificate {
    pub pipeline: String,
    pub mode: ArithmeticMode,
    /// SHA-256 of the canonical JSON of config, instance tags and probe.
    pub digest: String,
    pub clauses: Vec<ClauseRecord>,
    #[serde(default)]
    pub exhausted: Option<ExhaustedRecord>,
}

impl FactorizationCertificate {
    /// Assembles a certificate, enforcing one record per clause in order.
    pub fn new(pipeline: &str, mode: ArithmeticMode, digest: String, clauses: Vec<ClauseRecord>) -> Result<Self> {
        let ids: Vec<&str> = clauses.iter().map(|c| c.id.as_str()).collect();
        if ids != CLAUSE_IDS {
            return Err(Error::PreconditionFailed(format!("certificate clauses {ids:?} are incomplete or out of order")));
        }
        Ok(FactorizationCertificate {
            pipeline: pipeline.into(),
            mode,
            digest,
            clauses,
            exhausted: None,
        })
    }

    /// A certificate for a run whose chain search hit its cap.
    pub fn from_exhausted(pipeline: &str, mode: ArithmeticMode, digest: String, err: &Error) -> Option<Self> {
        let Error::Exhausted { stage, cap, best_margin } = err else {
            return None;
        };
        let clauses = CLAUSE_IDS
            .iter()
            .map(|id| ClauseRecord {
                id: (*id).into(),
                status: ClauseStatus::Fail,
                margin: "n/a".into(),
                method: Method::Exact,
                note: format!("construction stopped at {stage}"),
            })
            .collect();
        Some(FactorizationCertificate {
            pipeline: pipeline.into(),
            mode,
            digest,
            clauses,
            exhausted: Some(ExhaustedRecord {
                stage: stage.clone(),
                cap: *cap,
                best_margin: best_margin.clone(),
            }),
        })
    }

    pub fn clause(&self, id: &str) -> Option<&ClauseRecord> {
        self.clauses.iter().find(|c| c.id == id)
    }

    pub fn all_pass(&self) -> bool {
        self.exhausted.is_none() && self.clauses.iter().all(|c| c.status != ClauseStatus::Fail)
    }

    /// Flat `clause,status,margin,method` table.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["clause", "status", "margin", "method", "note"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for c in &self.clauses {
            let status = serde_json::to_value(c.status)?;
            let method = serde_json::to_value(c.method)?;
            w.write_record([
                c.id.as_str(),
                status.as_str().unwrap_or_default(),
                c.margin.as_str(),
                method.as_str().unwrap_or_default(),
                c.note.as_str(),
            ])
            .map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// SHA-256 over the canonical JSON of a value, hex encoded.
pub fn digest_of<T: Serialize>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn inequality_records_margin() {
        let tol = Tolerance::new(Rational::new(1, 1000));
        let r = ClauseRecord::inequality("2", &Rational::new(1, 2), &Rational::one(), false, &tol, Method::Exact, "");
        assert_eq!(r.status, ClauseStatus::Pass);
        assert_eq!(r.margin, "1/2");
        let r = ClauseRecord::inequality("2", &Rational::one(), &Rational::one(), true, &tol, Method::Exact, "");
        assert_eq!(r.status, ClauseStatus::Fail);
        let approx = Tolerance::new(1e-9);
        let r = ClauseRecord::inequality("2", &(1.0 + 1e-12), &1.0, false, &approx, Method::Tolerance, "");
        assert_eq!(r.status, ClauseStatus::Pass);
    }

    #[test]
    fn certificate_requires_all_clauses() {
        let records: Vec<ClauseRecord> = CLAUSE_IDS.iter().map(|id| ClauseRecord::not_applicable(id, "")).collect();
        let cert = FactorizationCertificate::new("test", ArithmeticMode::Exact, "00".into(), records.clone()).unwrap();
        assert!(cert.all_pass());
        assert!(FactorizationCertificate::new("test", ArithmeticMode::Exact, "00".into(), records[1..].to_vec()).is_err());
        let csv = cert.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 14);
        assert!(csv.lines().nth(1).unwrap().starts_with("1,not-applicable,n/a,exact"));
    }

    #[test]
    fn exhausted_certificate_fails() {
        let err = Error::Exhausted {
            stage: "chain step 1".into(),
            cap: 1,
            best_margin: "1/2".into(),
        };
        let cert = FactorizationCertificate::from_exhausted("factorize", ArithmeticMode::Exact, "ab".into(), &err).unwrap();
        assert!(!cert.all_pass());
        assert_eq!(cert.clauses.len(), 13);
        assert_eq!(cert.exhausted.as_ref().unwrap().cap, 1);
    }

    #[test]
    fn digest_is_stable() {
        let a = digest_of(&serde_json::json!({"r": "1/4"})).unwrap();
        assert_eq!(a, digest_of(&serde_json::json!({"r": "1/4"})).unwrap());
        assert_ne!(a, digest_of(&serde_json::json!({"r": "1/5"})).unwrap());
        assert_eq!(a.len(), 64);
    }
}
