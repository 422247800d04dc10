//! Even envelopes `f₀ ≥ 0` on `ℤ` and the set `S` they define.
//!
//! `S = { f ≥ 0 : f(t) ≤ f₀(t) wherever f₀(t) ≤ 1 }`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::line::C0Line;
use crate::scalar::{max_or_zero, Scalar};

/// Law for `f₀(t)` beyond the explicit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case", bound = "S: Scalar")]
pub enum EnvelopeTail<S> {
    Zero,
    /// `f₀(t) = scale · ratio^{|t|}` with `0 < ratio < 1`.
    Geometric { scale: S, ratio: S },
}

/// `f₀(t) = table[|t|]` for `|t| ≤ table.len() − 1`, the tail law beyond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Envelope<S> {
    table: Vec<S>,
    tail: EnvelopeTail<S>,
}

/// Largest number of sites a threshold scan will inspect.
pub const SCAN_CAP: usize = 1 << 20;

impl<S: Scalar> Envelope<S> {
    pub fn new(table: Vec<S>, tail: EnvelopeTail<S>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Config("envelope table must be nonempty".into()));
        }
        if table.iter().any(|v| !v.is_nonnegative()) {
            return Err(Error::Config("envelope values must be nonnegative".into()));
        }
        if let EnvelopeTail::Geometric { scale, ratio } = &tail {
            if !(scale.is_positive() && ratio.is_positive() && *ratio < S::one()) {
                return Err(Error::Config(format!(
                    "geometric tail needs scale > 0 and 0 < ratio < 1, got scale {scale}, ratio {ratio}"
                )));
            }
        }
        Ok(Envelope { table, tail })
    }

    /// `2` on `|t| ≤ 2`, `2^{−|t|}` beyond.
    pub fn default_envelope() -> Self {
        Envelope {
            table: vec![S::from_i64(2); 3],
            tail: EnvelopeTail::Geometric {
                scale: S::one(),
                ratio: S::ratio(1, 2),
            },
        }
    }

    /// Radius of the explicit table.
    pub fn table_radius(&self) -> i64 {
        self.table.len() as i64 - 1
    }

    pub fn tail(&self) -> &EnvelopeTail<S> {
        &self.tail
    }

    pub fn value(&self, t: i64) -> S {
        let a = t.unsigned_abs() as usize;
        if a < self.table.len() {
            return self.table[a].clone();
        }
        match &self.tail {
            EnvelopeTail::Zero => S::zero(),
            EnvelopeTail::Geometric { scale, ratio } => scale.clone() * ratio.powi(a as i64),
        }
    }

    /// `sup_{|t| ≥ n} f₀(t)`; the tail law is nonincreasing in `|t|`.
    pub fn sup_from(&self, n: usize) -> S {
        let table_part = max_or_zero(self.table.iter().skip(n).cloned());
        let first_tail = n.max(self.table.len()) as i64;
        S::max_of(table_part, self.value(first_tail))
    }

    pub fn norm(&self) -> S {
        self.sup_from(0)
    }

    /// Least `N ≥ min` with `decide(sup_{|t|≥N} f₀)`; `decide` must be
    /// monotone (once true, true for every smaller argument).
    pub fn least_radius_where<F: Fn(&S) -> bool>(&self, min: usize, decide: F) -> Result<usize> {
        (min..min + SCAN_CAP)
            .find(|&n| decide(&self.sup_from(n)))
            .ok_or_else(|| {
                Error::ScheduleOverflow(format!(
                    "no radius below {} satisfies the envelope bound",
                    min + SCAN_CAP
                ))
            })
    }

    /// Least `N ≥ 1` with `f₀(t) ≤ bound` for all `|t| ≥ N`.
    pub fn least_radius_below(&self, bound: &S) -> Result<usize> {
        self.least_radius_where(1, |v| v <= bound)
    }

    /// Checks membership in `S`, reporting the first violating site.
    pub fn check_member(&self, f: &C0Line<S>) -> Result<()> {
        for (t, v) in f.iter() {
            if !v.is_nonnegative() {
                return Err(Error::NotInS { site: t });
            }
            let cap = self.value(t);
            if cap <= S::one() && *v > cap {
                return Err(Error::NotInS { site: t });
            }
        }
        Ok(())
    }

    pub fn contains(&self, f: &C0Line<S>) -> bool {
        self.check_member(f).is_ok()
    }

    /// `f₀` restricted to `[-radius, radius]`.
    pub fn truncate(&self, radius: i64) -> C0Line<S> {
        C0Line::tabulate(radius, |t| self.value(t))
    }

    /// Largest `|t|` with `f₀(t) > 1`, `None` when `f₀ ≤ 1` everywhere.
    pub fn core_radius(&self) -> Option<i64> {
        let beyond = self.table.len();
        let in_table = (0..beyond).rev().find(|&k| self.table[k] > S::one());
        let tail_exceeds = |k: usize| self.value(k as i64) > S::one();
        if tail_exceeds(beyond) {
            // geometric tail above one: scan until it drops
            let last = (beyond..beyond + SCAN_CAP).take_while(|&k| tail_exceeds(k)).last();
            return last.map(|k| k as i64);
        }
        in_table.map(|k| k as i64)
    }

    /// True when `f₀` vanishes at some site.
    pub fn has_zeros(&self) -> bool {
        self.table.iter().any(Scalar::is_zero) || matches!(self.tail, EnvelopeTail::Zero)
    }

    pub fn map_scalar<T: Scalar>(&self, g: impl Fn(&S) -> T) -> Envelope<T> {
        Envelope {
            table: self.table.iter().map(&g).collect(),
            tail: match &self.tail {
                EnvelopeTail::Zero => EnvelopeTail::Zero,
                EnvelopeTail::Geometric { scale, ratio } => EnvelopeTail::Geometric {
                    scale: g(scale),
                    ratio: g(ratio),
                },
            },
        }
    }
}
