//! Functions on the discrete line `ℤ`.
//!
//! [`C0Line`] holds finitely supported functions (the algebra `A`, which is
//! also the module `X` of the left regular representation). Its unital
//! superalgebra is [`EventuallyConstantLine`]: bounded functions that are
//! constant outside a finite set of sites.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::{AlgebraElement, InstanceTag, NormedSpace, UnitalElement};
use crate::error::{Error, Result};
use crate::scalar::{max_or_zero, Scalar};

/// A finitely supported function `ℤ → ℝ`. Zero values are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct C0Line<S> {
    values: BTreeMap<i64, S>,
}

impl<S: Scalar> Default for C0Line<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> C0Line<S> {
    pub fn zero() -> Self {
        C0Line {
            values: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, S)>>(pairs: I) -> Self {
        let mut values = BTreeMap::new();
        for (t, v) in pairs {
            if !v.is_zero() {
                values.insert(t, v);
            }
        }
        C0Line { values }
    }

    /// `c` on every site of `[-radius, radius]`.
    pub fn constant_on(radius: i64, c: S) -> Self {
        Self::from_pairs((-radius..=radius).map(|t| (t, c.clone())))
    }

    /// The indicator of a single site.
    pub fn delta(site: i64) -> Self {
        Self::from_pairs([(site, S::one())])
    }

    /// Builds the function `t ↦ g(t)` on `[-radius, radius]`.
    pub fn tabulate<F: Fn(i64) -> S>(radius: i64, g: F) -> Self {
        Self::from_pairs((-radius..=radius).map(|t| (t, g(t))))
    }

    pub fn get(&self, t: i64) -> S {
        self.values.get(&t).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &S)> {
        self.values.iter().map(|(t, v)| (*t, v))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `max |t|` over the support, `None` for the zero function.
    pub fn support_radius(&self) -> Option<i64> {
        self.values.keys().map(|t| t.abs()).max()
    }

    pub fn map<F: Fn(i64, &S) -> S>(&self, g: F) -> Self {
        Self::from_pairs(self.values.iter().map(|(t, v)| (*t, g(*t, v))))
    }

    /// Restriction to the sites where `keep` holds.
    pub fn restrict<F: Fn(i64) -> bool>(&self, keep: F) -> Self {
        C0Line {
            values: self
                .values
                .iter()
                .filter(|(t, _)| keep(**t))
                .map(|(t, v)| (*t, v.clone()))
                .collect(),
        }
    }

    /// `sup_{|t| > radius} |f(t)|`.
    pub fn sup_beyond(&self, radius: i64) -> S {
        max_or_zero(
            self.values
                .iter()
                .filter(|(t, _)| t.abs() > radius)
                .map(|(_, v)| v.abs()),
        )
    }

    pub fn to_f64(&self) -> C0Line<f64> {
        C0Line::from_pairs(self.values.iter().map(|(t, v)| (*t, v.to_f64())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut values = self.values.clone();
        for (t, v) in &other.values {
            let sum = values.remove(t).map_or_else(|| v.clone(), |w| w + v.clone());
            if !sum.is_zero() {
                values.insert(*t, sum);
            }
        }
        C0Line { values }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (small, large) = if self.values.len() <= other.values.len() {
            (self, other)
        } else {
            (other, self)
        };
        Self::from_pairs(
            small
                .values
                .iter()
                .filter_map(|(t, v)| large.values.get(t).map(|w| (*t, v.clone() * w.clone()))),
        )
    }
}

impl<S: Scalar> NormedSpace for C0Line<S> {
    type Scalar = S;

    fn tag(&self) -> InstanceTag {
        InstanceTag::C0Line
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(self.add(other))
    }

    fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.map(|_, v| v.clone() * c.clone())
    }

    fn norm(&self) -> S {
        max_or_zero(self.values.values().map(Scalar::abs))
    }

    fn zero_like(&self) -> Self {
        Self::zero()
    }

    fn in_cone(&self) -> Option<bool> {
        Some(self.values.values().all(Scalar::is_nonnegative))
    }
}

impl<S: Scalar> AlgebraElement for C0Line<S> {
    fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other))
    }
}

impl<S: Scalar> Serialize for C0Line<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let entries: Vec<Value> = self.values.iter().map(|(t, v)| v.line_entry(*t)).collect();
        entries.serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for C0Line<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<Value>::deserialize(deserializer)?;
        let mut values = BTreeMap::new();
        for e in &entries {
            let (t, v) = S::from_line_entry(e).map_err(D::Error::custom)?;
            if values.contains_key(&t) {
                return Err(D::Error::custom(format!("site {t} listed twice")));
            }
            if !v.is_zero() {
                values.insert(t, v);
            }
        }
        Ok(C0Line { values })
    }
}

/// A bounded function `ℤ → ℝ` equal to `tail` outside a finite set of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct EventuallyConstantLine<S> {
    exceptions: BTreeMap<i64, S>,
    tail: S,
}

impl<S: Scalar> EventuallyConstantLine<S> {
    pub fn new<I: IntoIterator<Item = (i64, S)>>(exceptions: I, tail: S) -> Self {
        let exceptions = exceptions
            .into_iter()
            .filter(|(_, v)| *v != tail)
            .collect();
        EventuallyConstantLine { exceptions, tail }
    }

    pub fn constant(c: S) -> Self {
        EventuallyConstantLine {
            exceptions: BTreeMap::new(),
            tail: c,
        }
    }

    pub fn unit() -> Self {
        Self::constant(S::one())
    }

    /// Embedding of `A` into `B`: tail zero.
    pub fn embed(f: &C0Line<S>) -> Self {
        EventuallyConstantLine {
            exceptions: f.values.clone(),
            tail: S::zero(),
        }
    }

    /// The `A`-part of an element with zero tail.
    pub fn to_c0(&self) -> Option<C0Line<S>> {
        self.tail
            .is_zero()
            .then(|| C0Line::from_pairs(self.exceptions.iter().map(|(t, v)| (*t, v.clone()))))
    }

    pub fn get(&self, t: i64) -> S {
        self.exceptions.get(&t).cloned().unwrap_or_else(|| self.tail.clone())
    }

    pub fn tail(&self) -> &S {
        &self.tail
    }

    pub fn exceptions(&self) -> impl Iterator<Item = (i64, &S)> {
        self.exceptions.iter().map(|(t, v)| (*t, v))
    }

    fn sites(&self, other: &Self) -> Vec<i64> {
        let mut sites: Vec<i64> = self.exceptions.keys().chain(other.exceptions.keys()).copied().collect();
        sites.sort_unstable();
        sites.dedup();
        sites
    }

    pub fn zip_with<F: Fn(S, S) -> S>(&self, other: &Self, g: F) -> Self {
        let sites = self.sites(other);
        let tail = g(self.tail.clone(), other.tail.clone());
        Self::new(
            sites.into_iter().map(|t| (t, g(self.get(t), other.get(t)))),
            tail,
        )
    }

    pub fn map<F: Fn(&S) -> S>(&self, g: F) -> Self {
        Self::new(self.exceptions.iter().map(|(t, v)| (*t, g(v))), g(&self.tail))
    }

    /// Pointwise action on a finitely supported function.
    pub fn act(&self, f: &C0Line<S>) -> C0Line<S> {
        f.map(|t, v| self.get(t) * v.clone())
    }

    /// Every value, exceptions first then the tail.
    pub fn values(&self) -> impl Iterator<Item = &S> {
        self.exceptions.values().chain(std::iter::once(&self.tail))
    }

    pub fn to_f64(&self) -> EventuallyConstantLine<f64> {
        EventuallyConstantLine::new(
            self.exceptions.iter().map(|(t, v)| (*t, v.to_f64())),
            self.tail.to_f64(),
        )
    }
}

/// Pointwise reciprocal in the function superalgebra.
pub fn pointwise_invert<S: Scalar>(x: &EventuallyConstantLine<S>) -> Result<EventuallyConstantLine<S>> {
    if let Some((t, _)) = x.exceptions.iter().find(|(_, v)| v.is_zero()) {
        return Err(Error::ZeroValue { site: t.to_string() });
    }
    if x.tail.is_zero() {
        return Err(Error::ZeroValue {
            site: "tail".into(),
        });
    }
    Ok(x.map(|v| v.recip()))
}

impl<S: Scalar> NormedSpace for EventuallyConstantLine<S> {
    type Scalar = S;

    fn tag(&self) -> InstanceTag {
        InstanceTag::EventuallyConstantLine
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(self.zip_with(other, |a, b| a + b))
    }

    fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    fn norm(&self) -> S {
        max_or_zero(self.values().map(Scalar::abs))
    }

    fn zero_like(&self) -> Self {
        Self::constant(S::zero())
    }

    fn in_cone(&self) -> Option<bool> {
        Some(self.values().all(Scalar::is_nonnegative))
    }
}

impl<S: Scalar> AlgebraElement for EventuallyConstantLine<S> {
    fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self.zip_with(other, |a, b| a * b))
    }
}

impl<S: Scalar> UnitalElement for EventuallyConstantLine<S> {
    fn unit_like(&self) -> Self {
        Self::unit()
    }

    fn try_inverse(&self) -> Result<Self> {
        pointwise_invert(self).map_err(|e| Error::NotInvertible(e.to_string()))
    }
}

impl<S: Scalar> Serialize for EventuallyConstantLine<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        // exceptions may legitimately hold zeros, so serialize the raw map
        let repr = serde_json::json!({
            "exceptions": self.exceptions.iter().map(|(t, v)| v.line_entry(*t)).collect::<Vec<_>>(),
            "tail": serde_json::to_value(&self.tail).map_err(serde::ser::Error::custom)?,
        });
        repr.serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for EventuallyConstantLine<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw<S> {
            exceptions: Vec<Value>,
            tail: S,
        }
        let raw = Raw::<S>::deserialize(deserializer)?;
        let mut pairs = Vec::new();
        for e in &raw.exceptions {
            pairs.push(S::from_line_entry(e).map_err(D::Error::custom)?);
        }
        Ok(Self::new(pairs, raw.tail))
    }
}
