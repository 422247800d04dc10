use serde::{Deserialize, Serialize};

use crate::algebra::{geometric_inverse, AlgebraElement, NormedSpace, UnitalElement};
use crate::error::{Error, Result};
use crate::instances::{C0Line, Envelope, EventuallyConstantLine};
use crate::scalar::{max_or_zero, Rational, Scalar};
use crate::worked::schedule::{build_thresholds, choose_nu, ThresholdSchedules, WorkedParams};

/// `a(t) = 1` for `|t| ≤ ν₁` and `a(t) = (1−r)^i` for `ν_i < |t| ≤ ν_{i+1}`,
/// stored on the window `[−T, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepPyramid {
    pub nu: Vec<usize>,
    pub r: Rational,
    pub window: i64,
}

/// Builds the pyramid; the window defaults to `ν_I + 1`.
pub fn build_pyramid(nu: &[usize], r: &Rational, window: Option<i64>) -> Result<StepPyramid> {
    if !(r.is_positive() && *r < Rational::one()) {
        return Err(Error::ParameterOutOfRange(format!("r = {r} must lie in (0, 1)")));
    }
    if nu.is_empty() || nu[0] == 0 || nu.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ParameterOutOfRange(format!(
            "ν must be a nonempty strictly increasing sequence of positive integers, got {nu:?}"
        )));
    }
    let last = *nu.last().unwrap() as i64;
    let window = window.unwrap_or(last + 1);
    if window <= last {
        return Err(Error::ParameterOutOfRange(format!("window {window} must exceed ν_I = {last}")));
    }
    Ok(StepPyramid {
        nu: nu.to_vec(),
        r: r.clone(),
        window,
    })
}

impl StepPyramid {
    pub fn levels(&self) -> usize {
        self.nu.len()
    }

    fn one_minus_r(&self) -> Rational {
        Rational::one() - self.r.clone()
    }

    fn check_site(&self, t: i64) -> Result<()> {
        if t.abs() > self.window {
            return Err(Error::OutsideWindow {
                site: t,
                window: self.window,
            });
        }
        Ok(())
    }

    /// Band `i` of a site: `0` on `|t| ≤ ν₁`, else the `i` with `ν_i < |t| ≤ ν_{i+1}`.
    pub fn band(&self, t: i64) -> Result<usize> {
        self.check_site(t)?;
        let a = t.unsigned_abs() as usize;
        Ok(self.nu.iter().take_while(|&&v| v < a).count())
    }

    pub fn value(&self, t: i64) -> Result<Rational> {
        Ok(self.one_minus_r().powi(self.band(t)? as i64))
    }

    /// `a^{−n}(t)`.
    pub fn inverse_power(&self, n: usize, t: i64) -> Result<Rational> {
        Ok(self.one_minus_r().powi(-((self.band(t)? * n) as i64)))
    }

    /// `a` on the window, as a finitely supported function.
    pub fn to_line(&self) -> C0Line<Rational> {
        C0Line::tabulate(self.window, |t| self.value(t).expect("site inside window"))
    }

    /// `sup |a|`, which is `a(0) = 1`.
    pub fn norm(&self) -> Rational {
        self.to_line().norm()
    }

    /// `a^{−n}f`, defined for `f` supported inside the window.
    pub fn apply_inverse_power(&self, n: usize, f: &C0Line<Rational>) -> Result<C0Line<Rational>> {
        for t in f.support() {
            self.check_site(t)?;
        }
        Ok(f.map(|t, v| v.clone() * self.inverse_power(n, t).expect("checked above")))
    }

    /// `aⁿf` for `f` supported inside the window.
    pub fn apply_power(&self, n: usize, f: &C0Line<Rational>) -> Result<C0Line<Rational>> {
        for t in f.support() {
            self.check_site(t)?;
        }
        Ok(f.map(|t, v| v.clone() * self.value(t).expect("checked above").powi(n as i64)))
    }

    fn indicator(&self, i: usize) -> EventuallyConstantLine<Rational> {
        EventuallyConstantLine::embed(&C0Line::constant_on(self.nu[i] as i64, Rational::one()))
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.levels() {
            return Err(Error::ParameterOutOfRange(format!(
                "k = {k} must lie in 1..={}",
                self.levels()
            )));
        }
        Ok(())
    }

    /// `b_k = (1−r)^k·1 + Σ_{i≤k} r(1−r)^{i−1} e_{ν_i}`.
    pub fn b_k_definition(&self, k: usize) -> Result<EventuallyConstantLine<Rational>> {
        self.check_k(k)?;
        let om = self.one_minus_r();
        let mut acc = EventuallyConstantLine::constant(om.powi(k as i64));
        for i in 0..k {
            let c = self.r.clone() * om.powi(i as i64);
            acc = acc.try_add(&self.indicator(i).scale(&c))?;
        }
        Ok(acc)
    }

    /// `b_k = Π_{i≤k} (1 − r + r·e_{ν_i})`.
    pub fn b_k_product(&self, k: usize) -> Result<EventuallyConstantLine<Rational>> {
        self.check_k(k)?;
        let om = EventuallyConstantLine::constant(self.one_minus_r());
        let mut acc = EventuallyConstantLine::unit();
        for i in 0..k {
            acc = acc.try_mul(&om.try_add(&self.indicator(i).scale(&self.r))?)?;
        }
        Ok(acc)
    }

    /// `b_k` read off the pyramid: `a` on `|t| ≤ ν_k`, `(1−r)^k` beyond.
    pub fn b_k_from_pyramid(&self, k: usize) -> Result<EventuallyConstantLine<Rational>> {
        self.check_k(k)?;
        let radius = self.nu[k - 1] as i64;
        let inner = (-radius..=radius).map(|t| (t, self.value(t).expect("inside window")));
        Ok(EventuallyConstantLine::new(inner, self.one_minus_r().powi(k as i64)))
    }

    /// Compares the three descriptions of `b_k`.
    pub fn product_identity(&self, k: usize) -> Result<ProductCheck> {
        let definition = self.b_k_definition(k)?;
        let product = self.b_k_product(k)?;
        let pyramid = self.b_k_from_pyramid(k)?;
        let agree = definition == product && product == pyramid;
        Ok(ProductCheck {
            k,
            definition,
            product,
            pyramid,
            agree,
        })
    }

    /// Truncated Neumann series for `(1 − r + r·e_{ν_i})^{-1}` against its
    /// pointwise inverse; needs `r < 1/2`.
    pub fn neumann_factor(&self, i: usize, tau: &Rational) -> Result<NeumannFactor> {
        if i == 0 || i > self.levels() {
            return Err(Error::ParameterOutOfRange(format!("factor index {i} out of range")));
        }
        let e = self.indicator(i - 1);
        let (series, trunc) = geometric_inverse(&e, &self.r, &Rational::one(), tau)?;
        let om = EventuallyConstantLine::constant(self.one_minus_r());
        let direct = om.try_add(&e.scale(&self.r))?.try_inverse()?;
        let gap = series.try_sub(&direct)?.norm();
        Ok(NeumannFactor {
            factor: i,
            ratio: self.r.clone() / self.one_minus_r(),
            terms: trunc.terms_used,
            tail_bound: trunc.tail_bound.clone(),
            gap: gap.clone(),
            holds: gap <= trunc.tail_bound,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductCheck {
    pub k: usize,
    pub definition: EventuallyConstantLine<Rational>,
    pub product: EventuallyConstantLine<Rational>,
    pub pyramid: EventuallyConstantLine<Rational>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannFactor {
    pub factor: usize,
    /// `r/(1−r)`.
    pub ratio: Rational,
    pub terms: usize,
    pub tail_bound: Rational,
    pub gap: Rational,
    pub holds: bool,
}

/// `sup |xₙ(f)|` on one band against the vanishing majorant `(1−r)^{−in}·d(i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandBound {
    pub band: usize,
    pub sup: Rational,
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitXn {
    pub n: usize,
    pub value: C0Line<Rational>,
    pub bands: Vec<BandBound>,
}

/// Uniform-continuity data for `xₙ` at tolerance `η`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    pub n: usize,
    pub eta: Rational,
    pub i0: usize,
    /// `max_{|t| ≤ ν_{i₀}} a^{−n}(t) = (1−r)^{−(i₀−1)n}`.
    pub amplification: Rational,
    /// Pairs closer than this map to images closer than `η`.
    pub input_radius: Rational,
}

/// The full closed-form construction for one envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkedExample {
    pub params: WorkedParams,
    pub envelope: Envelope<Rational>,
    pub schedules: ThresholdSchedules,
    pub pyramid: StepPyramid,
}

impl WorkedExample {
    pub fn build(envelope: Envelope<Rational>, params: WorkedParams) -> Result<Self> {
        let schedules = build_thresholds(&envelope, &params)?;
        let nu = choose_nu(&schedules, &envelope, &params.delta)?;
        let pyramid = build_pyramid(&nu, &params.r, None)?;
        Ok(WorkedExample {
            params,
            envelope,
            schedules,
            pyramid,
        })
    }

    pub fn default_example() -> Result<Self> {
        Self::build(Envelope::default_envelope(), WorkedParams::default())
    }

    pub fn nu(&self) -> &[usize] {
        &self.pyramid.nu
    }

    pub fn window(&self) -> i64 {
        self.pyramid.window
    }

    /// `xₙ(f) = a^{−n}f` with the band-by-band membership certificate.
    pub fn explicit_x_n(&self, n: usize, f: &C0Line<Rational>) -> Result<ExplicitXn> {
        if n == 0 {
            return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
        }
        self.envelope.check_member(f)?;
        let value = self.pyramid.apply_inverse_power(n, f)?;
        let growth = self.params.growth();
        let nu = &self.pyramid.nu;
        let bands = (1..=nu.len())
            .map(|i| {
                let lo = nu[i - 1] as i64;
                let hi = nu.get(i).map_or(self.pyramid.window, |&v| v as i64);
                let sup = max_or_zero(value.iter().filter(|(t, _)| t.abs() > lo && t.abs() <= hi).map(|(_, v)| v.abs()));
                let bound = growth.powi((i * n) as i64) * self.schedules.decay.upper(i);
                BandBound {
                    band: i,
                    holds: sup <= bound,
                    sup,
                    bound,
                }
            })
            .collect();
        Ok(ExplicitXn { n, value, bands })
    }

    /// `(‖xₙ(f) − b_k^{−n}f‖, 2·sup_{|t|>ν_{k+1}} a^{−n}(t)f(t))` for `k < I`.
    pub fn convergence_gap(&self, n: usize, f: &C0Line<Rational>, k: usize) -> Result<(Rational, Rational)> {
        if k == 0 || k >= self.pyramid.levels() {
            return Err(Error::ParameterOutOfRange(format!(
                "k = {k} must lie in 1..{}",
                self.pyramid.levels()
            )));
        }
        let x = self.explicit_x_n(n, f)?.value;
        let b_inv = self.pyramid.b_k_definition(k)?.try_inverse()?;
        let mut approx = f.clone();
        for _ in 0..n {
            approx = b_inv.act(&approx);
        }
        let gap = x.try_sub(&approx)?.norm();
        let edge = self.pyramid.nu[k] as i64;
        let bound = Rational::from_i64(2) * x.sup_beyond(edge);
        Ok((gap, bound))
    }

    /// The three-region continuity estimate for `xₙ`.
    pub fn continuity_modulus(&self, n: usize, eta: &Rational) -> Result<Modulus> {
        if !eta.is_positive() || n == 0 {
            return Err(Error::ParameterOutOfRange("need n ≥ 1 and η > 0".into()));
        }
        let q = self.params.growth().powi(n as i64);
        let i0 = self.schedules.decay.vanishing_index(&q, &Rational::from_i64(2), eta)?;
        let amplification = q.powi(i0 as i64 - 1);
        Ok(Modulus {
            n,
            eta: eta.clone(),
            i0,
            input_radius: eta.clone() / amplification.clone(),
            amplification,
        })
    }
}
