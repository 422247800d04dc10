use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, NormedSpace, UnitalElement};
use crate::error::{Error, Result};
use crate::instances::{unitization_inverse, C0Line, EventuallyConstantLine, LineNet, UnitizationPair};
use crate::representations::{uniform_residual, uniformity_threshold, LineRep, ProbeSet};
use crate::scalar::{Rational, Scalar};
use crate::worked::WorkedExample;

/// Default seed for the random cone checks.
pub const WITNESS_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitizationWitness {
    pub element: UnitizationPair<Rational>,
    pub inverse: UnitizationPair<Rational>,
    pub inverse_in_cone: bool,
    pub product_is_unit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomInverse {
    pub element: EventuallyConstantLine<Rational>,
    pub inverse_in_cone: bool,
    /// `b^{-1} = (b^{-1})²·b`, which exhibits the inverse as a square times a positive element.
    pub square_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeWitnesses {
    pub seed: u64,
    /// `(1, δ₀)`: positive and invertible, with an inverse outside the cone.
    pub delta: UnitizationWitness,
    /// `(β, 0)` with `β > 0`.
    pub scalar: UnitizationWitness,
    pub random: Vec<RandomInverse>,
    pub squares_positive: bool,
}

impl ConeWitnesses {
    pub fn all_random_positive(&self) -> bool {
        self.random.iter().all(|r| r.inverse_in_cone && r.square_identity)
    }
}

fn unitization_witness(p: UnitizationPair<Rational>) -> Result<UnitizationWitness> {
    let (inverse, inverse_in_cone) = unitization_inverse(&p)?;
    let product_is_unit = p.try_mul(&inverse)? == UnitizationPair::scalar(Rational::one());
    Ok(UnitizationWitness {
        element: p,
        inverse,
        inverse_in_cone,
        product_is_unit,
    })
}

fn random_line(rng: &mut ChaCha8Rng, positive: bool) -> EventuallyConstantLine<Rational> {
    let draw = |rng: &mut ChaCha8Rng| {
        let n: i64 = rng.gen_range(1..=20);
        let d: i64 = rng.gen_range(1..=9);
        let sign = if positive || rng.gen_bool(0.5) { 1 } else { -1 };
        Rational::new(sign * n, d)
    };
    let width: i64 = rng.gen_range(0..=6);
    let exceptions: Vec<(i64, Rational)> = (-width..=width).map(|t| (t, draw(rng))).collect();
    let tail = draw(rng);
    EventuallyConstantLine::new(exceptions, tail)
}

/// The positivity witnesses for the unitization and for eventually constant functions.
pub fn cone_witnesses(seed: u64, samples: usize) -> Result<ConeWitnesses> {
    let delta = unitization_witness(UnitizationPair::new(Rational::one(), C0Line::delta(0)))?;
    let scalar = unitization_witness(UnitizationPair::scalar(Rational::new(5, 2)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = Vec::with_capacity(samples);
    for _ in 0..samples {
        let b = random_line(&mut rng, true);
        let inv = b.try_inverse()?;
        let square_identity = inv.try_mul(&inv)?.try_mul(&b)? == inv;
        random.push(RandomInverse {
            inverse_in_cone: inv.in_cone() == Some(true),
            square_identity,
            element: b,
        });
    }
    let mut squares_positive = true;
    for _ in 0..samples {
        let c = random_line(&mut rng, false);
        squares_positive &= c.try_mul(&c)?.in_cone() == Some(true);
    }
    Ok(ConeWitnesses {
        seed,
        delta,
        scalar,
        random,
        squares_positive,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    pub band: usize,
    pub site: i64,
    pub ratio: Rational,
    pub expected: Rational,
}

/// `‖xₙ(f_t)‖/‖f_t‖` for point masses `f_t = f₀(t)δ_t`, one per band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnboundedWitness {
    pub rows: Vec<RatioRow>,
    pub strictly_increasing: bool,
    pub matches_expected: bool,
}

pub fn unbounded_xn_witness(ex: &WorkedExample, n_max: usize) -> Result<UnboundedWitness> {
    if ex.envelope.has_zeros() {
        return Err(Error::PreconditionFailed(
            "the envelope vanishes somewhere, so point masses there are not in S".into(),
        ));
    }
    if n_max == 0 {
        return Err(Error::ParameterOutOfRange("n_max must be at least 1".into()));
    }
    let growth = ex.params.growth();
    let mut sites = vec![(0usize, 0i64)];
    sites.extend(ex.nu().iter().enumerate().map(|(i, &v)| (i + 1, v as i64 + 1)));
    let mut rows = Vec::new();
    let mut strictly_increasing = true;
    for n in 1..=n_max {
        let mut previous: Option<Rational> = None;
        for &(band, site) in &sites {
            let f = C0Line::from_pairs([(site, ex.envelope.value(site))]);
            let x = ex.explicit_x_n(n, &f)?.value;
            let ratio = x.norm() / f.norm();
            if let Some(p) = &previous {
                strictly_increasing &= *p < ratio;
            }
            previous = Some(ratio.clone());
            rows.push(RatioRow {
                n,
                band,
                site,
                ratio,
                expected: growth.powi((band * n) as i64),
            });
        }
    }
    let matches_expected = rows.iter().all(|r| r.ratio == r.expected);
    Ok(UnboundedWitness {
        rows,
        strictly_increasing,
        matches_expected,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficientRow {
    pub height: i64,
    pub nu: usize,
    pub residual: Rational,
    pub expected: Rational,
}

/// The deficient plateau `(1 − 1/ν)` on `|t| ≤ ν` against the bump `R·1_{|t|≤2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficientReport {
    pub rows: Vec<DeficientRow>,
    /// Outcome of the uniformity search for the tallest bump.
    pub exhausted: Option<(usize, String)>,
    pub plateau_index: usize,
    pub plateau_residual: Rational,
}

pub fn deficient_net_report(heights: &[i64], indices: &[usize], tol: &Rational, cap: usize) -> Result<DeficientReport> {
    let rep = LineRep::<Rational>::new();
    let deficient = LineNet::<Rational>::deficient();
    let mut rows = Vec::new();
    for &h in heights {
        let probe = ProbeSet::bounded(vec![C0Line::constant_on(2, Rational::from_i64(h))])?;
        for &nu in indices {
            rows.push(DeficientRow {
                height: h,
                nu,
                residual: uniform_residual(&rep, &deficient, nu, &probe)?,
                expected: Rational::new(h, nu as i64),
            });
        }
    }
    let tallest = heights.iter().copied().max().unwrap_or(1);
    let probe = ProbeSet::bounded(vec![C0Line::constant_on(2, Rational::from_i64(tallest))])?;
    let exhausted = match uniformity_threshold(&rep, &deficient, &probe, tol, cap) {
        Ok(_) => None,
        Err(Error::Exhausted { cap, best_margin, .. }) => Some((cap, best_margin)),
        Err(e) => return Err(e),
    };
    let plateau = LineNet::<Rational>::plateau();
    let plateau_index = uniformity_threshold(&rep, &plateau, &probe, tol, cap)?;
    let plateau_residual = uniform_residual(&rep, &plateau, plateau_index, &probe)?;
    Ok(DeficientReport {
        rows,
        exhausted,
        plateau_index,
        plateau_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn delta_inverse_leaves_the_cone() {
        let w = cone_witnesses(WITNESS_SEED, 20).unwrap();
        assert_eq!(w.delta.inverse, UnitizationPair::new(q(1, 1), C0Line::from_pairs([(0, q(-1, 2))])));
        assert!(!w.delta.inverse_in_cone);
        assert!(w.delta.product_is_unit);
        assert_eq!(w.scalar.inverse, UnitizationPair::scalar(q(2, 5)));
        assert!(w.scalar.inverse_in_cone);
        assert_eq!(w.random.len(), 20);
        assert!(w.all_random_positive());
        assert!(w.squares_positive);
    }

    #[test]
    fn witnesses_are_seeded() {
        assert_eq!(cone_witnesses(7, 5).unwrap(), cone_witnesses(7, 5).unwrap());
        assert_ne!(cone_witnesses(7, 5).unwrap().random, cone_witnesses(8, 5).unwrap().random);
    }

    #[test]
    fn point_mass_ratios_grow_by_band() {
        let ex = WorkedExample::default_example().unwrap();
        let w = unbounded_xn_witness(&ex, 1).unwrap();
        let ratios: Vec<Rational> = w.rows.iter().map(|r| r.ratio.clone()).collect();
        let expected: Vec<Rational> = (0..=6).map(|i| q(4, 3).powi(i)).collect();
        assert_eq!(ratios, expected);
        assert!(w.strictly_increasing);
        assert!(w.matches_expected);
        assert_eq!(w.rows[1].site, 4);
    }

    #[test]
    fn deficient_residuals_are_height_over_index() {
        let rep = deficient_net_report(&[1, 10, 100], &[2, 3, 5, 10], &q(1, 2), 50).unwrap();
        for row in &rep.rows {
            assert_eq!(row.residual, row.expected, "{row:?}");
        }
        let (cap, best) = rep.exhausted.unwrap();
        assert_eq!(cap, 50);
        assert_eq!(best, "2");
        assert_eq!(rep.plateau_index, 2);
        assert_eq!(rep.plateau_residual, q(0, 1));
    }
}
