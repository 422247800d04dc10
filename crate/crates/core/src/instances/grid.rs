//! Sampled functions on a window `[-T, T]` of the real line (approximate mode).
//!
//! The norm of a [`GridFunction`] is the maximum over its samples. This is a
//! lower approximation of the true sup norm of the function it stands for;
//! `tail_bound` separately bounds the function outside the window.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, InstanceTag, NormedSpace, UnitalElement};
use crate::error::{Error, Result};
use crate::scalar::max_or_zero;

/// The sample points `-T, -T + h, …, T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width > 0.0 && step > 0.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "grid needs T > 0 and h > 0, got T = {half_width}, h = {step}"
            )));
        }
        let count = 2.0 * half_width / step;
        if (count - count.round()).abs() > 1e-9 {
            return Err(Error::ParameterOutOfRange(format!(
                "step {step} does not divide the window [-{half_width}, {half_width}]"
            )));
        }
        Ok(Grid { half_width, step })
    }

    pub fn len(&self) -> usize {
        (2.0 * self.half_width / self.step).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.point(k))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: Grid,
    pub samples: Vec<f64>,
    /// Bound on `|f(t)|` for `|t| > T`.
    pub tail_bound: f64,
}

/// An element of the bounded-function superalgebra: samples on the window
/// plus the constant value taken outside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSuper {
    pub grid: Grid,
    pub samples: Vec<f64>,
    pub outside: f64,
}

impl GridFunction {
    pub fn tabulate<F: Fn(f64) -> f64>(grid: Grid, g: F, tail_bound: f64) -> Self {
        GridFunction {
            grid,
            samples: grid.points().map(g).collect(),
            tail_bound,
        }
    }

    pub fn value_at(&self, k: usize) -> f64 {
        self.samples[k]
    }

    fn check(&self, grid: &Grid) -> Result<()> {
        if self.grid != *grid {
            return Err(Error::InstanceMismatch {
                left: format!("grid {:?}", self.grid),
                right: format!("grid {grid:?}"),
            });
        }
        Ok(())
    }
}

impl NormedSpace for GridFunction {
    type Scalar = f64;

    fn tag(&self) -> InstanceTag {
        InstanceTag::GridFunction
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(&other.grid)?;
        Ok(GridFunction {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
            tail_bound: self.tail_bound + other.tail_bound,
        })
    }

    fn scale(&self, c: &f64) -> Self {
        GridFunction {
            grid: self.grid,
            samples: self.samples.iter().map(|x| x * c).collect(),
            tail_bound: self.tail_bound * c.abs(),
        }
    }

    fn norm(&self) -> f64 {
        max_or_zero(self.samples.iter().map(|x| x.abs()))
    }

    fn zero_like(&self) -> Self {
        GridFunction {
            grid: self.grid,
            samples: vec![0.0; self.samples.len()],
            tail_bound: 0.0,
        }
    }

    fn in_cone(&self) -> Option<bool> {
        Some(self.samples.iter().all(|x| *x >= 0.0))
    }
}

impl AlgebraElement for GridFunction {
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(&other.grid)?;
        Ok(GridFunction {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect(),
            tail_bound: self.tail_bound * other.tail_bound,
        })
    }
}

impl GridSuper {
    pub fn constant(grid: Grid, c: f64) -> Self {
        GridSuper {
            grid,
            samples: vec![c; grid.len()],
            outside: c,
        }
    }

    pub fn embed(f: &GridFunction) -> Self {
        GridSuper {
            grid: f.grid,
            samples: f.samples.clone(),
            outside: 0.0,
        }
    }

    pub fn act(&self, f: &GridFunction) -> Result<GridFunction> {
        f.check(&self.grid)?;
        Ok(GridFunction {
            grid: self.grid,
            samples: self.samples.iter().zip(&f.samples).map(|(a, b)| a * b).collect(),
            tail_bound: f.tail_bound * self.outside.abs(),
        })
    }

    fn zip(&self, other: &Self, g: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InstanceMismatch {
                left: format!("grid {:?}", self.grid),
                right: format!("grid {:?}", other.grid),
            });
        }
        Ok(GridSuper {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| g(*a, *b)).collect(),
            outside: g(self.outside, other.outside),
        })
    }
}

impl NormedSpace for GridSuper {
    type Scalar = f64;

    fn tag(&self) -> InstanceTag {
        InstanceTag::GridSuper
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    fn scale(&self, c: &f64) -> Self {
        GridSuper {
            grid: self.grid,
            samples: self.samples.iter().map(|x| x * c).collect(),
            outside: self.outside * c,
        }
    }

    fn norm(&self) -> f64 {
        self.samples.iter().fold(self.outside.abs(), |m, x| m.max(x.abs()))
    }

    fn zero_like(&self) -> Self {
        Self::constant(self.grid, 0.0)
    }

    fn in_cone(&self) -> Option<bool> {
        Some(self.outside >= 0.0 && self.samples.iter().all(|x| *x >= 0.0))
    }
}

impl AlgebraElement for GridSuper {
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }
}

impl UnitalElement for GridSuper {
    fn unit_like(&self) -> Self {
        Self::constant(self.grid, 1.0)
    }

    fn try_inverse(&self) -> Result<Self> {
        if let Some(k) = self.samples.iter().position(|x| *x == 0.0) {
            return Err(Error::NotInvertible(format!("zero sample at t = {}", self.grid.point(k))));
        }
        if self.outside == 0.0 {
            return Err(Error::NotInvertible("zero outside the window".into()));
        }
        Ok(GridSuper {
            grid: self.grid,
            samples: self.samples.iter().map(|x| 1.0 / x).collect(),
            outside: 1.0 / self.outside,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_cover_the_window() {
        let g = Grid::new(10.0, 0.5).unwrap();
        assert_eq!(g.len(), 41);
        assert_eq!(g.point(0), -10.0);
        assert_eq!(g.point(40), 10.0);
        assert!(Grid::new(1.0, 0.3).is_err());
    }

    #[test]
    fn super_inverse_is_pointwise() {
        let g = Grid::new(1.0, 0.5).unwrap();
        let b = GridSuper {
            grid: g,
            samples: vec![2.0, 4.0, 1.0, 4.0, 2.0],
            outside: 0.5,
        };
        let inv = b.try_inverse().unwrap();
        let prod = b.try_mul(&inv).unwrap();
        assert_eq!(prod, GridSuper::constant(g, 1.0));
    }

    #[test]
    fn action_scales_tail_bound() {
        let g = Grid::new(1.0, 1.0).unwrap();
        let f = GridFunction::tabulate(g, |t| t * t, 0.25);
        let b = GridSuper::constant(g, 2.0);
        let out = b.act(&f).unwrap();
        assert_eq!(out.samples, vec![2.0, 0.0, 2.0]);
        assert_eq!(out.tail_bound, 0.5);
    }
}
