//! Bounded approximate identities indexed by the positive integers.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, NormedSpace};
use crate::instances::grid::{Grid, GridFunction};
use crate::instances::line::C0Line;
use crate::scalar::Scalar;

/// A sequential net `ν ↦ e_ν`, `ν = 1, 2, …`, with norm bound `M`.
pub trait ApproximateIdentity: Send + Sync {
    type Element: AlgebraElement;

    fn element(&self, nu: usize) -> Self::Element;

    fn bound(&self) -> <Self::Element as NormedSpace>::Scalar;

    fn is_commutative(&self) -> bool;

    fn is_positive(&self) -> bool;

    /// Index from which every element is the unit of the superalgebra.
    fn largest_index(&self) -> Option<usize> {
        None
    }

    fn describe(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetKind {
    /// `1` on `|t| ≤ ν`.
    Plateau,
    /// `1 − 1/ν` on `|t| ≤ ν`.
    DeficientPlateau,
}

impl NetKind {
    fn height<S: Scalar>(&self, nu: usize) -> S {
        match self {
            NetKind::Plateau => S::one(),
            NetKind::DeficientPlateau => S::one() - S::ratio(1, nu as i64),
        }
    }
}

/// Plateau nets on the discrete line.
#[derive(Debug, PartialEq)]
pub struct LineNet<S> {
    pub kind: NetKind,
    _scalar: std::marker::PhantomData<S>,
}

impl<S> Clone for LineNet<S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for LineNet<S> {}

impl<S: Scalar> LineNet<S> {
    pub fn new(kind: NetKind) -> Self {
        LineNet {
            kind,
            _scalar: std::marker::PhantomData,
        }
    }

    pub fn plateau() -> Self {
        Self::new(NetKind::Plateau)
    }

    pub fn deficient() -> Self {
        Self::new(NetKind::DeficientPlateau)
    }
}

impl<S: Scalar> ApproximateIdentity for LineNet<S> {
    type Element = C0Line<S>;

    fn element(&self, nu: usize) -> C0Line<S> {
        C0Line::constant_on(nu as i64, self.kind.height(nu))
    }

    fn bound(&self) -> S {
        S::one()
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn is_positive(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!("{:?} net on the discrete line", self.kind)
    }
}

/// Plateau nets sampled on a grid, with a linear ramp on `ν ≤ |t| ≤ ν+1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNet {
    pub kind: NetKind,
    pub grid: Grid,
}

impl GridNet {
    pub fn new(kind: NetKind, grid: Grid) -> Self {
        GridNet { kind, grid }
    }
}

impl ApproximateIdentity for GridNet {
    type Element = GridFunction;

    fn element(&self, nu: usize) -> GridFunction {
        let h: f64 = self.kind.height(nu);
        let nu = nu as f64;
        GridFunction::tabulate(
            self.grid,
            |t| {
                let a = t.abs();
                if a <= nu {
                    h
                } else if a < nu + 1.0 {
                    h * (nu + 1.0 - a)
                } else {
                    0.0
                }
            },
            0.0,
        )
    }

    fn bound(&self) -> f64 {
        1.0
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn is_positive(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!("{:?} net on grid {:?}", self.kind, self.grid)
    }
}

/// The same element at every index; used for the largest-element case.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantNet<E: AlgebraElement> {
    pub element: E,
    pub bound: E::Scalar,
    pub commutative: bool,
    pub positive: bool,
    /// Whether `element` is the unit of the superalgebra.
    pub largest: bool,
}

impl<E: AlgebraElement> ApproximateIdentity for ConstantNet<E> {
    type Element = E;

    fn element(&self, _nu: usize) -> E {
        self.element.clone()
    }

    fn bound(&self) -> E::Scalar {
        self.bound.clone()
    }

    fn is_commutative(&self) -> bool {
        self.commutative
    }

    fn is_positive(&self) -> bool {
        self.positive
    }

    fn largest_index(&self) -> Option<usize> {
        self.largest.then_some(1)
    }

    fn describe(&self) -> String {
        "constant net".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn plateau_and_deficient_elements() {
        let e3 = LineNet::<Rational>::plateau().element(3);
        assert_eq!(e3, C0Line::constant_on(3, Rational::one()));
        assert_eq!(e3.norm(), Rational::one());
        let d4 = LineNet::<Rational>::deficient().element(4);
        assert_eq!(d4, C0Line::constant_on(4, Rational::new(3, 4)));
        assert_eq!(d4.norm(), Rational::new(3, 4));
    }

    #[test]
    fn grid_ramp_is_linear() {
        let grid = Grid::new(10.0, 0.5).unwrap();
        let e2 = GridNet::new(NetKind::Plateau, grid).element(2);
        let at = |t: f64| e2.samples[((t + 10.0) / 0.5).round() as usize];
        assert_eq!(at(1.5), 1.0);
        assert_eq!(at(2.0), 1.0);
        assert_eq!(at(2.5), 0.5);
        assert_eq!(at(-2.5), 0.5);
        assert_eq!(at(3.0), 0.0);
    }

    #[test]
    fn plateau_is_exact_identity_on_supports() {
        let f = C0Line::from_pairs([(-5, Rational::new(7, 3)), (2, Rational::from_i64(9))]);
        let net = LineNet::<Rational>::plateau();
        for nu in 5..9 {
            let e = net.element(nu);
            assert_eq!(e.mul(&f).try_sub(&f).unwrap().norm(), Rational::zero());
        }
        assert!(net.element(4).mul(&f).try_sub(&f).unwrap().norm().is_positive());
    }
}
