//! Banach-module representations `π`, probe sets standing in for `S`, and
//! the pointwise lift to families of module values.

pub mod lifted;
pub mod probe;

use std::fmt::Debug;

pub use lifted::{lift, LiftedRep, LiftedValue, Omega};
pub use probe::{uniform_residual, uniformity_threshold, ProbeClaims, ProbeSet, ProbeValue};

use crate::algebra::{AlgebraElement, UnitalElement};
use crate::error::Result;
use crate::instances::{C0Line, EventuallyConstantLine, Grid, GridFunction, GridSuper, Matrix, Vector};
use crate::scalar::Scalar;

/// A continuous representation of `A` on `X` that extends unitally to `B ⊇ A`.
pub trait Representation: Clone + Debug {
    type Scalar: Scalar;
    type Algebra: AlgebraElement<Scalar = Self::Scalar>;
    type Super: UnitalElement<Scalar = Self::Scalar>;
    type Module: ProbeValue<Scalar = Self::Scalar>;

    /// The canonical embedding `A ↪ B`.
    fn embed(&self, a: &Self::Algebra) -> Self::Super;

    /// The unit of `B`.
    fn unit(&self) -> Self::Super;

    /// `π(b)x`.
    fn act(&self, b: &Self::Super, x: &Self::Module) -> Result<Self::Module>;

    /// Declared bound `‖π(a)x‖ ≤ ‖π‖·‖a‖·‖x‖`.
    fn pi_norm(&self) -> Self::Scalar;

    fn act_algebra(&self, a: &Self::Algebra, x: &Self::Module) -> Result<Self::Module> {
        self.act(&self.embed(a), x)
    }
}

/// Left regular representation of finitely supported functions on `ℤ`,
/// extended to eventually constant functions.
#[derive(Debug, PartialEq)]
pub struct LineRep<S> {
    _scalar: std::marker::PhantomData<S>,
}

impl<S> Clone for LineRep<S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for LineRep<S> {}

impl<S: Scalar> LineRep<S> {
    pub fn new() -> Self {
        LineRep {
            _scalar: std::marker::PhantomData,
        }
    }
}

impl<S: Scalar> Default for LineRep<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Representation for LineRep<S> {
    type Scalar = S;
    type Algebra = C0Line<S>;
    type Super = EventuallyConstantLine<S>;
    type Module = C0Line<S>;

    fn embed(&self, a: &C0Line<S>) -> EventuallyConstantLine<S> {
        EventuallyConstantLine::embed(a)
    }

    fn unit(&self) -> EventuallyConstantLine<S> {
        EventuallyConstantLine::unit()
    }

    fn act(&self, b: &EventuallyConstantLine<S>, x: &C0Line<S>) -> Result<C0Line<S>> {
        Ok(b.act(x))
    }

    fn pi_norm(&self) -> S {
        S::one()
    }

    fn act_algebra(&self, a: &C0Line<S>, x: &C0Line<S>) -> Result<C0Line<S>> {
        Ok(a.mul(x))
    }
}

/// `n×n` matrices acting on column vectors; here `A = B`.
#[derive(Debug, PartialEq)]
pub struct MatrixRep<S> {
    pub dim: usize,
    _scalar: std::marker::PhantomData<S>,
}

impl<S> Clone for MatrixRep<S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for MatrixRep<S> {}

impl<S: Scalar> MatrixRep<S> {
    pub fn new(dim: usize) -> Self {
        MatrixRep {
            dim,
            _scalar: std::marker::PhantomData,
        }
    }
}

impl<S: Scalar> Representation for MatrixRep<S> {
    type Scalar = S;
    type Algebra = Matrix<S>;
    type Super = Matrix<S>;
    type Module = Vector<S>;

    fn embed(&self, a: &Matrix<S>) -> Matrix<S> {
        a.clone()
    }

    fn unit(&self) -> Matrix<S> {
        Matrix::identity(self.dim)
    }

    fn act(&self, b: &Matrix<S>, x: &Vector<S>) -> Result<Vector<S>> {
        b.apply(x)
    }

    fn pi_norm(&self) -> S {
        S::one()
    }
}

/// Pointwise multiplication of sampled functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRep {
    pub grid: Grid,
}

impl Representation for GridRep {
    type Scalar = f64;
    type Algebra = GridFunction;
    type Super = GridSuper;
    type Module = GridFunction;

    fn embed(&self, a: &GridFunction) -> GridSuper {
        GridSuper::embed(a)
    }

    fn unit(&self) -> GridSuper {
        GridSuper::constant(self.grid, 1.0)
    }

    fn act(&self, b: &GridSuper, x: &GridFunction) -> Result<GridFunction> {
        b.act(x)
    }

    fn pi_norm(&self) -> f64 {
        1.0
    }
}
