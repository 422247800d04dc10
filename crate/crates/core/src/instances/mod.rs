//! Concrete algebras, superalgebras, cones and approximate identities.

pub mod envelope;
pub mod grid;
pub mod line;
pub mod matrix;
pub mod nets;
pub mod unitization;

use serde::{Deserialize, Serialize};

pub use envelope::{Envelope, EnvelopeTail};
pub use grid::{Grid, GridFunction, GridSuper};
pub use line::{pointwise_invert, C0Line, EventuallyConstantLine};
pub use matrix::{Matrix, Vector};
pub use nets::{ApproximateIdentity, ConstantNet, GridNet, LineNet, NetKind};
pub use unitization::{unitization_inverse, UnitizationPair};

use crate::scalar::Scalar;

/// JSON form of an instance value: `{"instance": tag, "payload": …}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "instance", content = "payload", rename_all = "kebab-case", bound = "S: Scalar")]
pub enum InstanceDocument<S> {
    C0Line(C0Line<S>),
    EventuallyConstantLine(EventuallyConstantLine<S>),
    Matrix(Matrix<S>),
    Vector(Vector<S>),
    Unitization(UnitizationPair<S>),
    GridFunction(GridFunction),
    GridSuper(GridSuper),
}

/// Builds the plateau or deficient-plateau net on the discrete line.
pub fn make_line_net<S: Scalar>(kind: NetKind) -> LineNet<S> {
    LineNet::new(kind)
}

/// Builds the plateau or deficient-plateau net on a grid.
pub fn make_grid_net(kind: NetKind, grid: Grid) -> GridNet {
    GridNet::new(kind, grid)
}
