//! The closed-form construction on the discrete line: threshold sequences,
//! the step pyramid `a`, the explicit `xₙ = a^{−n}f`, and the product form of `b_k`.

pub mod pyramid;
pub mod schedule;

pub use pyramid::{build_pyramid, BandBound, ExplicitXn, Modulus, NeumannFactor, ProductCheck, StepPyramid, WorkedExample};
pub use schedule::{build_thresholds, choose_nu, DecaySchedule, ThresholdSchedules, WorkedParams};
