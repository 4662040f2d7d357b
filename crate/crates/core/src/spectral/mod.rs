//! The interval algebra, step functions, spectral systems and the Daniell
//! functional calculus.

pub mod calculus;
pub mod interval;
pub mod step;
pub mod system;

pub use calculus::{
    compose_continuous, compose_multivariate, daniell_continuous, daniell_monotone,
    daniell_monotone_trace, step_approximation, ContinuousFunction, DyadicStep,
    MonotoneStepSequence, StepTerm,
};
pub use interval::{Interval, IntervalSet};
pub use step::StepFunction;
pub use system::{daniell_step, daniell_step_closed_form, SpectralSystem};
