//! Conditional expectations, filtrations, martingales and Jensen's
//! inequality.

mod expectation;
mod jensen;
mod process;

pub use expectation::{ConditionalExpectation, Filtration};
pub use jensen::{
    convex_image_submartingale, jensen, jensen_with, AffineMap, ChainLink, ConvexFunction, JensenRecord,
    MinorantSource, SubmartingaleRecord,
};
pub use process::{classify_process, AdaptedProcess, ProcessClass};
