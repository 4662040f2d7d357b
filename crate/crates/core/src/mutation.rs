//! Seeded faults used to check that the property suites are not vacuous.
//!
//! A mutation is active only inside [`with_mutation`] and only on the calling
//! thread, so concurrent callers are never affected.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    /// `mu_A` measures `[a, b)` instead of `(a, b]`.
    MuEndpointOffByOne,
    /// Conditional expectation drops the atom weights from the numerator.
    CeDroppedWeight,
    /// `hitting_time` reads the level set one step late.
    HittingTimeShift,
}

thread_local! {
    static ACTIVE: Cell<Option<Mutation>> = const { Cell::new(None) };
}

pub fn with_mutation<T>(mutation: Option<Mutation>, f: impl FnOnce() -> T) -> T {
    let previous = ACTIVE.with(|a| a.replace(mutation));
    let out = f();
    ACTIVE.with(|a| a.set(previous));
    out
}

pub(crate) fn active(m: Mutation) -> bool {
    ACTIVE.with(|a| a.get() == Some(m))
}
