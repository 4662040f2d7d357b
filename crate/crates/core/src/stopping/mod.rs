//! Discrete stopping times, stopped elements and processes.

mod stopped;
mod time;

pub use stopped::{
    debut, hitting_time, increasing_process_identities, stopped_element, stopped_element_band_sum,
    stopped_element_pointwise, stopped_process, Debut, IncreasingIdentities,
};
pub use time::{extremum, from_projections, measurability_violation, ExtNat, Extremum, StoppingTime, StoppingTimeDoc};
