//! Schedules of couriers shuttling between a convoy that recedes at constant
//! speed and the fixed City it left from.
//!
//! Departure times from the convoy grow geometrically,
//! `T_n = T_1 (1 + 2q)^(n-1)` with `q = V_c / (V_m - V_c)`. [`classical`]
//! holds the Galilean closed forms, [`relativistic`] the City, caravan and
//! courier clock readings when the speeds are fractions of c, and
//! [`simulator`] an event-driven oracle that reproduces both from the
//! kinematics alone.

pub mod classical;
pub mod cli;
pub mod domain;
pub mod error;
pub mod relativistic;
pub mod simulator;

pub use domain::{
    q_factor, validate, CourierSpec, DepartureRecord, KinematicConfig, Mode, ScheduleTable,
    DEFAULT_YEAR_LENGTH_DAYS,
};
pub use error::{Error, Result};
