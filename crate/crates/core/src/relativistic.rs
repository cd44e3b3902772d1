//! Clock readings for the courier schedule when the convoy and the couriers
//! move at a sizeable fraction of the speed of light.
//!
//! Rendezvous kinematics stay in the City frame with constant coordinate
//! speeds and instantaneous turnarounds, so the departure instants still
//! follow the classical progression in City time. Each clock is the City
//! time elapsed on a constant-speed segment scaled by `sqrt(1 - beta^2)`.
//! The caravan's clock reads `t1` at the first departure and the courier
//! travels with the caravan until then.

use crate::classical::{city_arrival_fraction, departure_time, growth};
use crate::domain::{CourierSpec, DepartureRecord, KinematicConfig, Mode, ScheduleTable};
use crate::error::{Error, Result};

/// Proper-time rates of the convoy and the couriers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationFactors {
    /// `sqrt(1 - beta_c^2)`
    pub root_c: f64,
    /// `sqrt(1 - beta_m^2)`
    pub root_m: f64,
    /// `root_m / root_c`
    pub ratio: f64,
}

fn dilation_root(beta: f64) -> f64 {
    // (1-b)(1+b) keeps precision when b is close to 1
    ((1.0 - beta) * (1.0 + beta)).sqrt()
}

pub fn dilation_factors(config: &KinematicConfig) -> Result<DilationFactors> {
    config.require_mode(Mode::Relativistic)?;
    if config.courier_speed() >= 1.0 {
        return Err(Error::Superluminal {
            what: "courier speed",
            beta: config.courier_speed(),
        });
    }
    let root_c = dilation_root(config.convoy_speed());
    let root_m = dilation_root(config.courier_speed());
    Ok(DilationFactors {
        root_c,
        root_m,
        ratio: root_m / root_c,
    })
}

fn finite(value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow {
            what: "relativistic clock",
        })
    }
}

/// City time of the `n`-th departure, `t1 (1 + 2q)^(n-1) / root_c`.
pub fn city_frame_departure(config: &KinematicConfig, t1: f64, n: u32) -> Result<f64> {
    let factors = dilation_factors(config)?;
    finite(departure_time(config.q(), t1, n)? / factors.root_c)
}

/// Caravan clock at the `n`-th departure; the classical progression.
pub fn caravan_proper_departure(config: &KinematicConfig, t1: f64, n: u32) -> Result<f64> {
    departure_time(config.q(), t1, n)
}

/// Courier clock at its `n`-th departure from the caravan:
/// `ratio t1 (1 + 2q)^(n-1) + (1 - ratio) t1`.
pub fn messenger_proper_departure(config: &KinematicConfig, t1: f64, n: u32) -> Result<f64> {
    let DilationFactors { ratio, .. } = dilation_factors(config)?;
    let g = growth(config.q(), n)?;
    finite(ratio * t1 * g + (1.0 - ratio) * t1)
}

/// Courier clock on reaching the City during its `n`-th tour:
/// `ratio (1 + q/(1+q)) t1 (1 + 2q)^(n-1) + (1 - ratio) t1`.
pub fn messenger_proper_at_city(config: &KinematicConfig, t1: f64, n: u32) -> Result<f64> {
    let DilationFactors { ratio, .. } = dilation_factors(config)?;
    let q = config.q();
    let g = growth(q, n)?;
    finite(ratio * (1.0 + city_arrival_fraction(q)) * t1 * g + (1.0 - ratio) * t1)
}

/// City time of the `n`-th exchange when the couriers are light signals,
/// to first order in `beta_c`: `t1 (1 + 2 (n-1) beta_c)`.
///
/// Only meaningful for `beta_c << 1`; no range check is made.
pub fn em_limit_city_time(beta_c: f64, t1: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidTour(n));
    }
    Ok(t1 * (1.0 + 2.0 * f64::from(n - 1) * beta_c))
}

pub fn build_relativistic_schedule(
    config: &KinematicConfig,
    couriers: &[CourierSpec],
    tours: u32,
) -> Result<ScheduleTable> {
    dilation_factors(config)?;
    ScheduleTable::from_fn(*config, couriers, tours, |courier, n| {
        let t1 = courier.first_departure();
        Ok(DepartureRecord {
            courier_index: courier.index(),
            tour: n,
            caravan_proper: caravan_proper_departure(config, t1, n)?,
            city_frame: city_frame_departure(config, t1, n)?,
            courier_proper: messenger_proper_departure(config, t1, n)?,
            courier_proper_at_city: messenger_proper_at_city(config, t1, n)?,
        })
    })
}
