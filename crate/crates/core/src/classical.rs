//! Closed-form courier schedule with Galilean kinematics.
//!
//! A courier leaving the caravan at time `T` returns to it after `2 q T`,
//! so successive departures form the geometric progression
//! `T_n = T_1 (1 + 2q)^(n-1)`.

use crate::domain::{CourierSpec, DepartureRecord, KinematicConfig, Mode, ScheduleTable};
use crate::error::{Error, Result};

/// Growth factor `(1 + 2q)^(n-1)` shared by every closed form.
pub(crate) fn growth(q: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidTour(n));
    }
    let g = (1.0 + 2.0 * q).powf(f64::from(n - 1));
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::Overflow {
            what: "geometric progression",
        })
    }
}

fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow { what })
    }
}

/// Duration of the first round trip, `2 q t1`.
pub fn first_trip_duration(q: f64, t1: f64) -> f64 {
    2.0 * q * t1
}

/// Duration of the `n`-th round trip, `2 q t1 (1 + 2q)^(n-1)`.
pub fn trip_duration(q: f64, t1: f64, n: u32) -> Result<f64> {
    finite(first_trip_duration(q, t1) * growth(q, n)?, "trip duration")
}

/// Time of the `n`-th departure from the caravan, `t1 (1 + 2q)^(n-1)`.
pub fn departure_time(q: f64, t1: f64, n: u32) -> Result<f64> {
    finite(t1 * growth(q, n)?, "departure time")
}

/// Fraction of the departure time spent riding back to the City,
/// `q / (1 + q)`, which equals `V_c / V_m`.
pub fn city_arrival_fraction(q: f64) -> f64 {
    q / (1.0 + q)
}

/// Departure schedule for every courier over `tours` tours. All clocks agree;
/// the at-City column holds the city-frame arrival time.
pub fn build_classical_schedule(
    config: &KinematicConfig,
    couriers: &[CourierSpec],
    tours: u32,
) -> Result<ScheduleTable> {
    config.require_mode(Mode::Classical)?;
    let q = config.q();
    let arrival = 1.0 + city_arrival_fraction(q);
    ScheduleTable::from_fn(*config, couriers, tours, |courier, n| {
        let t = departure_time(q, courier.first_departure(), n)?;
        Ok(DepartureRecord {
            courier_index: courier.index(),
            tour: n,
            caravan_proper: t,
            city_frame: t,
            courier_proper: t,
            courier_proper_at_city: t * arrival,
        })
    })
}
