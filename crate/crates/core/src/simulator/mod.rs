//! Event-driven kinematic oracle.
//!
//! Each courier is advanced leg by leg along the ray from the City. Every
//! rendezvous is the root of a linear position equation and proper time is
//! accumulated per constant-speed segment. Nothing here evaluates the
//! closed-form schedules; [`verify`] compares the two.

pub mod verify;

use serde::Serialize;

use crate::domain::{CourierSpec, KinematicConfig, Mode};
use crate::error::{Error, Result};

pub use verify::{verify_against_analytic, ClockCheck, ClockKind, Mismatch, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LegKind {
    DepartCaravan,
    ArriveCity,
    DepartCity,
    ArriveCaravan,
}

impl LegKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LegKind::DepartCaravan => "depart_caravan",
            LegKind::ArriveCity => "arrive_city",
            LegKind::DepartCity => "depart_city",
            LegKind::ArriveCaravan => "arrive_caravan",
        }
    }

    /// Kind that must follow this one in a courier's cycle.
    pub fn next(&self) -> LegKind {
        match self {
            LegKind::DepartCaravan => LegKind::ArriveCity,
            LegKind::ArriveCity => LegKind::DepartCity,
            LegKind::DepartCity => LegKind::ArriveCaravan,
            LegKind::ArriveCaravan => LegKind::DepartCaravan,
        }
    }
}

/// One courier event in the City frame. Positions are in speed units times
/// days, measured from the City.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegEvent {
    pub time_city: f64,
    pub position: f64,
    pub courier_index: u32,
    pub kind: LegKind,
}

/// Courier clock reading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProperClock {
    pub courier_index: u32,
    pub elapsed_proper: f64,
}

impl ProperClock {
    fn start(courier_index: u32) -> Self {
        ProperClock {
            courier_index,
            elapsed_proper: 0.0,
        }
    }

    /// Adds a segment of `duration` City days travelled at proper-time `rate`.
    fn advance(&mut self, duration: f64, rate: f64) {
        self.elapsed_proper += duration * rate;
    }
}

/// Events of all couriers, grouped by courier then ordered by time, with the
/// courier's clock snapshot at each event.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Simulation {
    pub events: Vec<LegEvent>,
    pub clocks: Vec<ProperClock>,
}

impl Simulation {
    pub fn iter(&self) -> impl Iterator<Item = (&LegEvent, &ProperClock)> {
        self.events.iter().zip(&self.clocks)
    }

    pub fn courier(&self, courier_index: u32) -> impl Iterator<Item = (&LegEvent, &ProperClock)> {
        self.iter()
            .filter(move |(event, _)| event.courier_index == courier_index)
    }

    /// Events of one kind for one courier, in time order.
    pub fn of_kind(
        &self,
        courier_index: u32,
        kind: LegKind,
    ) -> impl Iterator<Item = (&LegEvent, &ProperClock)> {
        self.courier(courier_index)
            .filter(move |(event, _)| event.kind == kind)
    }
}

/// Meeting time of two bodies moving uniformly from known positions at `now`.
fn meeting_time(now: f64, chaser: (f64, f64), target: (f64, f64)) -> f64 {
    let (chaser_position, chaser_velocity) = chaser;
    let (target_position, target_velocity) = target;
    let separation = target_position - chaser_position;
    let closing_speed = chaser_velocity - target_velocity;
    now + separation / closing_speed
}

/// City arrival time of a courier leaving the convoy at `depart_time` and
/// riding straight back.
pub fn intercept_return(depart_time: f64, convoy_speed: f64, courier_speed: f64) -> f64 {
    let start = convoy_speed * depart_time;
    meeting_time(depart_time, (start, -courier_speed), (0.0, 0.0))
}

/// Time at which a courier leaving the City at `depart_city_time` catches up
/// with the convoy.
pub fn intercept_catchup(
    depart_city_time: f64,
    convoy_speed: f64,
    courier_speed: f64,
) -> Result<f64> {
    if courier_speed <= convoy_speed {
        return Err(Error::SpeedOrder {
            convoy: convoy_speed,
            courier: courier_speed,
        });
    }
    let convoy_position = convoy_speed * depart_city_time;
    Ok(meeting_time(
        depart_city_time,
        (0.0, courier_speed),
        (convoy_position, convoy_speed),
    ))
}

fn finite(time: f64) -> Result<f64> {
    if time.is_finite() {
        Ok(time)
    } else {
        Err(Error::Overflow {
            what: "simulation horizon",
        })
    }
}

struct Rates {
    convoy: f64,
    courier: f64,
}

fn rates(config: &KinematicConfig) -> Result<Rates> {
    match config.mode() {
        Mode::Classical => Ok(Rates {
            convoy: 1.0,
            courier: 1.0,
        }),
        Mode::Relativistic => {
            let beta_c = config.convoy_speed();
            let beta_m = config.courier_speed();
            if beta_m >= 1.0 {
                return Err(Error::Superluminal {
                    what: "courier speed",
                    beta: beta_m,
                });
            }
            Ok(Rates {
                convoy: (1.0 - beta_c * beta_c).sqrt(),
                courier: (1.0 - beta_m * beta_m).sqrt(),
            })
        }
    }
}

fn simulate_courier(
    config: &KinematicConfig,
    rates: &Rates,
    courier: &CourierSpec,
    tours: u32,
    out: &mut Simulation,
) -> Result<()> {
    let vc = config.convoy_speed();
    let vm = config.courier_speed();
    let index = courier.index();
    let mut clock = ProperClock::start(index);
    let push = |out: &mut Simulation, time_city: f64, position: f64, kind, clock: ProperClock| {
        out.events.push(LegEvent {
            time_city,
            position,
            courier_index: index,
            kind,
        });
        out.clocks.push(clock);
    };

    // The courier rides with the caravan until the caravan clock shows t1.
    let mut now = finite(courier.first_departure() / rates.convoy)?;
    clock.advance(now, rates.convoy);

    for tour in 1..=tours {
        push(out, now, vc * now, LegKind::DepartCaravan, clock);
        if tour == tours {
            break;
        }
        let at_city = finite(intercept_return(now, vc, vm))?;
        clock.advance(at_city - now, rates.courier);
        let city_position = vc * now - vm * (at_city - now);
        push(out, at_city, city_position, LegKind::ArriveCity, clock);
        push(out, at_city, city_position, LegKind::DepartCity, clock);

        let rejoin = finite(intercept_catchup(at_city, vc, vm)?)?;
        clock.advance(rejoin - at_city, rates.courier);
        push(
            out,
            rejoin,
            vm * (rejoin - at_city),
            LegKind::ArriveCaravan,
            clock,
        );
        now = rejoin;
    }
    Ok(())
}

/// Runs every courier through its `tours`-th departure from the caravan.
///
/// Relativistic first departures happen at City time `t1 / sqrt(1 - beta_c^2)`;
/// classical clocks all run at the City rate.
pub fn simulate(
    config: &KinematicConfig,
    couriers: &[CourierSpec],
    tours: u32,
) -> Result<Simulation> {
    if tours == 0 {
        return Err(Error::InvalidTour(0));
    }
    let rates = rates(config)?;
    let mut ordered: Vec<&CourierSpec> = couriers.iter().collect();
    ordered.sort_by_key(|c| c.index());
    let mut sim = Simulation::default();
    for courier in ordered {
        simulate_courier(config, &rates, courier, tours, &mut sim)?;
    }
    Ok(sim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn return_intercepts() {
        assert!(rel(intercept_return(2.0, 1.0, 1.5), 10.0 / 3.0) < 1e-15);
        assert!(rel(intercept_return(25.0, 1.0, 1.5), 125.0 / 3.0) < 1e-15);
        assert!(rel(intercept_return(7.0, 1.0, 1e12), 7.0) < 1e-11);
    }

    #[test]
    fn catchup_intercepts() {
        assert!(rel(intercept_catchup(10.0 / 3.0, 1.0, 1.5).unwrap(), 10.0) < 1e-15);
        assert!(rel(intercept_catchup(40.0 / 3.0, 1.0, 1.5).unwrap(), 40.0) < 1e-15);
        assert!(rel(intercept_catchup(3.0, 1.0, 1e12).unwrap(), 3.0) < 1e-11);
        assert!(matches!(
            intercept_catchup(1.0, 1.0, 1.0),
            Err(Error::SpeedOrder { .. })
        ));
    }

    #[test]
    fn tale_courier_one() {
        let config = KinematicConfig::classical(1.0, 1.5).unwrap();
        let couriers = [CourierSpec::tale(1).unwrap()];
        let sim = simulate(&config, &couriers, 4).unwrap();
        let kinds: Vec<LegKind> = sim.events.iter().take(5).map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec![
                LegKind::DepartCaravan,
                LegKind::ArriveCity,
                LegKind::DepartCity,
                LegKind::ArriveCaravan,
                LegKind::DepartCaravan
            ]
        );
        assert!(rel(sim.events[1].time_city, 10.0 / 3.0) < 1e-15);
        let departures: Vec<f64> = sim
            .of_kind(1, LegKind::DepartCaravan)
            .map(|(e, _)| e.time_city)
            .collect();
        for (got, want) in departures.iter().zip([2.0, 10.0, 50.0, 250.0]) {
            assert!(rel(*got, want) < 1e-14, "{got} vs {want}");
        }
        // classical clocks run at the City rate
        for (event, clock) in sim.iter() {
            assert!(rel(clock.elapsed_proper, event.time_city) < 1e-14);
        }
    }

    #[test]
    fn relativistic_courier_clock() {
        let config = KinematicConfig::relativistic(0.5, 0.75).unwrap();
        let couriers = [CourierSpec::tale(4).unwrap()];
        let sim = simulate(&config, &couriers, 2).unwrap();
        let (_, clock) = sim.of_kind(4, LegKind::DepartCaravan).nth(1).unwrap();
        assert!((clock.elapsed_proper - 20.2753).abs() < 1e-4);
        for (event, clock) in sim.iter() {
            assert!(clock.elapsed_proper < event.time_city);
        }
    }

    #[test]
    fn single_tour_is_one_event_per_courier() {
        let config = KinematicConfig::classical(1.0, 1.5).unwrap();
        let couriers = CourierSpec::tale_company(3).unwrap();
        let sim = simulate(&config, &couriers, 1).unwrap();
        assert_eq!(sim.events.len(), 3);
        assert!(sim.events.iter().all(|e| e.kind == LegKind::DepartCaravan));
    }

    #[test]
    fn refuses_light_couriers_and_zero_tours() {
        let light = KinematicConfig::relativistic(0.5, 1.0).unwrap();
        let couriers = [CourierSpec::tale(1).unwrap()];
        assert!(simulate(&light, &couriers, 3).is_err());
        let config = KinematicConfig::classical(1.0, 1.5).unwrap();
        assert_eq!(simulate(&config, &couriers, 0), Err(Error::InvalidTour(0)));
    }

    #[test]
    fn runaway_horizon_overflows() {
        let config = KinematicConfig::classical(1.0, 1.0 + 1e-9).unwrap();
        let couriers = [CourierSpec::tale(1).unwrap()];
        assert!(matches!(
            simulate(&config, &couriers, 100),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn oracle_does_not_reach_for_closed_forms() {
        let source = include_str!("mod.rs");
        let body = &source[..source.find("#[cfg(test)]").unwrap()];
        for forbidden in ["classical::", "relativistic::", "powf", "powi", "growth("] {
            assert!(!body.contains(forbidden), "simulator uses {forbidden}");
        }
    }
}
