//! C ABI over the `buzzati` crate.
//!
//! Schedules and simulations are returned as opaque handles that the caller
//! releases with the matching `*_free` function. Every fallible call returns a
//! [`BuzzatiStatus`]; the message of the last failure on the calling thread is
//! available from [`buzzati_last_error_message`].
//!
//! Modes are passed as plain integers with the values of [`BuzzatiMode`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use buzzati::classical::build_classical_schedule;
use buzzati::relativistic::{build_relativistic_schedule, em_limit_city_time};
use buzzati::simulator::{simulate, verify_against_analytic, ClockKind, LegKind, Simulation};
use buzzati::{CourierSpec, Error, KinematicConfig, Mode, ScheduleTable};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuzzatiStatus {
    Ok = 0,
    NullPointer = 1,
    SpeedOrder = 2,
    Superluminal = 3,
    NonPositive = 4,
    ModeMismatch = 5,
    Overflow = 6,
    InvalidTour = 7,
    InvalidArgument = 8,
    Panic = 9,
}

#[repr(u32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuzzatiMode {
    Classical = 0,
    Relativistic = 1,
}

#[repr(u32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuzzatiLegKind {
    DepartCaravan = 0,
    ArriveCity = 1,
    DepartCity = 2,
    ArriveCaravan = 3,
}

/// Clock readings of one messenger at one departure from the caravan, in days.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BuzzatiRecord {
    pub messenger: u32,
    pub tour: u32,
    pub city_frame_days: f64,
    pub caravan_proper_days: f64,
    pub messenger_proper_days: f64,
    /// Messenger clock on reaching the City; City time in classical mode.
    pub messenger_at_city_days: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BuzzatiEvent {
    pub messenger: u32,
    /// One of the `BuzzatiLegKind` values.
    pub kind: u32,
    pub time_city_days: f64,
    pub position: f64,
    pub proper_days: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BuzzatiVerifySummary {
    pub passed: bool,
    pub compared: usize,
    pub max_departure_city_rel_error: f64,
    pub max_messenger_departure_rel_error: f64,
    pub max_messenger_at_city_rel_error: f64,
}

/// Opaque schedule handle.
pub struct BuzzatiSchedule {
    table: ScheduleTable,
}

/// Opaque simulation handle.
pub struct BuzzatiSimulation {
    sim: Simulation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

struct Failure(BuzzatiStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match err {
            Error::SpeedOrder { .. } => BuzzatiStatus::SpeedOrder,
            Error::Superluminal { .. } => BuzzatiStatus::Superluminal,
            Error::NonPositive { .. } => BuzzatiStatus::NonPositive,
            Error::ModeMismatch { .. } => BuzzatiStatus::ModeMismatch,
            Error::Overflow { .. } => BuzzatiStatus::Overflow,
            Error::InvalidTour(_) => BuzzatiStatus::InvalidTour,
            Error::InvalidArgument(_) => BuzzatiStatus::InvalidArgument,
        };
        Failure(status, err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BuzzatiStatus::NullPointer, format!("{what} is NULL"))
}

fn guard<F>(body: F) -> BuzzatiStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BuzzatiStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            BuzzatiStatus::Panic
        }
    }
}

fn config(mode: u32, convoy_speed: f64, courier_speed: f64) -> Result<KinematicConfig, Failure> {
    let mode = match mode {
        0 => Mode::Classical,
        1 => Mode::Relativistic,
        other => {
            return Err(Failure(
                BuzzatiStatus::InvalidArgument,
                format!("unknown mode {other}"),
            ))
        }
    };
    Ok(KinematicConfig::new(mode, convoy_speed, courier_speed)?)
}

unsafe fn couriers(
    first_departures: *const f64,
    count: usize,
    first_index: u32,
) -> Result<Vec<CourierSpec>, Failure> {
    if first_departures.is_null() {
        return Err(null("first_departures"));
    }
    if count == 0 {
        return Err(Failure(
            BuzzatiStatus::InvalidArgument,
            "at least one messenger is required".to_string(),
        ));
    }
    let t1 = slice::from_raw_parts(first_departures, count);
    Ok(CourierSpec::numbered(first_index, t1)?)
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn buzzati_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |message| message.as_ptr())
    })
}

/// Validates the speeds and writes `V_c / (V_m - V_c)` to `out_q`.
///
/// # Safety
/// `out_q` must be NULL or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn buzzati_q_factor(
    mode: u32,
    convoy_speed: f64,
    courier_speed: f64,
    out_q: *mut f64,
) -> BuzzatiStatus {
    guard(|| {
        let config = config(mode, convoy_speed, courier_speed)?;
        write_out(out_q, config.q(), "out_q")
    })
}

/// Builds the schedule for `count` messengers numbered from `first_index`
/// over `tours` tours. Records are ordered by tour, then messenger.
///
/// # Safety
/// `first_departures` must point to `count` doubles and `out` to writable
/// storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn buzzati_schedule_new(
    mode: u32,
    convoy_speed: f64,
    courier_speed: f64,
    first_departures: *const f64,
    count: usize,
    first_index: u32,
    tours: u32,
    out: *mut *mut BuzzatiSchedule,
) -> BuzzatiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let config = config(mode, convoy_speed, courier_speed)?;
        let couriers = couriers(first_departures, count, first_index)?;
        let table = match config.mode() {
            Mode::Classical => build_classical_schedule(&config, &couriers, tours)?,
            Mode::Relativistic => build_relativistic_schedule(&config, &couriers, tours)?,
        };
        out.write(Box::into_raw(Box::new(BuzzatiSchedule { table })));
        Ok(())
    })
}

/// Number of records in the schedule; 0 for NULL.
///
/// # Safety
/// `schedule` must be NULL or a live handle from `buzzati_schedule_new`.
#[no_mangle]
pub unsafe extern "C" fn buzzati_schedule_len(schedule: *const BuzzatiSchedule) -> usize {
    schedule.as_ref().map_or(0, |s| s.table.records().len())
}

/// # Safety
/// `schedule` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn buzzati_schedule_get(
    schedule: *const BuzzatiSchedule,
    position: usize,
    out: *mut BuzzatiRecord,
) -> BuzzatiStatus {
    guard(|| {
        let schedule = schedule.as_ref().ok_or_else(|| null("schedule"))?;
        let records = schedule.table.records();
        let r = records.get(position).ok_or_else(|| {
            Failure(
                BuzzatiStatus::InvalidArgument,
                format!("record {position} out of range (len {})", records.len()),
            )
        })?;
        write_out(
            out,
            BuzzatiRecord {
                messenger: r.courier_index,
                tour: r.tour,
                city_frame_days: r.city_frame,
                caravan_proper_days: r.caravan_proper,
                messenger_proper_days: r.courier_proper,
                messenger_at_city_days: r.courier_proper_at_city,
            },
            "out",
        )
    })
}

/// # Safety
/// `schedule` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn buzzati_schedule_free(schedule: *mut BuzzatiSchedule) {
    if !schedule.is_null() {
        drop(Box::from_raw(schedule));
    }
}

/// Simulates each messenger through its `tours`-th departure from the caravan.
///
/// # Safety
/// As for `buzzati_schedule_new`.
#[no_mangle]
pub unsafe extern "C" fn buzzati_simulation_new(
    mode: u32,
    convoy_speed: f64,
    courier_speed: f64,
    first_departures: *const f64,
    count: usize,
    first_index: u32,
    tours: u32,
    out: *mut *mut BuzzatiSimulation,
) -> BuzzatiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let config = config(mode, convoy_speed, courier_speed)?;
        let couriers = couriers(first_departures, count, first_index)?;
        let sim = simulate(&config, &couriers, tours)?;
        out.write(Box::into_raw(Box::new(BuzzatiSimulation { sim })));
        Ok(())
    })
}

/// # Safety
/// `simulation` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn buzzati_simulation_len(simulation: *const BuzzatiSimulation) -> usize {
    simulation.as_ref().map_or(0, |s| s.sim.events.len())
}

/// # Safety
/// `simulation` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn buzzati_simulation_get(
    simulation: *const BuzzatiSimulation,
    position: usize,
    out: *mut BuzzatiEvent,
) -> BuzzatiStatus {
    guard(|| {
        let simulation = simulation.as_ref().ok_or_else(|| null("simulation"))?;
        let sim = &simulation.sim;
        let (event, clock) = sim
            .events
            .get(position)
            .zip(sim.clocks.get(position))
            .ok_or_else(|| {
                Failure(
                    BuzzatiStatus::InvalidArgument,
                    format!("event {position} out of range (len {})", sim.events.len()),
                )
            })?;
        let kind = match event.kind {
            LegKind::DepartCaravan => BuzzatiLegKind::DepartCaravan,
            LegKind::ArriveCity => BuzzatiLegKind::ArriveCity,
            LegKind::DepartCity => BuzzatiLegKind::DepartCity,
            LegKind::ArriveCaravan => BuzzatiLegKind::ArriveCaravan,
        };
        write_out(
            out,
            BuzzatiEvent {
                messenger: event.courier_index,
                kind: kind as u32,
                time_city_days: event.time_city,
                position: event.position,
                proper_days: clock.elapsed_proper,
            },
            "out",
        )
    })
}

/// # Safety
/// `simulation` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn buzzati_simulation_free(simulation: *mut BuzzatiSimulation) {
    if !simulation.is_null() {
        drop(Box::from_raw(simulation));
    }
}

/// Compares the simulation with the closed forms. A failed comparison is not
/// an error: the call returns `Ok` with `passed == false`.
///
/// # Safety
/// As for `buzzati_schedule_new`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn buzzati_verify(
    mode: u32,
    convoy_speed: f64,
    courier_speed: f64,
    first_departures: *const f64,
    count: usize,
    first_index: u32,
    tours: u32,
    threshold: f64,
    out: *mut BuzzatiVerifySummary,
) -> BuzzatiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let config = config(mode, convoy_speed, courier_speed)?;
        let couriers = couriers(first_departures, count, first_index)?;
        let report = verify_against_analytic(&config, &couriers, tours, threshold)?;
        let max = |kind| report.check(kind).max_relative_error;
        write_out(
            out,
            BuzzatiVerifySummary {
                passed: report.passed(),
                compared: report.checks.iter().map(|c| c.compared).sum(),
                max_departure_city_rel_error: max(ClockKind::DepartureCityTime),
                max_messenger_departure_rel_error: max(ClockKind::CourierProperDeparture),
                max_messenger_at_city_rel_error: max(ClockKind::CourierProperAtCity),
            },
            "out",
        )
    })
}

/// First-order City time of the `n`-th exchange with light messengers.
///
/// # Safety
/// `out_days` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn buzzati_em_limit_city_time(
    beta_c: f64,
    t1: f64,
    n: u32,
    out_days: *mut f64,
) -> BuzzatiStatus {
    guard(|| write_out(out_days, em_limit_city_time(beta_c, t1, n)?, "out_days"))
}
