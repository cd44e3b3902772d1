//! Simulator versus closed forms.

use std::fmt;

use serde::Serialize;

use super::{simulate, LegKind};
use crate::classical::build_classical_schedule;
use crate::domain::{CourierSpec, KinematicConfig, Mode, ScheduleTable};
use crate::error::Result;
use crate::relativistic::build_relativistic_schedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockKind {
    /// City time of each departure from the caravan.
    DepartureCityTime,
    /// Courier clock at each departure from the caravan.
    CourierProperDeparture,
    /// Courier clock on each arrival at the City.
    CourierProperAtCity,
}

impl ClockKind {
    pub const ALL: [ClockKind; 3] = [
        ClockKind::DepartureCityTime,
        ClockKind::CourierProperDeparture,
        ClockKind::CourierProperAtCity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClockKind::DepartureCityTime => "departure_city_time",
            ClockKind::CourierProperDeparture => "courier_proper_departure",
            ClockKind::CourierProperAtCity => "courier_proper_at_city",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mismatch {
    pub courier_index: u32,
    pub tour: u32,
    pub simulated: f64,
    pub analytic: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockCheck {
    pub kind: ClockKind,
    pub compared: usize,
    pub max_relative_error: f64,
    /// Comparison with the largest relative error.
    pub worst: Option<Mismatch>,
    /// Comparisons whose relative error exceeds the threshold.
    pub exceedances: usize,
}

impl ClockCheck {
    fn new(kind: ClockKind) -> Self {
        ClockCheck {
            kind,
            compared: 0,
            max_relative_error: 0.0,
            worst: None,
            exceedances: 0,
        }
    }

    fn record(
        &mut self,
        threshold: f64,
        courier_index: u32,
        tour: u32,
        simulated: f64,
        analytic: f64,
    ) {
        let relative_error = ((simulated - analytic) / analytic).abs();
        self.compared += 1;
        // NaN counts as an exceedance and as the worst case
        if relative_error.is_nan() || relative_error > threshold {
            self.exceedances += 1;
        }
        if self.worst.is_none()
            || relative_error.is_nan()
            || relative_error > self.max_relative_error
        {
            self.max_relative_error = relative_error;
            self.worst = Some(Mismatch {
                courier_index,
                tour,
                simulated,
                analytic,
                relative_error,
            });
        }
    }

    fn absorb(&mut self, other: &ClockCheck) {
        self.compared += other.compared;
        self.exceedances += other.exceedances;
        if let Some(worst) = other.worst {
            if self.worst.is_none()
                || worst.relative_error.is_nan()
                || worst.relative_error > self.max_relative_error
            {
                self.max_relative_error = worst.relative_error;
                self.worst = Some(worst);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.exceedances == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub threshold: f64,
    pub checks: Vec<ClockCheck>,
}

impl VerificationReport {
    pub fn empty(threshold: f64) -> Self {
        VerificationReport {
            threshold,
            checks: ClockKind::ALL.into_iter().map(ClockCheck::new).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(ClockCheck::passed)
    }

    pub fn check(&self, kind: ClockKind) -> &ClockCheck {
        self.checks
            .iter()
            .find(|c| c.kind == kind)
            .expect("every clock kind is checked")
    }

    fn check_mut(&mut self, kind: ClockKind) -> &mut ClockCheck {
        self.checks
            .iter_mut()
            .find(|c| c.kind == kind)
            .expect("every clock kind is checked")
    }

    /// Folds another run into this report, keeping this report's threshold.
    pub fn merge(&mut self, other: &VerificationReport) {
        for check in &other.checks {
            self.check_mut(check.kind).absorb(check);
        }
    }

    pub fn max_relative_error(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_relative_error)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "threshold {:e}", self.threshold)?;
        for check in &self.checks {
            write!(
                f,
                "{:<26} {:>5} compared  max rel err {:.3e}  {}",
                check.kind.as_str(),
                check.compared,
                check.max_relative_error,
                if check.passed() { "PASS" } else { "FAIL" },
            )?;
            if let Some(w) = check.worst.filter(|_| !check.passed()) {
                write!(
                    f,
                    "  (worst: messenger {} tour {}, simulated {} vs analytic {})",
                    w.courier_index, w.tour, w.simulated, w.analytic
                )?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn analytic_schedule(
    config: &KinematicConfig,
    couriers: &[CourierSpec],
    tours: u32,
) -> Result<ScheduleTable> {
    match config.mode() {
        Mode::Classical => build_classical_schedule(config, couriers, tours),
        Mode::Relativistic => build_relativistic_schedule(config, couriers, tours),
    }
}

/// Simulates the couriers and compares departure City times, courier clocks
/// at departure and courier clocks at the City against the closed forms for
/// tours `1..=tours`.
pub fn verify_against_analytic(
    config: &KinematicConfig,
    couriers: &[CourierSpec],
    tours: u32,
    threshold: f64,
) -> Result<VerificationReport> {
    let table = analytic_schedule(config, couriers, tours)?;
    // one extra tour so the last City arrival is simulated too
    let sim = simulate(config, couriers, tours + 1)?;
    let mut report = VerificationReport::empty(threshold);

    for courier in couriers {
        let index = courier.index();
        let departures = sim.of_kind(index, LegKind::DepartCaravan);
        let arrivals = sim.of_kind(index, LegKind::ArriveCity);
        for ((record, (departure, dep_clock)), (_, city_clock)) in table
            .courier_records(index)
            .into_iter()
            .zip(departures)
            .zip(arrivals)
        {
            let n = record.tour;
            report.check_mut(ClockKind::DepartureCityTime).record(
                threshold,
                index,
                n,
                departure.time_city,
                record.city_frame,
            );
            report.check_mut(ClockKind::CourierProperDeparture).record(
                threshold,
                index,
                n,
                dep_clock.elapsed_proper,
                record.courier_proper,
            );
            report.check_mut(ClockKind::CourierProperAtCity).record(
                threshold,
                index,
                n,
                city_clock.elapsed_proper,
                record.courier_proper_at_city,
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tale_company_passes() {
        let config = KinematicConfig::classical(1.0, 1.5).unwrap();
        let couriers = CourierSpec::tale_company(7).unwrap();
        let report = verify_against_analytic(&config, &couriers, 7, 1e-9).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.check(ClockKind::CourierProperAtCity).compared, 49);
    }

    #[test]
    fn relativistic_courier_four_passes() {
        let config = KinematicConfig::relativistic(0.5, 0.75).unwrap();
        let couriers = [CourierSpec::tale(4).unwrap()];
        let report = verify_against_analytic(&config, &couriers, 7, 1e-9).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn single_tour_classical_departures_are_exact() {
        let config = KinematicConfig::classical(1.0, 1.5).unwrap();
        let couriers = CourierSpec::tale_company(7).unwrap();
        let report = verify_against_analytic(&config, &couriers, 1, 1e-9).unwrap();
        assert_eq!(
            report
                .check(ClockKind::DepartureCityTime)
                .max_relative_error,
            0.0
        );
        assert_eq!(report.check(ClockKind::DepartureCityTime).compared, 7);
    }

    #[test]
    fn zero_threshold_reports_exceedance() {
        let config = KinematicConfig::relativistic(0.5, 0.75).unwrap();
        let couriers = [CourierSpec::tale(4).unwrap()];
        let report = verify_against_analytic(&config, &couriers, 7, 0.0).unwrap();
        assert!(!report.passed());
        assert!(report.to_string().contains("worst: messenger 4"));
    }

    #[test]
    fn merge_keeps_worst() {
        let couriers = [CourierSpec::new(1, 2.5).unwrap()];
        let mut total = VerificationReport::empty(1e-9);
        for q in [0.5, 5.0] {
            let config = KinematicConfig::classical_from_q(q).unwrap();
            let report = verify_against_analytic(&config, &couriers, 10, 1e-9).unwrap();
            total.merge(&report);
        }
        assert_eq!(total.check(ClockKind::DepartureCityTime).compared, 20);
        assert!(total.passed());
    }
}
