//! Shared domain types: kinematic configuration, couriers, and the clock
//! readings recorded at every departure.
//!
//! All times are in days. Speeds are dimensionless: in classical mode only the
//! ratio of the two speeds matters, in relativistic mode they are fractions of
//! the speed of light.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Days per year used when a table is displayed in years.
pub const DEFAULT_YEAR_LENGTH_DAYS: f64 = 365.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    Relativistic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Classical => f.write_str("classical"),
            Mode::Relativistic => f.write_str("relativistic"),
        }
    }
}

/// Convoy and courier speeds plus the kinematic regime they are read in.
///
/// Instances only exist once validated, so `q()` is always finite and
/// positive. In relativistic mode a courier speed of exactly 1 passes
/// validation but every relativistic clock operation rejects it; the light
/// courier case is served by [`crate::relativistic::em_limit_city_time`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinematicConfig {
    mode: Mode,
    convoy_speed: f64,
    courier_speed: f64,
}

impl KinematicConfig {
    pub fn new(mode: Mode, convoy_speed: f64, courier_speed: f64) -> Result<Self> {
        validate(KinematicConfig {
            mode,
            convoy_speed,
            courier_speed,
        })
    }

    pub fn classical(convoy_speed: f64, courier_speed: f64) -> Result<Self> {
        Self::new(Mode::Classical, convoy_speed, courier_speed)
    }

    pub fn relativistic(beta_convoy: f64, beta_courier: f64) -> Result<Self> {
        Self::new(Mode::Relativistic, beta_convoy, beta_courier)
    }

    /// Classical config with unit convoy speed and the courier speed that
    /// yields the requested `q`.
    pub fn classical_from_q(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::NonPositive {
                what: "q",
                value: q,
            });
        }
        Self::classical(1.0, 1.0 + 1.0 / q)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn convoy_speed(&self) -> f64 {
        self.convoy_speed
    }

    pub fn courier_speed(&self) -> f64 {
        self.courier_speed
    }

    pub fn q(&self) -> f64 {
        q_factor(self)
    }

    pub(crate) fn require_mode(&self, expected: Mode) -> Result<()> {
        if self.mode == expected {
            Ok(())
        } else {
            Err(Error::ModeMismatch {
                expected,
                found: self.mode,
            })
        }
    }
}

/// Checks the speed invariants and hands the config back unchanged.
pub fn validate(config: KinematicConfig) -> Result<KinematicConfig> {
    let KinematicConfig {
        mode,
        convoy_speed,
        courier_speed,
    } = config;
    for (what, value) in [
        ("convoy speed", convoy_speed),
        ("courier speed", courier_speed),
    ] {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::NonPositive { what, value });
        }
    }
    if mode == Mode::Relativistic {
        if convoy_speed >= 1.0 {
            return Err(Error::Superluminal {
                what: "convoy speed",
                beta: convoy_speed,
            });
        }
        if courier_speed > 1.0 {
            return Err(Error::Superluminal {
                what: "courier speed",
                beta: courier_speed,
            });
        }
    }
    if courier_speed <= convoy_speed {
        return Err(Error::SpeedOrder {
            convoy: convoy_speed,
            courier: courier_speed,
        });
    }
    let q = q_factor(&config);
    if !q.is_finite() {
        return Err(Error::Overflow { what: "q factor" });
    }
    Ok(config)
}

/// Chase ratio `V_c / (V_m - V_c)`.
pub fn q_factor(config: &KinematicConfig) -> f64 {
    config.convoy_speed / (config.courier_speed - config.convoy_speed)
}

/// A courier and the caravan-clock time of its first departure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CourierSpec {
    index: u32,
    first_departure: f64,
}

impl CourierSpec {
    pub fn new(index: u32, first_departure: f64) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidArgument(
                "courier index starts at 1".to_string(),
            ));
        }
        if first_departure.is_nan() || first_departure <= 0.0 {
            return Err(Error::NonPositive {
                what: "first departure",
                value: first_departure,
            });
        }
        if !first_departure.is_finite() {
            return Err(Error::Overflow {
                what: "first departure",
            });
        }
        Ok(CourierSpec {
            index,
            first_departure,
        })
    }

    /// Courier `i` leaving `i + 1` days after the caravan, as in the tale.
    pub fn tale(index: u32) -> Result<Self> {
        Self::new(index, f64::from(index) + 1.0)
    }

    /// The first `count` couriers of the tale.
    pub fn tale_company(count: u32) -> Result<Vec<Self>> {
        (1..=count).map(Self::tale).collect()
    }

    /// Couriers numbered from `first_index` with the given first departures.
    pub fn numbered(first_index: u32, first_departures: &[f64]) -> Result<Vec<Self>> {
        first_departures
            .iter()
            .zip(first_index..)
            .map(|(&t1, index)| Self::new(index, t1))
            .collect()
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn first_departure(&self) -> f64 {
        self.first_departure
    }
}

/// The four clock readings of courier `courier_index` at its `tour`-th
/// departure from the caravan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepartureRecord {
    pub courier_index: u32,
    pub tour: u32,
    /// Caravan clock at the departure.
    pub caravan_proper: f64,
    /// City clock at the departure.
    pub city_frame: f64,
    /// Courier clock at the departure.
    pub courier_proper: f64,
    /// Courier clock on reaching the City during this tour. In classical mode
    /// this is the city-frame arrival time.
    pub courier_proper_at_city: f64,
}

impl DepartureRecord {
    pub fn clocks(&self) -> [f64; 4] {
        [
            self.caravan_proper,
            self.city_frame,
            self.courier_proper,
            self.courier_proper_at_city,
        ]
    }
}

/// Complete `couriers x tours` grid of departure records, stored row-major
/// by tour.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleTable {
    config: KinematicConfig,
    couriers: Vec<CourierSpec>,
    tours: u32,
    records: Vec<DepartureRecord>,
    year_length_days: f64,
}

impl ScheduleTable {
    pub(crate) fn from_fn<F>(
        config: KinematicConfig,
        couriers: &[CourierSpec],
        tours: u32,
        mut cell: F,
    ) -> Result<Self>
    where
        F: FnMut(&CourierSpec, u32) -> Result<DepartureRecord>,
    {
        if tours == 0 {
            return Err(Error::InvalidTour(0));
        }
        if couriers.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one courier is required".to_string(),
            ));
        }
        let mut records = Vec::with_capacity(couriers.len() * tours as usize);
        for n in 1..=tours {
            for courier in couriers {
                let record = cell(courier, n)?;
                if !record.clocks().iter().all(|t| t.is_finite()) {
                    return Err(Error::Overflow {
                        what: "schedule entry",
                    });
                }
                records.push(record);
            }
        }
        Ok(ScheduleTable {
            config,
            couriers: couriers.to_vec(),
            tours,
            records,
            year_length_days: DEFAULT_YEAR_LENGTH_DAYS,
        })
    }

    pub fn with_year_length(mut self, year_length_days: f64) -> Result<Self> {
        if year_length_days.is_nan() || year_length_days <= 0.0 {
            return Err(Error::NonPositive {
                what: "year length",
                value: year_length_days,
            });
        }
        self.year_length_days = year_length_days;
        Ok(self)
    }

    pub fn config(&self) -> &KinematicConfig {
        &self.config
    }

    pub fn couriers(&self) -> &[CourierSpec] {
        &self.couriers
    }

    pub fn tours(&self) -> u32 {
        self.tours
    }

    pub fn records(&self) -> &[DepartureRecord] {
        &self.records
    }

    pub fn year_length_days(&self) -> f64 {
        self.year_length_days
    }

    /// Record for the courier with the given index at tour `n`.
    pub fn record(&self, courier_index: u32, tour: u32) -> Option<&DepartureRecord> {
        if tour == 0 || tour > self.tours {
            return None;
        }
        let column = self
            .couriers
            .iter()
            .position(|c| c.index == courier_index)?;
        self.records
            .get((tour as usize - 1) * self.couriers.len() + column)
    }

    /// Records of one courier, ordered by tour.
    pub fn courier_records(&self, courier_index: u32) -> Vec<&DepartureRecord> {
        (1..=self.tours)
            .filter_map(|n| self.record(courier_index, n))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tale_speeds_give_q_two() {
        let config = KinematicConfig::classical(1.0, 1.5).unwrap();
        assert_eq!(config.q(), 2.0);
        let config = KinematicConfig::relativistic(0.5, 0.75).unwrap();
        assert_eq!(config.q(), 2.0);
        assert_eq!(KinematicConfig::classical(1.0, 2.0).unwrap().q(), 1.0);
    }

    #[test]
    fn equal_speeds_rejected() {
        assert!(matches!(
            KinematicConfig::classical(1.0, 1.0),
            Err(Error::SpeedOrder { .. })
        ));
        assert!(matches!(
            KinematicConfig::classical(2.0, 1.0),
            Err(Error::SpeedOrder { .. })
        ));
    }

    #[test]
    fn non_positive_and_nan_rejected() {
        for (vc, vm) in [(0.0, 1.0), (-1.0, 1.0), (1.0, -2.0), (f64::NAN, 1.0)] {
            assert!(matches!(
                KinematicConfig::classical(vc, vm),
                Err(Error::NonPositive { .. })
            ));
        }
    }

    #[test]
    fn superluminal_rejected() {
        assert!(matches!(
            KinematicConfig::relativistic(1.0, 1.0),
            Err(Error::Superluminal { .. })
        ));
        assert!(matches!(
            KinematicConfig::relativistic(0.5, 1.2),
            Err(Error::Superluminal { .. })
        ));
        // Light couriers pass validation; the clock operations refuse them.
        assert!(KinematicConfig::relativistic(0.5, 1.0).is_ok());
        // Classical speeds are not fractions of c.
        assert!(KinematicConfig::classical(3.0, 4.5).is_ok());
    }

    #[test]
    fn q_from_q() {
        for q in [0.5, 1.0, 2.0, 5.0] {
            let config = KinematicConfig::classical_from_q(q).unwrap();
            assert!((config.q() - q).abs() <= 1e-12 * q);
        }
        assert!(KinematicConfig::classical_from_q(0.0).is_err());
    }

    #[test]
    fn q_blows_up_near_equal_speeds() {
        for eps in [1e-3, 1e-6] {
            let config = KinematicConfig::classical(1.0, 1.0 + eps).unwrap();
            assert!(config.q() > 1.0 / eps * (1.0 - 1e-9));
        }
    }

    #[test]
    fn courier_spec_rules() {
        assert!(CourierSpec::new(1, 0.0).is_err());
        assert!(CourierSpec::new(0, 1.0).is_err());
        assert!(CourierSpec::new(1, f64::INFINITY).is_err());
        let company = CourierSpec::tale_company(7).unwrap();
        let t1: Vec<f64> = company.iter().map(|c| c.first_departure()).collect();
        assert_eq!(t1, vec![2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let numbered = CourierSpec::numbered(4, &[5.0, 0.5]).unwrap();
        assert_eq!(numbered[1].index(), 5);
    }

    proptest::proptest! {
        #[test]
        fn q_is_exactly_invariant_under_binary_rescaling(vc in 1e-3f64..1e3, gap in 1e-3f64..1e3, j in -20i32..20) {
            let k = 2f64.powi(j);
            let base = KinematicConfig::classical(vc, vc + gap).unwrap();
            let scaled = KinematicConfig::classical(k * vc, k * (vc + gap)).unwrap();
            proptest::prop_assert_eq!(base.q(), scaled.q());
        }

        #[test]
        fn q_is_invariant_under_rescaling(vc in 1e-3f64..1e3, gap in 1e-3f64..1e3, k in 1e-3f64..1e3) {
            let base = KinematicConfig::classical(vc, vc + gap).unwrap();
            let scaled = KinematicConfig::classical(k * vc, k * (vc + gap)).unwrap();
            // only the rounding of the rescaled inputs differs
            let tol = 8.0 * f64::EPSILON * base.q() * (1.0 + (vc + gap) / gap);
            proptest::prop_assert!((base.q() - scaled.q()).abs() <= tol);
        }
    }
}
