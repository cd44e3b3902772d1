//! Properties of the kinematic oracle and its agreement with the closed forms.

use buzzati::classical::departure_time;
use buzzati::relativistic::{messenger_proper_at_city, messenger_proper_departure};
use buzzati::simulator::{simulate, LegKind};
use buzzati::{CourierSpec, KinematicConfig};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn any_config() -> impl Strategy<Value = KinematicConfig> {
    prop_oneof![
        (0.1f64..10.0, 0.05f64..10.0).prop_map(|(vc, gap)| KinematicConfig::classical(
            vc,
            vc + gap
        )
        .unwrap()),
        (0.01f64..0.9, 0.01f64..0.5).prop_map(|(bc, gap)| {
            KinematicConfig::relativistic(bc, (bc + gap).min(0.99)).unwrap()
        }),
    ]
}

proptest! {
    #[test]
    fn event_cycle_geometry_and_clocks(config in any_config(), t1 in 0.1f64..20.0, tours in 1u32..8) {
        let couriers = CourierSpec::numbered(1, &[t1, 2.0 * t1]).unwrap();
        let sim = simulate(&config, &couriers, tours).unwrap();
        let vc = config.convoy_speed();
        for courier in &couriers {
            let events: Vec<_> = sim.courier(courier.index()).collect();
            prop_assert_eq!(events.len(), 4 * (tours as usize - 1) + 1);
            prop_assert_eq!(events[0].0.kind, LegKind::DepartCaravan);
            for pair in events.windows(2) {
                let (a, ca) = pair[0];
                let (b, cb) = pair[1];
                prop_assert_eq!(a.kind.next(), b.kind);
                // turnarounds are instantaneous, legs take time
                if a.kind == LegKind::ArriveCity || a.kind == LegKind::ArriveCaravan {
                    prop_assert_eq!(a.time_city, b.time_city);
                } else {
                    prop_assert!(b.time_city > a.time_city);
                }
                prop_assert!(cb.elapsed_proper >= ca.elapsed_proper);
            }
            for (event, clock) in &events {
                let tol = 1e-9 * event.time_city;
                match event.kind {
                    LegKind::ArriveCity | LegKind::DepartCity => prop_assert!(event.position.abs() <= tol),
                    LegKind::DepartCaravan | LegKind::ArriveCaravan => {
                        prop_assert!((event.position - vc * event.time_city).abs() <= tol)
                    }
                }
                prop_assert!(clock.elapsed_proper <= event.time_city * (1.0 + 1e-15));
                if config.mode() == buzzati::Mode::Relativistic {
                    prop_assert!(clock.elapsed_proper < event.time_city);
                }
            }
        }
    }

    #[test]
    fn relativistic_clocks_match_closed_forms(bc in 0.01f64..0.9, gap in 0.01f64..0.5, t1 in 0.1f64..20.0) {
        let config = KinematicConfig::relativistic(bc, (bc + gap).min(0.99)).unwrap();
        let courier = CourierSpec::new(1, t1).unwrap();
        let sim = simulate(&config, &[courier], 9).unwrap();
        for (n, (_, clock)) in (1u32..=8).zip(sim.of_kind(1, LegKind::DepartCaravan)) {
            let want = messenger_proper_departure(&config, t1, n).unwrap();
            prop_assert!(rel(clock.elapsed_proper, want) <= 1e-9);
        }
        for (n, (_, clock)) in (1u32..=8).zip(sim.of_kind(1, LegKind::ArriveCity)) {
            let want = messenger_proper_at_city(&config, t1, n).unwrap();
            prop_assert!(rel(clock.elapsed_proper, want) <= 1e-9);
        }
    }
}

#[test]
fn classical_departures_match_progression() {
    for q in [0.5, 1.0, 2.0, 5.0] {
        let config = KinematicConfig::classical_from_q(q).unwrap();
        let couriers = CourierSpec::numbered(1, &[1.0, 2.5, 8.0]).unwrap();
        let sim = simulate(&config, &couriers, 10).unwrap();
        for courier in &couriers {
            let times: Vec<f64> = sim
                .of_kind(courier.index(), LegKind::DepartCaravan)
                .map(|(e, _)| e.time_city)
                .collect();
            assert_eq!(times.len(), 10);
            for (n, t) in (1u32..).zip(times) {
                let want = departure_time(q, courier.first_departure(), n).unwrap();
                assert!(rel(t, want) <= 1e-9, "q {q} n {n}: {t} vs {want}");
            }
        }
    }
}

#[test]
fn events_grouped_by_courier_in_index_order() {
    let config = KinematicConfig::classical(1.0, 1.5).unwrap();
    let couriers = CourierSpec::numbered(3, &[4.0, 1.0]).unwrap();
    let reversed = [couriers[1], couriers[0]];
    let sim = simulate(&config, &reversed, 3).unwrap();
    assert_eq!(sim, simulate(&config, &couriers, 3).unwrap());
    let indices: Vec<u32> = sim.events.iter().map(|e| e.courier_index).collect();
    assert!(indices.windows(2).all(|w| w[0] <= w[1]));
}
