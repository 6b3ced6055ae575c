//! Cross-module invariants on generated instances and solver output.

use evtow_core::energy::{self, EnergyModel};
use evtow_core::ga::{self, GaConfig};
use evtow_core::instance::{generate_instance, Layout, Strategy};
use evtow_core::sim::{self, Solution};
use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn quick_config(seed: u64) -> GaConfig {
    GaConfig {
        population_size: 24,
        max_iterations: 40,
        seed,
        ..GaConfig::default()
    }
}

#[test]
fn travel_time_monotone_in_speed_over_instance_legs() {
    // every generated leg is long enough that raising the speed limit never
    // slows a tractor down
    for layout in [Layout::Scenario1Like, Layout::Scenario2Like] {
        let inst = generate_instance(17, layout, 30).unwrap();
        let n = inst.node_count();
        let speeds: Vec<f64> = [5.0, 10.0, 15.0, 20.0, 25.0]
            .iter()
            .map(|kmh| kmh / 3.6)
            .collect();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let leg = inst.distance(i, j);
                let mut last = f64::INFINITY;
                for &v in &speeds {
                    let t = energy::travel_time(leg, v, &inst.vehicle);
                    assert!(
                        t <= last + 1e-12,
                        "leg {i}->{j} ({leg} m): {t} min at {v} m/s above {last}"
                    );
                    last = t;
                }
            }
        }
    }
}

#[test]
fn solved_route_energy_bookkeeping_closes() {
    let inst = generate_instance(23, Layout::Scenario2Like, 16).unwrap();
    for gamma in [0.8, 0.9, 1.0] {
        let strategy = Strategy::new(20.0, gamma).unwrap();
        let (solution, _, _) =
            ga::run_ga(&inst, &strategy, &quick_config(3), EnergyModel::StartStop).unwrap();
        let (cost, traces) =
            sim::evaluate(&solution, &inst, &strategy, EnergyModel::StartStop).unwrap();
        let mut recomputed = 0.0;
        for trace in &traces {
            let top_ups: f64 = trace
                .visits
                .iter()
                .filter_map(|v| v.charge.as_ref())
                .map(|c| c.top_up_kwh())
                .sum();
            let final_soc = trace.visits.last().unwrap().soc_arrival_kwh;
            let capacity = inst.vehicle.battery_capacity_kwh;
            assert!(
                (final_soc - (capacity - trace.energy_kwh + top_ups)).abs() < 1e-9,
                "trace deltas do not reproduce the return state of charge"
            );
            recomputed += inst.rates.per_kwh * (top_ups + (capacity - final_soc));
        }
        assert!((recomputed - cost.charging).abs() < 1e-9);
        assert!(
            (cost.total - (cost.fixed + cost.charging + cost.maintenance + cost.time_penalty))
                .abs()
                < 1e-9
        );
    }
}

#[test]
fn permuting_routes_leaves_cost_unchanged() {
    let inst = generate_instance(29, Layout::Scenario2Like, 14).unwrap();
    let strategy = Strategy::new(25.0, 0.8).unwrap();
    let (solution, cost, _) =
        ga::run_ga(&inst, &strategy, &quick_config(5), EnergyModel::StartStop).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..10 {
        let mut routes = solution.routes.clone();
        routes.shuffle(&mut rng);
        let shuffled = Solution::new(routes);
        let shuffled_cost =
            sim::total_cost(&shuffled, &inst, &strategy, EnergyModel::StartStop).unwrap();
        assert_eq!(cost, shuffled_cost);
    }
}

#[test]
fn decode_encode_identity_on_random_solutions() {
    let inst = generate_instance(31, Layout::Scenario2Like, 12).unwrap();
    let stands: Vec<usize> = inst.stand_nodes().collect();
    let chargers = inst.charger_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let mut pool = stands.clone();
        pool.shuffle(&mut rng);
        let mut routes = Vec::new();
        while !pool.is_empty() {
            let take = rng.random_range(1..=pool.len());
            let mut route = vec![0];
            route.extend(pool.drain(..take));
            if rng.random::<f64>() < 0.4 {
                let pos = rng.random_range(1..=route.len());
                route.insert(pos, *chargers.choose(&mut rng).unwrap());
            }
            route.push(0);
            routes.push(route);
        }
        let solution = Solution::new(routes);
        let genes = ga::encode(&solution);
        let decoded = ga::decode(&genes, &inst).unwrap();
        assert_eq!(decoded, solution.normalized());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn charging_round_trip_at_any_capacity(
        capacity in 50.0_f64..400.0,
        soc_frac in 0.2_f64..1.0,
        gamma in 0.21_f64..1.0,
    ) {
        let curve = evtow_core::charging::ChargingCurve::default();
        let soc = soc_frac * capacity;
        prop_assume!(soc <= gamma * capacity);
        let minutes = evtow_core::charging::charging_time(soc, gamma, capacity, &curve).unwrap();
        let reached = evtow_core::charging::soc_after(soc, minutes, capacity, &curve);
        prop_assert!((reached - gamma * capacity).abs() < 1e-9);
    }

    #[test]
    fn towing_energy_monotone_under_finite_differences(
        mass in 0.0_f64..400_000.0,
    ) {
        let params = energy::VehicleParams::default_tractor();
        let mut profile = energy::AircraftServiceProfile::for_class(energy::AircraftClass::Medium);
        profile.mass_kg = mass;
        let here = energy::towing_energy(&profile, &params).unwrap();
        profile.mass_kg = mass + 1000.0;
        let there = energy::towing_energy(&profile, &params).unwrap();
        prop_assert!(there > here);
    }
}
