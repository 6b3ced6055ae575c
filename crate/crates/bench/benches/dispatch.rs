use criterion::{criterion_group, criterion_main, Criterion};
use evtow_core::charging::{charging_time, ChargingCurve};
use evtow_core::energy::{travel_segment_energy, EnergyModel, VehicleParams};
use evtow_core::ga::{run_ga, GaConfig};
use evtow_core::instance::{generate_instance, Layout, Strategy};
use evtow_core::oracle::{exact_solve, OracleLimits};
use evtow_core::sim::{simulate_route, Solution};
use evtow_core::stn::{build_stn, default_template, minimize_stn};
use evtow_core::testutil::golden_fixture;
use std::hint::black_box;

fn bench_energy(c: &mut Criterion) {
    let params = VehicleParams::default_tractor();
    c.bench_function("travel_segment_energy_500m", |b| {
        b.iter(|| travel_segment_energy(black_box(500.0), black_box(6.94), &params))
    });
}

fn bench_charging(c: &mut Criterion) {
    let curve = ChargingCurve::default();
    c.bench_function("charging_time_full", |b| {
        b.iter(|| charging_time(black_box(30.0), black_box(1.0), 150.0, &curve))
    });
}

fn bench_simulation(c: &mut Criterion) {
    let inst = golden_fixture();
    let strategy = Strategy::new(25.0, 0.8).unwrap();
    let route = vec![0, 1, 3, 2, 0];
    c.bench_function("simulate_route_golden", |b| {
        b.iter(|| simulate_route(black_box(&route), &inst, &strategy, EnergyModel::StartStop))
    });
}

fn bench_stn(c: &mut Criterion) {
    let template = default_template();
    let stn = build_stn(95, &template).unwrap();
    c.bench_function("minimize_stn_default_template", |b| {
        b.iter(|| minimize_stn(black_box(&stn)))
    });
}

fn bench_solver(c: &mut Criterion) {
    let inst = generate_instance(1, Layout::Scenario2Like, 12).unwrap();
    let strategy = Strategy::new(25.0, 0.8).unwrap();
    let config = GaConfig {
        population_size: 20,
        max_iterations: 10,
        seed: 1,
        ..GaConfig::default()
    };
    c.bench_function("ga_20pop_10iters_12flights", |b| {
        b.iter(|| run_ga(&inst, &strategy, &config, EnergyModel::StartStop))
    });
}

fn bench_oracle(c: &mut Criterion) {
    let inst = golden_fixture();
    let strategy = Strategy::new(25.0, 0.8).unwrap();
    let limits = OracleLimits::default();
    c.bench_function("oracle_two_flights", |b| {
        b.iter(|| exact_solve(&inst, &strategy, &limits, EnergyModel::StartStop))
    });
    let solution = Solution::new(vec![vec![0, 1, 2, 0]]);
    c.bench_function("total_cost_golden", |b| {
        b.iter(|| {
            evtow_core::sim::total_cost(
                black_box(&solution),
                &inst,
                &strategy,
                EnergyModel::StartStop,
            )
        })
    });
}

criterion_group!(
    benches,
    bench_energy,
    bench_charging,
    bench_simulation,
    bench_stn,
    bench_solver,
    bench_oracle
);
criterion_main!(benches);
