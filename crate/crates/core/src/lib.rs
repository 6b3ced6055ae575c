//! Dispatch toolkit for electric ground-service tractors.
//!
//! The crate models the full duty cycle of an airport towing fleet:
//! start-stop travel and towing energy, piecewise linear charging, towing
//! time windows derived from turnaround precedence networks, route
//! simulation with a four-part cost objective, an improved genetic algorithm
//! with a traditional baseline, an exact enumeration oracle for desk-scale
//! instances, and sweeps over charge-discharge coupling strategies
//! (maximum speed paired with a maximum charge threshold).

pub mod charging;
pub mod energy;
pub mod ga;
pub mod instance;
pub mod oracle;
pub mod sim;
pub mod stn;
pub mod sweep;
#[doc(hidden)]
pub mod testutil;

pub use charging::{charging_time, soc_after, ChargeEvent, ChargingCurve, ChargingError};
pub use energy::{
    apu_energy, battery_power, cumulative_profile, mech_power, service_energy, service_time,
    towing_energy, traditional_energy, travel_segment_energy, travel_time, AircraftClass,
    AircraftServiceProfile, EnergyError, EnergyModel, VehicleParams, JOULE_TO_KWH,
    MIN_SOC_FRACTION,
};
pub use ga::{
    adaptive_pc, adaptive_pm, decode, encode, greedy_initialize, pmx_permutation, reverse_segment,
    run_ga, run_traditional_ga, GaConfig, GaError, GaStats, IterationStats, PmOrientation,
    RepairPolicy,
};
pub use instance::{
    forecast_flights, generate_instance, load_instance, parse_instance, round_to_ten,
    save_instance, truncate_chargers, validate_instance, CostRates, Flight, Forecast,
    ForecastRates, Instance, InstanceError, Layout, Node, NodeKind, Strategy, DEFAULT_GAMMAS,
    DEFAULT_SPEEDS_KMH, MAX_SPEED_KMH,
};
pub use oracle::{exact_solve, OracleError, OracleLimits, OracleOutcome};
pub use sim::{
    check_feasibility, evaluate, fitness, route_cost, simulate_route, total_cost, CostBreakdown,
    RouteTrace, SimError, Solution, Violation, ViolationKind, Visit, WindowMode,
};
pub use stn::{
    build_stn, default_template, derive_window, minimize_stn, towing_window, BoundMatrix, Stn,
    StnConstraint, StnError, TurnaroundTemplate,
};
pub use sweep::{
    compare_algorithms, emit_cost_curves, energy_model_ablation, sweep, AblationReport, CellResult,
    ComparisonReport, CurveSeries, GridReport,
};
