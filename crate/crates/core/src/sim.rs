//! Route simulation and cost scoring.
//!
//! A solution is replayed forward in time, one tractor per route: travel
//! legs advance the clock and drain the battery, stand visits tow and power
//! the aircraft, charger visits top the battery up to the strategy ceiling.
//! The trace keeps exact clocks and state of charge even for infeasible
//! routes; violations are flagged, never masked.

use crate::charging::ChargeEvent;
use crate::energy::{self, EnergyModel};
use crate::instance::{Instance, Strategy};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("route {0} must start and end at the depot")]
    MissingDepotAnchor(usize),
    #[error("route {route} visits unknown node {node}")]
    UnknownNode { route: usize, node: usize },
    #[error("route {route} passes through the depot at position {position}")]
    InteriorDepot { route: usize, position: usize },
    #[error("solution violates coverage: {0}")]
    Coverage(String),
    #[error("energy model: {0}")]
    Energy(#[from] energy::EnergyError),
}

/// Per-tractor node sequence, depot-anchored at both ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    pub routes: Vec<Vec<usize>>,
}

impl Solution {
    pub fn new(routes: Vec<Vec<usize>>) -> Self {
        Solution { routes }
    }

    /// Drop routes that visit nothing; fleet size counts nonempty routes only.
    pub fn normalized(&self) -> Solution {
        Solution {
            routes: self
                .routes
                .iter()
                .filter(|r| r.len() > 2)
                .cloned()
                .collect(),
        }
    }

    pub fn tractor_count(&self) -> usize {
        self.routes.iter().filter(|r| r.len() > 2).count()
    }

    /// Render as one route per line, node ids space-separated.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# evtow solution v1\n");
        for route in &self.routes {
            let ids: Vec<String> = route.iter().map(|n| n.to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Solution, String> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        if header != "# evtow solution v1" {
            return Err(format!("unsupported solution header: {header}"));
        }
        let mut routes = Vec::new();
        for (ln, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let ids: Result<Vec<usize>, _> = line.split_whitespace().map(|t| t.parse()).collect();
            routes.push(ids.map_err(|_| format!("line {}: bad node id", ln + 2))?);
        }
        Ok(Solution { routes })
    }
}

/// One node visit in a replayed route.
#[derive(Debug, Clone, PartialEq)]
pub struct Visit {
    pub node: usize,
    pub arrival_min: f64,
    /// Towing start at stands; equals arrival elsewhere.
    pub service_start_min: f64,
    pub departure_min: f64,
    pub soc_arrival_kwh: f64,
    pub soc_departure_kwh: f64,
    pub wait_min: f64,
    pub delay_min: f64,
    pub charge: Option<ChargeEvent>,
}

/// Replay record for one tractor.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteTrace {
    pub visits: Vec<Visit>,
    pub distance_m: f64,
    /// Energy drawn from the battery over the route (kWh), net of
    /// recuperation, before recharges.
    pub energy_kwh: f64,
    /// Lowest state of charge reached anywhere along the route, including
    /// mid-leg troughs before braking recuperation.
    pub min_soc_kwh: f64,
}

/// Objective value split into its four parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    /// Fleet cost: one fixed charge per dispatched tractor.
    pub fixed: f64,
    /// Energy repurchase: charger top-ups plus overnight refill at the depot.
    pub charging: f64,
    /// Mileage maintenance.
    pub maintenance: f64,
    /// Waiting and delay penalties at stands.
    pub time_penalty: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn zero() -> Self {
        CostBreakdown {
            fixed: 0.0,
            charging: 0.0,
            maintenance: 0.0,
            time_penalty: 0.0,
            total: 0.0,
        }
    }

    fn add(&mut self, other: &CostBreakdown) {
        self.fixed += other.fixed;
        self.charging += other.charging;
        self.maintenance += other.maintenance;
        self.time_penalty += other.time_penalty;
        self.total += other.total;
    }
}

/// Reciprocal-cost fitness; strictly positive whenever any tractor runs.
pub fn fitness(cost: &CostBreakdown) -> f64 {
    1.0 / cost.total
}

/// Constraint families a solution can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A stand is visited zero or multiple times across the solution.
    Coverage,
    /// Route not anchored at the depot, or unknown/interior-depot node.
    Structure,
    /// State of charge under the operational floor at a node arrival.
    SocFloor,
    /// State of charge dips under the floor between two nodes.
    SocMidLeg,
    /// Arrival before the window opens (hard-window audits only).
    WindowEarly,
    /// Arrival after the window closes (hard-window audits only).
    WindowLate,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::Coverage => "coverage",
            ViolationKind::Structure => "structure",
            ViolationKind::SocFloor => "soc-floor",
            ViolationKind::SocMidLeg => "soc-mid-leg",
            ViolationKind::WindowEarly => "window-early",
            ViolationKind::WindowLate => "window-late",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub route: usize,
    pub position: usize,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] route {} position {}: {}",
            self.kind.as_str(),
            self.route,
            self.position,
            self.detail
        )
    }
}

/// Window handling: penalties only, or strict audit of both window edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowMode {
    #[default]
    Soft,
    Hard,
}

const SOC_TOL: f64 = 1e-9;

/// Replay one route. The tractor leaves the depot fully charged at clock
/// zero; early stand arrivals idle until the window opens, late ones start
/// immediately. Charger visits top up to `gamma * capacity` unless already
/// above it, in which case they are pass-throughs.
pub fn simulate_route(
    route: &[usize],
    inst: &Instance,
    strategy: &Strategy,
    model: EnergyModel,
) -> Result<RouteTrace, SimError> {
    simulate_route_indexed(route, 0, inst, strategy, model)
}

fn simulate_route_indexed(
    route: &[usize],
    route_index: usize,
    inst: &Instance,
    strategy: &Strategy,
    model: EnergyModel,
) -> Result<RouteTrace, SimError> {
    if route.len() < 2 || route[0] != inst.depot() || *route.last().unwrap() != inst.depot() {
        return Err(SimError::MissingDepotAnchor(route_index));
    }
    for (pos, &node) in route.iter().enumerate() {
        if node >= inst.node_count() {
            return Err(SimError::UnknownNode {
                route: route_index,
                node,
            });
        }
        if node == inst.depot() && pos != 0 && pos != route.len() - 1 {
            return Err(SimError::InteriorDepot {
                route: route_index,
                position: pos,
            });
        }
    }

    let speed = strategy.speed_mps();
    let capacity = inst.vehicle.battery_capacity_kwh;
    let ceiling = strategy.gamma * capacity;
    let mut clock = 0.0;
    let mut soc = capacity;
    let mut distance = 0.0;
    let mut consumed = 0.0;
    let mut min_soc = soc;
    let mut visits = Vec::with_capacity(route.len());

    visits.push(Visit {
        node: route[0],
        arrival_min: 0.0,
        service_start_min: 0.0,
        departure_min: 0.0,
        soc_arrival_kwh: soc,
        soc_departure_kwh: soc,
        wait_min: 0.0,
        delay_min: 0.0,
        charge: None,
    });

    for pair in route.windows(2) {
        let (from, to) = (pair[0], pair[1]);
        let leg = inst.distance(from, to);
        let leg_energy = model.leg_energy(leg, speed, &inst.vehicle)?;
        let trough_drop = model.leg_trough_drop(leg, speed, &inst.vehicle)?;
        min_soc = min_soc.min(soc - trough_drop);
        clock += energy::travel_time(leg, speed, &inst.vehicle);
        soc -= leg_energy;
        min_soc = min_soc.min(soc);
        distance += leg;
        consumed += leg_energy;

        let arrival = clock;
        let soc_arrival = soc;
        let mut service_start = arrival;
        let mut wait = 0.0;
        let mut delay = 0.0;
        let mut charge = None;

        if let Some(flight) = inst.flight_at(to) {
            wait = (flight.window_open_min - arrival).max(0.0);
            delay = (arrival - flight.window_close_min).max(0.0);
            service_start = arrival.max(flight.window_open_min);
            let profile = inst.profile_for(flight.class);
            let service_energy = energy::service_energy(profile, &inst.vehicle)?;
            clock = service_start + energy::service_time(profile, &inst.vehicle);
            soc -= service_energy;
            consumed += service_energy;
            min_soc = min_soc.min(soc);
        } else if inst.is_charger(to) {
            if soc < ceiling {
                let duration = inst.curve.minutes_between(soc.max(0.0), ceiling, capacity);
                charge = Some(ChargeEvent {
                    station_node: to,
                    soc_before_kwh: soc,
                    soc_after_kwh: ceiling,
                    duration_min: duration,
                });
                clock += duration;
                soc = ceiling;
            } else {
                charge = Some(ChargeEvent {
                    station_node: to,
                    soc_before_kwh: soc,
                    soc_after_kwh: soc,
                    duration_min: 0.0,
                });
            }
        }

        visits.push(Visit {
            node: to,
            arrival_min: arrival,
            service_start_min: service_start,
            departure_min: clock,
            soc_arrival_kwh: soc_arrival,
            soc_departure_kwh: soc,
            wait_min: wait,
            delay_min: delay,
            charge,
        });
    }

    Ok(RouteTrace {
        visits,
        distance_m: distance,
        energy_kwh: consumed,
        min_soc_kwh: min_soc,
    })
}

fn coverage_violations(solution: &Solution, inst: &Instance) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut seen = vec![0usize; inst.node_count()];
    for (ri, route) in solution.routes.iter().enumerate() {
        for (pos, &node) in route.iter().enumerate() {
            if node < inst.node_count() && inst.is_stand(node) {
                seen[node] += 1;
                if seen[node] > 1 {
                    violations.push(Violation {
                        kind: ViolationKind::Coverage,
                        route: ri,
                        position: pos,
                        detail: format!("stand node {node} served more than once"),
                    });
                }
            }
        }
    }
    for stand in inst.stand_nodes() {
        if seen[stand] == 0 {
            violations.push(Violation {
                kind: ViolationKind::Coverage,
                route: usize::MAX,
                position: 0,
                detail: format!("stand node {stand} never served"),
            });
        }
    }
    violations
}

/// Check structural, state-of-charge, and (in hard mode) window constraints.
/// Total function: malformed routes become violations rather than errors.
pub fn check_feasibility(
    solution: &Solution,
    inst: &Instance,
    strategy: &Strategy,
    model: EnergyModel,
    windows: WindowMode,
) -> Vec<Violation> {
    let mut violations = coverage_violations(solution, inst);
    if let Some(limit) = inst.fleet_limit {
        let used = solution.tractor_count();
        if used > limit {
            violations.push(Violation {
                kind: ViolationKind::Structure,
                route: usize::MAX,
                position: 0,
                detail: format!("{used} tractors dispatched but the fleet holds {limit}"),
            });
        }
    }
    let floor = inst.vehicle.soc_floor_kwh();
    for (ri, route) in solution.routes.iter().enumerate() {
        if route.len() <= 2 {
            continue;
        }
        let trace = match simulate_route_indexed(route, ri, inst, strategy, model) {
            Ok(trace) => trace,
            Err(err) => {
                violations.push(Violation {
                    kind: ViolationKind::Structure,
                    route: ri,
                    position: 0,
                    detail: err.to_string(),
                });
                continue;
            }
        };
        for (pos, visit) in trace.visits.iter().enumerate() {
            if visit.soc_arrival_kwh < floor - SOC_TOL {
                violations.push(Violation {
                    kind: ViolationKind::SocFloor,
                    route: ri,
                    position: pos,
                    detail: format!(
                        "arrived at node {} with {:.3} kWh, floor is {floor} kWh",
                        visit.node, visit.soc_arrival_kwh
                    ),
                });
            }
            if windows == WindowMode::Hard {
                if visit.wait_min > 0.0 {
                    violations.push(Violation {
                        kind: ViolationKind::WindowEarly,
                        route: ri,
                        position: pos,
                        detail: format!(
                            "node {}: arrived {:.2} min before the window opens",
                            visit.node, visit.wait_min
                        ),
                    });
                }
                if visit.delay_min > 0.0 {
                    violations.push(Violation {
                        kind: ViolationKind::WindowLate,
                        route: ri,
                        position: pos,
                        detail: format!(
                            "node {}: arrived {:.2} min after the window closes",
                            visit.node, visit.delay_min
                        ),
                    });
                }
            }
        }
        if trace.min_soc_kwh < floor - SOC_TOL {
            let arrival_min = trace
                .visits
                .iter()
                .map(|v| v.soc_arrival_kwh)
                .fold(f64::INFINITY, f64::min);
            if trace.min_soc_kwh < arrival_min - SOC_TOL {
                violations.push(Violation {
                    kind: ViolationKind::SocMidLeg,
                    route: ri,
                    position: 0,
                    detail: format!(
                        "state of charge dips to {:.3} kWh between nodes",
                        trace.min_soc_kwh
                    ),
                });
            }
        }
    }
    violations
}

/// Evaluate a structurally valid solution: per-route traces plus the summed
/// cost breakdown. Empty routes are pruned before the fixed cost is applied.
pub fn evaluate(
    solution: &Solution,
    inst: &Instance,
    strategy: &Strategy,
    model: EnergyModel,
) -> Result<(CostBreakdown, Vec<RouteTrace>), SimError> {
    let normalized = solution.normalized();
    let coverage = coverage_violations(&normalized, inst);
    if !coverage.is_empty() {
        return Err(SimError::Coverage(coverage[0].detail.clone()));
    }
    let mut total = CostBreakdown::zero();
    let mut traces = Vec::with_capacity(normalized.routes.len());
    for (ri, route) in normalized.routes.iter().enumerate() {
        let trace = simulate_route_indexed(route, ri, inst, strategy, model)?;
        total.add(&route_cost(&trace, inst));
        traces.push(trace);
    }
    Ok((total, traces))
}

/// Cost of one replayed route under the instance rates.
pub fn route_cost(trace: &RouteTrace, inst: &Instance) -> CostBreakdown {
    let rates = &inst.rates;
    let capacity = inst.vehicle.battery_capacity_kwh;
    let fixed = rates.fixed_per_tractor;
    let top_ups: f64 = trace
        .visits
        .iter()
        .filter_map(|v| v.charge.as_ref())
        .map(ChargeEvent::top_up_kwh)
        .sum();
    let final_soc = trace
        .visits
        .last()
        .map(|v| v.soc_arrival_kwh)
        .unwrap_or(capacity);
    let charging = rates.per_kwh * (top_ups + (capacity - final_soc));
    let maintenance = rates.per_meter * trace.distance_m;
    let time_penalty: f64 = trace
        .visits
        .iter()
        .map(|v| rates.wait_per_min * v.wait_min + rates.delay_per_min * v.delay_min)
        .sum();
    CostBreakdown {
        fixed,
        charging,
        maintenance,
        time_penalty,
        total: fixed + charging + maintenance + time_penalty,
    }
}

/// Four-part objective of a solution.
pub fn total_cost(
    solution: &Solution,
    inst: &Instance,
    strategy: &Strategy,
    model: EnergyModel,
) -> Result<CostBreakdown, SimError> {
    evaluate(solution, inst, strategy, model).map(|(cost, _)| cost)
}
