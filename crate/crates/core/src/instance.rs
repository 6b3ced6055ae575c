//! Problem world: node graph, flights, cost rates, coupling strategies,
//! synthetic scenario generation, file round-tripping, and fleet-scale
//! forecasting.

use crate::charging::ChargingCurve;
use crate::energy::{AircraftClass, AircraftServiceProfile, VehicleParams};
use crate::stn;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("flight count must be at least 1")]
    NoFlights,
    #[error("stand-time capacity exceeded: no stand free for flight arriving at {0} min")]
    CapacityExceeded(f64),
    #[error("window derivation failed: {0}")]
    Window(#[from] stn::StnError),
    #[error("instance file error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported schema version: {0}")]
    SchemaVersion(String),
    #[error("invalid instance: {0:?}")]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Depot,
    Stand,
    Charger,
}

impl NodeKind {
    fn as_str(&self) -> &'static str {
        match self {
            NodeKind::Depot => "depot",
            NodeKind::Stand => "stand",
            NodeKind::Charger => "charger",
        }
    }
}

/// Graph node. Stands are per-flight: two flights parked at the same
/// physical position get distinct stand nodes and share a `stand_group`.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    pub x_m: f64,
    pub y_m: f64,
    pub stand_group: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flight {
    pub id: u32,
    pub stand_node: usize,
    pub class: AircraftClass,
    /// Minutes from midnight of the operating day.
    pub scheduled_arrival_min: f64,
    pub scheduled_departure_min: f64,
    /// Towing window: earliest and latest admissible tractor arrival.
    pub window_open_min: f64,
    pub window_close_min: f64,
}

/// Unit cost rates of the four objective parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CostRates {
    pub fixed_per_tractor: f64,
    pub per_kwh: f64,
    pub per_meter: f64,
    pub wait_per_min: f64,
    pub delay_per_min: f64,
}

impl Default for CostRates {
    fn default() -> Self {
        CostRates {
            fixed_per_tractor: 50.0,
            per_kwh: 0.2,
            per_meter: 0.005,
            wait_per_min: 0.1,
            delay_per_min: 0.5,
        }
    }
}

impl CostRates {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("fixed_per_tractor", self.fixed_per_tractor),
            ("per_kwh", self.per_kwh),
            ("per_meter", self.per_meter),
            ("wait_per_min", self.wait_per_min),
            ("delay_per_min", self.delay_per_min),
        ] {
            if !(v >= 0.0) {
                return Err(format!("cost rate {name} must be nonnegative"));
            }
        }
        Ok(())
    }
}

/// Speed limit imposed on apron service vehicles (km/h).
pub const MAX_SPEED_KMH: f64 = 25.0;

/// Pacing levels evaluated by default.
pub const DEFAULT_SPEEDS_KMH: [f64; 5] = [5.0, 10.0, 15.0, 20.0, 25.0];

/// Charge ceilings evaluated by default: low, mid, high.
pub const DEFAULT_GAMMAS: [f64; 3] = [0.8, 0.9, 1.0];

/// One charge-discharge coupling cell: the fleet-wide maximum travel speed
/// paired with the maximum charge threshold coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    pub speed_kmh: f64,
    pub gamma: f64,
}

impl Strategy {
    pub fn new(speed_kmh: f64, gamma: f64) -> Result<Self, String> {
        let s = Strategy { speed_kmh, gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.speed_kmh > 0.0 && self.speed_kmh <= MAX_SPEED_KMH) {
            return Err(format!(
                "speed {} km/h outside (0, {MAX_SPEED_KMH}]",
                self.speed_kmh
            ));
        }
        if !(self.gamma > 0.2 && self.gamma <= 1.0) {
            return Err(format!("gamma {} outside (0.2, 1]", self.gamma));
        }
        Ok(())
    }

    pub fn speed_mps(&self) -> f64 {
        self.speed_kmh / 3.6
    }
}

/// Immutable problem instance; safe to share across solver threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub layout: Option<Layout>,
    pub seed: Option<u64>,
    pub nodes: Vec<Node>,
    /// Flattened row-major distance matrix (m).
    distances: Vec<f64>,
    /// True when the matrix is derived from node positions.
    euclidean: bool,
    pub flights: Vec<Flight>,
    pub vehicle: VehicleParams,
    pub curve: ChargingCurve,
    pub rates: CostRates,
    pub aircraft: Vec<AircraftServiceProfile>,
    pub fleet_limit: Option<usize>,
    /// Flight index per node id; the simulator resolves stands on every
    /// visit, so this stays O(1).
    flight_by_node: Vec<Option<u32>>,
}

impl Instance {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn distance(&self, from: usize, to: usize) -> f64 {
        self.distances[from * self.nodes.len() + to]
    }

    pub fn depot(&self) -> usize {
        0
    }

    pub fn stand_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Stand)
            .map(|n| n.id)
    }

    pub fn charger_nodes(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Charger)
            .map(|n| n.id)
            .collect()
    }

    pub fn is_charger(&self, node: usize) -> bool {
        self.nodes
            .get(node)
            .is_some_and(|n| n.kind == NodeKind::Charger)
    }

    pub fn is_stand(&self, node: usize) -> bool {
        self.nodes
            .get(node)
            .is_some_and(|n| n.kind == NodeKind::Stand)
    }

    /// Flight parked at a stand node.
    pub fn flight_at(&self, stand_node: usize) -> Option<&Flight> {
        self.flight_by_node
            .get(stand_node)
            .copied()
            .flatten()
            .map(|i| &self.flights[i as usize])
    }

    pub fn profile_for(&self, class: AircraftClass) -> &AircraftServiceProfile {
        self.aircraft
            .iter()
            .find(|p| p.class == class)
            .expect("aircraft table covers all classes")
    }

    /// Charger node minimizing the distance from `from`.
    pub fn nearest_charger(&self, from: usize) -> Option<usize> {
        self.charger_nodes().into_iter().min_by(|&a, &b| {
            self.distance(from, a)
                .partial_cmp(&self.distance(from, b))
                .unwrap()
                .then(a.cmp(&b))
        })
    }

    fn from_parts(
        name: String,
        layout: Option<Layout>,
        seed: Option<u64>,
        nodes: Vec<Node>,
        explicit_distances: Option<Vec<f64>>,
        flights: Vec<Flight>,
        vehicle: VehicleParams,
        curve: ChargingCurve,
        rates: CostRates,
        aircraft: Vec<AircraftServiceProfile>,
        fleet_limit: Option<usize>,
    ) -> Instance {
        let n = nodes.len();
        let euclidean = explicit_distances.is_none();
        let distances = explicit_distances.unwrap_or_else(|| {
            let mut d = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let dx = nodes[i].x_m - nodes[j].x_m;
                    let dy = nodes[i].y_m - nodes[j].y_m;
                    d[i * n + j] = (dx * dx + dy * dy).sqrt();
                }
            }
            d
        });
        let mut flight_by_node = vec![None; n];
        for (idx, flight) in flights.iter().enumerate() {
            if flight.stand_node < n {
                flight_by_node[flight.stand_node] = Some(idx as u32);
            }
        }
        Instance {
            name,
            layout,
            seed,
            nodes,
            distances,
            euclidean,
            flights,
            vehicle,
            curve,
            rates,
            aircraft,
            fleet_limit,
            flight_by_node,
        }
    }

    /// Build an instance from nodes and flights with default physics, curve,
    /// and rates. Intended for fixtures and tests.
    pub fn from_layout(name: &str, nodes: Vec<Node>, flights: Vec<Flight>) -> Instance {
        Instance::from_parts(
            name.to_string(),
            None,
            None,
            nodes,
            None,
            flights,
            VehicleParams::default_tractor(),
            ChargingCurve::default(),
            CostRates::default(),
            AircraftClass::ALL
                .iter()
                .map(|&c| AircraftServiceProfile::for_class(c))
                .collect(),
            None,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Finger-pier terminal: few close stands, many remote, dispersed.
    Scenario1Like,
    /// Front-row terminal: many close stands, few remote, dense.
    Scenario2Like,
}

impl Layout {
    pub fn as_str(&self) -> &'static str {
        match self {
            Layout::Scenario1Like => "scenario1",
            Layout::Scenario2Like => "scenario2",
        }
    }

    pub fn parse(s: &str) -> Option<Layout> {
        match s {
            "scenario1" | "scenario-1" | "s1" => Some(Layout::Scenario1Like),
            "scenario2" | "scenario-2" | "s2" => Some(Layout::Scenario2Like),
            _ => None,
        }
    }

    /// Published road-network extent (m) the raw layout is scaled to.
    fn extent_m(&self) -> f64 {
        match self {
            Layout::Scenario1Like => 4210.0,
            Layout::Scenario2Like => 3480.0,
        }
    }

    /// Raw stand centers, charger positions, and depot in layout units.
    fn geometry(&self) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
        match self {
            Layout::Scenario1Like => {
                let mut stands = Vec::new();
                // two finger piers, 9 close stands each
                for k in 0..9 {
                    stands.push((5.0 + 2.4 * k as f64, 4.5));
                }
                for k in 0..9 {
                    stands.push((5.0 + 2.4 * k as f64, -4.5));
                }
                // remote apron, two rows of 12
                for j in 0..12 {
                    stands.push((27.0 + 2.4 * j as f64, 2.2));
                }
                for j in 0..12 {
                    stands.push((27.0 + 2.4 * j as f64, -2.2));
                }
                let chargers = vec![(8.0, 0.0), (20.0, 0.0), (40.0, 0.0)];
                (stands, chargers)
            }
            Layout::Scenario2Like => {
                let mut stands = Vec::new();
                // front row, two tight rows: 16 + 15 close stands
                for k in 0..16 {
                    stands.push((4.0 + 2.4 * k as f64, 3.0));
                }
                for k in 0..15 {
                    stands.push((5.2 + 2.4 * k as f64, 5.4));
                }
                // small remote cluster
                for j in 0..8 {
                    stands.push((30.0 + 2.4 * j as f64, -3.5));
                }
                let chargers = vec![(10.0, 0.0), (32.0, 0.0)];
                (stands, chargers)
            }
        }
    }
}

/// Ring radius (m) for per-flight nodes around a shared stand center; keeps
/// all inter-node distances above the speed-envelope minimum.
const STAND_RING_M: f64 = 55.0;
const MAX_FLIGHTS_PER_STAND: usize = 5;

/// Deterministic synthetic instance for a scenario layout.
///
/// Stand positions are statistical look-alikes of the scenario's dispersion
/// character, scaled so the largest pairwise distance matches the published
/// network extent. Flights are drawn with peak/off-peak banding, assigned to
/// stands without ground-time overlap, and their towing windows derived from
/// the default turnaround template.
pub fn generate_instance(
    seed: u64,
    layout: Layout,
    n_flights: usize,
) -> Result<Instance, InstanceError> {
    if n_flights == 0 {
        return Err(InstanceError::NoFlights);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (raw_stands, raw_chargers) = layout.geometry();

    // scale so the maximum pairwise distance over depot/stands/chargers
    // equals the published extent
    let mut points = vec![(0.0, 0.0)];
    points.extend(&raw_stands);
    points.extend(&raw_chargers);
    let mut max_pair: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d =
                ((points[i].0 - points[j].0).powi(2) + (points[i].1 - points[j].1).powi(2)).sqrt();
            max_pair = max_pair.max(d);
        }
    }
    let scale = layout.extent_m() / max_pair;
    let stand_centers: Vec<(f64, f64)> = raw_stands
        .iter()
        .map(|&(x, y)| (x * scale, y * scale))
        .collect();
    let charger_positions: Vec<(f64, f64)> = raw_chargers
        .iter()
        .map(|&(x, y)| (x * scale, y * scale))
        .collect();

    // flight times with peak/off-peak banding
    #[derive(Clone)]
    struct Draft {
        arrival: f64,
        transit: i64,
        class: AircraftClass,
    }
    let mut drafts = Vec::with_capacity(n_flights);
    for _ in 0..n_flights {
        let in_peak = rng.random::<f64>() < 0.6;
        let arrival = if in_peak {
            if rng.random::<f64>() < 0.5 {
                rng.random_range(450..=570)
            } else {
                rng.random_range(1050..=1170)
            }
        } else {
            rng.random_range(300..=1260)
        } as f64;
        let transit = if in_peak {
            rng.random_range(45..=90)
        } else {
            rng.random_range(60..=180)
        };
        let roll = rng.random::<f64>();
        let class = if roll < 0.70 {
            AircraftClass::Medium
        } else if roll < 0.95 {
            AircraftClass::Heavy
        } else {
            AircraftClass::SuperHeavy
        };
        drafts.push(Draft {
            arrival,
            transit,
            class,
        });
    }
    drafts.sort_by(|a, b| {
        a.arrival
            .partial_cmp(&b.arrival)
            .unwrap()
            .then(a.transit.cmp(&b.transit))
    });

    // assign stands: no two flights may overlap on one physical stand, and a
    // stand ring holds at most MAX_FLIGHTS_PER_STAND per-flight nodes
    let mut occupancy: Vec<Vec<(f64, f64)>> = vec![Vec::new(); stand_centers.len()];
    let template = stn::default_template();
    let mut flights = Vec::with_capacity(n_flights);
    let mut stand_nodes = Vec::with_capacity(n_flights);
    let mut stand_order: Vec<usize> = (0..stand_centers.len()).collect();
    for (idx, draft) in drafts.iter().enumerate() {
        let departure = draft.arrival + draft.transit as f64;
        stand_order.shuffle(&mut rng);
        let slot = stand_order
            .iter()
            .copied()
            .find(|&s| {
                occupancy[s].len() < MAX_FLIGHTS_PER_STAND
                    && occupancy[s]
                        .iter()
                        .all(|&(a, d)| departure <= a || draft.arrival >= d)
            })
            .ok_or(InstanceError::CapacityExceeded(draft.arrival))?;
        let ring_slot = occupancy[slot].len();
        occupancy[slot].push((draft.arrival, departure));

        let angle = 0.7 * slot as f64
            + ring_slot as f64 * std::f64::consts::TAU / MAX_FLIGHTS_PER_STAND as f64;
        let (cx, cy) = stand_centers[slot];
        let node_id = 1 + idx;
        stand_nodes.push(Node {
            id: node_id,
            kind: NodeKind::Stand,
            x_m: cx + STAND_RING_M * angle.cos(),
            y_m: cy + STAND_RING_M * angle.sin(),
            stand_group: Some(slot as u32),
        });

        let (open, close) = stn::derive_window(draft.transit, &template, draft.arrival)?;
        flights.push(Flight {
            id: idx as u32,
            stand_node: node_id,
            class: draft.class,
            scheduled_arrival_min: draft.arrival,
            scheduled_departure_min: departure,
            window_open_min: open,
            window_close_min: close,
        });
    }

    let mut nodes = vec![Node {
        id: 0,
        kind: NodeKind::Depot,
        x_m: 0.0,
        y_m: 0.0,
        stand_group: None,
    }];
    nodes.extend(stand_nodes);
    for (k, &(x, y)) in charger_positions.iter().enumerate() {
        nodes.push(Node {
            id: 1 + n_flights + k,
            kind: NodeKind::Charger,
            x_m: x,
            y_m: y,
            stand_group: None,
        });
    }

    let instance = Instance::from_parts(
        format!("{}-seed{}-f{}", layout.as_str(), seed, n_flights),
        Some(layout),
        Some(seed),
        nodes,
        None,
        flights,
        VehicleParams::default_tractor(),
        ChargingCurve::default(),
        CostRates::default(),
        AircraftClass::ALL
            .iter()
            .map(|&c| AircraftServiceProfile::for_class(c))
            .collect(),
        None,
    );
    let violations = validate_instance(&instance);
    if !violations.is_empty() {
        return Err(InstanceError::Invalid(violations));
    }
    Ok(instance)
}

/// Copy of an instance keeping only the first `keep` chargers. Node ids
/// stay dense because chargers occupy the tail of the id range; distances
/// are recomputed from positions.
pub fn truncate_chargers(inst: &Instance, keep: usize) -> Instance {
    let nodes: Vec<Node> = inst
        .nodes
        .iter()
        .filter(|n| n.kind != NodeKind::Charger)
        .chain(
            inst.nodes
                .iter()
                .filter(|n| n.kind == NodeKind::Charger)
                .take(keep),
        )
        .cloned()
        .collect();
    Instance::from_parts(
        inst.name.clone(),
        inst.layout,
        inst.seed,
        nodes,
        None,
        inst.flights.clone(),
        inst.vehicle.clone(),
        inst.curve.clone(),
        inst.rates.clone(),
        inst.aircraft.clone(),
        inst.fleet_limit,
    )
}

/// Check every structural invariant; returns an empty list when valid.
pub fn validate_instance(inst: &Instance) -> Vec<String> {
    let mut violations = Vec::new();
    let n = inst.nodes.len();
    if n == 0 {
        return vec!["instance has no nodes".into()];
    }
    for (i, node) in inst.nodes.iter().enumerate() {
        if node.id != i {
            violations.push(format!(
                "node ids must be dense; index {i} holds id {}",
                node.id
            ));
        }
    }
    let depot_count = inst
        .nodes
        .iter()
        .filter(|nd| nd.kind == NodeKind::Depot)
        .count();
    if depot_count != 1 {
        violations.push(format!("expected exactly one depot, found {depot_count}"));
    }
    if inst.nodes[0].kind != NodeKind::Depot {
        violations.push("node 0 must be the depot".into());
    }

    let stand_count = inst.stand_nodes().count();
    if stand_count != inst.flights.len() {
        violations.push(format!(
            "stand nodes ({stand_count}) must match flight count ({})",
            inst.flights.len()
        ));
    }
    let mut served = HashMap::new();
    for f in &inst.flights {
        if !inst.is_stand(f.stand_node) {
            violations.push(format!(
                "flight {} references non-stand node {}",
                f.id, f.stand_node
            ));
            continue;
        }
        if let Some(prev) = served.insert(f.stand_node, f.id) {
            violations.push(format!(
                "stand node {} claimed by flights {prev} and {}",
                f.stand_node, f.id
            ));
        }
        if f.window_open_min > f.window_close_min {
            violations.push(format!(
                "flight {} window opens at {} after closing at {}",
                f.id, f.window_open_min, f.window_close_min
            ));
        }
        if f.scheduled_arrival_min >= f.scheduled_departure_min {
            violations.push(format!("flight {} has nonpositive transit", f.id));
        }
    }

    for i in 0..n {
        if inst.distance(i, i) != 0.0 {
            violations.push(format!("distance diagonal at node {i} must be zero"));
        }
        for j in 0..n {
            let d = inst.distance(i, j);
            if !(d >= 0.0) || !d.is_finite() {
                violations.push(format!(
                    "distance {i}->{j} is {d}; nodes must stay reachable"
                ));
            }
        }
    }

    // one aircraft on a physical stand at a time
    let mut by_group: HashMap<u32, Vec<(f64, f64, u32)>> = HashMap::new();
    for f in &inst.flights {
        if let Some(group) = inst.nodes.get(f.stand_node).and_then(|nd| nd.stand_group) {
            by_group.entry(group).or_default().push((
                f.scheduled_arrival_min,
                f.scheduled_departure_min,
                f.id,
            ));
        }
    }
    for (group, mut spans) in by_group {
        spans.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for pair in spans.windows(2) {
            if pair[1].0 < pair[0].1 {
                violations.push(format!(
                    "stand group {group}: flights {} and {} overlap in ground time",
                    pair[0].2, pair[1].2
                ));
            }
        }
    }

    if let Err(e) = inst.vehicle.validate() {
        violations.push(format!("vehicle params: {e}"));
    }
    if let Err(e) = inst.curve.validate() {
        violations.push(format!("charging curve: {e}"));
    }
    if let Err(e) = inst.rates.validate() {
        violations.push(e);
    }
    for class in AircraftClass::ALL {
        if !inst.aircraft.iter().any(|p| p.class == class) {
            violations.push(format!("aircraft table missing class {}", class.as_str()));
        }
    }
    violations
}

/// Growth rates used by the fleet-scale forecast.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastRates {
    /// Pre-pandemic annual flight growth rate.
    pub normal_growth: f64,
    /// Initial post-relaxation recovery rate, terminal 1.
    pub recovery_t1: f64,
    /// Initial post-relaxation recovery rate, terminal 2.
    pub recovery_t2: f64,
    /// Annual decrease of the recovery rate.
    pub recovery_decay: f64,
    /// Growth rate once a terminal saturates.
    pub saturated_growth: f64,
}

impl Default for ForecastRates {
    fn default() -> Self {
        ForecastRates {
            normal_growth: 0.14,
            recovery_t1: 0.12,
            recovery_t2: 0.30,
            recovery_decay: 0.06,
            saturated_growth: 0.07,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forecast {
    pub t1_short: f64,
    pub t2_short: f64,
    pub t1_mid: f64,
    pub t2_mid: f64,
}

/// Project the two terminals' flight scales three and five years out.
///
/// Terminal 1 saturates after one recovery year and then grows at the
/// saturated rate; terminal 2 recovers with a decaying rate, then absorbs
/// terminal 1's overflow in the mid term.
pub fn forecast_flights(t1_current: f64, t2_current: f64, rates: &ForecastRates) -> Forecast {
    let t1_short = t1_current
        * (1.0 + rates.recovery_t1)
        * (1.0 + rates.saturated_growth)
        * (1.0 + rates.saturated_growth);
    let t2_short = t2_current
        * (1.0 + rates.recovery_t2)
        * (1.0 + rates.recovery_t2 - rates.recovery_decay)
        * (1.0 + rates.recovery_t2 - 2.0 * rates.recovery_decay);
    let t1_mid = t1_short * (1.0 + rates.saturated_growth).powi(2);
    let t2_mid = t2_short * (1.0 + rates.normal_growth).powi(2)
        + t1_short * (1.0 + rates.normal_growth).powi(2)
        - t1_mid;
    Forecast {
        t1_short,
        t2_short,
        t1_mid,
        t2_mid,
    }
}

/// Round a forecast value to the nearest ten, for scenario sizing.
pub fn round_to_ten(value: f64) -> u64 {
    ((value / 10.0).round() * 10.0) as u64
}

// ---------------------------------------------------------------------------
// instance file format

const SCHEMA_HEADER: &str = "# evtow instance v1";

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

/// Render an instance in its schema-versioned text form. Saving a loaded
/// file reproduces it byte for byte.
pub fn format_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SCHEMA_HEADER}");
    let _ = writeln!(out, "[meta]");
    let _ = writeln!(out, "name = {}", inst.name);
    let _ = writeln!(
        out,
        "layout = {}",
        inst.layout.map_or("custom", |l| l.as_str())
    );
    let _ = writeln!(
        out,
        "seed = {}",
        inst.seed.map_or("none".to_string(), |s| s.to_string())
    );
    let _ = writeln!(
        out,
        "fleet_limit = {}",
        inst.fleet_limit
            .map_or("none".to_string(), |s| s.to_string())
    );
    let v = &inst.vehicle;
    let _ = writeln!(out, "[vehicle]");
    for (key, value) in [
        ("rolling_friction", v.rolling_friction),
        ("mass_kg", v.mass_kg),
        ("gravity", v.gravity),
        ("air_density", v.air_density),
        ("frontal_area_m2", v.frontal_area_m2),
        ("drag_coeff", v.drag_coeff),
        ("travel_accel_mps2", v.travel_accel),
        ("towing_accel_mps2", v.towing_accel),
        ("towing_speed_mps", v.towing_speed),
        ("towing_distance_m", v.towing_distance_m),
        ("motor_out_eff", v.motor_out_eff),
        ("motor_in_eff", v.motor_in_eff),
        ("battery_out_eff", v.battery_out_eff),
        ("battery_in_eff", v.battery_in_eff),
        ("battery_capacity_kwh", v.battery_capacity_kwh),
    ] {
        let _ = writeln!(out, "{key} = {}", fmt_f(value));
    }
    let _ = writeln!(out, "[charging]");
    for (key, value) in [
        ("rate1_kwh_per_min", inst.curve.rates_kwh_per_min[0]),
        ("rate2_kwh_per_min", inst.curve.rates_kwh_per_min[1]),
        ("rate3_kwh_per_min", inst.curve.rates_kwh_per_min[2]),
        ("break1_frac", inst.curve.break_fractions[0]),
        ("break2_frac", inst.curve.break_fractions[1]),
    ] {
        let _ = writeln!(out, "{key} = {}", fmt_f(value));
    }
    let _ = writeln!(out, "[costs]");
    for (key, value) in [
        ("fixed_per_tractor", inst.rates.fixed_per_tractor),
        ("per_kwh", inst.rates.per_kwh),
        ("per_meter", inst.rates.per_meter),
        ("wait_per_min", inst.rates.wait_per_min),
        ("delay_per_min", inst.rates.delay_per_min),
    ] {
        let _ = writeln!(out, "{key} = {}", fmt_f(value));
    }
    let _ = writeln!(out, "[aircraft]");
    let _ = writeln!(
        out,
        "# class mass_kg air_kw air_min lighting_kw lighting_min launch_kw launch_min"
    );
    for p in &inst.aircraft {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {}",
            p.class.as_str(),
            fmt_f(p.mass_kg),
            fmt_f(p.air_kw),
            fmt_f(p.air_min),
            fmt_f(p.lighting_kw),
            fmt_f(p.lighting_min),
            fmt_f(p.launch_kw),
            fmt_f(p.launch_min),
        );
    }
    let _ = writeln!(out, "[nodes]");
    let _ = writeln!(out, "# id kind x_m y_m stand_group");
    for node in &inst.nodes {
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            node.id,
            node.kind.as_str(),
            fmt_f(node.x_m),
            fmt_f(node.y_m),
            node.stand_group.map_or("-".to_string(), |g| g.to_string())
        );
    }
    let _ = writeln!(out, "[flights]");
    let _ = writeln!(
        out,
        "# id stand_node class arrival_min departure_min window_open_min window_close_min"
    );
    for f in &inst.flights {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {}",
            f.id,
            f.stand_node,
            f.class.as_str(),
            fmt_f(f.scheduled_arrival_min),
            fmt_f(f.scheduled_departure_min),
            fmt_f(f.window_open_min),
            fmt_f(f.window_close_min),
        );
    }
    if !inst.euclidean {
        let _ = writeln!(out, "[distances]");
        let _ = writeln!(out, "# from to meters");
        let n = inst.nodes.len();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let _ = writeln!(out, "{i} {j} {}", fmt_f(inst.distance(i, j)));
                }
            }
        }
    }
    out
}

/// Parse the text form produced by [`format_instance`].
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != SCHEMA_HEADER {
        return Err(InstanceError::SchemaVersion(header.to_string()));
    }

    let mut section = String::new();
    let mut meta: HashMap<String, String> = HashMap::new();
    let mut vehicle_kv: HashMap<String, f64> = HashMap::new();
    let mut charging_kv: HashMap<String, f64> = HashMap::new();
    let mut costs_kv: HashMap<String, f64> = HashMap::new();
    let mut aircraft = Vec::new();
    let mut nodes = Vec::new();
    let mut flights = Vec::new();
    let mut distance_rows: Vec<(usize, usize, f64)> = Vec::new();
    let mut has_distances = false;

    let bad = |line: usize, msg: &str| InstanceError::Format(format!("line {}: {msg}", line + 2));

    for (ln, raw) in lines.enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            section = name.trim_end_matches(']').to_string();
            if section == "distances" {
                has_distances = true;
            }
            continue;
        }
        match section.as_str() {
            "meta" => {
                let (k, val) = line
                    .split_once('=')
                    .ok_or_else(|| bad(ln, "expected key = value"))?;
                meta.insert(k.trim().to_string(), val.trim().to_string());
            }
            "vehicle" | "charging" | "costs" => {
                let (k, val) = line
                    .split_once('=')
                    .ok_or_else(|| bad(ln, "expected key = value"))?;
                let value: f64 = val
                    .trim()
                    .parse()
                    .map_err(|_| bad(ln, "expected a number"))?;
                let map = match section.as_str() {
                    "vehicle" => &mut vehicle_kv,
                    "charging" => &mut charging_kv,
                    _ => &mut costs_kv,
                };
                map.insert(k.trim().to_string(), value);
            }
            "aircraft" => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 8 {
                    return Err(bad(ln, "aircraft row needs 8 fields"));
                }
                let class = AircraftClass::parse(fields[0])
                    .ok_or_else(|| bad(ln, "unknown aircraft class"))?;
                let nums: Result<Vec<f64>, _> = fields[1..].iter().map(|s| s.parse()).collect();
                let nums = nums.map_err(|_| bad(ln, "expected numbers"))?;
                aircraft.push(AircraftServiceProfile {
                    class,
                    mass_kg: nums[0],
                    air_kw: nums[1],
                    air_min: nums[2],
                    lighting_kw: nums[3],
                    lighting_min: nums[4],
                    launch_kw: nums[5],
                    launch_min: nums[6],
                });
            }
            "nodes" => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 5 {
                    return Err(bad(ln, "node row needs 5 fields"));
                }
                let kind = match fields[1] {
                    "depot" => NodeKind::Depot,
                    "stand" => NodeKind::Stand,
                    "charger" => NodeKind::Charger,
                    other => return Err(bad(ln, &format!("unknown node kind {other}"))),
                };
                nodes.push(Node {
                    id: fields[0].parse().map_err(|_| bad(ln, "bad node id"))?,
                    kind,
                    x_m: fields[2].parse().map_err(|_| bad(ln, "bad x"))?,
                    y_m: fields[3].parse().map_err(|_| bad(ln, "bad y"))?,
                    stand_group: if fields[4] == "-" {
                        None
                    } else {
                        Some(fields[4].parse().map_err(|_| bad(ln, "bad stand group"))?)
                    },
                });
            }
            "flights" => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 7 {
                    return Err(bad(ln, "flight row needs 7 fields"));
                }
                flights.push(Flight {
                    id: fields[0].parse().map_err(|_| bad(ln, "bad flight id"))?,
                    stand_node: fields[1].parse().map_err(|_| bad(ln, "bad stand node"))?,
                    class: AircraftClass::parse(fields[2])
                        .ok_or_else(|| bad(ln, "unknown aircraft class"))?,
                    scheduled_arrival_min: fields[3].parse().map_err(|_| bad(ln, "bad arrival"))?,
                    scheduled_departure_min: fields[4]
                        .parse()
                        .map_err(|_| bad(ln, "bad departure"))?,
                    window_open_min: fields[5].parse().map_err(|_| bad(ln, "bad window open"))?,
                    window_close_min: fields[6].parse().map_err(|_| bad(ln, "bad window close"))?,
                });
            }
            "distances" => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(bad(ln, "distance row needs 3 fields"));
                }
                distance_rows.push((
                    fields[0].parse().map_err(|_| bad(ln, "bad from id"))?,
                    fields[1].parse().map_err(|_| bad(ln, "bad to id"))?,
                    fields[2].parse().map_err(|_| bad(ln, "bad distance"))?,
                ));
            }
            other => {
                return Err(InstanceError::Format(format!("unknown section [{other}]")));
            }
        }
    }

    let get = |map: &HashMap<String, f64>, key: &str| -> Result<f64, InstanceError> {
        map.get(key)
            .copied()
            .ok_or_else(|| InstanceError::Format(format!("missing key {key}")))
    };
    let vehicle = VehicleParams {
        rolling_friction: get(&vehicle_kv, "rolling_friction")?,
        mass_kg: get(&vehicle_kv, "mass_kg")?,
        gravity: get(&vehicle_kv, "gravity")?,
        air_density: get(&vehicle_kv, "air_density")?,
        frontal_area_m2: get(&vehicle_kv, "frontal_area_m2")?,
        drag_coeff: get(&vehicle_kv, "drag_coeff")?,
        travel_accel: get(&vehicle_kv, "travel_accel_mps2")?,
        towing_accel: get(&vehicle_kv, "towing_accel_mps2")?,
        towing_speed: get(&vehicle_kv, "towing_speed_mps")?,
        towing_distance_m: get(&vehicle_kv, "towing_distance_m")?,
        motor_out_eff: get(&vehicle_kv, "motor_out_eff")?,
        motor_in_eff: get(&vehicle_kv, "motor_in_eff")?,
        battery_out_eff: get(&vehicle_kv, "battery_out_eff")?,
        battery_in_eff: get(&vehicle_kv, "battery_in_eff")?,
        battery_capacity_kwh: get(&vehicle_kv, "battery_capacity_kwh")?,
    };
    let curve = ChargingCurve {
        rates_kwh_per_min: [
            get(&charging_kv, "rate1_kwh_per_min")?,
            get(&charging_kv, "rate2_kwh_per_min")?,
            get(&charging_kv, "rate3_kwh_per_min")?,
        ],
        break_fractions: [
            get(&charging_kv, "break1_frac")?,
            get(&charging_kv, "break2_frac")?,
        ],
    };
    let rates = CostRates {
        fixed_per_tractor: get(&costs_kv, "fixed_per_tractor")?,
        per_kwh: get(&costs_kv, "per_kwh")?,
        per_meter: get(&costs_kv, "per_meter")?,
        wait_per_min: get(&costs_kv, "wait_per_min")?,
        delay_per_min: get(&costs_kv, "delay_per_min")?,
    };

    let name = meta
        .get("name")
        .cloned()
        .ok_or_else(|| InstanceError::Format("missing meta name".into()))?;
    let layout = meta.get("layout").and_then(|s| Layout::parse(s));
    let seed = meta.get("seed").and_then(|s| s.parse().ok());
    let fleet_limit = match meta.get("fleet_limit").map(String::as_str) {
        None | Some("none") => None,
        Some(v) => Some(
            v.parse()
                .map_err(|_| InstanceError::Format("bad fleet_limit".into()))?,
        ),
    };

    let explicit = if has_distances {
        let n = nodes.len();
        let mut d = vec![0.0; n * n];
        for (from, to, meters) in distance_rows {
            if from >= n || to >= n {
                return Err(InstanceError::Format(format!(
                    "distance row references unknown node {from}->{to}"
                )));
            }
            d[from * n + to] = meters;
        }
        Some(d)
    } else {
        None
    };

    Ok(Instance::from_parts(
        name,
        layout,
        seed,
        nodes,
        explicit,
        flights,
        vehicle,
        curve,
        rates,
        aircraft,
        fleet_limit,
    ))
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<(), InstanceError> {
    std::fs::write(path, format_instance(inst))?;
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<Instance, InstanceError> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}
