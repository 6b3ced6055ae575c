//! Improved genetic algorithm for the tractor dispatching problem, plus a
//! traditional baseline for comparison runs.
//!
//! Chromosomes are natural-number trajectories: stand and charger node ids
//! partitioned by depot-zero separators. Variation operates on the
//! stand-only projection (a permutation of the flights); separators and
//! charger stops are reconstructed by a greedy repair pass that inserts the
//! nearest charger before the battery would breach its floor and opens a new
//! tractor when a towing window is hopeless.

use crate::energy::{self, EnergyModel};
use crate::instance::{Instance, Strategy};
use crate::sim::{self, CostBreakdown, Solution};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaError {
    #[error("flight {flight} cannot be served even by a fresh tractor: {reason}")]
    InstanceInfeasible { flight: u32, reason: String },
    #[error("chromosome malformed: {0}")]
    BadChromosome(String),
    #[error("parents carry different stand multisets")]
    MismatchedParents,
    #[error("no feasible individual could be constructed")]
    NoFeasibleIndividuals,
    #[error("config invalid: {0}")]
    BadConfig(String),
    #[error("simulation failed: {0}")]
    Sim(#[from] sim::SimError),
}

/// How offspring that fail reconstruction are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RepairPolicy {
    /// Reconstruction is the one repair attempt; a failure falls back to a
    /// parent copy.
    #[default]
    Repair,
    /// Failed offspring are discarded and the slot refilled by reselection.
    Reject,
}

/// Orientation of the adaptive mutation range. `FittestHigh` gives the
/// fittest pairs the maximum rate, shaking up incumbents; `Srinivas` is the
/// classical inversion that protects elites and mutates the weak most.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PmOrientation {
    #[default]
    FittestHigh,
    Srinivas,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    /// Fraction of the population replaced each iteration; the remainder is
    /// carried unchanged as the elite set.
    pub generation_gap: f64,
    pub pc_range: (f64, f64),
    pub pm_range: (f64, f64),
    pub seed: u64,
    pub repair: RepairPolicy,
    pub pm_orientation: PmOrientation,
    /// Greedy step tolerance: delay a tractor may accept before a new one
    /// is opened during initial construction.
    pub acceptable_delay_min: f64,
    /// Delay beyond which the repair pass splits a route instead. Defaults
    /// to the break-even point where a new tractor becomes cheaper.
    pub repair_delay_min: Option<f64>,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 200,
            max_iterations: 1000,
            generation_gap: 0.9,
            pc_range: (0.6, 0.8),
            pm_range: (0.009, 0.2),
            seed: 0,
            repair: RepairPolicy::Repair,
            pm_orientation: PmOrientation::FittestHigh,
            acceptable_delay_min: 0.0,
            repair_delay_min: None,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        if self.population_size < 2 {
            return Err(GaError::BadConfig(
                "population_size must be at least 2".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(GaError::BadConfig("max_iterations must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.generation_gap) {
            return Err(GaError::BadConfig(
                "generation_gap must lie in [0, 1]".into(),
            ));
        }
        for (name, (lo, hi)) in [("pc_range", self.pc_range), ("pm_range", self.pm_range)] {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(GaError::BadConfig(format!(
                    "{name} must satisfy 0 <= lo <= hi <= 1"
                )));
            }
        }
        Ok(())
    }

    fn repair_delay(&self, inst: &Instance) -> f64 {
        self.repair_delay_min.unwrap_or_else(|| {
            if inst.rates.delay_per_min > 0.0 {
                inst.rates.fixed_per_tractor / inst.rates.delay_per_min
            } else {
                f64::INFINITY
            }
        })
    }
}

/// Per-iteration progress record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationStats {
    pub best: f64,
    pub mean: f64,
    pub best_so_far: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaStats {
    pub iterations: Vec<IterationStats>,
    pub wall: Duration,
    pub evaluations: u64,
}

// ---------------------------------------------------------------------------
// chromosome encoding

/// Flatten a solution into the separator-delimited gene string. The empty
/// solution encodes as `[0, 0]`.
pub fn encode(solution: &Solution) -> Vec<usize> {
    let normalized = solution.normalized();
    let mut genes = vec![0];
    for route in &normalized.routes {
        genes.extend(&route[1..route.len() - 1]);
        genes.push(0);
    }
    if genes.len() == 1 {
        genes.push(0);
    }
    genes
}

/// Split a gene string on its depot separators. Empty stretches between
/// separators are dropped.
pub fn decode(genes: &[usize], inst: &Instance) -> Result<Solution, GaError> {
    if genes.len() < 2 || genes[0] != 0 || *genes.last().unwrap() != 0 {
        return Err(GaError::BadChromosome(
            "gene string must open and close with the depot".into(),
        ));
    }
    let mut routes = Vec::new();
    let mut current = vec![0usize];
    for &gene in &genes[1..] {
        if gene == 0 {
            if current.len() > 1 {
                current.push(0);
                routes.push(current);
            }
            current = vec![0];
        } else {
            if gene >= inst.node_count() {
                return Err(GaError::BadChromosome(format!("unknown node id {gene}")));
            }
            current.push(gene);
        }
    }
    Ok(Solution::new(routes))
}

// ---------------------------------------------------------------------------
// greedy construction and repair

/// Tolerances for the greedy construction pass.
struct Builder<'a> {
    inst: &'a Instance,
    model: EnergyModel,
    max_delay_min: f64,
    speed: f64,
    floor: f64,
    ceiling: f64,
    service_energy: HashMap<usize, f64>,
    service_time: HashMap<usize, f64>,
}

struct Tractor {
    route: Vec<usize>,
    node: usize,
    clock: f64,
    soc: f64,
}

impl Tractor {
    fn fresh(capacity: f64) -> Self {
        Tractor {
            route: vec![0],
            node: 0,
            clock: 0.0,
            soc: capacity,
        }
    }

    fn is_fresh(&self) -> bool {
        self.route.len() == 1
    }
}

impl<'a> Builder<'a> {
    fn new(
        inst: &'a Instance,
        strategy: &'a Strategy,
        model: EnergyModel,
        max_delay_min: f64,
    ) -> Result<Self, GaError> {
        let mut service_energy = HashMap::new();
        let mut service_time = HashMap::new();
        for flight in &inst.flights {
            let profile = inst.profile_for(flight.class);
            service_energy.insert(
                flight.stand_node,
                energy::service_energy(profile, &inst.vehicle).map_err(sim::SimError::Energy)?,
            );
            service_time.insert(
                flight.stand_node,
                energy::service_time(profile, &inst.vehicle),
            );
        }
        Ok(Builder {
            inst,
            model,
            max_delay_min,
            speed: strategy.speed_mps(),
            floor: inst.vehicle.soc_floor_kwh(),
            ceiling: strategy.gamma * inst.vehicle.battery_capacity_kwh,
            service_energy,
            service_time,
        })
    }

    fn leg_energy(&self, from: usize, to: usize) -> f64 {
        self.model
            .leg_energy(self.inst.distance(from, to), self.speed, &self.inst.vehicle)
            .expect("positive speed and distance")
    }

    fn leg_trough(&self, from: usize, to: usize) -> f64 {
        self.model
            .leg_trough_drop(self.inst.distance(from, to), self.speed, &self.inst.vehicle)
            .expect("positive speed and distance")
    }

    /// Escape node after serving a stand: the nearest charger, or the depot
    /// when the instance has none.
    fn escape_node(&self, from: usize) -> usize {
        self.inst.nearest_charger(from).unwrap_or(self.inst.depot())
    }

    /// Battery check for serving `stand` from the tractor's current state:
    /// the leg trough, arrival, post-service level, and the escape leg to
    /// the nearest charger must all stay at or above the floor.
    fn energy_ok(&self, t: &Tractor, stand: usize) -> bool {
        let tol = 1e-9;
        if t.soc - self.leg_trough(t.node, stand) < self.floor - tol {
            return false;
        }
        let after_service = t.soc - self.leg_energy(t.node, stand) - self.service_energy[&stand];
        if after_service < self.floor - tol {
            return false;
        }
        let escape = self.escape_node(stand);
        after_service - self.leg_trough(stand, escape) >= self.floor - tol
    }

    fn drive(&self, t: &mut Tractor, to: usize) {
        t.clock += energy::travel_time(
            self.inst.distance(t.node, to),
            self.speed,
            &self.inst.vehicle,
        );
        t.soc -= self.leg_energy(t.node, to);
        t.node = to;
    }

    fn visit_charger(&self, t: &mut Tractor, charger: usize) {
        self.drive(t, charger);
        if t.soc < self.ceiling {
            t.clock += self.inst.curve.minutes_between(
                t.soc.max(0.0),
                self.ceiling,
                self.inst.vehicle.battery_capacity_kwh,
            );
            t.soc = self.ceiling;
        }
        t.route.push(charger);
    }

    fn serve(&self, t: &mut Tractor, stand: usize) {
        let flight = self.inst.flight_at(stand).expect("stand has a flight");
        self.drive(t, stand);
        let start = t.clock.max(flight.window_open_min);
        t.clock = start + self.service_time[&stand];
        t.soc -= self.service_energy[&stand];
        t.route.push(stand);
    }

    /// Park the tractor, charging on the way when the return leg would
    /// breach the floor.
    fn park(&self, t: &mut Tractor) -> Result<(), GaError> {
        if t.is_fresh() {
            t.route.push(0);
            return Ok(());
        }
        let tol = 1e-9;
        if t.soc - self.leg_trough(t.node, 0) < self.floor - tol {
            let charger = self.escape_node(t.node);
            if charger != self.inst.depot() {
                self.visit_charger(t, charger);
            }
            if t.soc - self.leg_trough(t.node, 0) < self.floor - tol {
                return Err(GaError::InstanceInfeasible {
                    flight: u32::MAX,
                    reason: "depot unreachable above the battery floor even after charging".into(),
                });
            }
        }
        self.drive(t, 0);
        t.route.push(0);
        Ok(())
    }

    /// Serve flights in the given order; one pass of the seven-step greedy
    /// construction with charger diversion and route splitting.
    fn construct(&self, order: &[usize]) -> Result<Solution, GaError> {
        let capacity = self.inst.vehicle.battery_capacity_kwh;
        let mut routes: Vec<Vec<usize>> = Vec::new();
        let mut tractor = Tractor::fresh(capacity);
        for &flight_idx in order {
            let flight = &self.inst.flights[flight_idx];
            let stand = flight.stand_node;
            loop {
                if !self.energy_ok(&tractor, stand) {
                    let charger = self.escape_node(tractor.node);
                    let can_charge = charger != self.inst.depot()
                        && tractor.soc < self.ceiling
                        && tractor.soc - self.leg_trough(tractor.node, charger)
                            >= self.floor - 1e-9;
                    if can_charge {
                        self.visit_charger(&mut tractor, charger);
                        continue;
                    }
                    if tractor.is_fresh() {
                        return Err(GaError::InstanceInfeasible {
                            flight: flight.id,
                            reason: "service exceeds a full battery's safe range".into(),
                        });
                    }
                    self.park(&mut tractor)?;
                    routes.push(std::mem::replace(&mut tractor, Tractor::fresh(capacity)).route);
                    continue;
                }
                let arrival = tractor.clock
                    + energy::travel_time(
                        self.inst.distance(tractor.node, stand),
                        self.speed,
                        &self.inst.vehicle,
                    );
                if arrival > flight.window_close_min + self.max_delay_min {
                    if tractor.is_fresh() {
                        return Err(GaError::InstanceInfeasible {
                            flight: flight.id,
                            reason: format!(
                                "window closes at {} but a fresh tractor first arrives at {arrival:.2}",
                                flight.window_close_min
                            ),
                        });
                    }
                    self.park(&mut tractor)?;
                    routes.push(std::mem::replace(&mut tractor, Tractor::fresh(capacity)).route);
                    continue;
                }
                self.serve(&mut tractor, stand);
                break;
            }
        }
        if !tractor.is_fresh() {
            self.park(&mut tractor)?;
            routes.push(tractor.route);
        }
        Ok(Solution::new(routes))
    }
}

/// Flights sorted by earliest admissible service start.
fn earliest_start_order(inst: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.flights.len()).collect();
    order.sort_by(|&a, &b| {
        inst.flights[a]
            .window_open_min
            .partial_cmp(&inst.flights[b].window_open_min)
            .unwrap()
            .then(inst.flights[a].id.cmp(&inst.flights[b].id))
    });
    order
}

/// Seven-step greedy construction: earliest-window ordering, one active
/// tractor, nearest-charger diversion when the battery would breach its
/// floor, and a fresh tractor whenever the latest admissible time (plus the
/// configured acceptable delay) cannot be met.
pub fn greedy_initialize(
    inst: &Instance,
    strategy: &Strategy,
    model: EnergyModel,
    acceptable_delay_min: f64,
) -> Result<Solution, GaError> {
    let builder = Builder::new(inst, strategy, model, acceptable_delay_min)?;
    builder.construct(&earliest_start_order(inst))
}

// ---------------------------------------------------------------------------
// variation operators

/// Partially mapped crossover of two permutations over `[lo, hi)`.
pub fn pmx_permutation(
    p1: &[usize],
    p2: &[usize],
    lo: usize,
    hi: usize,
) -> Result<(Vec<usize>, Vec<usize>), GaError> {
    if p1.len() != p2.len() {
        return Err(GaError::MismatchedParents);
    }
    {
        let mut a = p1.to_vec();
        let mut b = p2.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(GaError::MismatchedParents);
        }
    }
    let cross = |base: &[usize], donor: &[usize]| {
        let mut child = base.to_vec();
        child[lo..hi].copy_from_slice(&donor[lo..hi]);
        let mapping: HashMap<usize, usize> = (lo..hi).map(|i| (donor[i], base[i])).collect();
        let in_segment: std::collections::HashSet<usize> = donor[lo..hi].iter().copied().collect();
        for i in (0..lo).chain(hi..base.len()) {
            let mut gene = base[i];
            while in_segment.contains(&gene) {
                gene = mapping[&gene];
            }
            child[i] = gene;
        }
        child
    };
    Ok((cross(p1, p2), cross(p2, p1)))
}

/// Reverse the genes between the two cut indices, inclusive.
pub fn reverse_segment(genes: &mut [usize], lo: usize, hi: usize) {
    genes[lo..=hi].reverse();
}

/// Crossover probability from the fitter parent's standing in the
/// population. Pools near a local optimum (pair close to the maximum) get
/// less crossover; dispersed pools get more.
pub fn adaptive_pc(f_pair: f64, f_max: f64, f_avg: f64, range: (f64, f64)) -> f64 {
    let (lo, hi) = range;
    if f_max <= f_avg || f_pair < f_avg {
        return hi;
    }
    (hi - (hi - lo) * (f_pair - f_avg) / (f_max - f_avg)).clamp(lo, hi)
}

/// Mutation probability for a pair; see [`PmOrientation`] for the two
/// readings of the formula.
pub fn adaptive_pm(
    f_pair: f64,
    f_max: f64,
    f_avg: f64,
    range: (f64, f64),
    orientation: PmOrientation,
) -> f64 {
    let (lo, hi) = range;
    if f_max <= f_avg || f_pair < f_avg {
        return hi;
    }
    let ratio = (f_max - f_pair) / (f_max - f_avg);
    match orientation {
        PmOrientation::FittestHigh => (hi - (hi - lo) * ratio).clamp(lo, hi),
        PmOrientation::Srinivas => (lo + (hi - lo) * ratio).clamp(lo, hi),
    }
}

// ---------------------------------------------------------------------------
// the solver loops

#[derive(Clone)]
struct Individual {
    chrom: Vec<usize>,
    order: Vec<usize>,
    cost: CostBreakdown,
    fitness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Improved,
    Traditional,
}

fn roulette_pick(cumulative: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = *cumulative.last().expect("nonempty population");
    let target = rng.random::<f64>() * total;
    cumulative
        .partition_point(|&c| c <= target)
        .min(cumulative.len() - 1)
}

struct Engine<'a> {
    builder: Builder<'a>,
    inst: &'a Instance,
    strategy: &'a Strategy,
    model: EnergyModel,
    evaluations: u64,
}

impl<'a> Engine<'a> {
    fn evaluate_order(&mut self, order: &[usize]) -> Result<Individual, GaError> {
        let solution = self.builder.construct(order)?;
        let cost = sim::total_cost(&solution, self.inst, self.strategy, self.model)?;
        self.evaluations += 1;
        Ok(Individual {
            chrom: encode(&solution),
            order: order.to_vec(),
            cost,
            fitness: sim::fitness(&cost),
        })
    }
}

fn rank(population: &mut [Individual]) {
    population.sort_by(|a, b| {
        a.cost
            .total
            .partial_cmp(&b.cost.total)
            .unwrap()
            .then_with(|| a.chrom.cmp(&b.chrom))
    });
}

fn run_variant(
    inst: &Instance,
    strategy: &Strategy,
    config: &GaConfig,
    model: EnergyModel,
    variant: Variant,
) -> Result<(Solution, CostBreakdown, GaStats), GaError> {
    config.validate()?;
    strategy.validate().map_err(GaError::BadConfig)?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let repair_delay = config.repair_delay(inst);
    let mut engine = Engine {
        builder: Builder::new(inst, strategy, model, repair_delay)?,
        inst,
        strategy,
        model,
        evaluations: 0,
    };
    let n_flights = inst.flights.len();

    // initial population
    let mut population: Vec<Individual> = Vec::with_capacity(config.population_size);
    match variant {
        Variant::Improved => {
            // the pure greedy seed uses the strict acceptable-delay policy
            let greedy_builder = Builder::new(inst, strategy, model, config.acceptable_delay_min)?;
            let base_order = earliest_start_order(inst);
            let greedy_solution = greedy_builder.construct(&base_order)?;
            let cost = sim::total_cost(&greedy_solution, inst, strategy, model)?;
            engine.evaluations += 1;
            population.push(Individual {
                chrom: encode(&greedy_solution),
                order: base_order.clone(),
                cost,
                fitness: sim::fitness(&cost),
            });
            while population.len() < config.population_size {
                let mut order = base_order.clone();
                shuffle_equal_window_ties(&mut order, inst, &mut rng);
                let swaps = rng.random_range(1..=(n_flights / 4).max(2));
                for _ in 0..swaps {
                    if n_flights < 2 {
                        break;
                    }
                    let i = rng.random_range(0..n_flights);
                    let span = rng.random_range(1..=3usize);
                    let j = (i + span).min(n_flights - 1);
                    order.swap(i, j);
                }
                population.push(engine.evaluate_order(&order)?);
            }
        }
        Variant::Traditional => {
            while population.len() < config.population_size {
                let mut order: Vec<usize> = (0..n_flights).collect();
                order.shuffle(&mut rng);
                population.push(engine.evaluate_order(&order)?);
            }
        }
    }
    if population.is_empty() {
        return Err(GaError::NoFeasibleIndividuals);
    }

    rank(&mut population);
    let elite_count = (config.population_size as f64 * (1.0 - config.generation_gap))
        .round()
        .max(1.0) as usize;
    let mut best = population[0].clone();
    let mut stats = GaStats {
        iterations: Vec::with_capacity(config.max_iterations),
        wall: Duration::ZERO,
        evaluations: 0,
    };

    for _iter in 0..config.max_iterations {
        let f_max = population
            .iter()
            .map(|p| p.fitness)
            .fold(f64::MIN, f64::max);
        let f_avg = population.iter().map(|p| p.fitness).sum::<f64>() / population.len() as f64;
        let cumulative: Vec<f64> = population
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p.fitness;
                Some(*acc)
            })
            .collect();

        let mut next: Vec<Individual> = population[..elite_count.min(population.len())].to_vec();
        let mut rejections = 0usize;
        while next.len() < config.population_size {
            let ia = roulette_pick(&cumulative, &mut rng);
            let ib = roulette_pick(&cumulative, &mut rng);
            let pair_fitness = population[ia].fitness.max(population[ib].fitness);
            let pc = match variant {
                Variant::Improved => adaptive_pc(pair_fitness, f_max, f_avg, config.pc_range),
                Variant::Traditional => config.pc_range.1,
            };
            let pm = match variant {
                Variant::Improved => adaptive_pm(
                    pair_fitness,
                    f_max,
                    f_avg,
                    config.pm_range,
                    config.pm_orientation,
                ),
                Variant::Traditional => (config.pm_range.0 + config.pm_range.1) / 2.0,
            };

            let mut order_a = population[ia].order.clone();
            let mut order_b = population[ib].order.clone();
            if n_flights >= 2 && rng.random::<f64>() < pc {
                let mut lo = rng.random_range(0..n_flights);
                let mut hi = rng.random_range(0..n_flights);
                if lo > hi {
                    std::mem::swap(&mut lo, &mut hi);
                }
                let (a, b) = pmx_permutation(&order_a, &order_b, lo, hi + 1)?;
                order_a = a;
                order_b = b;
            }
            for order in [&mut order_a, &mut order_b] {
                if n_flights >= 2 && rng.random::<f64>() < pm {
                    let mut lo = rng.random_range(0..n_flights);
                    let mut hi = rng.random_range(0..n_flights);
                    if lo > hi {
                        std::mem::swap(&mut lo, &mut hi);
                    }
                    match variant {
                        Variant::Improved => reverse_segment(order, lo, hi),
                        Variant::Traditional => order.swap(lo, hi),
                    }
                }
            }

            for (order, parent) in [(order_a, ia), (order_b, ib)] {
                if next.len() >= config.population_size {
                    break;
                }
                match (engine.evaluate_order(&order), config.repair) {
                    (Ok(child), _) => next.push(child),
                    // reconstruction is the one repair attempt; a failure
                    // falls back to the parent
                    (Err(_), RepairPolicy::Repair) => next.push(population[parent].clone()),
                    // under rejection the slot is refilled by reselection,
                    // with a cap so a hostile instance cannot spin forever
                    (Err(_), RepairPolicy::Reject) => {
                        rejections += 1;
                        if rejections > 50 * config.population_size {
                            next.push(population[parent].clone());
                        }
                    }
                }
            }
        }
        population = next;
        rank(&mut population);
        if population[0].cost.total < best.cost.total {
            best = population[0].clone();
        }
        let mean = population.iter().map(|p| p.cost.total).sum::<f64>() / population.len() as f64;
        stats.iterations.push(IterationStats {
            best: population[0].cost.total,
            mean,
            best_so_far: best.cost.total,
        });
    }

    stats.wall = start.elapsed();
    stats.evaluations = engine.evaluations;
    let solution = decode(&best.chrom, inst)?;
    Ok((solution, best.cost, stats))
}

fn shuffle_equal_window_ties(order: &mut [usize], inst: &Instance, rng: &mut ChaCha8Rng) {
    let mut start = 0;
    while start < order.len() {
        let open = inst.flights[order[start]].window_open_min;
        let mut end = start + 1;
        while end < order.len() && inst.flights[order[end]].window_open_min == open {
            end += 1;
        }
        if end - start > 1 {
            order[start..end].shuffle(rng);
        }
        start = end;
    }
}

/// Run the improved genetic algorithm: greedy-seeded population, elite plus
/// roulette selection, adaptive partially-mapped crossover, and adaptive
/// segment-reversal mutation. Deterministic for a fixed seed.
pub fn run_ga(
    inst: &Instance,
    strategy: &Strategy,
    config: &GaConfig,
    model: EnergyModel,
) -> Result<(Solution, CostBreakdown, GaStats), GaError> {
    run_variant(inst, strategy, config, model, Variant::Improved)
}

/// Baseline for comparison experiments: random feasible initialization,
/// fixed crossover probability at the range maximum, fixed mutation at the
/// range midpoint, and swap mutation instead of reversal.
pub fn run_traditional_ga(
    inst: &Instance,
    strategy: &Strategy,
    config: &GaConfig,
    model: EnergyModel,
) -> Result<(Solution, CostBreakdown, GaStats), GaError> {
    run_variant(inst, strategy, config, model, Variant::Traditional)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::AircraftClass;
    use crate::instance::{generate_instance, Flight, Layout, Node, NodeKind};
    use crate::sim::{check_feasibility, WindowMode};
    use crate::testutil::{five_stand_fixture, golden_fixture};

    fn strategy() -> Strategy {
        Strategy::new(25.0, 0.8).unwrap()
    }

    #[test]
    fn decode_splits_on_separators() {
        let inst = five_stand_fixture();
        let genes = [0, 2, 4, 0, 1, 3, 6, 5, 0];
        let solution = decode(&genes, &inst).unwrap();
        assert_eq!(
            solution.routes,
            vec![vec![0, 2, 4, 0], vec![0, 1, 3, 6, 5, 0]]
        );
    }

    #[test]
    fn decode_empty_chromosome() {
        let inst = five_stand_fixture();
        let solution = decode(&[0, 0], &inst).unwrap();
        assert!(solution.routes.is_empty());
    }

    #[test]
    fn decode_rejects_malformed() {
        let inst = five_stand_fixture();
        assert!(decode(&[1, 2, 0], &inst).is_err());
        assert!(decode(&[0, 99, 0], &inst).is_err());
    }

    #[test]
    fn encode_decode_round_trip() {
        let inst = five_stand_fixture();
        let solution = Solution::new(vec![vec![0, 2, 4, 0], vec![0, 1, 3, 6, 5, 0]]);
        let genes = encode(&solution);
        assert_eq!(genes, vec![0, 2, 4, 0, 1, 3, 6, 5, 0]);
        assert_eq!(decode(&genes, &inst).unwrap(), solution);
    }

    #[test]
    fn pmx_matches_worked_example() {
        let p1 = [1, 2, 3, 4, 5];
        let p2 = [3, 5, 1, 4, 2];
        // segment covering the third and fourth genes
        let (a, b) = pmx_permutation(&p1, &p2, 2, 4).unwrap();
        assert_eq!(a, vec![3, 2, 1, 4, 5]);
        assert_eq!(b, vec![1, 5, 3, 4, 2]);
    }

    #[test]
    fn pmx_identical_parents_fixed_point() {
        let p = [4, 1, 3, 2, 5];
        let (a, b) = pmx_permutation(&p, &p, 1, 3).unwrap();
        assert_eq!(a, p.to_vec());
        assert_eq!(b, p.to_vec());
    }

    #[test]
    fn pmx_whole_segment_swaps_parents() {
        let p1 = [1, 2, 3, 4];
        let p2 = [4, 3, 2, 1];
        let (a, b) = pmx_permutation(&p1, &p2, 0, 4).unwrap();
        assert_eq!(a, p2.to_vec());
        assert_eq!(b, p1.to_vec());
    }

    #[test]
    fn pmx_rejects_mismatched_multisets() {
        assert!(pmx_permutation(&[1, 2, 3], &[1, 2, 4], 0, 2).is_err());
        assert!(pmx_permutation(&[1, 2], &[1, 2, 3], 0, 2).is_err());
    }

    #[test]
    fn pmx_outputs_are_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 12;
        for _ in 0..500 {
            let mut p1: Vec<usize> = (0..n).collect();
            let mut p2: Vec<usize> = (0..n).collect();
            p1.shuffle(&mut rng);
            p2.shuffle(&mut rng);
            let mut lo = rng.random_range(0..n);
            let mut hi = rng.random_range(0..n);
            if lo > hi {
                std::mem::swap(&mut lo, &mut hi);
            }
            let (a, b) = pmx_permutation(&p1, &p2, lo, hi + 1).unwrap();
            for child in [a, b] {
                let mut sorted = child.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, (0..n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn reversal_worked_example() {
        let mut genes = vec![0, 1, 2, 3, 4, 0];
        reverse_segment(&mut genes, 2, 4);
        assert_eq!(genes, vec![0, 1, 4, 3, 2, 0]);
    }

    #[test]
    fn reversal_is_involutive_and_identity_on_point() {
        let mut genes = vec![5, 1, 4, 2, 3];
        let original = genes.clone();
        reverse_segment(&mut genes, 1, 3);
        reverse_segment(&mut genes, 1, 3);
        assert_eq!(genes, original);
        reverse_segment(&mut genes, 2, 2);
        assert_eq!(genes, original);
    }

    #[test]
    fn adaptive_pc_branches() {
        let range = (0.6, 0.8);
        // fitness below average: maximum crossover
        assert_eq!(adaptive_pc(0.5, 2.0, 1.0, range), 0.8);
        // at the average: numerator zero
        assert_eq!(adaptive_pc(1.0, 2.0, 1.0, range), 0.8);
        // the fittest pair: minimum crossover
        assert!((adaptive_pc(2.0, 2.0, 1.0, range) - 0.6).abs() < 1e-12);
        // degenerate population
        assert_eq!(adaptive_pc(1.0, 1.0, 1.0, range), 0.8);
    }

    #[test]
    fn adaptive_pm_branches() {
        let range = (0.009, 0.2);
        assert_eq!(
            adaptive_pm(0.5, 2.0, 1.0, range, PmOrientation::FittestHigh),
            0.2
        );
        assert!(
            (adaptive_pm(2.0, 2.0, 1.0, range, PmOrientation::FittestHigh) - 0.2).abs() < 1e-12
        );
        assert!(
            (adaptive_pm(1.0, 2.0, 1.0, range, PmOrientation::FittestHigh) - 0.009).abs() < 1e-12
        );
        // inverted orientation swaps the endpoints
        assert!((adaptive_pm(2.0, 2.0, 1.0, range, PmOrientation::Srinivas) - 0.009).abs() < 1e-12);
        assert!((adaptive_pm(1.0, 2.0, 1.0, range, PmOrientation::Srinivas) - 0.2).abs() < 1e-12);
        assert_eq!(
            adaptive_pm(1.0, 1.0, 1.0, range, PmOrientation::FittestHigh),
            0.2
        );
    }

    #[test]
    fn probabilities_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let f_avg = rng.random::<f64>() * 10.0;
            let f_max = f_avg + rng.random::<f64>() * 10.0;
            let f = rng.random::<f64>() * (f_max + 1.0);
            let pc = adaptive_pc(f, f_max, f_avg, (0.6, 0.8));
            assert!((0.6..=0.8).contains(&pc));
            for orientation in [PmOrientation::FittestHigh, PmOrientation::Srinivas] {
                let pm = adaptive_pm(f, f_max, f_avg, (0.009, 0.2), orientation);
                assert!((0.009..=0.2).contains(&pm));
            }
        }
    }

    #[test]
    fn greedy_on_golden_fixture_uses_one_tractor() {
        let inst = golden_fixture();
        let solution = greedy_initialize(&inst, &strategy(), EnergyModel::StartStop, 0.0).unwrap();
        assert_eq!(solution.tractor_count(), 1);
        assert_eq!(solution.routes[0], vec![0, 1, 2, 0]);
        let violations = check_feasibility(
            &solution,
            &inst,
            &strategy(),
            EnergyModel::StartStop,
            WindowMode::Soft,
        );
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn greedy_opens_tractors_for_conflicting_windows() {
        // same tight window at two far-apart stands: one tractor per flight
        let nodes = vec![
            Node {
                id: 0,
                kind: NodeKind::Depot,
                x_m: 0.0,
                y_m: 0.0,
                stand_group: None,
            },
            Node {
                id: 1,
                kind: NodeKind::Stand,
                x_m: 2000.0,
                y_m: 0.0,
                stand_group: Some(0),
            },
            Node {
                id: 2,
                kind: NodeKind::Stand,
                x_m: -2000.0,
                y_m: 0.0,
                stand_group: Some(1),
            },
            Node {
                id: 3,
                kind: NodeKind::Charger,
                x_m: 0.0,
                y_m: 500.0,
                stand_group: None,
            },
        ];
        let mk = |id: u32, stand: usize| Flight {
            id,
            stand_node: stand,
            class: AircraftClass::Medium,
            scheduled_arrival_min: 0.0,
            scheduled_departure_min: 60.0,
            window_open_min: 5.0,
            window_close_min: 7.0,
        };
        let inst = Instance::from_layout("conflict", nodes, vec![mk(0, 1), mk(1, 2)]);
        let solution = greedy_initialize(&inst, &strategy(), EnergyModel::StartStop, 0.0).unwrap();
        assert_eq!(solution.tractor_count(), 2);
    }

    #[test]
    fn greedy_inserts_charger_when_battery_runs_low() {
        let mut inst = five_stand_fixture();
        inst.vehicle.battery_capacity_kwh = 40.0; // three medium services exceed it
        let solution = greedy_initialize(&inst, &strategy(), EnergyModel::StartStop, 0.0).unwrap();
        let visits_charger = solution.routes.iter().flatten().any(|&n| n == 6);
        assert!(visits_charger, "{:?}", solution.routes);
        let violations = check_feasibility(
            &solution,
            &inst,
            &strategy(),
            EnergyModel::StartStop,
            WindowMode::Soft,
        );
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn greedy_errors_when_window_unreachable() {
        let mut inst = five_stand_fixture();
        inst.flights[0].window_close_min = 0.5; // depot leg alone takes longer
        assert!(matches!(
            greedy_initialize(&inst, &strategy(), EnergyModel::StartStop, 0.0),
            Err(GaError::InstanceInfeasible { .. })
        ));
    }

    #[test]
    fn greedy_output_is_always_soft_feasible() {
        for seed in 0..4 {
            let inst = generate_instance(seed, Layout::Scenario2Like, 25).unwrap();
            for gamma in [0.8, 1.0] {
                let strat = Strategy::new(15.0, gamma).unwrap();
                let solution =
                    greedy_initialize(&inst, &strat, EnergyModel::StartStop, 0.0).unwrap();
                let violations = check_feasibility(
                    &solution,
                    &inst,
                    &strat,
                    EnergyModel::StartStop,
                    WindowMode::Soft,
                );
                assert!(violations.is_empty(), "seed {seed}: {violations:?}");
            }
        }
    }

    fn small_config(seed: u64) -> GaConfig {
        GaConfig {
            population_size: 30,
            max_iterations: 60,
            seed,
            ..GaConfig::default()
        }
    }

    #[test]
    fn ga_is_deterministic_per_seed() {
        let inst = generate_instance(5, Layout::Scenario2Like, 12).unwrap();
        let strat = strategy();
        let run = || run_ga(&inst, &strat, &small_config(42), EnergyModel::StartStop).unwrap();
        let (sol_a, cost_a, stats_a) = run();
        let (sol_b, cost_b, stats_b) = run();
        assert_eq!(sol_a, sol_b);
        assert_eq!(cost_a, cost_b);
        assert_eq!(stats_a.iterations, stats_b.iterations);
        let (sol_c, _, _) =
            run_ga(&inst, &strat, &small_config(43), EnergyModel::StartStop).unwrap();
        let _ = sol_c; // different seed may or may not differ; only same-seed equality is contractual
    }

    #[test]
    fn traditional_ga_is_deterministic_per_seed() {
        let inst = generate_instance(6, Layout::Scenario2Like, 10).unwrap();
        let strat = strategy();
        let (a, ca, _) =
            run_traditional_ga(&inst, &strat, &small_config(9), EnergyModel::StartStop).unwrap();
        let (b, cb, _) =
            run_traditional_ga(&inst, &strat, &small_config(9), EnergyModel::StartStop).unwrap();
        assert_eq!(a, b);
        assert_eq!(ca, cb);
    }

    #[test]
    fn best_so_far_never_increases() {
        let inst = generate_instance(8, Layout::Scenario2Like, 15).unwrap();
        let (_, _, stats) =
            run_ga(&inst, &strategy(), &small_config(1), EnergyModel::StartStop).unwrap();
        let mut last = f64::INFINITY;
        for iter in &stats.iterations {
            assert!(iter.best_so_far <= last + 1e-12);
            last = iter.best_so_far;
        }
    }

    #[test]
    fn ga_solutions_cover_every_stand_once() {
        let inst = generate_instance(3, Layout::Scenario2Like, 18).unwrap();
        let (solution, _, _) =
            run_ga(&inst, &strategy(), &small_config(2), EnergyModel::StartStop).unwrap();
        let violations = check_feasibility(
            &solution,
            &inst,
            &strategy(),
            EnergyModel::StartStop,
            WindowMode::Soft,
        );
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn roulette_frequencies_match_fitness_shares() {
        // chi-squared goodness of fit over 1e5 draws, alpha = 0.01, 3 dof
        let fitness = [1.0, 2.0, 3.0, 4.0];
        let cumulative: Vec<f64> = fitness
            .iter()
            .scan(0.0, |acc, f| {
                *acc += f;
                Some(*acc)
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let draws = 100_000usize;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            counts[roulette_pick(&cumulative, &mut rng)] += 1;
        }
        let total: f64 = fitness.iter().sum();
        let mut chi2 = 0.0;
        for (i, &count) in counts.iter().enumerate() {
            let expected = draws as f64 * fitness[i] / total;
            chi2 += (count as f64 - expected).powi(2) / expected;
        }
        assert!(chi2 < 11.345, "chi-squared statistic {chi2} too large");
    }

    #[test]
    fn config_validation_rejects_nonsense() {
        let undersized = GaConfig {
            population_size: 1,
            ..GaConfig::default()
        };
        assert!(undersized.validate().is_err());
        let inverted = GaConfig {
            pc_range: (0.9, 0.2),
            ..GaConfig::default()
        };
        assert!(inverted.validate().is_err());
    }
}
