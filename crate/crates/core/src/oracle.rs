//! Exact reference solver for desk-scale instances.
//!
//! Enumerates every assignment of flights to at most `max_tractors` ordered
//! routes, every visiting order, and every charger insertion up to the
//! per-route cap, evaluating each candidate with the route simulator. Kept
//! deliberately dumb so it can certify the metaheuristic's optima.

use crate::energy::EnergyModel;
use crate::instance::{Instance, Strategy};
use crate::sim::{self, CostBreakdown, Solution};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance exceeds oracle limits: {0}")]
    LimitsExceeded(String),
    #[error("simulation failed: {0}")]
    Sim(#[from] sim::SimError),
}

/// Enumeration bounds; the solver refuses anything larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_flights: usize,
    pub max_tractors: usize,
    pub max_charger_visits_per_route: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_flights: 6,
            max_tractors: 3,
            max_charger_visits_per_route: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Optimal {
        solution: Solution,
        cost: CostBreakdown,
    },
    Infeasible,
}

struct RouteEval {
    cost: CostBreakdown,
    feasible: bool,
}

struct Enumerator<'a> {
    inst: &'a Instance,
    strategy: &'a Strategy,
    model: EnergyModel,
    limits: OracleLimits,
    chargers: Vec<usize>,
    floor: f64,
    cache: HashMap<Vec<usize>, RouteEval>,
    best: Option<(CostBreakdown, Vec<Vec<usize>>)>,
}

impl<'a> Enumerator<'a> {
    /// Evaluate one depot-anchored route; memoized on the node sequence.
    fn route_eval(&mut self, route: &[usize]) -> Result<&RouteEval, OracleError> {
        if !self.cache.contains_key(route) {
            let trace = sim::simulate_route(route, self.inst, self.strategy, self.model)?;
            let feasible = trace.min_soc_kwh >= self.floor - 1e-9
                && trace
                    .visits
                    .iter()
                    .all(|v| v.soc_arrival_kwh >= self.floor - 1e-9);
            let cost = sim::route_cost(&trace, self.inst);
            self.cache
                .insert(route.to_vec(), RouteEval { cost, feasible });
        }
        Ok(&self.cache[route])
    }

    /// All charger-augmented versions of a stand sequence: no stop, or one
    /// combination of insertion gaps and stations up to the cap.
    fn charger_variants(&self, stands: &[usize]) -> Vec<Vec<usize>> {
        let mut base = Vec::with_capacity(stands.len() + 2);
        base.push(0);
        base.extend(stands);
        base.push(0);
        let mut variants = vec![base.clone()];
        let mut frontier = vec![base];
        for _ in 0..self.limits.max_charger_visits_per_route {
            let mut next_frontier = Vec::new();
            for route in &frontier {
                // a charger may sit in any gap after the opening depot
                for gap in 1..route.len() {
                    // avoid stacking two chargers in one gap in either order
                    if self.inst.is_charger(route[gap - 1]) {
                        continue;
                    }
                    for &charger in &self.chargers {
                        let mut with_stop = route.clone();
                        with_stop.insert(gap, charger);
                        next_frontier.push(with_stop);
                    }
                }
            }
            variants.extend(next_frontier.iter().cloned());
            frontier = next_frontier;
        }
        variants
    }

    fn consider(&mut self, routes: &[Vec<usize>]) -> Result<(), OracleError> {
        let mut total = CostBreakdown::zero();
        for route in routes {
            let eval = self.route_eval(route)?;
            if !eval.feasible {
                return Ok(());
            }
            total = CostBreakdown {
                fixed: total.fixed + eval.cost.fixed,
                charging: total.charging + eval.cost.charging,
                maintenance: total.maintenance + eval.cost.maintenance,
                time_penalty: total.time_penalty + eval.cost.time_penalty,
                total: total.total + eval.cost.total,
            };
        }
        let mut canonical: Vec<Vec<usize>> = routes.to_vec();
        canonical.sort();
        let better = match &self.best {
            None => true,
            Some((best_cost, best_routes)) => {
                total.total < best_cost.total
                    || (total.total == best_cost.total
                        && (canonical.len() < best_routes.len()
                            || (canonical.len() == best_routes.len() && canonical < *best_routes)))
            }
        };
        if better {
            self.best = Some((total, canonical));
        }
        Ok(())
    }

    /// Recurse over every assignment of flights to routes and every visit
    /// order: each flight is inserted at every position of every open route
    /// or opens a new one, then charger variants are expanded per route.
    fn assign(
        &mut self,
        remaining: &[usize],
        open_routes: &mut Vec<Vec<usize>>,
    ) -> Result<(), OracleError> {
        match remaining.split_first() {
            None => {
                let stand_routes: Vec<Vec<usize>> = open_routes.clone();
                self.expand_chargers(&stand_routes, 0, &mut Vec::new())
            }
            Some((&flight, rest)) => {
                let stand = self.inst.flights[flight].stand_node;
                for i in 0..open_routes.len() {
                    for position in 0..=open_routes[i].len() {
                        open_routes[i].insert(position, stand);
                        self.assign(rest, open_routes)?;
                        open_routes[i].remove(position);
                    }
                }
                if open_routes.len() < self.limits.max_tractors {
                    open_routes.push(vec![stand]);
                    self.assign(rest, open_routes)?;
                    open_routes.pop();
                }
                Ok(())
            }
        }
    }

    fn expand_chargers(
        &mut self,
        stand_routes: &[Vec<usize>],
        index: usize,
        chosen: &mut Vec<Vec<usize>>,
    ) -> Result<(), OracleError> {
        if index == stand_routes.len() {
            let routes = chosen.clone();
            return self.consider(&routes);
        }
        for variant in self.charger_variants(&stand_routes[index]) {
            chosen.push(variant);
            self.expand_chargers(stand_routes, index + 1, chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Exhaustively find the minimum-cost solution within the limits.
///
/// Ties break toward fewer tractors, then the lexicographically smallest
/// sorted route list, so the optimum is unique and deterministic.
pub fn exact_solve(
    inst: &Instance,
    strategy: &Strategy,
    limits: &OracleLimits,
    model: EnergyModel,
) -> Result<OracleOutcome, OracleError> {
    let n = inst.flights.len();
    if n > limits.max_flights {
        return Err(OracleError::LimitsExceeded(format!(
            "{n} flights exceed the {}-flight cap",
            limits.max_flights
        )));
    }
    if limits.max_tractors == 0 {
        return Err(OracleError::LimitsExceeded(
            "max_tractors must be positive".into(),
        ));
    }
    let mut enumerator = Enumerator {
        inst,
        strategy,
        model,
        limits: *limits,
        chargers: inst.charger_nodes(),
        floor: inst.vehicle.soc_floor_kwh(),
        cache: HashMap::new(),
        best: None,
    };
    let flights: Vec<usize> = (0..n).collect();
    enumerator.assign(&flights, &mut Vec::new())?;
    Ok(match enumerator.best {
        Some((cost, routes)) => OracleOutcome::Optimal {
            solution: Solution::new(routes),
            cost,
        },
        None => OracleOutcome::Infeasible,
    })
}
