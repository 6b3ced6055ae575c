//! Charge-discharge coupling sweeps and model/algorithm comparisons.
//!
//! A sweep runs the solver over the grid of pacing speeds and charge
//! ceilings, one cell per (speed, gamma) pair, each cell over a seed list.
//! Cells are independent, so they fan out over a worker pool; results are
//! keyed by cell index and merged in grid order, making the report
//! identical for any worker count.

use crate::energy::EnergyModel;
use crate::ga::{run_ga, run_traditional_ga, GaConfig, GaStats};
use crate::instance::{Instance, Strategy};
use crate::sim::CostBreakdown;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Debug, Clone, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    pub total: f64,
    pub tractors: usize,
}

/// One coupling cell's outcome over the seed list.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub gamma: f64,
    pub speed_kmh: f64,
    pub feasible: bool,
    /// Best run: lowest total, ties to the earliest seed.
    pub best_seed: u64,
    pub tractors: usize,
    pub cost: CostBreakdown,
    pub mean_total: f64,
    pub std_total: f64,
    pub per_seed: Vec<SeedRun>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    /// Cells ordered by (gamma, speed) ascending.
    pub cells: Vec<CellResult>,
    /// Index of the unique minimum-total feasible cell.
    pub argmin: Option<usize>,
}

impl GridReport {
    pub fn argmin_cell(&self) -> Option<&CellResult> {
        self.argmin.map(|i| &self.cells[i])
    }
}

/// Run `jobs` closures over `threads` workers, collecting results by index.
fn run_indexed<T, F>(jobs: usize, threads: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.max(1).min(jobs.max(1));
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..jobs).map(|_| None).collect());
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let index = cursor.fetch_add(1, Ordering::Relaxed);
                if index >= jobs {
                    break;
                }
                let value = work(index);
                results.lock().unwrap()[index] = Some(value);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|v| v.expect("every job ran"))
        .collect()
}

/// Evaluate the full coupling grid. Cell results depend only on the
/// instance, config, and seed list.
pub fn sweep(
    inst: &Instance,
    speeds_kmh: &[f64],
    gammas: &[f64],
    config: &GaConfig,
    seeds: &[u64],
    model: EnergyModel,
    threads: usize,
) -> GridReport {
    let mut grid: Vec<(f64, f64)> = Vec::new();
    let mut gammas_sorted = gammas.to_vec();
    gammas_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut speeds_sorted = speeds_kmh.to_vec();
    speeds_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for &gamma in &gammas_sorted {
        for &speed in &speeds_sorted {
            grid.push((gamma, speed));
        }
    }

    let cells = run_indexed(grid.len(), threads, |index| {
        let (gamma, speed) = grid[index];
        evaluate_cell(inst, speed, gamma, config, seeds, model)
    });

    let argmin = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.feasible)
        .min_by(|(_, a), (_, b)| {
            a.cost
                .total
                .partial_cmp(&b.cost.total)
                .unwrap()
                .then(a.gamma.partial_cmp(&b.gamma).unwrap())
                .then(a.speed_kmh.partial_cmp(&b.speed_kmh).unwrap())
        })
        .map(|(i, _)| i);
    GridReport { cells, argmin }
}

fn evaluate_cell(
    inst: &Instance,
    speed_kmh: f64,
    gamma: f64,
    config: &GaConfig,
    seeds: &[u64],
    model: EnergyModel,
) -> CellResult {
    let strategy = match Strategy::new(speed_kmh, gamma) {
        Ok(s) => s,
        Err(_) => {
            return CellResult {
                gamma,
                speed_kmh,
                feasible: false,
                best_seed: 0,
                tractors: 0,
                cost: CostBreakdown::zero(),
                mean_total: f64::NAN,
                std_total: f64::NAN,
                per_seed: Vec::new(),
            }
        }
    };
    let mut per_seed = Vec::new();
    let mut best: Option<(u64, CostBreakdown, usize)> = None;
    for &seed in seeds {
        let run_config = GaConfig {
            seed,
            ..config.clone()
        };
        match run_ga(inst, &strategy, &run_config, model) {
            Ok((solution, cost, _)) => {
                let tractors = solution.tractor_count();
                per_seed.push(SeedRun {
                    seed,
                    total: cost.total,
                    tractors,
                });
                let better = best
                    .as_ref()
                    .map(|(_, c, _)| cost.total < c.total)
                    .unwrap_or(true);
                if better {
                    best = Some((seed, cost, tractors));
                }
            }
            Err(_) => continue,
        }
    }
    match best {
        None => CellResult {
            gamma,
            speed_kmh,
            feasible: false,
            best_seed: 0,
            tractors: 0,
            cost: CostBreakdown::zero(),
            mean_total: f64::NAN,
            std_total: f64::NAN,
            per_seed,
        },
        Some((best_seed, cost, tractors)) => {
            let n = per_seed.len() as f64;
            let mean = per_seed.iter().map(|r| r.total).sum::<f64>() / n;
            let var = per_seed
                .iter()
                .map(|r| (r.total - mean).powi(2))
                .sum::<f64>()
                / n;
            CellResult {
                gamma,
                speed_kmh,
                feasible: true,
                best_seed,
                tractors,
                cost,
                mean_total: mean,
                std_total: var.sqrt(),
                per_seed,
            }
        }
    }
}

/// Grid CSV with one row per cell, column structure of the sweep tables:
/// required tractors, then the fixed / variable / charging / time / total
/// cost split, plus the seed statistics.
pub fn grid_csv(report: &GridReport) -> String {
    let mut out = String::from(
        "gamma,speed_kmh,required_tractors,fixed_cost,variable_cost,charging_cost,time_cost,total_cost,mean_total,std_total,feasible\n",
    );
    for cell in &report.cells {
        if cell.feasible {
            let _ = writeln!(
                out,
                "{},{},{},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2},yes",
                cell.gamma,
                cell.speed_kmh,
                cell.tractors,
                cell.cost.fixed,
                cell.cost.maintenance,
                cell.cost.charging,
                cell.cost.time_penalty,
                cell.cost.total,
                cell.mean_total,
                cell.std_total,
            );
        } else {
            let _ = writeln!(out, "{},{},,,,,,,,,no", cell.gamma, cell.speed_kmh);
        }
    }
    out
}

/// One cost-versus-speed series per gamma level.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSeries {
    pub gamma: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn emit_cost_curves(report: &GridReport) -> Vec<CurveSeries> {
    let mut series: Vec<CurveSeries> = Vec::new();
    for cell in &report.cells {
        if !cell.feasible {
            continue;
        }
        match series.iter_mut().find(|s| s.gamma == cell.gamma) {
            Some(s) => s.points.push((cell.speed_kmh, cell.cost.total)),
            None => series.push(CurveSeries {
                gamma: cell.gamma,
                points: vec![(cell.speed_kmh, cell.cost.total)],
            }),
        }
    }
    series
}

pub fn curve_csv(series: &CurveSeries) -> String {
    let mut out = String::from("speed_kmh,total_cost\n");
    for &(speed, total) in &series.points {
        let _ = writeln!(out, "{},{:.2}", speed, total);
    }
    out
}

/// Human-readable sweep summary naming the optimal coupling strategy.
pub fn summarize(report: &GridReport) -> String {
    let mut out = String::new();
    match report.argmin_cell() {
        Some(cell) => {
            let _ = writeln!(
                out,
                "optimal coupling strategy: speed {} km/h with charge ceiling gamma {}",
                cell.speed_kmh, cell.gamma
            );
            let _ = writeln!(
                out,
                "total cost {:.2} with {} tractors (best of {} seeds)",
                cell.cost.total,
                cell.tractors,
                cell.per_seed.len()
            );
        }
        None => {
            let _ = writeln!(out, "no feasible cell in the sweep");
        }
    }
    out
}

// ---------------------------------------------------------------------------
// model and algorithm comparisons

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub seed: u64,
    pub model: EnergyModel,
    pub total: f64,
    pub tractors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationReport {
    pub rows: Vec<AblationRow>,
}

impl AblationReport {
    pub fn average_total(&self, model: EnergyModel) -> f64 {
        let rows: Vec<&AblationRow> = self.rows.iter().filter(|r| r.model == model).collect();
        rows.iter().map(|r| r.total).sum::<f64>() / rows.len() as f64
    }

    pub fn average_tractors(&self, model: EnergyModel) -> f64 {
        let rows: Vec<&AblationRow> = self.rows.iter().filter(|r| r.model == model).collect();
        rows.iter().map(|r| r.tractors as f64).sum::<f64>() / rows.len() as f64
    }
}

/// Solve the same instance under both travel-energy laws, one run per seed
/// per model.
pub fn energy_model_ablation(
    inst: &Instance,
    strategy: &Strategy,
    config: &GaConfig,
    seeds: &[u64],
    threads: usize,
) -> AblationReport {
    let jobs: Vec<(u64, EnergyModel)> = seeds
        .iter()
        .flat_map(|&seed| {
            [
                (seed, EnergyModel::Traditional),
                (seed, EnergyModel::StartStop),
            ]
        })
        .collect();
    let rows = run_indexed(jobs.len(), threads, |index| {
        let (seed, model) = jobs[index];
        let run_config = GaConfig {
            seed,
            ..config.clone()
        };
        match run_ga(inst, strategy, &run_config, model) {
            Ok((solution, cost, _)) => AblationRow {
                seed,
                model,
                total: cost.total,
                tractors: solution.tractor_count(),
            },
            Err(_) => AblationRow {
                seed,
                model,
                total: f64::NAN,
                tractors: 0,
            },
        }
    });
    AblationReport { rows }
}

pub fn ablation_csv(report: &AblationReport) -> String {
    let mut out = String::from("seed,energy_model,total_cost,required_tractors\n");
    for row in &report.rows {
        let model = match row.model {
            EnergyModel::StartStop => "start-stop",
            EnergyModel::Traditional => "traditional",
        };
        let _ = writeln!(
            out,
            "{},{},{:.2},{}",
            row.seed, model, row.total, row.tractors
        );
    }
    out
}

#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub seed: u64,
    pub improved_total: f64,
    pub improved_stats: GaStats,
    pub traditional_total: f64,
    pub traditional_stats: GaStats,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn average_improved(&self) -> f64 {
        self.rows.iter().map(|r| r.improved_total).sum::<f64>() / self.rows.len() as f64
    }

    pub fn average_traditional(&self) -> f64 {
        self.rows.iter().map(|r| r.traditional_total).sum::<f64>() / self.rows.len() as f64
    }
}

/// Run both solvers over the seed list for side-by-side comparison.
pub fn compare_algorithms(
    inst: &Instance,
    strategy: &Strategy,
    config: &GaConfig,
    seeds: &[u64],
    model: EnergyModel,
    threads: usize,
) -> ComparisonReport {
    let rows = run_indexed(seeds.len(), threads, |index| {
        let seed = seeds[index];
        let run_config = GaConfig {
            seed,
            ..config.clone()
        };
        let (_, improved_cost, improved_stats) =
            run_ga(inst, strategy, &run_config, model).expect("instance solvable");
        let (_, traditional_cost, traditional_stats) =
            run_traditional_ga(inst, strategy, &run_config, model).expect("instance solvable");
        ComparisonRow {
            seed,
            improved_total: improved_cost.total,
            improved_stats,
            traditional_total: traditional_cost.total,
            traditional_stats,
        }
    });
    ComparisonReport { rows }
}

/// Objective-value CSV of a comparison, deterministic for a fixed seed list.
pub fn comparison_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("run,traditional_objective,improved_objective\n");
    for (i, row) in report.rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{:.2},{:.2}",
            i + 1,
            row.traditional_total,
            row.improved_total
        );
    }
    let _ = writeln!(
        out,
        "average,{:.2},{:.2}",
        report.average_traditional(),
        report.average_improved()
    );
    out
}

/// Wall-clock sidecar of a comparison; excluded from determinism checks.
pub fn comparison_timing_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("run,traditional_seconds,improved_seconds\n");
    for (i, row) in report.rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{:.2},{:.2}",
            i + 1,
            row.traditional_stats.wall.as_secs_f64(),
            row.improved_stats.wall.as_secs_f64()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, Layout};

    fn quick_config() -> GaConfig {
        GaConfig {
            population_size: 16,
            max_iterations: 25,
            ..GaConfig::default()
        }
    }

    #[test]
    fn single_cell_sweep_matches_direct_run() {
        let inst = generate_instance(2, Layout::Scenario2Like, 10).unwrap();
        let config = quick_config();
        let report = sweep(
            &inst,
            &[25.0],
            &[0.8],
            &config,
            &[7],
            EnergyModel::StartStop,
            1,
        );
        assert_eq!(report.cells.len(), 1);
        let cell = &report.cells[0];
        let strategy = Strategy::new(25.0, 0.8).unwrap();
        let run_config = GaConfig { seed: 7, ..config };
        let (solution, cost, _) =
            run_ga(&inst, &strategy, &run_config, EnergyModel::StartStop).unwrap();
        assert_eq!(cell.cost.total, cost.total);
        assert_eq!(cell.tractors, solution.tractor_count());
        assert_eq!(report.argmin, Some(0));
    }

    #[test]
    fn full_grid_has_fifteen_cells_in_order() {
        let inst = generate_instance(3, Layout::Scenario2Like, 8).unwrap();
        let report = sweep(
            &inst,
            &crate::instance::DEFAULT_SPEEDS_KMH,
            &crate::instance::DEFAULT_GAMMAS,
            &quick_config(),
            &[1],
            EnergyModel::StartStop,
            2,
        );
        assert_eq!(report.cells.len(), 15);
        for (i, cell) in report.cells.iter().enumerate() {
            let expect_gamma = [0.8, 0.9, 1.0][i / 5];
            let expect_speed = [5.0, 10.0, 15.0, 20.0, 25.0][i % 5];
            assert_eq!(cell.gamma, expect_gamma);
            assert_eq!(cell.speed_kmh, expect_speed);
        }
        let argmin = report.argmin_cell().expect("feasible grid");
        for cell in &report.cells {
            assert!(argmin.cost.total <= cell.cost.total);
        }
    }

    #[test]
    fn sweep_is_thread_count_invariant() {
        let inst = generate_instance(4, Layout::Scenario2Like, 8).unwrap();
        let run = |threads| {
            sweep(
                &inst,
                &[10.0, 25.0],
                &[0.8, 1.0],
                &quick_config(),
                &[1, 2],
                EnergyModel::StartStop,
                threads,
            )
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn curves_mirror_grid_totals() {
        let inst = generate_instance(5, Layout::Scenario2Like, 8).unwrap();
        let report = sweep(
            &inst,
            &[10.0, 25.0],
            &[0.8, 0.9, 1.0],
            &quick_config(),
            &[3],
            EnergyModel::StartStop,
            2,
        );
        let series = emit_cost_curves(&report);
        assert_eq!(series.len(), 3);
        for s in &series {
            assert_eq!(s.points.len(), 2);
            for &(speed, total) in &s.points {
                let cell = report
                    .cells
                    .iter()
                    .find(|c| c.gamma == s.gamma && c.speed_kmh == speed)
                    .unwrap();
                assert_eq!(total, cell.cost.total);
            }
        }
        let csv = curve_csv(&series[0]);
        assert!(csv.starts_with("speed_kmh,total_cost\n"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn grid_csv_has_table_column_structure() {
        let inst = generate_instance(6, Layout::Scenario2Like, 6).unwrap();
        let report = sweep(
            &inst,
            &[25.0],
            &[0.8],
            &quick_config(),
            &[1],
            EnergyModel::StartStop,
            1,
        );
        let csv = grid_csv(&report);
        let header = csv.lines().next().unwrap();
        for column in [
            "required_tractors",
            "fixed_cost",
            "variable_cost",
            "charging_cost",
            "time_cost",
            "total_cost",
        ] {
            assert!(header.contains(column), "missing {column}");
        }
    }

    #[test]
    fn over_limit_speed_cell_is_marked_infeasible() {
        let inst = generate_instance(9, Layout::Scenario2Like, 6).unwrap();
        let report = sweep(
            &inst,
            &[30.0],
            &[0.8],
            &quick_config(),
            &[1],
            EnergyModel::StartStop,
            1,
        );
        assert_eq!(report.cells.len(), 1);
        assert!(!report.cells[0].feasible);
        assert_eq!(report.argmin, None);
        let csv = grid_csv(&report);
        assert!(csv.lines().nth(1).unwrap().ends_with(",no"));
    }

    #[test]
    fn ablation_reports_two_rows_per_seed() {
        let inst = generate_instance(7, Layout::Scenario2Like, 8).unwrap();
        let strategy = Strategy::new(25.0, 0.8).unwrap();
        let report = energy_model_ablation(&inst, &strategy, &quick_config(), &[1, 2, 3], 2);
        assert_eq!(report.rows.len(), 6);
        let csv = ablation_csv(&report);
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn models_agree_on_zero_length_network() {
        // all nodes at one point: no travel energy under either law
        use crate::energy::AircraftClass;
        use crate::instance::{Flight, Instance, Node, NodeKind};
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
                x_m: 0.0,
                y_m: 0.0,
                stand_group: Some(0),
            },
            Node {
                id: 2,
                kind: NodeKind::Charger,
                x_m: 0.0,
                y_m: 0.0,
                stand_group: None,
            },
        ];
        let flights = vec![Flight {
            id: 0,
            stand_node: 1,
            class: AircraftClass::Medium,
            scheduled_arrival_min: 10.0,
            scheduled_departure_min: 80.0,
            window_open_min: 15.0,
            window_close_min: 45.0,
        }];
        let inst = Instance::from_layout("point", nodes, flights);
        let strategy = Strategy::new(25.0, 0.8).unwrap();
        let report = energy_model_ablation(&inst, &strategy, &quick_config(), &[1], 1);
        let improved = report.average_total(EnergyModel::StartStop);
        let traditional = report.average_total(EnergyModel::Traditional);
        assert!((improved - traditional).abs() < 1e-9);
    }

    #[test]
    fn comparison_rows_and_averages() {
        let inst = generate_instance(8, Layout::Scenario2Like, 8).unwrap();
        let strategy = Strategy::new(25.0, 0.8).unwrap();
        let report = compare_algorithms(
            &inst,
            &strategy,
            &quick_config(),
            &[1, 2],
            EnergyModel::StartStop,
            2,
        );
        assert_eq!(report.rows.len(), 2);
        let csv = comparison_csv(&report);
        assert_eq!(csv.lines().count(), 4); // header + 2 rows + average
        assert!(csv.lines().last().unwrap().starts_with("average,"));
    }
}
