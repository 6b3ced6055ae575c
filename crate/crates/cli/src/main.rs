//! Command-line front end: every solver capability behind one binary with
//! deterministic outputs and a run manifest beside every file it writes.

mod manifest;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use evtow_core::energy::EnergyModel;
use evtow_core::ga::{self, GaConfig, PmOrientation, RepairPolicy};
use evtow_core::instance::{self, Instance, Layout, Strategy};
use evtow_core::oracle::{self, OracleLimits, OracleOutcome};
use evtow_core::sim::{self, Solution};
use evtow_core::stn;
use evtow_core::sweep;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "evtow",
    version,
    about = "Electric tractor dispatch: energy-aware routing, charging strategy sweeps, and solver comparisons"
)]
struct Cli {
    /// Random seed for solver runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Solver config file (key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for file outputs and manifests.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Suppress progress chatter on stdout.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads for sweep-style verbs; EVTOW_THREADS is the fallback.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic instance.
    Generate {
        #[arg(long, default_value = "scenario1")]
        layout: String,
        #[arg(long)]
        flights: usize,
        /// Instance file path; defaults to instance.evtow in the out dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive towing windows from turnaround precedence for every flight.
    Windows {
        #[arg(long)]
        instance: PathBuf,
        /// Turnaround template file; a built-in representative one otherwise.
        #[arg(long)]
        template: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance under one coupling strategy.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 25.0)]
        speed: f64,
        #[arg(long, default_value_t = 0.8)]
        gamma: f64,
        #[arg(long)]
        pop: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
        /// Use the constant-speed travel energy law instead of start-stop.
        #[arg(long)]
        traditional_energy: bool,
        /// Run the traditional baseline solver instead of the improved one.
        #[arg(long)]
        baseline: bool,
    },
    /// Score an existing solution file and dump its trace.
    Evaluate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = 25.0)]
        speed: f64,
        #[arg(long, default_value_t = 0.8)]
        gamma: f64,
    },
    /// Evaluate the full speed-by-gamma coupling grid.
    Sweep {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "5,10,15,20,25")]
        speeds: String,
        #[arg(long, default_value = "0.8,0.9,1.0")]
        gammas: String,
        #[arg(long, default_value = "1")]
        seeds: String,
        #[arg(long)]
        pop: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Improved versus traditional solver over a seed list.
    CompareGa {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "1,2,3,4,5")]
        seeds: String,
        #[arg(long, default_value_t = 25.0)]
        speed: f64,
        #[arg(long, default_value_t = 0.8)]
        gamma: f64,
        #[arg(long)]
        pop: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Start-stop versus constant-speed energy model over a seed list.
    CompareEnergy {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "1,2,3,4,5")]
        seeds: String,
        #[arg(long, default_value_t = 25.0)]
        speed: f64,
        #[arg(long, default_value_t = 0.8)]
        gamma: f64,
        #[arg(long)]
        pop: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Certify the solver against the exact oracle on tiny instances.
    OracleCheck {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        flights: usize,
        #[arg(long, default_value_t = 25.0)]
        speed: f64,
        #[arg(long, default_value_t = 0.8)]
        gamma: f64,
    },
    /// Project the two terminals' flight scales three and five years out.
    Forecast {
        #[arg(long, default_value_t = 103.0)]
        t1: f64,
        #[arg(long, default_value_t = 44.0)]
        t2: f64,
        /// normal,recovery1,recovery2,decay,saturated
        #[arg(long)]
        rates: Option<String>,
    },
    /// Start-stop versus constant-speed cumulative energy over 100 m.
    Fig1 {
        #[arg(long, default_value = "3,5,7")]
        speeds: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// State-of-charge over time under the piecewise linear charging curve.
    ChargeCurve {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 150.0)]
        capacity: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| anyhow!("bad {what} entry: {t}"))
        })
        .collect()
}

fn load_config(cli: &Cli, pop: Option<usize>, iters: Option<usize>) -> Result<GaConfig> {
    let mut config = GaConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key = value", ln + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let parse_f = || -> Result<f64> {
                value
                    .parse()
                    .map_err(|_| anyhow!("config line {}: bad number", ln + 1))
            };
            match key {
                "population_size" => config.population_size = parse_f()? as usize,
                "max_iterations" => config.max_iterations = parse_f()? as usize,
                "generation_gap" => config.generation_gap = parse_f()?,
                "pc_min" => config.pc_range.0 = parse_f()?,
                "pc_max" => config.pc_range.1 = parse_f()?,
                "pm_min" => config.pm_range.0 = parse_f()?,
                "pm_max" => config.pm_range.1 = parse_f()?,
                "acceptable_delay_min" => config.acceptable_delay_min = parse_f()?,
                "repair_delay_min" => config.repair_delay_min = Some(parse_f()?),
                "repair" => {
                    config.repair = match value {
                        "repair" => RepairPolicy::Repair,
                        "reject" => RepairPolicy::Reject,
                        other => bail!("config line {}: unknown repair policy {other}", ln + 1),
                    }
                }
                "pm_orientation" => {
                    config.pm_orientation = match value {
                        "fittest-high" => PmOrientation::FittestHigh,
                        "srinivas" => PmOrientation::Srinivas,
                        other => bail!("config line {}: unknown orientation {other}", ln + 1),
                    }
                }
                other => bail!("config line {}: unknown key {other}", ln + 1),
            }
        }
    }
    if let Some(pop) = pop {
        config.population_size = pop;
    }
    if let Some(iters) = iters {
        config.max_iterations = iters;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate().map_err(|e| anyhow!(e.to_string()))?;
    Ok(config)
}

fn thread_count(cli: &Cli) -> usize {
    cli.threads
        .or_else(|| {
            std::env::var("EVTOW_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1)
}

fn ensure_out_dir(cli: &Cli) -> Result<()> {
    fs::create_dir_all(&cli.out_dir)
        .with_context(|| format!("creating {}", cli.out_dir.display()))?;
    Ok(())
}

fn write_output(cli: &Cli, name: &str, contents: &str) -> Result<PathBuf> {
    let path = cli.out_dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    if !cli.quiet {
        println!("wrote {}", path.display());
    }
    Ok(path)
}

fn load_instance_checked(path: &Path) -> Result<Instance> {
    let inst = instance::load_instance(path)
        .with_context(|| format!("loading instance {}", path.display()))?;
    let violations = instance::validate_instance(&inst);
    if !violations.is_empty() {
        bail!("instance invalid: {}", violations.join("; "));
    }
    Ok(inst)
}

fn run(cli: Cli) -> Result<()> {
    ensure_out_dir(&cli)?;
    match &cli.command {
        Command::Generate {
            layout,
            flights,
            out,
        } => {
            let layout = Layout::parse(layout).ok_or_else(|| anyhow!("unknown layout {layout}"))?;
            let seed = cli.seed.unwrap_or(1);
            let inst = instance::generate_instance(seed, layout, *flights)?;
            let path = out
                .clone()
                .unwrap_or_else(|| cli.out_dir.join("instance.evtow"));
            instance::save_instance(&inst, &path)?;
            if !cli.quiet {
                println!(
                    "generated {} with {} flights, {} nodes -> {}",
                    inst.name,
                    inst.flights.len(),
                    inst.node_count(),
                    path.display()
                );
            }
            manifest::write(
                &cli,
                "generate",
                Some(&path),
                &[("layout", layout.as_str())],
            )?;
        }
        Command::Windows {
            instance: inst_path,
            template,
            out,
        } => {
            let inst = load_instance_checked(inst_path)?;
            let template = match template {
                Some(path) => stn::parse_template(&fs::read_to_string(path)?)
                    .map_err(|e| anyhow!("template: {e}"))?,
                None => stn::default_template(),
            };
            let mut csv = String::from("flight_id,window_open_min,window_close_min\n");
            for flight in &inst.flights {
                let transit =
                    (flight.scheduled_departure_min - flight.scheduled_arrival_min).round() as i64;
                let (open, close) =
                    stn::derive_window(transit, &template, flight.scheduled_arrival_min)
                        .map_err(|e| anyhow!("flight {}: {e}", flight.id))?;
                let _ = writeln!(csv, "{},{},{}", flight.id, open, close);
            }
            match out {
                Some(path) => {
                    fs::write(path, &csv)?;
                    if !cli.quiet {
                        println!("wrote {}", path.display());
                    }
                }
                None => print!("{csv}"),
            }
            manifest::write(&cli, "windows", Some(inst_path), &[])?;
        }
        Command::Solve {
            instance: inst_path,
            speed,
            gamma,
            pop,
            iters,
            traditional_energy,
            baseline,
        } => {
            let inst = load_instance_checked(inst_path)?;
            let strategy = Strategy::new(*speed, *gamma).map_err(|e| anyhow!(e))?;
            let config = load_config(&cli, *pop, *iters)?;
            let model = if *traditional_energy {
                EnergyModel::Traditional
            } else {
                EnergyModel::StartStop
            };
            let (solution, cost, stats) = if *baseline {
                ga::run_traditional_ga(&inst, &strategy, &config, model)?
            } else {
                ga::run_ga(&inst, &strategy, &config, model)?
            };
            write_output(&cli, "solution.txt", &solution.to_text())?;
            write_output(&cli, "cost.json", &cost_json(&cost))?;
            let mut stats_csv = String::from("iteration,best,mean\n");
            for (i, iter) in stats.iterations.iter().enumerate() {
                let _ = writeln!(stats_csv, "{},{:.6},{:.6}", i + 1, iter.best, iter.mean);
            }
            write_output(&cli, "stats.csv", &stats_csv)?;
            if !cli.quiet {
                println!(
                    "best total {:.2} with {} tractors ({} evaluations in {:.1}s)",
                    cost.total,
                    solution.tractor_count(),
                    stats.evaluations,
                    stats.wall.as_secs_f64()
                );
            }
            manifest::write_with_config(
                &cli,
                "solve",
                Some(inst_path),
                &config,
                &[
                    ("speed_kmh", format!("{speed}")),
                    ("gamma", format!("{gamma}")),
                    ("baseline", format!("{baseline}")),
                    ("traditional_energy", format!("{traditional_energy}")),
                ],
            )?;
        }
        Command::Evaluate {
            instance: inst_path,
            solution: sol_path,
            speed,
            gamma,
        } => {
            let inst = load_instance_checked(inst_path)?;
            let solution = Solution::parse(&fs::read_to_string(sol_path)?)
                .map_err(|e| anyhow!("solution: {e}"))?;
            let strategy = Strategy::new(*speed, *gamma).map_err(|e| anyhow!(e))?;
            let (cost, traces) =
                sim::evaluate(&solution, &inst, &strategy, EnergyModel::StartStop)?;
            write_output(&cli, "cost.json", &cost_json(&cost))?;

            let mut trace_csv = String::from(
                "route,position,node,kind,arrival_min,service_start_min,departure_min,soc_arrival_kwh,soc_departure_kwh,wait_min,delay_min,charge_min,top_up_kwh\n",
            );
            let mut route_csv =
                String::from("route,stops,electricity_kwh,travel_distance_km,total_cost\n");
            for (ri, trace) in traces.iter().enumerate() {
                for (pos, visit) in trace.visits.iter().enumerate() {
                    let kind = if inst.is_charger(visit.node) {
                        "charger"
                    } else if inst.is_stand(visit.node) {
                        "stand"
                    } else {
                        "depot"
                    };
                    let (charge_min, top_up) = visit
                        .charge
                        .as_ref()
                        .map(|c| (c.duration_min, c.top_up_kwh()))
                        .unwrap_or((0.0, 0.0));
                    let _ = writeln!(
                        trace_csv,
                        "{},{},{},{},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3}",
                        ri + 1,
                        pos,
                        visit.node,
                        kind,
                        visit.arrival_min,
                        visit.service_start_min,
                        visit.departure_min,
                        visit.soc_arrival_kwh,
                        visit.soc_departure_kwh,
                        visit.wait_min,
                        visit.delay_min,
                        charge_min,
                        top_up,
                    );
                }
                let per_route = sim::route_cost(trace, &inst);
                let stops: Vec<String> = trace
                    .visits
                    .iter()
                    .map(|v| {
                        if v.node == 0 {
                            "d".to_string()
                        } else if inst.is_charger(v.node) {
                            format!("cs{}", v.node)
                        } else {
                            v.node.to_string()
                        }
                    })
                    .collect();
                let _ = writeln!(
                    route_csv,
                    "E{},{},{:.2},{:.2},{:.2}",
                    ri + 1,
                    stops.join("-"),
                    trace.energy_kwh,
                    trace.distance_m / 1000.0,
                    per_route.total,
                );
            }
            write_output(&cli, "trace.csv", &trace_csv)?;
            write_output(&cli, "routes.csv", &route_csv)?;
            if !cli.quiet {
                println!(
                    "total {:.2} = fixed {:.2} + charging {:.2} + maintenance {:.2} + time {:.2}",
                    cost.total, cost.fixed, cost.charging, cost.maintenance, cost.time_penalty
                );
            }
            manifest::write(&cli, "evaluate", Some(inst_path), &[])?;
        }
        Command::Sweep {
            instance: inst_path,
            speeds,
            gammas,
            seeds,
            pop,
            iters,
        } => {
            let inst = load_instance_checked(inst_path)?;
            let speeds: Vec<f64> = parse_list(speeds, "speed")?;
            let gammas: Vec<f64> = parse_list(gammas, "gamma")?;
            let seeds: Vec<u64> = parse_list(seeds, "seed")?;
            let config = load_config(&cli, *pop, *iters)?;
            let threads = thread_count(&cli);
            let report = sweep::sweep(
                &inst,
                &speeds,
                &gammas,
                &config,
                &seeds,
                EnergyModel::StartStop,
                threads,
            );
            write_output(&cli, "grid.csv", &sweep::grid_csv(&report))?;
            for series in sweep::emit_cost_curves(&report) {
                let name = format!("cost_curve_gamma_{}.csv", series.gamma);
                write_output(&cli, &name, &sweep::curve_csv(&series))?;
            }
            let summary = sweep::summarize(&report);
            write_output(&cli, "summary.txt", &summary)?;
            if !cli.quiet {
                print!("{summary}");
            }
            manifest::write_with_config(
                &cli,
                "sweep",
                Some(inst_path),
                &config,
                &[
                    ("speeds", format!("{speeds:?}")),
                    ("gammas", format!("{gammas:?}")),
                    ("seeds", format!("{seeds:?}")),
                    ("threads", format!("{threads}")),
                ],
            )?;
        }
        Command::CompareGa {
            instance: inst_path,
            seeds,
            speed,
            gamma,
            pop,
            iters,
        } => {
            let inst = load_instance_checked(inst_path)?;
            let seeds: Vec<u64> = parse_list(seeds, "seed")?;
            let strategy = Strategy::new(*speed, *gamma).map_err(|e| anyhow!(e))?;
            let config = load_config(&cli, *pop, *iters)?;
            let report = sweep::compare_algorithms(
                &inst,
                &strategy,
                &config,
                &seeds,
                EnergyModel::StartStop,
                thread_count(&cli),
            );
            write_output(&cli, "compare_ga.csv", &sweep::comparison_csv(&report))?;
            write_output(
                &cli,
                "compare_ga_timing.csv",
                &sweep::comparison_timing_csv(&report),
            )?;
            if !cli.quiet {
                println!(
                    "averages: traditional {:.2}, improved {:.2}",
                    report.average_traditional(),
                    report.average_improved()
                );
            }
            manifest::write_with_config(&cli, "compare-ga", Some(inst_path), &config, &[])?;
        }
        Command::CompareEnergy {
            instance: inst_path,
            seeds,
            speed,
            gamma,
            pop,
            iters,
        } => {
            let inst = load_instance_checked(inst_path)?;
            let seeds: Vec<u64> = parse_list(seeds, "seed")?;
            let strategy = Strategy::new(*speed, *gamma).map_err(|e| anyhow!(e))?;
            let config = load_config(&cli, *pop, *iters)?;
            let report =
                sweep::energy_model_ablation(&inst, &strategy, &config, &seeds, thread_count(&cli));
            write_output(&cli, "compare_energy.csv", &sweep::ablation_csv(&report))?;
            if !cli.quiet {
                println!(
                    "average objective: traditional {:.2}, start-stop {:.2}",
                    report.average_total(EnergyModel::Traditional),
                    report.average_total(EnergyModel::StartStop)
                );
            }
            manifest::write_with_config(&cli, "compare-energy", Some(inst_path), &config, &[])?;
        }
        Command::OracleCheck {
            count,
            flights,
            speed,
            gamma,
        } => {
            let base_seed = cli.seed.unwrap_or(1);
            let strategy = Strategy::new(*speed, *gamma).map_err(|e| anyhow!(e))?;
            let limits = OracleLimits::default();
            if *flights > limits.max_flights {
                bail!(
                    "--flights may not exceed the oracle cap of {}",
                    limits.max_flights
                );
            }
            let config = load_config(&cli, None, None)?;
            let mut csv = String::from("instance_seed,flights,oracle_total,ga_total,status\n");
            let mut matches = 0usize;
            for i in 0..*count {
                let seed = base_seed + i as u64;
                let n = 3 + (i % (*flights).max(3).saturating_sub(2));
                let full = instance::generate_instance(seed, Layout::Scenario2Like, n)?;
                let tiny = instance::truncate_chargers(&full, 1);
                let outcome =
                    oracle::exact_solve(&tiny, &strategy, &limits, EnergyModel::StartStop)?;
                let oracle_total = match outcome {
                    OracleOutcome::Optimal { cost, .. } => cost.total,
                    OracleOutcome::Infeasible => {
                        let _ = writeln!(csv, "{seed},{n},infeasible,,skipped");
                        continue;
                    }
                };
                let run_config = GaConfig {
                    seed,
                    ..config.clone()
                };
                let (_, ga_cost, _) =
                    ga::run_ga(&tiny, &strategy, &run_config, EnergyModel::StartStop)?;
                let status = if ga_cost.total < oracle_total - 1e-6 {
                    "below-oracle"
                } else if (ga_cost.total - oracle_total).abs() <= 1e-6 {
                    matches += 1;
                    "match"
                } else {
                    "above"
                };
                let _ = writeln!(
                    csv,
                    "{seed},{n},{:.4},{:.4},{status}",
                    oracle_total, ga_cost.total
                );
            }
            write_output(&cli, "oracle_check.csv", &csv)?;
            if !cli.quiet {
                print!("{csv}");
                println!("matched the oracle optimum on {matches}/{count} instances");
            }
            manifest::write(&cli, "oracle-check", None, &[("count", &count.to_string())])?;
        }
        Command::Forecast { t1, t2, rates } => {
            let rates = match rates {
                None => instance::ForecastRates::default(),
                Some(text) => {
                    let values: Vec<f64> = parse_list(text, "rate")?;
                    if values.len() != 5 {
                        bail!(
                            "--rates needs five values: normal,recovery1,recovery2,decay,saturated"
                        );
                    }
                    instance::ForecastRates {
                        normal_growth: values[0],
                        recovery_t1: values[1],
                        recovery_t2: values[2],
                        recovery_decay: values[3],
                        saturated_growth: values[4],
                    }
                }
            };
            let forecast = instance::forecast_flights(*t1, *t2, &rates);
            println!(
                "t1_short,{:.1},{}",
                forecast.t1_short,
                instance::round_to_ten(forecast.t1_short)
            );
            println!(
                "t2_short,{:.1},{}",
                forecast.t2_short,
                instance::round_to_ten(forecast.t2_short)
            );
            println!(
                "t1_mid,{:.1},{}",
                forecast.t1_mid,
                instance::round_to_ten(forecast.t1_mid)
            );
            println!(
                "t2_mid,{:.1},{}",
                forecast.t2_mid,
                instance::round_to_ten(forecast.t2_mid)
            );
            manifest::write(&cli, "forecast", None, &[])?;
        }
        Command::Fig1 { speeds, out } => {
            let speeds: Vec<f64> = parse_list(speeds, "speed")?;
            let params = evtow_core::energy::VehicleParams::default_tractor();
            let mut csv = String::from("distance_m,v_mps,improved_kwh,traditional_kwh\n");
            for &v in &speeds {
                for l in 0..=100 {
                    let improved = evtow_core::energy::cumulative_profile(l as f64, v, &params)
                        .map_err(|e| anyhow!(e))?;
                    let traditional = evtow_core::energy::traditional_energy(l as f64, v, &params)
                        .map_err(|e| anyhow!(e))?;
                    let _ = writeln!(csv, "{l},{v},{improved:.6},{traditional:.6}");
                }
            }
            match out {
                Some(path) => {
                    fs::write(path, &csv)?;
                    if !cli.quiet {
                        println!("wrote {}", path.display());
                    }
                }
                None => print!("{csv}"),
            }
            manifest::write(&cli, "fig1", None, &[])?;
        }
        Command::ChargeCurve {
            gamma,
            capacity,
            out,
        } => {
            if !(*gamma > 0.2 && *gamma <= 1.0) {
                bail!("gamma {gamma} outside (0.2, 1]");
            }
            let curve = evtow_core::charging::ChargingCurve::default();
            let target = gamma * capacity;
            let mut csv = String::from("minutes,soc_kwh\n");
            let mut minutes = 0.0;
            loop {
                let soc = evtow_core::charging::soc_after(0.0, minutes, *capacity, &curve);
                let _ = writeln!(csv, "{minutes},{soc:.4}");
                if soc >= target - 1e-9 {
                    break;
                }
                minutes += 0.5;
            }
            match out {
                Some(path) => {
                    fs::write(path, &csv)?;
                    if !cli.quiet {
                        println!("wrote {}", path.display());
                    }
                }
                None => print!("{csv}"),
            }
            manifest::write(&cli, "charge-curve", None, &[])?;
        }
    }
    Ok(())
}

fn cost_json(cost: &sim::CostBreakdown) -> String {
    format!(
        "{{\n  \"fixed\": {},\n  \"charging\": {},\n  \"maintenance\": {},\n  \"time_penalty\": {},\n  \"total\": {}\n}}\n",
        cost.fixed, cost.charging, cost.maintenance, cost.time_penalty, cost.total
    )
}
