use clap::{Parser, Subcommand};
use explore_core::bench::{self, BenchScenario, RunRecord};
use explore_core::sim::DetectorKind;
use explore_core::{config, maps, plot, OccupancyGrid, RunConfig};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "explore", about = "2D exploration simulator and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one exploration and write its metric CSVs.
    Run {
        /// Ground-truth map file (overrides the config's `map` entry).
        #[arg(long)]
        map: Option<PathBuf>,
        /// key=value config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// RNG seed (overrides the config's `seed` entry).
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep every scenario in a directory with both detectors over many seeds.
    Bench {
        /// Directory of `<name>.map` files with optional `<name>.cfg` files.
        #[arg(long)]
        scenarios: PathBuf,
        /// Comma-separated detector list.
        #[arg(long, default_value = "adaptive,baseline", value_delimiter = ',')]
        detectors: Vec<DetectorKind>,
        /// Number of seeds (runs seeds 0..n per detector).
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 4)]
        workers: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Render SVG charts from a directory of bench CSVs.
    Plot {
        /// Directory containing `<scenario>_windows.csv` / `<scenario>_series.csv`.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write the bundled scenario maps and configs to a directory.
    Scenarios {
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), String> {
    match cmd {
        Command::Run { map, config, seed, out } => run_cmd(map, config, seed, &out),
        Command::Bench { scenarios, detectors, seeds, workers, out } => {
            bench_cmd(&scenarios, &detectors, seeds, workers, &out)
        }
        Command::Plot { input } => plot_cmd(&input),
        Command::Scenarios { out } => scenarios_cmd(&out),
    }
}

fn load_map(path: &Path) -> Result<OccupancyGrid, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    OccupancyGrid::load_ground_truth(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_cmd(
    map: Option<PathBuf>,
    config_path: Option<PathBuf>,
    seed: Option<u64>,
    out: &Path,
) -> Result<(), String> {
    let mut cfg = RunConfig::default();
    let mut map_path = map;
    if let Some(path) = &config_path {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let parsed = config::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        parsed.run.apply(&mut cfg).map_err(|e| e.to_string())?;
        if map_path.is_none() {
            // map entries are relative to the config file
            map_path = parsed.map.map(|m| {
                path.parent().map_or_else(|| PathBuf::from(&m), |d| d.join(&m))
            });
        }
    }
    let map_path = map_path.ok_or("no map given (use --map or a `map` config entry)")?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let truth = load_map(&map_path)?;
    let name = map_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("run")
        .to_string();

    let started = std::time::Instant::now();
    let result = explore_core::run(&truth, &cfg).map_err(|e| e.to_string())?;
    let wall_s = started.elapsed().as_secs_f64();

    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    let record = RunRecord {
        scenario: name.clone(),
        detector: cfg.detector,
        seed: cfg.seed,
        wall_s,
        result,
    };
    let refs = [&record];
    write(out.join(format!("{name}_windows.csv")), &bench::window_csv(&refs))?;
    write(out.join(format!("{name}_series.csv")), &bench::series_csv(&refs))?;
    write(out.join(format!("{name}_map.txt")), &record.result.final_map.to_map_text())?;

    println!(
        "{name}: {:?} after {:.1} s sim time, explored {:.1} m² over {:.1} m ({} windows)",
        record.result.termination,
        record.result.sim_time,
        record.result.final_explored,
        record.result.distance_traveled,
        record.result.window_metrics.len(),
    );
    Ok(())
}

fn load_scenarios(dir: &Path) -> Result<Vec<BenchScenario>, String> {
    let mut names = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("map") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                names.push(stem.to_string());
            }
        }
    }
    names.sort();
    if names.is_empty() {
        return Err(format!("no .map files in {}", dir.display()));
    }
    names
        .into_iter()
        .map(|name| {
            let truth = load_map(&dir.join(format!("{name}.map")))?;
            let mut cfg = RunConfig::default();
            let cfg_path = dir.join(format!("{name}.cfg"));
            if cfg_path.exists() {
                let text =
                    fs::read_to_string(&cfg_path).map_err(|e| format!("{}: {e}", cfg_path.display()))?;
                let parsed =
                    config::parse(&text).map_err(|e| format!("{}: {e}", cfg_path.display()))?;
                parsed.run.apply(&mut cfg).map_err(|e| e.to_string())?;
            }
            Ok(BenchScenario { name, truth, base_cfg: cfg })
        })
        .collect()
}

fn bench_cmd(
    scenarios_dir: &Path,
    detectors: &[DetectorKind],
    seeds: u64,
    workers: usize,
    out: &Path,
) -> Result<(), String> {
    if seeds == 0 {
        return Err("--seeds must be at least 1".into());
    }
    let scenarios = load_scenarios(scenarios_dir)?;
    let seed_list: Vec<u64> = (0..seeds).collect();
    let records =
        bench::sweep(&scenarios, detectors, &seed_list, workers).map_err(|e| e.to_string())?;

    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    for sc in &scenarios {
        let refs: Vec<&RunRecord> = records.iter().filter(|r| r.scenario == sc.name).collect();
        write(out.join(format!("{}_windows.csv", sc.name)), &bench::window_csv(&refs))?;
        write(out.join(format!("{}_series.csv", sc.name)), &bench::series_csv(&refs))?;
    }
    let summary = bench::summarize(&records);
    write(out.join("summary.csv"), &bench::summary_csv(&summary))?;

    for row in &summary {
        println!(
            "{:<9} {:<10} eps={:.2} m²/s  V={:.0} m²  L={:.0} m  attempts={:.0}  successes={:.0}  dur={:.4} s",
            row.detector,
            row.scenario,
            row.epsilon,
            row.v,
            row.l,
            row.mean_attempts,
            row.mean_successes,
            row.mean_duration_s,
        );
    }
    Ok(())
}

fn plot_cmd(dir: &Path) -> Result<(), String> {
    let mut scenarios = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if let Some(name) = path.file_name().and_then(|s| s.to_str()) {
            if let Some(stem) = name.strip_suffix("_series.csv") {
                scenarios.push(stem.to_string());
            }
        }
    }
    scenarios.sort();
    if scenarios.is_empty() {
        return Err(format!("no *_series.csv files in {}", dir.display()));
    }
    for name in scenarios {
        let series_text = fs::read_to_string(dir.join(format!("{name}_series.csv")))
            .map_err(|e| e.to_string())?;
        let series = plot::parse_series_csv(&series_text)?;
        let windows_path = dir.join(format!("{name}_windows.csv"));
        let windows = if windows_path.exists() {
            bench::parse_window_csv(
                &fs::read_to_string(&windows_path).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?
        } else {
            Vec::new()
        };
        for (file, svg) in plot::scenario_charts(&name, &series, &windows) {
            write(dir.join(&file), &svg)?;
            println!("wrote {}", dir.join(&file).display());
        }
    }
    Ok(())
}

fn scenarios_cmd(out: &Path) -> Result<(), String> {
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    for sc in maps::bundled() {
        write(out.join(format!("{}.map", sc.name)), &sc.map_text)?;
        write(out.join(format!("{}.cfg", sc.name)), &sc.config_text)?;
        println!("wrote {}", out.join(format!("{}.map", sc.name)).display());
    }
    Ok(())
}

fn write(path: PathBuf, content: &str) -> Result<(), String> {
    fs::write(&path, content).map_err(|e| format!("{}: {e}", path.display()))
}
