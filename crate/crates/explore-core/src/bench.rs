//! Multi-seed benchmark sweeps with CSV emission.

use crate::occupancy::{MapError, OccupancyGrid};
use crate::sim::{self, DetectorKind, RunConfig, RunResult, SimError, WindowMetrics};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use thiserror::Error;

pub const WINDOW_CSV_HEADER: &str =
    "window_index,detector,seed,attempts,successes,p,duration_s,s_total,s_o,s_n,n_frontiers";
pub const SUMMARY_CSV_HEADER: &str =
    "detector,scenario,epsilon,V,L,mean_attempts,mean_successes,mean_duration_s";
pub const SERIES_CSV_HEADER: &str = "detector,seed,sim_time,explored_m2,distance_m";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("scenario {0}: {1}")]
    Map(String, MapError),
    #[error("scenario {0}, detector {1}, seed {2}: {3}")]
    Run(String, &'static str, u64, SimError),
    #[error("csv parse error at line {0}: {1}")]
    Csv(usize, String),
}

/// A named world plus the run settings it is benchmarked with.
#[derive(Debug, Clone)]
pub struct BenchScenario {
    pub name: String,
    pub truth: OccupancyGrid,
    pub base_cfg: RunConfig,
}

/// One completed run within a sweep.
#[derive(Debug)]
pub struct RunRecord {
    pub scenario: String,
    pub detector: DetectorKind,
    pub seed: u64,
    /// Wall-clock time the whole run took, seconds.
    pub wall_s: f64,
    pub result: RunResult,
}

/// Per-(scenario, detector) aggregate over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub detector: &'static str,
    pub scenario: String,
    /// Mean exploration efficiency, m²/s.
    pub epsilon: f64,
    /// Mean explored area, m².
    pub v: f64,
    /// Mean travel distance, m.
    pub l: f64,
    pub mean_attempts: f64,
    pub mean_successes: f64,
    pub mean_duration_s: f64,
}

/// Runs every (scenario, detector, seed) combination, spread over `workers`
/// threads. The returned records are ordered by (scenario, detector, seed)
/// regardless of completion order.
pub fn sweep(
    scenarios: &[BenchScenario],
    detectors: &[DetectorKind],
    seeds: &[u64],
    workers: usize,
) -> Result<Vec<RunRecord>, BenchError> {
    let mut jobs = Vec::new();
    for sc in scenarios {
        for &det in detectors {
            for &seed in seeds {
                jobs.push((sc, det, seed));
            }
        }
    }

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<RunRecord, BenchError>>>> =
        Mutex::new((0..jobs.len()).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(sc, det, seed)) = jobs.get(i) else {
                    return;
                };
                let mut cfg = sc.base_cfg.clone();
                cfg.detector = det;
                cfg.seed = seed;
                let started = std::time::Instant::now();
                let outcome = sim::run(&sc.truth, &cfg)
                    .map(|result| RunRecord {
                        scenario: sc.name.clone(),
                        detector: det,
                        seed,
                        wall_s: started.elapsed().as_secs_f64(),
                        result,
                    })
                    .map_err(|e| BenchError::Run(sc.name.clone(), det.name(), seed, e));
                slots.lock().unwrap()[i] = Some(outcome);
            });
        }
    });

    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every job ran"))
        .collect()
}

fn fmt_f64(v: f64) -> String {
    // shortest round-trip representation, so parsing the CSV reproduces the
    // in-memory value exactly
    format!("{v}")
}

/// Per-window CSV for one scenario's records.
pub fn window_csv(records: &[&RunRecord]) -> String {
    let mut out = String::from(WINDOW_CSV_HEADER);
    out.push('\n');
    for rec in records {
        for m in &rec.result.window_metrics {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                m.window_index,
                rec.detector.name(),
                rec.seed,
                m.attempts,
                m.successes,
                fmt_f64(m.p),
                fmt_f64(m.duration_wall),
                fmt_f64(m.s_total),
                fmt_f64(m.s_o),
                fmt_f64(m.s_n),
                m.n_frontiers,
            ));
        }
    }
    out
}

/// A parsed per-window CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowCsvRow {
    pub detector: String,
    pub seed: u64,
    pub metrics: WindowMetrics,
}

/// Parses the output of [`window_csv`] back into rows.
pub fn parse_window_csv(text: &str) -> Result<Vec<WindowCsvRow>, BenchError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == WINDOW_CSV_HEADER => {}
        other => {
            return Err(BenchError::Csv(1, format!("bad header {:?}", other.map(|(_, l)| l))));
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 11 {
            return Err(BenchError::Csv(i + 1, format!("expected 11 fields, got {}", f.len())));
        }
        let bad = |what: &str| BenchError::Csv(i + 1, format!("bad {what} field"));
        rows.push(WindowCsvRow {
            detector: f[1].to_string(),
            seed: f[2].parse().map_err(|_| bad("seed"))?,
            metrics: WindowMetrics {
                window_index: f[0].parse().map_err(|_| bad("window_index"))?,
                attempts: f[3].parse().map_err(|_| bad("attempts"))?,
                successes: f[4].parse().map_err(|_| bad("successes"))?,
                p: f[5].parse().map_err(|_| bad("p"))?,
                duration_wall: f[6].parse().map_err(|_| bad("duration_s"))?,
                s_total: f[7].parse().map_err(|_| bad("s_total"))?,
                s_o: f[8].parse().map_err(|_| bad("s_o"))?,
                s_n: f[9].parse().map_err(|_| bad("s_n"))?,
                n_frontiers: f[10].parse().map_err(|_| bad("n_frontiers"))?,
                density_overlap: 0.0,
                density_non_overlap: 0.0,
            },
        });
    }
    Ok(rows)
}

/// Time-series CSV (explored area and travel distance) for one scenario.
pub fn series_csv(records: &[&RunRecord]) -> String {
    let mut out = String::from(SERIES_CSV_HEADER);
    out.push('\n');
    for rec in records {
        for ((t, explored), (_, distance)) in
            rec.result.explored_series.iter().zip(rec.result.distance_series.iter())
        {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                rec.detector.name(),
                rec.seed,
                fmt_f64(*t),
                fmt_f64(*explored),
                fmt_f64(*distance),
            ));
        }
    }
    out
}

/// Aggregates records into one row per (scenario, detector), in record order.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, DetectorKind)> = Vec::new();
    for rec in records {
        let key = (rec.scenario.clone(), rec.detector);
        if !order.contains(&key) {
            order.push(key);
        }
    }
    order
        .into_iter()
        .map(|(scenario, detector)| {
            let runs: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.scenario == scenario && r.detector == detector)
                .collect();
            let n = runs.len() as f64;
            let epsilon = runs
                .iter()
                .map(|r| {
                    if r.result.sim_time > 0.0 {
                        r.result.final_explored / r.result.sim_time
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
                / n;
            let v = runs.iter().map(|r| r.result.final_explored).sum::<f64>() / n;
            let l = runs.iter().map(|r| r.result.distance_traveled).sum::<f64>() / n;
            let windows: Vec<&WindowMetrics> =
                runs.iter().flat_map(|r| r.result.window_metrics.iter()).collect();
            let wn = windows.len().max(1) as f64;
            SummaryRow {
                detector: detector.name(),
                scenario,
                epsilon,
                v,
                l,
                mean_attempts: windows.iter().map(|m| m.attempts as f64).sum::<f64>() / wn,
                mean_successes: windows.iter().map(|m| m.successes as f64).sum::<f64>() / wn,
                mean_duration_s: windows.iter().map(|m| m.duration_wall).sum::<f64>() / wn,
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.detector,
            r.scenario,
            fmt_f64(r.epsilon),
            fmt_f64(r.v),
            fmt_f64(r.l),
            fmt_f64(r.mean_attempts),
            fmt_f64(r.mean_successes),
            fmt_f64(r.mean_duration_s),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps;
    use crate::sim::Termination;

    fn tiny_scenario() -> BenchScenario {
        // small open room: runs complete in well under a second
        let n = 48;
        let mut rows = String::new();
        for r in 0..n {
            if r == 0 || r == n - 1 {
                rows.push_str(&format!("{}\n", "#".repeat(n)));
            } else {
                rows.push_str(&format!("#{}#\n", ".".repeat(n - 2)));
            }
        }
        BenchScenario {
            name: "room".into(),
            truth: OccupancyGrid::load_ground_truth(&format!("{n} {n} 0.25\n{rows}")).unwrap(),
            base_cfg: RunConfig { tau: 150, ..Default::default() },
        }
    }

    #[test]
    fn sweep_order_is_deterministic() {
        let sc = tiny_scenario();
        let detectors = [DetectorKind::Adaptive, DetectorKind::Baseline];
        let seeds = [0u64, 1, 2];
        let a = sweep(std::slice::from_ref(&sc), &detectors, &seeds, 4).unwrap();
        let b = sweep(std::slice::from_ref(&sc), &detectors, &seeds, 1).unwrap();
        assert_eq!(a.len(), 6);
        for (ra, rb) in a.iter().zip(b.iter()) {
            assert_eq!((ra.detector, ra.seed), (rb.detector, rb.seed));
            assert_eq!(ra.result.explored_series, rb.result.explored_series);
            assert_eq!(ra.result.termination, rb.result.termination);
        }
        assert!(a.iter().all(|r| r.result.termination == Termination::Complete));
    }

    #[test]
    fn window_csv_round_trips() {
        let sc = tiny_scenario();
        let records =
            sweep(std::slice::from_ref(&sc), &[DetectorKind::Adaptive], &[0, 1], 2).unwrap();
        let refs: Vec<&RunRecord> = records.iter().collect();
        let csv = window_csv(&refs);
        let rows = parse_window_csv(&csv).unwrap();
        let mut i = 0;
        for rec in &records {
            for m in &rec.result.window_metrics {
                let row = &rows[i];
                assert_eq!(row.detector, rec.detector.name());
                assert_eq!(row.seed, rec.seed);
                assert_eq!(row.metrics.window_index, m.window_index);
                assert_eq!(row.metrics.attempts, m.attempts);
                assert_eq!(row.metrics.successes, m.successes);
                assert_eq!(row.metrics.p, m.p);
                assert_eq!(row.metrics.duration_wall, m.duration_wall);
                assert_eq!(row.metrics.s_total, m.s_total);
                assert_eq!(row.metrics.s_o, m.s_o);
                assert_eq!(row.metrics.s_n, m.s_n);
                assert_eq!(row.metrics.n_frontiers, m.n_frontiers);
                i += 1;
            }
        }
        assert_eq!(i, rows.len());
    }

    #[test]
    fn parse_rejects_bad_header() {
        assert!(parse_window_csv("nope\n1,2,3\n").is_err());
    }

    #[test]
    fn summary_covers_each_pair_once() {
        let sc = tiny_scenario();
        let detectors = [DetectorKind::Adaptive, DetectorKind::Baseline];
        let records = sweep(std::slice::from_ref(&sc), &detectors, &[0, 1], 2).unwrap();
        let rows = summarize(&records);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].detector, "adaptive");
        assert_eq!(rows[1].detector, "baseline");
        for r in &rows {
            assert!(r.v > 0.0);
            // the room fits in one scan, so runs may finish at sim_time 0
            assert!(r.epsilon >= 0.0);
            assert!(r.l >= 0.0);
        }
        let csv = summary_csv(&rows);
        assert!(csv.starts_with(SUMMARY_CSV_HEADER));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn bundled_scenarios_load() {
        for sc in maps::bundled() {
            let truth = OccupancyGrid::load_ground_truth(&sc.map_text).unwrap();
            let parsed = crate::config::parse(&sc.config_text).unwrap();
            let mut cfg = RunConfig::default();
            parsed.run.apply(&mut cfg).unwrap();
            let _ = BenchScenario { name: sc.name.into(), truth, base_cfg: cfg };
        }
    }
}
