//! End-to-end acceptance gate. Each criterion prints one PASS/FAIL line;
//! run with `cargo test --test acceptance -- --nocapture` to see them all.

use explore_core::bench::{self, BenchScenario, RunRecord};
use explore_core::geometry::{decompose, Rect};
use explore_core::occupancy::Cell;
use explore_core::sampler::compute_plan;
use explore_core::sim::{DetectorKind, RunConfig, WindowMetrics};
use explore_core::{config, maps, OccupancyGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::Instant;

const SEEDS: u64 = 10;
const DETECTORS: [DetectorKind; 2] = [DetectorKind::Adaptive, DetectorKind::Baseline];

struct SweepData {
    records: Vec<RunRecord>,
    /// Wall-clock seconds each scenario's 2x10-run sweep took.
    scenario_wall: Vec<(String, f64)>,
    scenarios: Vec<BenchScenario>,
}

static DATA: OnceLock<SweepData> = OnceLock::new();

fn data() -> &'static SweepData {
    DATA.get_or_init(|| {
        let scenarios: Vec<BenchScenario> = maps::bundled()
            .into_iter()
            .map(|sc| {
                let truth = OccupancyGrid::load_ground_truth(&sc.map_text).unwrap();
                let mut cfg = RunConfig::default();
                config::parse(&sc.config_text).unwrap().run.apply(&mut cfg).unwrap();
                BenchScenario { name: sc.name.to_string(), truth, base_cfg: cfg }
            })
            .collect();
        let seeds: Vec<u64> = (0..SEEDS).collect();
        let mut records = Vec::new();
        let mut scenario_wall = Vec::new();
        for sc in &scenarios {
            let started = Instant::now();
            let mut part =
                bench::sweep(std::slice::from_ref(sc), &DETECTORS, &seeds, 1).unwrap();
            scenario_wall.push((sc.name.clone(), started.elapsed().as_secs_f64()));
            records.append(&mut part);
        }
        SweepData { records, scenario_wall, scenarios }
    })
}

fn runs<'a>(scenario: &str, det: DetectorKind) -> Vec<&'a RunRecord> {
    data()
        .records
        .iter()
        .filter(|r| r.scenario == scenario && r.detector == det)
        .collect()
}

fn windows<'a>(scenario: &str, det: DetectorKind) -> Vec<&'a WindowMetrics> {
    runs(scenario, det)
        .into_iter()
        .flat_map(|r| r.result.window_metrics.iter())
        .collect()
}

fn scenario_cfg(name: &str) -> &'static RunConfig {
    &data().scenarios.iter().find(|s| s.name == name).unwrap().base_cfg
}

fn report(id: usize, name: &str, pass: bool, details: &str) {
    println!("criterion {id} ({name}): {} — {details}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {details}");
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

#[test]
fn criterion_1_over_sampling_elimination() {
    let theta = scenario_cfg("corridors").theta;
    // adaptive: node density equalizes across overlap / non-overlap
    let mut diffs = Vec::new();
    for run in runs("corridors", DetectorKind::Adaptive) {
        let qualifying: Vec<&WindowMetrics> = run
            .result
            .window_metrics
            .iter()
            .filter(|m| m.s_o > 0.0 && m.s_n > 0.0)
            .collect();
        assert!(
            qualifying.len() >= 20,
            "need >=20 consecutive overlapping windows, got {}",
            qualifying.len()
        );
        diffs.extend(
            qualifying.iter().map(|m| (m.density_overlap - m.density_non_overlap).abs()),
        );
    }
    let adaptive_dev = mean(diffs.into_iter()) / theta;

    // baseline: overlap region stays over-dense
    let base: Vec<&WindowMetrics> = windows("corridors", DetectorKind::Baseline)
        .into_iter()
        .filter(|m| m.s_o > 0.0 && m.s_n > 0.0)
        .collect();
    let base_overlap = mean(base.iter().map(|m| m.density_overlap));
    let base_non = mean(base.iter().map(|m| m.density_non_overlap));

    let wall = data()
        .scenario_wall
        .iter()
        .find(|(n, _)| n == "corridors")
        .map(|(_, w)| *w)
        .unwrap();

    let pass = adaptive_dev <= 0.25 && base_overlap >= 1.5 * base_non && wall < 120.0;
    report(
        1,
        "over-sampling elimination",
        pass,
        &format!(
            "adaptive |d_o-d_n|/theta = {adaptive_dev:.3} (<= 0.25), baseline d_o = \
             {base_overlap:.2} vs 1.5*d_n = {:.2}, corridors sweep {wall:.1} s (< 120 s)",
            1.5 * base_non
        ),
    );
}

fn attempts_ratio(scenario: &str) -> f64 {
    let a = mean(windows(scenario, DetectorKind::Adaptive).iter().map(|m| m.attempts as f64));
    let b = mean(windows(scenario, DetectorKind::Baseline).iter().map(|m| m.attempts as f64));
    a / b
}

#[test]
fn criterion_2_attempt_reduction() {
    let corridors = attempts_ratio("corridors");
    let garage = attempts_ratio("garage");
    let in_band = |r: f64| r <= 0.75 && (0.4..=0.9).contains(&r);
    report(
        2,
        "attempt reduction",
        in_band(corridors) && in_band(garage),
        &format!(
            "adaptive/baseline mean attempts per window: corridors {corridors:.2}, \
             garage {garage:.2} (each <= 0.75 and within [0.4, 0.9])"
        ),
    );
}

#[test]
fn criterion_3_duration_reduction() {
    let a = mean(windows("corridors", DetectorKind::Adaptive).iter().map(|m| m.duration_wall));
    let b = mean(windows("corridors", DetectorKind::Baseline).iter().map(|m| m.duration_wall));
    let ratio = a / b;
    report(
        3,
        "duration reduction",
        ratio <= 0.7,
        &format!("corridors mean per-window detector time {a:.4} s vs {b:.4} s, ratio {ratio:.2} (<= 0.7)"),
    );
}

#[test]
fn criterion_4_success_rate_ratio() {
    let rate = |det| {
        let w = windows("forest", det);
        let attempts: usize = w.iter().map(|m| m.attempts).sum();
        let successes: usize = w.iter().map(|m| m.successes).sum();
        successes as f64 / attempts as f64
    };
    let rate_ratio = rate(DetectorKind::Adaptive) / rate(DetectorKind::Baseline);
    let s_adaptive = mean(windows("forest", DetectorKind::Adaptive).iter().map(|m| m.s_total));
    let s_fixed = mean(windows("forest", DetectorKind::Baseline).iter().map(|m| m.s_total));
    let area_ratio = s_fixed / s_adaptive;
    let rel = rate_ratio / area_ratio;
    report(
        4,
        "success-rate ratio",
        (0.7..=1.3).contains(&rel),
        &format!(
            "forest success-rate ratio {rate_ratio:.2} vs area ratio S_fixed/S_adaptive \
             {area_ratio:.2}: relative {rel:.2} (within 1 +/- 0.3)"
        ),
    );
}

#[test]
fn criterion_5_exploration_parity() {
    let mut details = Vec::new();
    let mut pass = true;
    for scenario in ["corridors", "forest", "garage"] {
        let v = |det| mean(runs(scenario, det).iter().map(|r| r.result.final_explored));
        let va = v(DetectorKind::Adaptive);
        let vb = v(DetectorKind::Baseline);
        let rel = (va - vb).abs() / vb;
        pass &= rel <= 0.10;
        details.push(format!("{scenario} {va:.0}/{vb:.0} m² ({:+.1}%)", 100.0 * (va / vb - 1.0)));
    }
    report(5, "exploration parity", pass, &format!("adaptive vs baseline V: {}", details.join(", ")));
}

#[test]
fn criterion_6_compute_plan_oracle() {
    const RES: f64 = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let snapped_rect = |rng: &mut ChaCha8Rng| {
        // coordinates on the 0.05 m lattice so cell counting is exact
        let x0 = rng.gen_range(0..100) as f64 * RES;
        let y0 = rng.gen_range(0..100) as f64 * RES;
        let w = rng.gen_range(1..80) as f64 * RES;
        let h = rng.gen_range(1..80) as f64 * RES;
        Rect::new(x0, y0, x0 + w, y0 + h)
    };
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let current = snapped_rect(&mut rng);
        let previous = if rng.gen_bool(0.9) { Some(snapped_rect(&mut rng)) } else { None };
        let d = decompose(&current, previous.as_ref());

        // brute-force cell-count areas over the current window
        let (mut cells_total, mut cells_overlap) = (0u64, 0u64);
        let nx = ((current.x_max - current.x_min) / RES).round() as i64;
        let ny = ((current.y_max - current.y_min) / RES).round() as i64;
        for iy in 0..ny {
            for ix in 0..nx {
                let cx = current.x_min + (ix as f64 + 0.5) * RES;
                let cy = current.y_min + (iy as f64 + 0.5) * RES;
                cells_total += 1;
                if let Some(p) = previous {
                    if cx > p.x_min && cx < p.x_max && cy > p.y_min && cy < p.y_max {
                        cells_overlap += 1;
                    }
                }
            }
        }
        let s_o_oracle = cells_overlap as f64 * RES * RES;
        let s_n_oracle = (cells_total - cells_overlap) as f64 * RES * RES;

        let theta = rng.gen_range(0.1..4.0);
        let tau = rng.gen_range(1..2000);
        let n_o = rng.gen_range(0..200);
        let plan = compute_plan(theta, tau, &d, n_o);

        // direct formula on the independently counted areas
        let n_eo_oracle = (theta * s_o_oracle - n_o as f64).max(0.0);
        let n_en_oracle = theta * s_n_oracle;
        let tol = |o: f64| 1e-6 * o.abs().max(1.0);
        let d_eo = (plan.n_eo - n_eo_oracle).abs();
        let d_en = (plan.n_en - n_en_oracle).abs();
        assert!(d_eo <= tol(n_eo_oracle), "n_eo {} vs oracle {n_eo_oracle}", plan.n_eo);
        assert!(d_en <= tol(n_en_oracle), "n_en {} vs oracle {n_en_oracle}", plan.n_en);
        worst = worst.max(d_eo.max(d_en));

        // probabilities exact given the quotas
        let total = plan.n_eo + plan.n_en;
        if total > 0.0 {
            assert_eq!(plan.eta_n, plan.n_en / total);
            assert_eq!(plan.eta_o, plan.n_eo / total);
        } else {
            assert!(plan.is_saturated());
        }
        checked += 1;
    }
    report(
        6,
        "compute_plan oracle equivalence",
        checked == 100_000,
        &format!("{checked} randomized window pairs, worst quota deviation {worst:.2e} (tol 1e-6 relative)"),
    );
}

#[test]
fn criterion_7_rrt_invariant_suite() {
    let violations: usize =
        data().records.iter().map(|r| r.result.validation_violations).sum();
    let total_windows: usize =
        data().records.iter().map(|r| r.result.window_metrics.len()).sum();
    report(
        7,
        "RRT invariant suite",
        violations == 0 && total_windows > 0,
        &format!(
            "{violations} node-invariant violations across {} runs / {total_windows} re-validated windows",
            data().records.len()
        ),
    );
}

#[test]
fn criterion_8_determinism() {
    let exe = env!("CARGO_BIN_EXE_explore");
    let dir = tempfile::tempdir().unwrap();
    let scen = dir.path().join("scen");
    let status = std::process::Command::new(exe)
        .args(["scenarios", "--out", scen.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let run_bench = |out: &std::path::Path| {
        let status = std::process::Command::new(exe)
            .args([
                "bench",
                "--scenarios",
                scen.to_str().unwrap(),
                "--seeds",
                "2",
                "--workers",
                "1",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    run_bench(&out_a);
    run_bench(&out_b);

    // Wall-clock duration columns cannot repeat across executions; every
    // simulated quantity must be byte-identical.
    let mask_durations = |name: &str, text: String| -> String {
        let duration_field = match name {
            n if n.ends_with("_windows.csv") => Some(6),
            "summary.csv" => Some(7),
            _ => None,
        };
        let Some(field) = duration_field else { return text };
        text.lines()
            .map(|line| {
                let mut parts: Vec<&str> = line.split(',').collect();
                if parts.len() > field {
                    parts[field] = "-";
                }
                parts.join(",")
            })
            .collect::<Vec<_>>()
            .join("\n")
    };

    let mut names: Vec<String> = std::fs::read_dir(&out_a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.iter().any(|n| n == "summary.csv"));
    let mut compared = 0;
    for name in &names {
        let a = std::fs::read_to_string(out_a.join(name)).unwrap();
        let b = std::fs::read_to_string(out_b.join(name)).unwrap();
        assert_eq!(
            mask_durations(name, a),
            mask_durations(name, b),
            "{name} differs between executions"
        );
        compared += 1;
    }
    report(
        8,
        "determinism",
        compared >= 9,
        &format!(
            "{compared} CSV files byte-identical across two bench executions \
             (wall-clock duration columns excluded)"
        ),
    );
}

#[test]
fn criterion_9_maze_completeness() {
    let sc = data().scenarios.iter().find(|s| s.name == "maze").unwrap();
    let truth = &sc.truth;
    let start = sc.base_cfg.start.unwrap();

    // reachability oracle on ground truth: 4-connected flood fill over Free
    let (w, h) = (truth.width() as i64, truth.height() as i64);
    let start_cell = truth.cell_index(start).unwrap();
    let mut reach = vec![false; (w * h) as usize];
    let idx = |c: (i64, i64)| (c.1 * w + c.0) as usize;
    let mut stack = vec![start_cell];
    reach[idx(start_cell)] = true;
    while let Some(cell) = stack.pop() {
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let n = (cell.0 + dx, cell.1 + dy);
            if truth.cell(n.0, n.1) == Some(Cell::Free) && !reach[idx(n)] {
                reach[idx(n)] = true;
                stack.push(n);
            }
        }
    }
    let reachable: Vec<(i64, i64)> = (0..h)
        .flat_map(|iy| (0..w).map(move |ix| (ix, iy)))
        .filter(|&c| reach[idx(c)])
        .collect();
    assert!(!reachable.is_empty());

    let mut worst_frac = 1.0f64;
    let mut worst_wall = 0.0f64;
    for det in DETECTORS {
        for run in runs("maze", det) {
            let explored = reachable
                .iter()
                .filter(|&&(ix, iy)| run.result.final_map.cell(ix, iy) == Some(Cell::Free))
                .count();
            worst_frac = worst_frac.min(explored as f64 / reachable.len() as f64);
            worst_wall = worst_wall.max(run.wall_s);
        }
    }
    report(
        9,
        "maze completeness",
        worst_frac >= 0.95 && worst_wall < 300.0,
        &format!(
            "worst explored fraction of {} reachable free cells: {:.1}% (>= 95%), \
             slowest run {worst_wall:.1} s (< 300 s)",
            reachable.len(),
            100.0 * worst_frac
        ),
    );
}
