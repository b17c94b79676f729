//! Closed-loop exploration driver: scan, integrate, window update, detect,
//! pick frontier, navigate. Produces the per-window metric stream the
//! benchmark harness aggregates.

use crate::detector::{
    baseline_expand, best_frontier, expand_window, DetectorConfig, DetectorError, RrtForest,
};
use crate::geometry::{intersect, Point, Rect};
use crate::lidar::{self, LidarScan};
use crate::occupancy::OccupancyGrid;
use crate::planner::plan_path;
use crate::sampler::compute_plan;
use crate::window::{adaptive_window, fixed_window, WindowState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorKind {
    Adaptive,
    Baseline,
}

impl DetectorKind {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorKind::Adaptive => "adaptive",
            DetectorKind::Baseline => "baseline",
        }
    }
}

impl std::str::FromStr for DetectorKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adaptive" => Ok(DetectorKind::Adaptive),
            "baseline" => Ok(DetectorKind::Baseline),
            other => Err(format!("unknown detector {other:?} (use adaptive|baseline)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("start pose is not in a free cell of the ground truth")]
    InvalidStart,
    #[error(transparent)]
    Detector(#[from] DetectorError),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub detector: DetectorKind,
    pub seed: u64,
    pub theta: f64,
    pub tau: usize,
    pub step: f64,
    pub min_exploration_gain: f64,
    pub gain_radius: f64,
    pub attempt_cap_factor: usize,
    pub bias_probability: f64,
    pub bias_radius: f64,
    /// Robot speed, m/s.
    pub speed: f64,
    /// Simulated time step, seconds.
    pub dt: f64,
    /// Interval between scans while traveling, seconds.
    pub scan_period: f64,
    pub beam_count: usize,
    pub max_range: f64,
    pub noise_sigma: f64,
    /// Baseline fixed-window half extent, meters.
    pub half_extent: f64,
    pub min_window_side: f64,
    /// Maximum travel per detection cycle, meters.
    pub leg_max: f64,
    /// Simulated-time budget, seconds.
    pub time_budget: f64,
    /// Start pose; `None` means the map center.
    pub start: Option<Point>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            detector: DetectorKind::Adaptive,
            seed: 0,
            theta: 1.0,
            tau: 400,
            step: 1.0,
            min_exploration_gain: 2.0,
            gain_radius: 5.0,
            attempt_cap_factor: 50,
            bias_probability: 0.2,
            bias_radius: 3.0,
            speed: 2.0,
            dt: 0.1,
            scan_period: 0.5,
            beam_count: 360,
            max_range: 15.0,
            noise_sigma: 0.0,
            half_extent: 15.0,
            min_window_side: 2.0,
            leg_max: 5.0,
            time_budget: 1200.0,
            start: None,
        }
    }
}

impl RunConfig {
    pub fn detector_config(&self) -> DetectorConfig {
        DetectorConfig {
            theta: self.theta,
            tau: self.tau,
            step: self.step,
            min_exploration_gain: self.min_exploration_gain,
            gain_radius: self.gain_radius,
            attempt_cap_factor: self.attempt_cap_factor,
            bias_probability: self.bias_probability,
            bias_radius: self.bias_radius,
        }
    }
}

/// One detection window's record.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowMetrics {
    pub window_index: usize,
    pub attempts: usize,
    pub successes: usize,
    /// Attempts per successful sample (0 when there were no successes).
    pub p: f64,
    pub duration_wall: f64,
    pub s_total: f64,
    pub s_o: f64,
    pub s_n: f64,
    pub n_frontiers: usize,
    /// Node densities after the window completed, nodes/m² (not exported to
    /// CSV; used by the over-sampling analysis).
    pub density_overlap: f64,
    pub density_non_overlap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// No frontier found for three consecutive windows.
    Complete,
    /// Simulated-time budget exhausted.
    Budget,
    /// No path to any frontier.
    Stuck,
}

#[derive(Debug, Clone)]
pub struct RobotState {
    pub pose: Point,
    pub speed: f64,
    pub distance_traveled: f64,
    pub sim_time: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    /// (sim_time, explored area m²) samples, one per integrated scan.
    pub explored_series: Vec<(f64, f64)>,
    /// (sim_time, cumulative travel distance m) samples.
    pub distance_series: Vec<(f64, f64)>,
    pub window_metrics: Vec<WindowMetrics>,
    pub termination: Termination,
    pub sim_time: f64,
    pub distance_traveled: f64,
    pub final_explored: f64,
    /// Node-invariant violations found by post-window re-validation.
    pub validation_violations: usize,
    pub final_map: OccupancyGrid,
}

const EMPTY_WINDOWS_TO_COMPLETE: usize = 3;

pub fn run(truth: &OccupancyGrid, cfg: &RunConfig) -> Result<RunResult, SimError> {
    let start_pose = cfg.start.unwrap_or_else(|| truth.bounds().center());
    if truth.cell_at(start_pose) != Some(crate::occupancy::Cell::Free) {
        return Err(SimError::InvalidStart);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let det_cfg = cfg.detector_config();
    let mut live = truth.blank_like();
    let mut robot = RobotState {
        pose: start_pose,
        speed: cfg.speed,
        distance_traveled: 0.0,
        sim_time: 0.0,
    };
    let mut forest = RrtForest::new();
    let mut window_state: Option<WindowState> = None;
    let mut result = RunResult {
        explored_series: Vec::new(),
        distance_series: Vec::new(),
        window_metrics: Vec::new(),
        termination: Termination::Budget,
        sim_time: 0.0,
        distance_traveled: 0.0,
        final_explored: 0.0,
        validation_violations: 0,
        final_map: live.clone(),
    };
    let mut empty_windows = 0usize;

    let observe = |live: &mut OccupancyGrid,
                   robot: &RobotState,
                   rng: &mut ChaCha8Rng,
                   result: &mut RunResult|
     -> Result<LidarScan, SimError> {
        let scan = lidar::scan(truth, robot.pose, cfg.beam_count, cfg.max_range, cfg.noise_sigma, rng)
            .map_err(|_| SimError::InvalidStart)?;
        live.integrate_scan(&scan).map_err(|_| SimError::InvalidStart)?;
        result.explored_series.push((robot.sim_time, live.explored_area()));
        result.distance_series.push((robot.sim_time, robot.distance_traveled));
        Ok(scan)
    };

    loop {
        let scan = observe(&mut live, &robot, &mut rng, &mut result)?;

        if robot.sim_time > cfg.time_budget {
            result.termination = Termination::Budget;
            break;
        }

        // Window update: the detector declared the previous window complete
        // and a fresh scan is available.
        let map_bounds = live.bounds();
        let raw_window = match cfg.detector {
            DetectorKind::Adaptive => {
                adaptive_window(&scan, cfg.min_window_side).map_err(|_| SimError::InvalidStart)?
            }
            DetectorKind::Baseline => fixed_window(robot.pose, cfg.half_extent),
        };
        let window = clip_to_bounds(&raw_window, &map_bounds);

        let detect_start = Instant::now();
        let state = match window_state.as_mut() {
            Some(st) => {
                st.advance(window);
                st
            }
            None => {
                window_state = Some(WindowState::first(window));
                window_state.as_mut().unwrap()
            }
        };
        let n_o = forest.discard_outside(
            &state.current,
            &live,
            cfg.gain_radius,
            cfg.min_exploration_gain,
        );
        let report = match cfg.detector {
            DetectorKind::Adaptive => {
                let plan = compute_plan(cfg.theta, cfg.tau, &state.decomposition, n_o);
                expand_window(&mut forest, &plan, state, &live, &det_cfg, robot.pose, &mut rng)
            }
            DetectorKind::Baseline => {
                baseline_expand(&mut forest, &state.current, &live, &det_cfg, robot.pose, &mut rng)
            }
        };
        let duration = detect_start.elapsed().as_secs_f64();
        let report = match report {
            Ok(r) => r,
            Err(DetectorError::NoFreeSpace) => {
                result.termination = Termination::Stuck;
                break;
            }
        };

        result.validation_violations += forest.validate(&state.current, &live);

        let d = &state.decomposition;
        result.window_metrics.push(WindowMetrics {
            window_index: result.window_metrics.len(),
            attempts: report.attempts,
            successes: report.successes,
            p: if report.successes > 0 {
                report.attempts as f64 / report.successes as f64
            } else {
                0.0
            },
            duration_wall: duration,
            s_total: state.current.area(),
            s_o: d.s_o,
            s_n: d.s_n,
            n_frontiers: report.frontiers.len(),
            density_overlap: d
                .overlap
                .filter(|_| d.s_o > 0.0)
                .map(|ov| forest.count_in(&ov) as f64 / d.s_o)
                .unwrap_or(0.0),
            density_non_overlap: if d.s_n > 0.0 {
                forest.count_in_parts(&d.non_overlap_parts) as f64 / d.s_n
            } else {
                0.0
            },
        });

        // Frontier selection: best first, then the rest in priority order
        // until one is reachable. Frontiers in the robot's own cell are
        // skipped: the robot already scans from that viewpoint, so whatever
        // gain the node still reports cannot be realized by standing on it.
        let mut frontiers = report.frontiers.clone();
        frontiers.sort_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then_with(|| a.0.distance(robot.pose).total_cmp(&b.0.distance(robot.pose)))
                .then_with(|| a.0.x.total_cmp(&b.0.x))
                .then_with(|| a.0.y.total_cmp(&b.0.y))
        });
        debug_assert_eq!(frontiers.first().copied(), best_frontier(&report));
        let reach_limit = live.resolution();
        frontiers.retain(|(p, _)| p.distance(robot.pose) > reach_limit);

        let path = frontiers.iter().find_map(|(p, _)| plan_path(&live, robot.pose, *p));
        let path = match path {
            Some(p) => {
                empty_windows = 0;
                p
            }
            // The window offers nothing usable. Relocate toward the nearest
            // reachable free cell that still borders Unknown; only when no
            // such boundary remains is exploration actually done.
            None => match nearest_boundary_path(&live, robot.pose) {
                Some(p) => {
                    empty_windows = 0;
                    p
                }
                None if !frontiers.is_empty() => {
                    result.termination = Termination::Stuck;
                    break;
                }
                None => {
                    empty_windows += 1;
                    if empty_windows >= EMPTY_WINDOWS_TO_COMPLETE {
                        result.termination = Termination::Complete;
                        break;
                    }
                    continue;
                }
            },
        };

        // Travel along the path, rescanning every scan_period, for at most
        // leg_max meters.
        let mut leg = 0.0f64;
        let mut since_scan = 0.0f64;
        let mut waypoints = path.into_iter();
        let mut target = match waypoints.next() {
            Some(w) => w,
            None => continue,
        };
        'travel: loop {
            let mut remaining = robot.speed * cfg.dt;
            while remaining > 0.0 {
                let dist = robot.pose.distance(target);
                if dist > remaining {
                    let s = remaining / dist;
                    robot.pose = Point::new(
                        robot.pose.x + (target.x - robot.pose.x) * s,
                        robot.pose.y + (target.y - robot.pose.y) * s,
                    );
                    robot.distance_traveled += remaining;
                    leg += remaining;
                    remaining = 0.0;
                } else {
                    robot.pose = target;
                    robot.distance_traveled += dist;
                    leg += dist;
                    remaining -= dist;
                    match waypoints.next() {
                        Some(w) => target = w,
                        None => {
                            robot.sim_time += cfg.dt;
                            break 'travel;
                        }
                    }
                }
            }
            robot.sim_time += cfg.dt;
            since_scan += cfg.dt;
            if robot.sim_time > cfg.time_budget {
                break;
            }
            if leg >= cfg.leg_max {
                break;
            }
            if since_scan >= cfg.scan_period {
                since_scan = 0.0;
                observe(&mut live, &robot, &mut rng, &mut result)?;
            }
        }
    }

    result.sim_time = robot.sim_time;
    result.distance_traveled = robot.distance_traveled;
    result.final_explored = live.explored_area();
    result.final_map = live;
    Ok(result)
}

fn clip_to_bounds(window: &Rect, bounds: &Rect) -> Rect {
    intersect(window, bounds).unwrap_or(*window)
}

/// BFS over Free cells to the nearest cell (other than the robot's own, which
/// has already been scanned from) that borders an Unknown cell. Returns the
/// cell-center path, or `None` when no reachable frontier boundary remains.
fn nearest_boundary_path(map: &OccupancyGrid, from: Point) -> Option<Vec<Point>> {
    use crate::occupancy::Cell;
    let start = map.cell_index(from)?;
    let w = map.width() as i64;
    let idx = |c: (i64, i64)| (c.1 * w + c.0) as usize;
    let mut prev: Vec<Option<(i64, i64)>> = vec![None; map.width() * map.height()];
    let mut seen = vec![false; map.width() * map.height()];
    let mut queue = std::collections::VecDeque::new();
    seen[idx(start)] = true;
    queue.push_back(start);
    while let Some(cell) = queue.pop_front() {
        let borders_unknown = [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .any(|(dx, dy)| map.cell(cell.0 + dx, cell.1 + dy) == Some(Cell::Unknown));
        if borders_unknown && cell != start {
            let mut path = vec![map.cell_center(cell.0, cell.1)];
            let mut cur = cell;
            while let Some(p) = prev[idx(cur)] {
                path.push(map.cell_center(p.0, p.1));
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let next = (cell.0 + dx, cell.1 + dy);
            if map.cell(next.0, next.1) == Some(Cell::Free) && !seen[idx(next)] {
                seen[idx(next)] = true;
                prev[idx(next)] = Some(cell);
                queue.push_back(next);
            }
        }
    }
    None
}
