//! RRT frontier detection: non-uniform sampling over the window
//! decomposition, nearest/steer/collision expansion, exploration-gain
//! evaluation, node discarding on window advance, and the fixed-window
//! uniform baseline with frontier-neighborhood bias.

use crate::geometry::{sample_in, Point, Rect};
use crate::kdtree::KdTree;
use crate::occupancy::{Cell, OccupancyGrid};
use crate::sampler::{window_budget, Region, SamplingPlan};
use crate::window::WindowState;
use rand::Rng;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DetectorError {
    #[error("no free space reachable in the window (attempt cap hit without a single success)")]
    NoFreeSpace,
}

#[derive(Debug, Clone, Copy)]
pub struct DetectorConfig {
    /// Target successful-sample density, nodes/m².
    pub theta: f64,
    /// Hard cap on successful samples per window.
    pub tau: usize,
    /// Steer extension length, meters.
    pub step: f64,
    /// Gain threshold above which a node is a frontier, m².
    pub min_exploration_gain: f64,
    /// Radius of the visible-unknown-area gain evaluation, meters.
    pub gain_radius: f64,
    /// Attempt cap = this factor times the window budget.
    pub attempt_cap_factor: usize,
    /// Baseline: probability of sampling near the current best frontier.
    pub bias_probability: f64,
    /// Baseline: radius of the frontier-neighborhood disc, meters.
    pub bias_radius: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            theta: 1.0,
            tau: 400,
            step: 1.0,
            min_exploration_gain: 2.0,
            gain_radius: 5.0,
            attempt_cap_factor: 50,
            bias_probability: 0.2,
            bias_radius: 3.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RrtNode {
    pub position: Point,
    pub parent: Option<usize>,
    pub gain: f64,
    pub is_frontier: bool,
}

/// Retained detector nodes with parent links and a kd index over positions.
/// After window-advance pruning the node set may be a forest rather than a
/// single tree; nearest-neighbor queries run over all retained nodes.
#[derive(Debug, Clone, Default)]
pub struct RrtForest {
    nodes: Vec<RrtNode>,
    index: KdTree,
    n_overlap: usize,
}

impl RrtForest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[RrtNode] {
        &self.nodes
    }

    /// Retained node count inside the current overlap region, as of the last
    /// `discard_outside`.
    pub fn n_overlap(&self) -> usize {
        self.n_overlap
    }

    pub fn insert(&mut self, node: RrtNode) -> usize {
        let id = self.nodes.len();
        self.index.insert(node.position, id);
        self.nodes.push(node);
        id
    }

    pub fn nearest(&self, query: Point) -> Option<(Point, usize)> {
        self.index.nearest(query).map(|(p, id, _)| (p, id))
    }

    pub fn count_in(&self, rect: &Rect) -> usize {
        self.nodes.iter().filter(|n| rect.contains(n.position)).count()
    }

    pub fn count_in_parts(&self, parts: &[Rect]) -> usize {
        self.nodes
            .iter()
            .filter(|n| parts.iter().any(|r| r.contains(n.position)))
            .count()
    }

    pub fn frontiers(&self) -> Vec<(Point, f64)> {
        self.nodes
            .iter()
            .filter(|n| n.is_frontier)
            .map(|n| (n.position, n.gain))
            .collect()
    }

    /// Drop nodes outside `window` or no longer in a Free cell, re-parent
    /// nodes whose parent was dropped or whose parent edge is no longer
    /// traversable to their nearest retained node (cascading the discard when
    /// no traversable attachment exists), and re-evaluate retained gains
    /// against the current map. Returns the retained node count.
    pub fn discard_outside(
        &mut self,
        window: &Rect,
        map: &OccupancyGrid,
        gain_radius: f64,
        min_gain: f64,
    ) -> usize {
        let old = std::mem::take(&mut self.nodes);
        // Later scans can flip a node's cell to Occupied; such nodes are
        // dropped along with everything outside the window.
        let mut keep: Vec<bool> = old
            .iter()
            .map(|n| window.contains(n.position) && map.cell_at(n.position) == Some(Cell::Free))
            .collect();

        // A kept node is "rooted" once its ancestry is resolved: parent gone
        // or re-parented. Resolve orphans against the rooted set, nearest
        // first, cascading discards for unreachable ones.
        let mut rooted: Vec<bool> = vec![false; old.len()];
        let mut rooted_index = KdTree::new();
        let mut pending: Vec<usize> = Vec::new();
        for (i, node) in old.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            match node.parent {
                Some(p) if keep[p] => pending.push(i), // depends on parent's fate
                Some(_) => pending.push(i),            // orphan: parent discarded
                None => {
                    rooted[i] = true;
                    rooted_index.insert(node.position, i);
                }
            }
        }

        let mut reparent: Vec<Option<usize>> = old.iter().map(|n| n.parent).collect();
        let mut allow_fallback = false;
        loop {
            let mut progressed = false;
            let mut still_pending = Vec::new();
            for &i in &pending {
                let parent = reparent[i];
                let parent_pending = matches!(parent, Some(p) if keep[p] && !rooted[p]);
                // A surviving parent edge must still be traversable on the
                // current map; scans since insertion may have closed it.
                let parent_holds = matches!(parent, Some(p) if keep[p] && rooted[p]
                    && map
                        .segment_is_traversable(old[i].position, old[p].position)
                        .unwrap_or(false));
                match parent {
                    Some(_) if parent_holds => {
                        rooted[i] = true;
                        rooted_index.insert(old[i].position, i);
                        progressed = true;
                    }
                    _ if parent_pending && !allow_fallback => {
                        still_pending.push(i); // parent fate unresolved yet
                    }
                    _ => {
                        // parent gone, blocked, or stuck: try the nearest rooted node
                        let candidate = rooted_index.nearest(old[i].position);
                        let attached = candidate.is_some_and(|(pos, pid, _)| {
                            if map.segment_is_traversable(old[i].position, pos).unwrap_or(false) {
                                reparent[i] = Some(pid);
                                true
                            } else {
                                false
                            }
                        });
                        if attached {
                            rooted[i] = true;
                            rooted_index.insert(old[i].position, i);
                            progressed = true;
                        } else {
                            still_pending.push(i);
                        }
                    }
                }
            }
            pending = still_pending;
            if pending.is_empty() {
                break;
            }
            if progressed {
                allow_fallback = false;
            } else {
                if allow_fallback {
                    break;
                }
                // no node can wait on its parent any longer
                allow_fallback = true;
            }
        }
        for &i in &pending {
            keep[i] = false; // unreachable orphans are discarded too
        }

        // Rebuild compactly with remapped parent ids and fresh gains.
        self.index = KdTree::new();
        let mut remap: Vec<Option<usize>> = vec![None; old.len()];
        for (i, node) in old.into_iter().enumerate() {
            if !(keep[i] && rooted[i]) {
                continue;
            }
            let gain = map.exploration_gain(node.position, gain_radius).unwrap_or(0.0);
            let new_id = self.nodes.len();
            remap[i] = Some(new_id);
            self.index.insert(node.position, new_id);
            self.nodes.push(RrtNode {
                position: node.position,
                parent: reparent[i].and_then(|p| remap[p]),
                gain,
                is_frontier: gain > min_gain,
            });
        }
        self.n_overlap = self.nodes.len();
        self.n_overlap
    }

    /// Re-validate every node against a window and map: inside the window, in
    /// a Free cell, parent edge traversable. Returns the number of violations.
    pub fn validate(&self, window: &Rect, map: &OccupancyGrid) -> usize {
        let mut bad = 0;
        for node in &self.nodes {
            if !window.contains(node.position) {
                bad += 1;
                continue;
            }
            if map.cell_at(node.position) != Some(Cell::Free) {
                bad += 1;
                continue;
            }
            if let Some(p) = node.parent {
                if !map
                    .segment_is_traversable(node.position, self.nodes[p].position)
                    .unwrap_or(false)
                {
                    bad += 1;
                }
            }
        }
        bad
    }
}

/// Per-window expansion outcome.
#[derive(Debug, Clone)]
pub struct DetectorReport {
    pub frontiers: Vec<(Point, f64)>,
    pub attempts: usize,
    pub successes: usize,
    pub budget: usize,
    pub wall_time: f64,
    pub robot_pose: Point,
}

/// Point on the segment nearest→rand at distance `min(step, ‖rand−nearest‖)`
/// from nearest.
pub fn steer(nearest: Point, rand: Point, step: f64) -> Point {
    assert!(step > 0.0);
    let d = nearest.distance(rand);
    if d <= step {
        return rand;
    }
    let s = step / d;
    Point::new(nearest.x + (rand.x - nearest.x) * s, nearest.y + (rand.y - nearest.y) * s)
}

/// Frontier with maximal gain; ties broken by distance to the robot pose,
/// then lexicographic position.
pub fn best_frontier(report: &DetectorReport) -> Option<(Point, f64)> {
    report
        .frontiers
        .iter()
        .copied()
        .max_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then_with(|| {
                    b.0.distance(report.robot_pose)
                        .total_cmp(&a.0.distance(report.robot_pose))
                })
                .then_with(|| b.0.x.total_cmp(&a.0.x))
                .then_with(|| b.0.y.total_cmp(&a.0.y))
        })
}

fn try_add_node(
    forest: &mut RrtForest,
    p_rand: Point,
    map: &OccupancyGrid,
    window: &Rect,
    cfg: &DetectorConfig,
) -> Option<usize> {
    let (near_pos, near_id) = forest.nearest(p_rand)?;
    let p_steer = steer(near_pos, p_rand, cfg.step);
    if !window.contains(p_steer) || !map.contains(p_steer) {
        return None;
    }
    if !map.segment_is_traversable(near_pos, p_steer).unwrap_or(false) {
        return None;
    }
    let gain = map.exploration_gain(p_steer, cfg.gain_radius).unwrap_or(0.0);
    Some(forest.insert(RrtNode {
        position: p_steer,
        parent: Some(near_id),
        gain,
        is_frontier: gain > cfg.min_exploration_gain,
    }))
}

fn seed_if_empty(forest: &mut RrtForest, pose: Point, map: &OccupancyGrid, cfg: &DetectorConfig) {
    if forest.is_empty() && map.cell_at(pose) == Some(Cell::Free) {
        let gain = map.exploration_gain(pose, cfg.gain_radius).unwrap_or(0.0);
        forest.insert(RrtNode {
            position: pose,
            parent: None,
            gain,
            is_frontier: gain > cfg.min_exploration_gain,
        });
    }
}

/// Fill the current window with the non-uniform sampling loop: pick the
/// overlap or non-overlap region by the share of its remaining quota, sample
/// uniformly inside it, then do the standard nearest/steer/collision
/// insertion. A success counts toward the region the steered node actually
/// landed in (steering can pull a sample across the region boundary), so an
/// over-dense overlap never starves the newly revealed region. Stops once
/// both quotas are met, the retained-plus-new count hits tau, or the attempt
/// cap is reached.
pub fn expand_window<R: Rng + ?Sized>(
    forest: &mut RrtForest,
    plan: &SamplingPlan,
    window_state: &WindowState,
    map: &OccupancyGrid,
    cfg: &DetectorConfig,
    robot_pose: Point,
    rng: &mut R,
) -> Result<DetectorReport, DetectorError> {
    let start = Instant::now();
    let decomp = &window_state.decomposition;
    let window = &window_state.current;
    let s_total = window.area();
    let budget = window_budget(cfg.theta, cfg.tau, s_total);
    let attempt_cap = cfg.attempt_cap_factor * budget.max(1);

    let pre_existing = forest.len();
    seed_if_empty(forest, robot_pose, map, cfg);

    let overlap_parts: Vec<Rect> = decomp.overlap.into_iter().collect();
    let target_o = plan.n_eo.round() as usize;
    let target_n = plan.n_en.round() as usize;
    let tau_left = cfg.tau.saturating_sub(pre_existing);
    let attempt_cap = attempt_cap.min(cfg.attempt_cap_factor * (target_o + target_n).max(1));
    let mut attempts = 0usize;
    let mut successes = 0usize;
    let (mut landed_o, mut landed_n) = (0usize, 0usize);
    while (landed_o < target_o || landed_n < target_n)
        && successes < tau_left
        && attempts < attempt_cap
    {
        let rem_o = target_o.saturating_sub(landed_o) as f64;
        let rem_n = target_n.saturating_sub(landed_n) as f64;
        let region = if rng.gen_range(0.0..1.0) < rem_n / (rem_o + rem_n) {
            Region::NonOverlap
        } else {
            Region::Overlap
        };
        let parts: &[Rect] = match region {
            Region::Overlap => &overlap_parts,
            Region::NonOverlap => &decomp.non_overlap_parts,
        };
        attempts += 1;
        let Ok(p_rand) = sample_in(parts, rng) else {
            continue;
        };
        if let Some(id) = try_add_node(forest, p_rand, map, window, cfg) {
            successes += 1;
            let landed = forest.nodes()[id].position;
            if overlap_parts.iter().any(|r| r.contains(landed)) {
                landed_o += 1;
            } else {
                landed_n += 1;
            }
        }
    }

    if attempts >= attempt_cap && successes == 0 && pre_existing == 0 {
        return Err(DetectorError::NoFreeSpace);
    }
    Ok(DetectorReport {
        frontiers: forest.frontiers(),
        attempts,
        successes,
        budget,
        wall_time: start.elapsed().as_secs_f64(),
        robot_pose,
    })
}

/// Fixed-window baseline: uniform sampling over the whole window, except that
/// with probability `bias_probability` the sample is drawn from a disc around
/// the current best frontier when one exists.
pub fn baseline_expand<R: Rng + ?Sized>(
    forest: &mut RrtForest,
    window: &Rect,
    map: &OccupancyGrid,
    cfg: &DetectorConfig,
    robot_pose: Point,
    rng: &mut R,
) -> Result<DetectorReport, DetectorError> {
    let start = Instant::now();
    let budget = window_budget(cfg.theta, cfg.tau, window.area());
    let attempt_cap = cfg.attempt_cap_factor * budget.max(1);

    let pre_existing = forest.len();
    seed_if_empty(forest, robot_pose, map, cfg);

    let mut best: Option<(Point, f64)> = forest
        .frontiers()
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1));
    let window_parts = [*window];
    let mut attempts = 0usize;
    let mut successes = 0usize;
    while pre_existing + successes < budget && attempts < attempt_cap {
        attempts += 1;
        let p_rand = match best {
            Some((center, _)) if rng.gen_range(0.0..1.0) < cfg.bias_probability => {
                // uniform over the disc around the best frontier
                let r = cfg.bias_radius * rng.gen_range(0.0f64..1.0).sqrt();
                let a = rng.gen_range(0.0..std::f64::consts::TAU);
                Point::new(center.x + r * a.cos(), center.y + r * a.sin())
            }
            _ => match sample_in(&window_parts, rng) {
                Ok(p) => p,
                Err(_) => continue,
            },
        };
        if !window.contains(p_rand) {
            continue; // biased sample fell outside the window
        }
        if let Some(id) = try_add_node(forest, p_rand, map, window, cfg) {
            successes += 1;
            let node = &forest.nodes()[id];
            if node.is_frontier && best.is_none_or(|(_, g)| node.gain > g) {
                best = Some((node.position, node.gain));
            }
        }
    }

    if attempts >= attempt_cap && successes == 0 && pre_existing == 0 {
        return Err(DetectorError::NoFreeSpace);
    }
    Ok(DetectorReport {
        frontiers: forest.frontiers(),
        attempts,
        successes,
        budget,
        wall_time: start.elapsed().as_secs_f64(),
        robot_pose,
    })
}
