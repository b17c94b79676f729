//! Planar lidar simulation against a ground-truth grid.

use crate::geometry::Point;
use crate::occupancy::{Cell, OccupancyGrid};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Hit returns are nudged this far past the obstacle's entry boundary so the
/// return point falls inside the occupied cell under floor-based indexing.
const HIT_NUDGE: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum LidarError {
    #[error("lidar pose is not in a free cell")]
    PoseNotFree,
}

/// One beam return, already in the map frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beam {
    pub point: Point,
    /// True when the beam stopped at an obstacle; false for max-range (or
    /// map-edge) returns, which carve free space but have no occupied endpoint.
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LidarScan {
    pub pose: Point,
    pub points: Vec<Beam>,
    pub max_range: f64,
}

/// Cast `beam_count` rays at uniform angular spacing over 360°, starting at
/// angle 0 (+x). Each return is the first occupied-cell boundary hit, or the
/// max-range endpoint. Optional Gaussian range noise (`noise_sigma` meters);
/// with sigma 0 the scan is a pure function of its inputs.
pub fn scan<R: Rng + ?Sized>(
    truth: &OccupancyGrid,
    pose: Point,
    beam_count: usize,
    max_range: f64,
    noise_sigma: f64,
    rng: &mut R,
) -> Result<LidarScan, LidarError> {
    assert!(beam_count >= 1);
    if truth.cell_at(pose) != Some(Cell::Free) {
        return Err(LidarError::PoseNotFree);
    }
    let noise = if noise_sigma > 0.0 {
        Some(Normal::new(0.0, noise_sigma).expect("valid sigma"))
    } else {
        None
    };

    let mut points = Vec::with_capacity(beam_count);
    for k in 0..beam_count {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / beam_count as f64;
        let dir = Point::new(angle.cos(), angle.sin());
        let mut range = max_range;
        if let Some(n) = &noise {
            range = (range + n.sample(rng)).clamp(truth.resolution(), max_range);
        }
        points.push(cast_ray(truth, pose, dir, range));
    }
    Ok(LidarScan { pose, points, max_range })
}

fn cast_ray(truth: &OccupancyGrid, pose: Point, dir: Point, range: f64) -> Beam {
    let far = Point::new(pose.x + dir.x * range, pose.y + dir.y * range);
    let mut hit_t: Option<f64> = None;
    let mut exit_t: Option<f64> = None;
    truth.for_each_cell_on_segment(pose, far, |step| {
        match truth.cell(step.ix, step.iy) {
            Some(Cell::Occupied) => {
                hit_t = Some(step.t_entry);
                false
            }
            Some(_) => true,
            None => {
                // Ray left the grid; truncate like a max-range return.
                exit_t = Some(step.t_entry);
                false
            }
        }
    });

    if let Some(t) = hit_t {
        let d = t * range + HIT_NUDGE;
        Beam { point: Point::new(pose.x + dir.x * d, pose.y + dir.y * d), hit: true }
    } else if let Some(t) = exit_t {
        let d = (t * range - HIT_NUDGE).max(0.0);
        Beam { point: Point::new(pose.x + dir.x * d, pose.y + dir.y * d), hit: false }
    } else {
        Beam { point: far, hit: false }
    }
}
