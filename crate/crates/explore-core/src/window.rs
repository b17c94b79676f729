//! Sliding-window construction and previous/current corner bookkeeping.
//!
//! The adaptive window is the smallest axis-aligned rectangle circumscribing
//! the current scan; the baseline uses a fixed square bounded by the sensing
//! range.

use crate::geometry::{decompose, Point, Rect, RegionDecomposition};
use crate::lidar::LidarScan;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum WindowError {
    #[error("cannot build a window from an empty scan")]
    EmptyScan,
}

/// Previous/current window pair plus the decomposition of the current window
/// into overlap and non-overlap regions.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowState {
    pub previous: Option<Rect>,
    pub current: Rect,
    pub decomposition: RegionDecomposition,
}

impl WindowState {
    /// Start from a first window (no previous, everything is non-overlap).
    pub fn first(window: Rect) -> Self {
        Self {
            previous: None,
            decomposition: decompose(&window, None),
            current: window,
        }
    }

    /// Shift: previous ← current, current ← `new_window`, decomposition
    /// recomputed.
    pub fn advance(&mut self, new_window: Rect) {
        self.previous = Some(self.current);
        self.decomposition = decompose(&new_window, self.previous.as_ref());
        self.current = new_window;
    }
}

/// Bounding rect of the scan returns plus the pose, inflated so each side is
/// at least `min_window_side`. Max-range (no-hit) returns count: excluding
/// them would collapse the window in open areas.
pub fn adaptive_window(scan: &LidarScan, min_window_side: f64) -> Result<Rect, WindowError> {
    if scan.points.is_empty() {
        return Err(WindowError::EmptyScan);
    }
    let points = scan.points.iter().map(|b| b.point).chain([scan.pose]);
    let rect = Rect::bounding(points).expect("non-empty");
    Ok(rect.inflated_to_min_side(min_window_side))
}

/// Square window of side `2 * half_extent` centered at the pose.
pub fn fixed_window(pose: Point, half_extent: f64) -> Rect {
    assert!(half_extent > 0.0, "half_extent must be positive");
    Rect::new(
        pose.x - half_extent,
        pose.y - half_extent,
        pose.x + half_extent,
        pose.y + half_extent,
    )
}
